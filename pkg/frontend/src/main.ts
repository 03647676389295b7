import { ApiClient } from "./api.js";
import { resolveConfig, type AppConfig } from "./config.js";
import { App } from "./app.js";
import { LeafletAdapter } from "./leafletMap.js";

declare global {
  interface Window {
    HOUSEFINDER_CONFIG?: Partial<AppConfig>;
  }
}

const config = resolveConfig(window.HOUSEFINDER_CONFIG);
const adapter = new LeafletAdapter("map", config.center, config.zoom);
const app = new App({
  api: new ApiClient(config.apiBase),
  adapter,
  doc: document,
  config,
});
app.bindControls();
app.start();
