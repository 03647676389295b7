import type { PointFeature, PolygonFeature, RasterPayload } from "./types.js";

/**
 * Everything the app needs from a map library. The real implementation wraps
 * Leaflet; tests substitute a recording fake, so app logic stays map-free.
 */
export interface MapAdapter {
  setBaseTiles(url: string): void;
  /** Replace all markers of one category; a popup opens with html on click. */
  setMarkers(category: string, features: PointFeature[], popupHtml: (f: PointFeature) => string): void;
  clearMarkers(category: string): void;
  /** Replace the percentile choropleth (one polygon per block group). */
  setChoropleth(layerName: string, features: PolygonFeature[]): void;
  clearChoropleth(): void;
  /** Replace the desirability overlay; geometry comes from the raster alone. */
  setHeatOverlay(raster: RasterPayload): void;
  clearHeatOverlay(): void;
}
