export interface TileUrls {
  /** Plain base map. */
  default: string;
  /** Street-emphasis base map. */
  streets: string;
}

export interface AppConfig {
  apiBase: string;
  tiles: TileUrls;
  center: [number, number];
  zoom: number;
  debounceMs: number;
}

export const DEFAULT_CONFIG: AppConfig = {
  apiBase: "http://127.0.0.1:8000",
  tiles: {
    default: "https://tile.openstreetmap.org/{z}/{x}/{y}.png",
    streets: "https://{s}.tile.openstreetmap.fr/hot/{z}/{x}/{y}.png",
  },
  center: [33.75, -84.35],
  zoom: 12,
  debounceMs: 300,
};

/** Merge build/host-time overrides (window.HOUSEFINDER_CONFIG) over defaults. */
export function resolveConfig(overrides?: Partial<AppConfig>): AppConfig {
  return {
    ...DEFAULT_CONFIG,
    ...overrides,
    tiles: { ...DEFAULT_CONFIG.tiles, ...(overrides?.tiles ?? {}) },
  };
}
