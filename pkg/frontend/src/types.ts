export const CRITERIA = [
  "affordability",
  "jobs",
  "retail",
  "crime",
  "prox_transit",
  "prox_schools",
  "prox_markets",
  "prox_anchor",
] as const;

export type Criterion = (typeof CRITERIA)[number];

export const PLACE_CATEGORIES = [
  "apartment",
  "transit_stop",
  "school",
  "market",
  "faith_center",
  "esl",
  "daycare",
  "health",
  "hospital",
  "dds_office",
  "dfcs_office",
  "ssn_office",
] as const;

export type PlaceCategory = (typeof PLACE_CATEGORIES)[number];

export const AREA_LAYERS = ["affordability", "crime", "jobs", "retail"] as const;
export type AreaLayer = (typeof AREA_LAYERS)[number];
/** Base maps plus the four percentile overlays. */
export type MapLayerChoice = "default" | "streets" | AreaLayer;

export interface PlaceProperties {
  id: string;
  name: string;
  category: string;
  address?: string;
  phone?: string;
  zipcode?: string;
  website?: string;
  faith_tradition?: string;
  monthly_cost?: number;
  anchor_distance?: number;
  travel_minutes?: number;
  is_public?: boolean;
  free_reduced_lunch_pct?: number;
  rating?: number;
}

export interface PointFeature {
  type: "Feature";
  geometry: { type: "Point"; coordinates: [number, number] };
  properties: PlaceProperties;
}

export interface LayerProperties {
  id: string;
  value: number;
  percentile: number;
}

export interface PolygonFeature {
  type: "Feature";
  geometry: { type: "Polygon"; coordinates: [number, number][][] };
  properties: LayerProperties;
}

export interface FeatureCollection<F> {
  type: "FeatureCollection";
  features: F[];
}

export interface RasterPayload {
  bbox: { min_lat: number; max_lat: number; min_lon: number; max_lon: number };
  rows: number;
  cols: number;
  cell_size: number;
  values: (number | null)[];
}

export interface CriterionContribution {
  score: number | null;
  effective_weight: number;
}

export interface RankingEntry {
  id: string;
  name: string;
  rank: number;
  composite: number | null;
  completeness: number;
  breakdown: {
    composite: number | null;
    completeness: number;
    criteria: Record<string, CriterionContribution>;
  };
}

export interface ScoreResponse {
  raster: RasterPayload;
  ranking: RankingEntry[];
}

export interface StatsResponse {
  count: number;
  median_cost: number;
  stddev_cost: number;
  unpriced: number;
}

export interface SubmissionBody {
  name: string;
  address: string;
  phone?: string;
  website?: string;
  rent?: number;
}
