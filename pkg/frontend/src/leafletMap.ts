import type * as Leaflet from "leaflet";
import type { MapAdapter } from "./mapAdapter.js";
import type { PointFeature, PolygonFeature, RasterPayload } from "./types.js";

declare global {
  interface Window {
    L: typeof Leaflet;
  }
}

const CATEGORY_GLYPHS: Record<string, string> = {
  apartment: "🏠",
  transit_stop: "🚌",
  school: "🏫",
  market: "🛒",
  faith_center: "🕌",
  esl: "🗣",
  daycare: "🧒",
  health: "⚕",
  hospital: "🏥",
  dds_office: "🚗",
  dfcs_office: "🏛",
  ssn_office: "🪪",
};

function heatColor(v: number): string {
  // blue (poor) -> red (desirable)
  const hue = 240 - 240 * v;
  return `hsl(${hue}, 85%, 50%)`;
}

function percentileColor(v: number): string {
  const hue = 120 * v; // red -> green
  return `hsl(${hue}, 75%, 45%)`;
}

export class LeafletAdapter implements MapAdapter {
  private readonly map: Leaflet.Map;
  private baseLayer: Leaflet.TileLayer | null = null;
  private readonly markerGroups = new Map<string, Leaflet.LayerGroup>();
  private choropleth: Leaflet.LayerGroup | null = null;
  private heat: Leaflet.LayerGroup | null = null;

  constructor(container: string | HTMLElement, center: [number, number], zoom: number) {
    this.map = window.L.map(container as string).setView(center, zoom);
  }

  setBaseTiles(url: string): void {
    if (this.baseLayer) this.map.removeLayer(this.baseLayer);
    this.baseLayer = window.L.tileLayer(url, {
      attribution: "&copy; OpenStreetMap contributors",
    }).addTo(this.map);
    this.baseLayer.bringToBack();
  }

  setMarkers(
    category: string,
    features: PointFeature[],
    html: (f: PointFeature) => string,
  ): void {
    this.clearMarkers(category);
    const group = window.L.layerGroup();
    const glyph = CATEGORY_GLYPHS[category] ?? "📍";
    for (const feature of features) {
      const [lon, lat] = feature.geometry.coordinates;
      const icon = window.L.divIcon({ className: "cat-marker", html: glyph, iconSize: [20, 20] });
      window.L.marker([lat, lon], { icon }).bindPopup(html(feature)).addTo(group);
    }
    group.addTo(this.map);
    this.markerGroups.set(category, group);
  }

  clearMarkers(category: string): void {
    const group = this.markerGroups.get(category);
    if (group) {
      this.map.removeLayer(group);
      this.markerGroups.delete(category);
    }
  }

  setChoropleth(layerName: string, features: PolygonFeature[]): void {
    this.clearChoropleth();
    const group = window.L.layerGroup();
    for (const feature of features) {
      const ring = feature.geometry.coordinates[0].map(
        ([lon, lat]) => [lat, lon] as [number, number],
      );
      window.L.polygon(ring, {
        color: "#555",
        weight: 1,
        fillColor: percentileColor(feature.properties.percentile),
        fillOpacity: 0.45,
      })
        .bindPopup(
          `${layerName}: ${feature.properties.value}<br>` +
            `percentile: ${(feature.properties.percentile * 100).toFixed(0)}`,
        )
        .addTo(group);
    }
    group.addTo(this.map);
    this.choropleth = group;
  }

  clearChoropleth(): void {
    if (this.choropleth) {
      this.map.removeLayer(this.choropleth);
      this.choropleth = null;
    }
  }

  setHeatOverlay(raster: RasterPayload): void {
    this.clearHeatOverlay();
    const group = window.L.layerGroup();
    const { bbox, rows, cols, cell_size, values } = raster;
    for (let row = 0; row < rows; row++) {
      for (let col = 0; col < cols; col++) {
        const value = values[row * cols + col];
        if (value === null) continue;
        const north = bbox.max_lat - row * cell_size;
        const west = bbox.min_lon + col * cell_size;
        window.L.rectangle(
          [
            [north - cell_size, west],
            [north, west + cell_size],
          ],
          { stroke: false, fillColor: heatColor(value), fillOpacity: 0.5 },
        ).addTo(group);
      }
    }
    group.addTo(this.map);
    this.heat = group;
  }

  clearHeatOverlay(): void {
    if (this.heat) {
      this.map.removeLayer(this.heat);
      this.heat = null;
    }
  }
}
