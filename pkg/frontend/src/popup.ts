import type { PlaceProperties } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

const LABELS: Record<string, string> = {
  address: "Address",
  phone: "Phone",
  zipcode: "Zip",
  faith_tradition: "Tradition",
  travel_minutes: "Travel (min)",
  rating: "Rating",
};

/** Detail popup body: every populated property, rendered for its type. */
export function popupHtml(props: PlaceProperties): string {
  const rows: string[] = [`<strong>${escapeHtml(props.name)}</strong>`];
  for (const key of ["address", "phone", "zipcode", "faith_tradition"] as const) {
    const value = props[key];
    if (value) rows.push(`${LABELS[key]}: ${escapeHtml(String(value))}`);
  }
  if (props.category === "apartment") {
    if (props.monthly_cost !== undefined) {
      rows.push(`Est. monthly cost: $${props.monthly_cost.toFixed(0)}`);
    }
    if (props.anchor_distance !== undefined) {
      rows.push(`Distance to agency office: ${(props.anchor_distance / 1000).toFixed(1)} km`);
    }
    if (props.travel_minutes !== undefined) {
      rows.push(`${LABELS.travel_minutes}: ${props.travel_minutes}`);
    }
    // No website, no link: never render a dead anchor.
    if (props.website) {
      const url = escapeHtml(props.website);
      rows.push(`<a href="${url}" target="_blank" rel="noopener">Website</a>`);
    }
  } else if (props.website) {
    const url = escapeHtml(props.website);
    rows.push(`<a href="${url}" target="_blank" rel="noopener">Website</a>`);
  }
  if (props.category === "school") {
    rows.push(props.is_public === false ? "Private school" : "Public school");
    if (props.free_reduced_lunch_pct !== undefined) {
      rows.push(`Free/reduced lunch: ${props.free_reduced_lunch_pct}%`);
    }
    if (props.rating !== undefined) rows.push(`${LABELS.rating}: ${props.rating}`);
  }
  return rows.join("<br>");
}
