import { CRITERIA, type Criterion, type MapLayerChoice, type ScoreResponse } from "./types.js";

export interface UiState {
  visibleCategories: Set<string>;
  activeLayer: MapLayerChoice;
  sliders: Record<Criterion, number>;
  lastScore: ScoreResponse | null;
}

export function initialState(): UiState {
  const sliders = Object.fromEntries(CRITERIA.map((c) => [c, 0])) as Record<Criterion, number>;
  return {
    visibleCategories: new Set(),
    activeLayer: "default",
    sliders,
    lastScore: null,
  };
}

/** Slider values are integers in [0, 100]; anything else is clamped/rounded. */
export function normalizeSlider(value: number): number {
  if (!Number.isFinite(value)) return 0;
  return Math.min(100, Math.max(0, Math.round(value)));
}

export function anyPositive(sliders: Record<string, number>): boolean {
  return Object.values(sliders).some((v) => v > 0);
}

export interface SubmissionDraft {
  name: string;
  address: string;
  phone?: string;
  website?: string;
  rent?: number;
}

export interface ValidationResult {
  ok: boolean;
  fieldErrors: Partial<Record<"name" | "address" | "rent", string>>;
}

export const RENT_MIN = 500;
export const RENT_MAX = 2000;

/** Mirrors the server's mandatory-field and rent-bounds rules. */
export function validateSubmission(draft: SubmissionDraft): ValidationResult {
  const fieldErrors: ValidationResult["fieldErrors"] = {};
  if (!draft.name.trim()) fieldErrors.name = "name is mandatory";
  if (!draft.address.trim()) fieldErrors.address = "address is mandatory";
  if (draft.rent !== undefined && (draft.rent < RENT_MIN || draft.rent > RENT_MAX)) {
    fieldErrors.rent = `rent must be between ${RENT_MIN} and ${RENT_MAX}`;
  }
  return { ok: Object.keys(fieldErrors).length === 0, fieldErrors };
}
