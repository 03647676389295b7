import { ApiClient, ApiError } from "./api.js";
import type { AppConfig } from "./config.js";
import type { MapAdapter } from "./mapAdapter.js";
import { popupHtml } from "./popup.js";
import {
  anyPositive,
  initialState,
  normalizeSlider,
  validateSubmission,
  type SubmissionDraft,
  type UiState,
} from "./state.js";
import { ScoreFlow } from "./scoreFlow.js";
import {
  AREA_LAYERS,
  type AreaLayer,
  type Criterion,
  type MapLayerChoice,
  type RankingEntry,
  type ScoreResponse,
} from "./types.js";

export interface AppOptions {
  api: ApiClient;
  adapter: MapAdapter;
  doc: Document;
  config: AppConfig;
  debounceMs?: number;
}

export class App {
  readonly state: UiState = initialState();
  private readonly api: ApiClient;
  private readonly adapter: MapAdapter;
  private readonly doc: Document;
  private readonly config: AppConfig;
  private readonly scoreFlow: ScoreFlow;

  constructor(opts: AppOptions) {
    this.api = opts.api;
    this.adapter = opts.adapter;
    this.doc = opts.doc;
    this.config = opts.config;
    this.scoreFlow = new ScoreFlow(
      this.api,
      {
        onResult: (resp) => this.applyScore(resp),
        onValidationError: (field, message) =>
          this.setHint(`weights rejected${field ? ` (${field})` : ""}: ${message}`),
        onSuppressed: () => this.setHint("Move at least one priority slider to score the map."),
        onNetworkError: (message) => this.showBanner(`Scoring failed: ${message}`),
      },
      opts.debounceMs ?? opts.config.debounceMs,
    );
  }

  start(): void {
    this.adapter.setBaseTiles(this.config.tiles.default);
    this.setHint("Move at least one priority slider to score the map.");
  }

  // -- layer toggles --------------------------------------------------------

  async toggleCategory(category: string, visible: boolean): Promise<void> {
    if (!visible) {
      this.state.visibleCategories.delete(category);
      this.adapter.clearMarkers(category);
      return;
    }
    try {
      const collection = await this.api.places(category);
      this.state.visibleCategories.add(category);
      this.adapter.setMarkers(category, collection.features, (f) => popupHtml(f.properties));
    } catch (err) {
      this.showBanner(`Could not load ${category}: ${err instanceof Error ? err.message : err}`);
    }
  }

  async setLayerChoice(choice: MapLayerChoice): Promise<void> {
    this.state.activeLayer = choice;
    if (choice === "default" || choice === "streets") {
      this.adapter.clearChoropleth();
      this.adapter.setBaseTiles(this.config.tiles[choice]);
      this.setLegend("");
      return;
    }
    try {
      const collection = await this.api.layer(choice);
      if (this.state.activeLayer !== choice) return; // user moved on
      this.adapter.setChoropleth(choice, collection.features);
      this.setLegend(`${choice} by block group, expressed in percentiles (0 = worst, 1 = best)`);
    } catch (err) {
      this.showBanner(`Could not load layer ${choice}: ${err instanceof Error ? err.message : err}`);
    }
  }

  // -- scoring --------------------------------------------------------------

  setSlider(criterion: Criterion, value: number): void {
    this.state.sliders[criterion] = normalizeSlider(value);
    this.scoreFlow.slidersChanged(this.state.sliders);
  }

  private applyScore(resp: ScoreResponse): void {
    this.state.lastScore = resp;
    this.adapter.setHeatOverlay(resp.raster);
    this.renderRanking(resp.ranking);
    this.setHint("");
  }

  /** Ranked list renders in response order; the client never re-sorts. */
  renderRanking(entries: RankingEntry[]): void {
    const list = this.doc.getElementById("ranked-list");
    if (!list) return;
    list.textContent = "";
    for (const entry of entries) {
      const item = this.doc.createElement("li");
      item.dataset.id = entry.id;
      const score = entry.composite === null ? "no data" : entry.composite.toFixed(3);
      item.textContent = `${entry.name} — ${score}`;
      if (entry.completeness < 1) {
        const note = this.doc.createElement("small");
        note.textContent = ` (data ${Math.round(entry.completeness * 100)}% complete)`;
        item.appendChild(note);
      }
      list.appendChild(item);
    }
  }

  // -- submission form ------------------------------------------------------

  async submitApartment(draft: SubmissionDraft): Promise<boolean> {
    this.clearFieldErrors();
    const check = validateSubmission(draft);
    if (!check.ok) {
      for (const [field, message] of Object.entries(check.fieldErrors)) {
        this.setFieldError(field, message);
      }
      return false; // no network call for client-side failures
    }
    try {
      const { filename } = await this.api.submitApartment({
        name: draft.name,
        address: draft.address,
        phone: draft.phone || undefined,
        website: draft.website || undefined,
        rent: draft.rent,
      });
      this.setFormStatus(`Submitted. Reference: ${filename}`);
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        this.setFieldError(err.field ?? "name", err.message);
      } else {
        this.setFormStatus("Could not reach the server; your entries are kept — try again.");
      }
      return false;
    }
  }

  // -- DOM wiring ------------------------------------------------------------

  bindControls(): void {
    for (const box of this.doc.querySelectorAll<HTMLInputElement>("input[data-category]")) {
      box.addEventListener("change", () => {
        void this.toggleCategory(box.dataset.category ?? "", box.checked);
      });
    }
    for (const radio of this.doc.querySelectorAll<HTMLInputElement>('input[name="maplayer"]')) {
      radio.addEventListener("change", () => {
        if (radio.checked) void this.setLayerChoice(radio.value as MapLayerChoice);
      });
    }
    for (const slider of this.doc.querySelectorAll<HTMLInputElement>("input[data-criterion]")) {
      slider.addEventListener("input", () => {
        this.setSlider(slider.dataset.criterion as Criterion, Number(slider.value));
      });
    }
    const form = this.doc.getElementById("apartment-form") as HTMLFormElement | null;
    form?.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submitApartment(this.readDraft(form));
    });
  }

  readDraft(form: HTMLFormElement): SubmissionDraft {
    const get = (name: string) =>
      (form.querySelector(`[name="${name}"]`) as HTMLInputElement | null)?.value ?? "";
    const rentKnown = (form.querySelector('[name="rent_known"]') as HTMLInputElement | null)
      ?.checked;
    return {
      name: get("name"),
      address: get("address"),
      phone: get("phone"),
      website: get("website"),
      rent: rentKnown ? Number(get("rent")) : undefined,
    };
  }

  hasPositiveSlider(): boolean {
    return anyPositive(this.state.sliders);
  }

  // -- small DOM helpers -----------------------------------------------------

  private setText(id: string, text: string): void {
    const el = this.doc.getElementById(id);
    if (el) el.textContent = text;
  }

  showBanner(message: string): void {
    this.setText("banner", message);
  }

  setHint(message: string): void {
    this.setText("hint", message);
  }

  private setLegend(message: string): void {
    this.setText("legend", message);
  }

  private setFormStatus(message: string): void {
    this.setText("form-status", message);
  }

  private setFieldError(field: string, message: string): void {
    const el = this.doc.querySelector(`[data-error-for="${field}"]`);
    if (el) el.textContent = message;
    else this.setFormStatus(`${field}: ${message}`);
  }

  private clearFieldErrors(): void {
    for (const el of this.doc.querySelectorAll("[data-error-for]")) el.textContent = "";
    this.setFormStatus("");
  }
}

export { AREA_LAYERS };
export type { AreaLayer };
