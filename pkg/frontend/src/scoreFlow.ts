import { ApiClient, ApiError } from "./api.js";
import { Debouncer, LatestOnly } from "./debounce.js";
import { anyPositive } from "./state.js";
import type { ScoreResponse } from "./types.js";

export interface ScoreFlowCallbacks {
  /** A fresh (non-stale) score arrived. */
  onResult(resp: ScoreResponse): void;
  /** Server rejected the weights; the previous overlay should be retained. */
  onValidationError(field: string | undefined, message: string): void;
  /** All sliders are zero; no request was issued. */
  onSuppressed(): void;
  /** Network-level failure; retryable. */
  onNetworkError(message: string): void;
}

/**
 * Slider changes -> debounced score requests with last-writer-wins staleness
 * handling: responses to superseded requests are dropped on arrival.
 */
export class ScoreFlow {
  private readonly debouncer: Debouncer;
  private readonly latest = new LatestOnly();

  constructor(
    private readonly api: ApiClient,
    private readonly callbacks: ScoreFlowCallbacks,
    debounceMs = 300,
  ) {
    this.debouncer = new Debouncer(debounceMs);
  }

  slidersChanged(sliders: Record<string, number>): void {
    if (!anyPositive(sliders)) {
      this.debouncer.cancel();
      this.callbacks.onSuppressed();
      return;
    }
    const weights = { ...sliders };
    this.debouncer.schedule(() => void this.issue(weights));
  }

  private async issue(weights: Record<string, number>): Promise<void> {
    const id = this.latest.next();
    try {
      const resp = await this.api.score(weights);
      if (!this.latest.isCurrent(id)) return; // stale response, drop
      this.callbacks.onResult(resp);
    } catch (err) {
      if (!this.latest.isCurrent(id)) return;
      if (err instanceof ApiError && err.status === 422) {
        this.callbacks.onValidationError(err.field, err.message);
      } else {
        this.callbacks.onNetworkError(err instanceof Error ? err.message : String(err));
      }
    }
  }
}
