import type {
  FeatureCollection,
  PointFeature,
  PolygonFeature,
  ScoreResponse,
  StatsResponse,
  SubmissionBody,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly field: string | undefined,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the scoring service. */
export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(`${this.base}${path}`, init);
    if (!resp.ok) {
      let field: string | undefined;
      let message = `HTTP ${resp.status}`;
      try {
        const body = (await resp.json()) as { error?: string; field?: string };
        field = body.field;
        if (body.error) message = body.error;
      } catch {
        // non-JSON error body; keep the generic message
      }
      throw new ApiError(resp.status, field, message);
    }
    if (resp.status === 204) return undefined as T;
    return (await resp.json()) as T;
  }

  places(category: string): Promise<FeatureCollection<PointFeature>> {
    return this.request(`/api/places?category=${encodeURIComponent(category)}`);
  }

  layer(name: string): Promise<FeatureCollection<PolygonFeature>> {
    return this.request(`/api/layers/${encodeURIComponent(name)}`);
  }

  score(weights: Record<string, number>, cellSize?: number): Promise<ScoreResponse> {
    const body: Record<string, unknown> = { weights };
    if (cellSize !== undefined) body.cell_size = cellSize;
    return this.request("/api/score", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  submitApartment(body: SubmissionBody): Promise<{ filename: string }> {
    return this.request("/api/apartments", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  stats(): Promise<StatsResponse | undefined> {
    return this.request("/api/stats");
  }

  health(): Promise<{ status: string; catalog_loaded: boolean; place_count: number }> {
    return this.request("/api/health");
  }
}
