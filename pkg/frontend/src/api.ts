/** Thin typed client over the service endpoints.  All engine state
 * lives server-side; the UI only ever talks through these calls. */

import type {
  GeneratorInfo,
  GeneratorSpec,
  MapConfigBody,
  MapStatus,
  MapSubmitResponse,
  ProposeResponse,
  ScoreJson,
  SessionState,
} from "./types.js";

export type FetchLike = typeof fetch;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchImpl: FetchLike = fetch.bind(globalThis),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchImpl(this.base + path, init);
    if (!res.ok) {
      let detail = res.statusText;
      try {
        const body = (await res.json()) as { error?: string };
        if (body.error) detail = body.error;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  generators(): Promise<GeneratorInfo[]> {
    return this.request("/api/generators");
  }

  score(spec: GeneratorSpec): Promise<ScoreJson> {
    return this.post("/api/score", spec);
  }

  async scoreMidi(spec: GeneratorSpec, tempoBpm = 120, ticksPerQuarter = 480): Promise<Blob> {
    const res = await this.fetchImpl(this.base + "/api/score/midi", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ ...spec, tempo_bpm: tempoBpm, ticks_per_quarter: ticksPerQuarter }),
    });
    if (!res.ok) throw new ApiError(res.status, res.statusText);
    return await res.blob();
  }

  submitMap(config: MapConfigBody): Promise<MapSubmitResponse> {
    return this.post("/api/map", config);
  }

  mapStatus(id: string): Promise<MapStatus> {
    return this.request(`/api/map/${id}`);
  }

  /** Poll until the tile is done (or errors out server-side). */
  async waitForMap(id: string, intervalMs = 250, timeoutMs = 120_000): Promise<MapStatus> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const status = await this.mapStatus(id);
      if (status.status === "done") return status;
      if (status.status === "error") throw new ApiError(500, status.error ?? "map computation failed");
      if (Date.now() > deadline) throw new ApiError(408, "map computation timed out");
      await new Promise((r) => setTimeout(r, intervalMs));
    }
  }

  mapPngUrl(id: string, palette = "viridis"): string {
    return `${this.base}/api/map/${id}/png?palette=${palette}`;
  }

  lookup(id: string, px: number, py: number): Promise<GeneratorSpec> {
    return this.request(`/api/map/${id}/lookup?px=${px}&py=${py}`);
  }

  createSession(kind: string, k: number, spec?: GeneratorSpec): Promise<SessionState> {
    return this.post("/api/session", spec ? { spec, k } : { kind, k });
  }

  getSession(id: string): Promise<SessionState> {
    return this.request(`/api/session/${id}`);
  }

  propose(id: string, param: string): Promise<ProposeResponse> {
    return this.post(`/api/session/${id}/propose?param=${encodeURIComponent(param)}`, {});
  }

  choose(id: string, index: number): Promise<SessionState> {
    return this.post(`/api/session/${id}/choice`, { index });
  }
}
