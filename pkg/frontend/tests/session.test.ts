import { beforeEach, describe, expect, it } from "vitest";

import { STORAGE_KEY, SweetSpotPanel, type SessionApi, type StorageLike } from "../src/session.js";
import type { GeneratorSpec, ProposeResponse, ScoreJson, SessionState } from "../src/types.js";

class MemoryStorage implements StorageLike {
  private map = new Map<string, string>();
  getItem(k: string) {
    return this.map.get(k) ?? null;
  }
  setItem(k: string, v: string) {
    this.map.set(k, v);
  }
  removeItem(k: string) {
    this.map.delete(k);
  }
}

const emptyScore: ScoreJson = { title: "", notes: [] };

/** In-memory stand-in for the session endpoints: bracket halving
 * around the chosen value over a single [0, 1] parameter. */
class FakeApi implements SessionApi {
  sessions = new Map<string, SessionState>();
  private counter = 0;

  async createSession(kind: string, _k: number, _spec?: GeneratorSpec): Promise<SessionState> {
    const s: SessionState = {
      id: `s${this.counter++}`,
      spec: { kind, seed: 0, params: { threshold: 0.5 } },
      param_order: ["threshold"],
      round: 0,
      history: [],
      status: "active",
      brackets: { threshold: [0, 1] },
      pending: null,
    };
    this.sessions.set(s.id, s);
    return structuredClone(s);
  }

  async getSession(id: string): Promise<SessionState> {
    const s = this.sessions.get(id);
    if (!s) throw new Error("404");
    return structuredClone(s);
  }

  async propose(id: string, param: string): Promise<ProposeResponse> {
    const s = this.sessions.get(id)!;
    const [lo, hi] = s.brackets[param];
    const current = s.spec.params[param];
    const values = [current, lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo)];
    s.pending = { param, values };
    return {
      session: structuredClone(s),
      candidates: values.map((v) => ({ kind: s.spec.kind, seed: 0, params: { [param]: v } })),
      scores: values.map(() => emptyScore),
    };
  }

  async choose(id: string, index: number): Promise<SessionState> {
    const s = this.sessions.get(id)!;
    if (!s.pending) throw new Error("409");
    const { param, values } = s.pending;
    const chosen = values[index];
    const [lo, hi] = s.brackets[param];
    const half = (hi - lo) / 2;
    let nlo = chosen - half / 2;
    nlo = Math.min(Math.max(nlo, 0), 1 - half);
    s.brackets[param] = [nlo, nlo + half];
    s.spec.params[param] = chosen;
    s.history.push({ param, candidates: values, chosen });
    s.round += 1;
    s.pending = null;
    return structuredClone(s);
  }
}

describe("SweetSpotPanel", () => {
  let api: FakeApi;
  let storage: MemoryStorage;
  let panel: SweetSpotPanel;

  beforeEach(() => {
    api = new FakeApi();
    storage = new MemoryStorage();
    panel = new SweetSpotPanel(api, storage);
  });

  it("start stores the session id", async () => {
    const s = await panel.start("julia_plot", 3);
    expect(storage.getItem(STORAGE_KEY)).toBe(s.id);
  });

  it("choose updates the displayed spec to the chosen candidate", async () => {
    await panel.start("julia_plot", 3);
    const proposal = await panel.propose("threshold");
    const want = proposal.candidates[2].params.threshold;
    const updated = await panel.choose(2);
    expect(updated.spec.params.threshold).toBe(want);
    expect(panel.proposal).toBeNull();
  });

  it("three choices halve the bracket three times", async () => {
    await panel.start("julia_plot", 3);
    const w0 = panel.bracketWidth("threshold");
    for (let i = 0; i < 3; i++) {
      await panel.propose("threshold");
      await panel.choose(0);
    }
    expect(panel.bracketWidth("threshold")).toBeCloseTo(w0 / 8, 12);
    expect(panel.historySummary()).toHaveLength(3);
  });

  it("restore reconstructs the session after a reload", async () => {
    await panel.start("julia_plot", 3);
    await panel.propose("threshold");
    await panel.choose(1);
    const reloaded = new SweetSpotPanel(api, storage);
    expect(await reloaded.restore()).toBe(true);
    expect(reloaded.session?.id).toBe(panel.session?.id);
    expect(reloaded.session?.history).toHaveLength(1);
  });

  it("restore fails cleanly with no stored id", async () => {
    expect(await panel.restore()).toBe(false);
  });

  it("choose without proposal throws", async () => {
    await panel.start("julia_plot", 3);
    await expect(panel.choose(0)).rejects.toThrow();
  });
});
