/** Sweet-spot A/B session state machine.
 *
 * All search state lives server-side; the panel holds only the session
 * id (persisted to storage so a page reload reconstructs the view via
 * GET /api/session/{id}) plus the last proposal for rendering. */

import type { GeneratorSpec, ProposeResponse, ScoreJson, SessionState } from "./types.js";

export const STORAGE_KEY = "scoremap.session.id";

/** The slice of the API the panel needs; ApiClient satisfies it. */
export interface SessionApi {
  createSession(kind: string, k: number, spec?: GeneratorSpec): Promise<SessionState>;
  getSession(id: string): Promise<SessionState>;
  propose(id: string, param: string): Promise<ProposeResponse>;
  choose(id: string, index: number): Promise<SessionState>;
}

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export interface Proposal {
  param: string;
  candidates: GeneratorSpec[];
  scores: ScoreJson[];
}

export class SweetSpotPanel {
  session: SessionState | null = null;
  proposal: Proposal | null = null;

  constructor(
    private api: SessionApi,
    private storage: StorageLike,
  ) {}

  /** Bracket width of a parameter, for display and tests. */
  bracketWidth(param: string): number {
    if (!this.session) return NaN;
    const [lo, hi] = this.session.brackets[param];
    return hi - lo;
  }

  async start(kind: string, k: number, spec?: GeneratorSpec): Promise<SessionState> {
    this.session = await this.api.createSession(kind, k, spec);
    this.proposal = null;
    this.storage.setItem(STORAGE_KEY, this.session.id);
    return this.session;
  }

  /** Reload-time restore: true if a stored session id resolved. */
  async restore(): Promise<boolean> {
    const id = this.storage.getItem(STORAGE_KEY);
    if (!id) return false;
    try {
      this.session = await this.api.getSession(id);
      return true;
    } catch {
      this.storage.removeItem(STORAGE_KEY);
      return false;
    }
  }

  async propose(param: string): Promise<Proposal> {
    if (!this.session) throw new Error("no active session");
    const res: ProposeResponse = await this.api.propose(this.session.id, param);
    this.session = res.session;
    this.proposal = { param, candidates: res.candidates, scores: res.scores };
    return this.proposal;
  }

  async choose(index: number): Promise<SessionState> {
    if (!this.session || !this.proposal) throw new Error("no outstanding proposal");
    this.session = await this.api.choose(this.session.id, index);
    this.proposal = null;
    return this.session;
  }

  historySummary(): { param: string; chosen: number }[] {
    return (this.session?.history ?? []).map((h) => ({ param: h.param, chosen: h.chosen }));
  }
}
