/** Wire formats of the scoremap service API. */

export interface GeneratorSpec {
  kind: string;
  params: Record<string, number>;
  seed?: number;
}

export interface ParamDescriptor {
  name: string;
  min: number;
  max: number;
  default: number;
}

export interface GeneratorInfo {
  kind: string;
  params: ParamDescriptor[];
}

/** Canonical score JSON: notes as [time, duration, pitch, loudness, instrument]. */
export interface ScoreJson {
  title: string;
  notes: [number, number, number, number, number][];
}

export type WindowRect = [number, number, number, number]; // u0, v0, u1, v1

export interface MapConfigBody {
  kind: string;
  mapped: string[];
  fixed: Record<string, number>;
  window: WindowRect;
  width: number;
  height: number;
  feature: string;
  m2?: number | null;
  mN?: number;
}

export interface MapSubmitResponse {
  id: string;
  status: string;
}

export interface MapStatus {
  id: string;
  status: "running" | "done" | "error" | "unknown";
  config: MapConfigBody;
  value_min?: number;
  value_max?: number;
  compute_seconds?: number;
  error?: string;
}

export interface ChoiceRecord {
  param: string;
  candidates: number[];
  chosen: number;
}

export interface SessionState {
  id: string;
  spec: { kind: string; seed: number; params: Record<string, number> };
  param_order: string[];
  round: number;
  history: ChoiceRecord[];
  status: string;
  brackets: Record<string, [number, number]>;
  pending: { param: string; values: number[] } | null;
}

export interface ProposeResponse {
  session: SessionState;
  candidates: GeneratorSpec[];
  scores: ScoreJson[];
}
