/** Piano-roll geometry: a score becomes time×pitch rectangles colored
 * by instrument.  Pure math so it can be unit-tested without a canvas;
 * the renderer just replays the rectangles. */

import type { ScoreJson } from "./types.js";

export interface NoteRect {
  x: number;
  y: number;
  w: number;
  h: number;
  color: string;
  pitch: number;
  time: number;
}

export interface RollLayout {
  rects: NoteRect[];
  timeMin: number;
  timeMax: number;
  pitchMin: number;
  pitchMax: number;
}

export const INSTRUMENT_COLORS = [
  "#4cc9f0", "#f72585", "#b5e48c", "#ffb703",
  "#c77dff", "#ff6d00", "#80ed99", "#e63946",
];

export function instrumentColor(instrument: number): string {
  return INSTRUMENT_COLORS[Math.abs(Math.round(instrument)) % INSTRUMENT_COLORS.length];
}

/** Lay the score out in a width×height view box (css pixels).
 * One rectangle per note, x/w from time+duration, y/h from pitch rows;
 * y grows downward, so higher pitches sit higher on screen. */
export function layoutPianoRoll(score: ScoreJson, width: number, height: number): RollLayout {
  if (score.notes.length === 0) {
    return { rects: [], timeMin: 0, timeMax: 1, pitchMin: 0, pitchMax: 127 };
  }
  let timeMin = Infinity;
  let timeMax = -Infinity;
  let pitchMin = Infinity;
  let pitchMax = -Infinity;
  for (const [t, d, p] of score.notes) {
    timeMin = Math.min(timeMin, t);
    timeMax = Math.max(timeMax, t + d);
    pitchMin = Math.min(pitchMin, p);
    pitchMax = Math.max(pitchMax, p);
  }
  const timeSpan = Math.max(timeMax - timeMin, 1e-9);
  // One extra semitone of headroom keeps single-pitch scores visible.
  const pitchSpan = Math.max(pitchMax - pitchMin + 1, 1);
  const rowH = height / pitchSpan;
  const rects = score.notes.map(([t, d, p, , ins]) => ({
    x: ((t - timeMin) / timeSpan) * width,
    w: Math.max((d / timeSpan) * width, 1),
    y: height - ((p - pitchMin + 1) / pitchSpan) * height,
    h: Math.max(rowH, 1),
    color: instrumentColor(ins),
    pitch: p,
    time: t,
  }));
  return { rects, timeMin, timeMax, pitchMin, pitchMax };
}
