import { describe, expect, it } from "vitest";

import { instrumentWaveform, midiToFrequency, scheduleScore } from "../src/synth.js";
import type { ScoreJson } from "../src/types.js";

describe("midiToFrequency", () => {
  it("A4 = 440 Hz", () => {
    expect(midiToFrequency(69)).toBeCloseTo(440, 9);
  });

  it("octaves double", () => {
    expect(midiToFrequency(81)).toBeCloseTo(880, 9);
    expect(midiToFrequency(57)).toBeCloseTo(220, 9);
  });

  it("middle C", () => {
    expect(midiToFrequency(60)).toBeCloseTo(261.6255653, 5);
  });
});

describe("scheduleScore", () => {
  const score: ScoreJson = {
    title: "",
    notes: [
      [2.0, 0.5, 69.0, 127.0, 0],
      [2.5, 0.5, 57.0, 63.5, 1],
    ],
  };

  it("shifts playback to start at zero", () => {
    const events = scheduleScore(score);
    expect(Math.min(...events.map((e) => e.start))).toBe(0);
    expect(events[1].start).toBeCloseTo(0.5, 12);
  });

  it("maps loudness into gain linearly", () => {
    const events = scheduleScore(score);
    expect(events[0].gain).toBeCloseTo(0.25, 6);
    expect(events[1].gain).toBeCloseTo(0.125, 2);
  });

  it("assigns waveforms by instrument", () => {
    const events = scheduleScore(score);
    expect(events[0].waveform).toBe(instrumentWaveform(0));
    expect(events[1].waveform).toBe(instrumentWaveform(1));
    expect(events[0].waveform).not.toBe(events[1].waveform);
  });

  it("empty score yields no events", () => {
    expect(scheduleScore({ title: "", notes: [] })).toEqual([]);
  });
});
