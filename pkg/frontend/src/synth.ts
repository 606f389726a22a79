/** Minimal browser synthesizer: one oscillator + gain envelope per
 * note, waveform picked by instrument.  Scheduling is pure (and
 * unit-tested); only `play` touches the WebAudio API. */

import type { ScoreJson } from "./types.js";

export interface SynthEvent {
  start: number; // seconds from playback start
  duration: number;
  frequency: number;
  gain: number; // 0..1 from loudness
  waveform: OscillatorType;
}

const WAVEFORMS: OscillatorType[] = ["sine", "triangle", "square", "sawtooth"];

export function midiToFrequency(pitch: number): number {
  return 440 * Math.pow(2, (pitch - 69) / 12);
}

export function instrumentWaveform(instrument: number): OscillatorType {
  return WAVEFORMS[Math.abs(Math.round(instrument)) % WAVEFORMS.length];
}

/** Turn a score into a playback schedule, shifted to start at 0. */
export function scheduleScore(score: ScoreJson): SynthEvent[] {
  if (score.notes.length === 0) return [];
  const t0 = Math.min(...score.notes.map(([t]) => t));
  return score.notes.map(([t, d, p, l, ins]) => ({
    start: t - t0,
    duration: Math.max(d, 0.02),
    frequency: midiToFrequency(p),
    gain: Math.min(Math.max(l / 127, 0), 1) * 0.25,
    waveform: instrumentWaveform(ins),
  }));
}

export interface PlaybackHandle {
  stop(): void;
  readonly durationSeconds: number;
}

/** Play a score.  The AudioContext is injectable for tests. */
export function playScore(score: ScoreJson, ctx?: AudioContext): PlaybackHandle {
  const events = scheduleScore(score);
  const context = ctx ?? new AudioContext();
  const base = context.currentTime + 0.05;
  const nodes: { osc: OscillatorNode; gain: GainNode }[] = [];
  let end = 0;
  for (const ev of events) {
    const osc = context.createOscillator();
    const gain = context.createGain();
    osc.type = ev.waveform;
    osc.frequency.value = ev.frequency;
    gain.gain.setValueAtTime(0, base + ev.start);
    gain.gain.linearRampToValueAtTime(ev.gain, base + ev.start + 0.01);
    gain.gain.setTargetAtTime(0, base + ev.start + ev.duration, 0.03);
    osc.connect(gain).connect(context.destination);
    osc.start(base + ev.start);
    osc.stop(base + ev.start + ev.duration + 0.2);
    nodes.push({ osc, gain });
    end = Math.max(end, ev.start + ev.duration + 0.2);
  }
  return {
    durationSeconds: end,
    stop() {
      for (const { osc } of nodes) {
        try {
          osc.stop();
        } catch {
          /* already stopped */
        }
      }
    },
  };
}
