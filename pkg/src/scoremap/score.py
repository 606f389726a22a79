"""Piano-roll score model: notes, canonical normalization, features.

A Note is a point in (time, pitch, loudness, instrument) with a
duration; a Score is a canonically sorted sequence of them.  Every
generator in this package emits Scores, and the feature extractors here
supply the scalar values that color parametric maps and drive the
automated sweet-spot search.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Callable

if TYPE_CHECKING:  # pragma: no cover
    from .generators import GeneratorSpec

# Smallest legal duration; clamping target for non-positive durations.
# Chosen to survive the 6-decimal CSV round trip exactly.
MIN_DURATION = 1e-6

PITCH_MIN, PITCH_MAX = 0.0, 127.0
LOUDNESS_MIN, LOUDNESS_MAX = 0.0, 127.0
DEFAULT_LOUDNESS = 100.0


@dataclass(frozen=True)
class Note:
    """One note event.  Pitch and loudness are real-valued MIDI numbers;
    quantization to integers happens only at MIDI export and in the
    pitch-class histogram."""

    time: float
    duration: float
    pitch: float
    loudness: float = DEFAULT_LOUDNESS
    instrument: int = 0

    def sort_key(self) -> tuple:
        return (self.time, self.pitch, self.instrument, self.duration, self.loudness)


@dataclass(frozen=True)
class Score:
    """An immutable, canonically ordered collection of notes."""

    notes: tuple[Note, ...] = ()
    title: str = ""
    provenance: "GeneratorSpec | None" = None

    def __len__(self) -> int:
        return len(self.notes)


def _clamp(value: float, lo: float, hi: float) -> float:
    if math.isnan(value):
        return lo
    return min(max(value, lo), hi)


def _clamp_note(note: Note) -> Note:
    return Note(
        time=max(note.time, 0.0) if not math.isnan(note.time) else 0.0,
        duration=max(note.duration, MIN_DURATION) if not math.isnan(note.duration) else MIN_DURATION,
        pitch=_clamp(note.pitch, PITCH_MIN, PITCH_MAX),
        loudness=_clamp(note.loudness, LOUDNESS_MIN, LOUDNESS_MAX),
        instrument=max(int(round(note.instrument)), 0),
    )


def normalize(score: Score) -> Score:
    """Clamp every note into its invariant range and sort canonically.

    Idempotent; two scores holding the same multiset of notes normalize
    to identical objects, which makes serialized output canonical.
    """
    notes = tuple(sorted((_clamp_note(n) for n in score.notes), key=Note.sort_key))
    return replace(score, notes=notes)


def bounding_box(score: Score) -> tuple[float, float, float, float]:
    """Tight (time_min, time_max, pitch_min, pitch_max) over the score.

    time_max includes durations (max of time + duration).  Raises
    ValueError for an empty score.
    """
    if not score.notes:
        raise ValueError("bounding_box: empty score")
    time_min = min(n.time for n in score.notes)
    time_max = max(n.time + n.duration for n in score.notes)
    pitch_min = min(n.pitch for n in score.notes)
    pitch_max = max(n.pitch for n in score.notes)
    return (time_min, time_max, pitch_min, pitch_max)


# --- feature extractors -----------------------------------------------------
#
# All features are total over valid scores: the empty score maps to 0
# everywhere, and a zero onset-span score has density = note count.


def _note_count(score: Score) -> float:
    return float(len(score.notes))


def _note_density(score: Score) -> float:
    # Onset span, not the duration-inclusive bounding box: a lone chord
    # has zero span and falls back to the note count.
    if not score.notes:
        return 0.0
    onsets = [n.time for n in score.notes]
    span = max(onsets) - min(onsets)
    if span == 0.0:
        return float(len(score.notes))
    return len(score.notes) / span


def _pitch_range(score: Score) -> float:
    if not score.notes:
        return 0.0
    pitches = [n.pitch for n in score.notes]
    return max(pitches) - min(pitches)


def _mean_pitch(score: Score) -> float:
    if not score.notes:
        return 0.0
    return sum(n.pitch for n in score.notes) / len(score.notes)


def _mean_duration(score: Score) -> float:
    if not score.notes:
        return 0.0
    return sum(n.duration for n in score.notes) / len(score.notes)


def _pitch_class_entropy(score: Score) -> float:
    """Shannon entropy (bits) of the rounded-pitch mod 12 histogram."""
    if not score.notes:
        return 0.0
    hist = Counter(int(round(n.pitch)) % 12 for n in score.notes)
    total = len(score.notes)
    return -sum((c / total) * math.log2(c / total) for c in hist.values())


FEATURES: dict[str, Callable[[Score], float]] = {
    "note_count": _note_count,
    "note_density": _note_density,
    "pitch_range": _pitch_range,
    "mean_pitch": _mean_pitch,
    "mean_duration": _mean_duration,
    "pitch_class_entropy": _pitch_class_entropy,
}


def extract_feature(score: Score, feature: str) -> float:
    """Evaluate a named feature of the score.

    Raises ValueError for unknown feature names; never fails on a valid
    score.
    """
    try:
        fn = FEATURES[feature]
    except KeyError:
        raise ValueError(f"unknown feature: {feature!r}") from None
    return fn(score)
