"""Score serialization: Standard MIDI File export, JSON, and CSV.

All functions are pure transformations between Scores and bytes/text;
callers own file I/O.  The JSON form is the canonical serialization:
normalizing a score and dumping it here yields identical bytes for
identical note multisets, which is what generator determinism tests
compare.
"""

from __future__ import annotations

import json
import struct

from .score import Note, Score, normalize

CSV_HEADER = "time,duration,pitch,loudness,instrument"


# --- MIDI ----------------------------------------------------------------------


def _var_len(value: int) -> bytes:
    """MIDI variable-length quantity, 7 bits per byte, high bit = more."""
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(out))


def write_midi(score: Score, ticks_per_quarter: int = 480, tempo_bpm: float = 120.0) -> bytes:
    """Render a score as a format-0 Standard MIDI File.

    One track: a tempo meta event, then a note-on/note-off pair per
    note on channel = instrument mod 16, key/velocity from rounded
    pitch/loudness (velocity floored at 1; 0 would mean note-off).
    Events are stably ordered with offs before ons at equal ticks, and
    sub-tick notes are stretched to one tick so every on has an off
    after it.
    """
    if not 24 <= ticks_per_quarter <= 960:
        raise ValueError(f"ticks_per_quarter {ticks_per_quarter} outside [24, 960]")
    if not 0 < tempo_bpm <= 960:
        raise ValueError(f"tempo_bpm {tempo_bpm} outside (0, 960]")

    ticks_per_second = tempo_bpm / 60.0 * ticks_per_quarter
    events = []  # (tick, priority, status, key, velocity); priority 0 = off, 1 = on
    for n in normalize(score).notes:
        channel = n.instrument % 16
        key = min(max(int(round(n.pitch)), 0), 127)
        velocity = min(max(int(round(n.loudness)), 1), 127)
        tick_on = int(round(n.time * ticks_per_second))
        tick_off = max(int(round((n.time + n.duration) * ticks_per_second)), tick_on + 1)
        events.append((tick_on, 1, 0x90 | channel, key, velocity))
        events.append((tick_off, 0, 0x80 | channel, key, 0))
    events.sort(key=lambda e: (e[0], e[1]))

    track = bytearray()
    track += _var_len(0)
    track += bytes([0xFF, 0x51, 0x03]) + round(60_000_000 / tempo_bpm).to_bytes(3, "big")
    cursor = 0
    for tick, _, status, key, velocity in events:
        track += _var_len(tick - cursor)
        track += bytes([status, key, velocity])
        cursor = tick
    track += _var_len(0) + bytes([0xFF, 0x2F, 0x00])

    header = b"MThd" + struct.pack(">IHHH", 6, 0, 1, ticks_per_quarter)
    return header + b"MTrk" + struct.pack(">I", len(track)) + bytes(track)


# --- JSON ----------------------------------------------------------------------


def write_json(score: Score) -> str:
    """Canonical JSON: {"title": ..., "notes": [[t, d, p, l, i], ...]}."""
    notes = [[n.time, n.duration, n.pitch, n.loudness, n.instrument] for n in score.notes]
    return json.dumps({"title": score.title, "notes": notes}, separators=(",", ":"))


def read_json(text: str) -> Score:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"bad score JSON: {exc}") from None
    if not isinstance(data, dict) or "notes" not in data:
        raise ValueError("bad score JSON: expected an object with a 'notes' array")
    notes = []
    for idx, row in enumerate(data["notes"]):
        if len(row) != 5:
            raise ValueError(f"bad score JSON: note {idx}: expected 5 fields, got {len(row)}")
        t, d, p, l, i = row
        notes.append(Note(float(t), float(d), float(p), float(l), int(i)))
    return Score(notes=tuple(notes), title=str(data.get("title", "")))


# --- CSV -----------------------------------------------------------------------


def write_csv(score: Score) -> str:
    """CSV with 6-decimal fields, one note per row."""
    lines = [CSV_HEADER]
    for n in score.notes:
        lines.append(f"{n.time:.6f},{n.duration:.6f},{n.pitch:.6f},{n.loudness:.6f},{n.instrument}")
    return "\n".join(lines) + "\n"


def read_csv(text: str) -> Score:
    """Parse the CSV form; malformed rows are reported with 1-based line
    numbers (the header is line 1)."""
    lines = [ln for ln in text.splitlines()]
    if not lines or lines[0].strip() != CSV_HEADER:
        raise ValueError(f"line 1: expected header {CSV_HEADER!r}")
    notes = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 5:
            raise ValueError(f"line {lineno}: expected 5 fields, got {len(fields)}")
        try:
            t, d, p, l = (float(f) for f in fields[:4])
            i = int(round(float(fields[4])))
        except ValueError:
            raise ValueError(f"line {lineno}: unparseable number in {line!r}") from None
        notes.append(Note(t, d, p, l, i))
    return Score(notes=tuple(notes))
