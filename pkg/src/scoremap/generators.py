"""Parameterized score generators.

Four generator kinds share one interface: a GeneratorSpec (kind + named
real-valued parameters) goes in, a canonical Score comes out, and the
mapping is a pure function of the spec.  Each kind publishes an ordered
table of ParameterDescriptors; that order defines the axis order of the
kind's parameter space everywhere downstream (Hilbert mapping, search).

Kinds:

* ``julia_orbit``  — one orbit of z' = z*z + c played as a melody
  (real part to pitch, imaginary part to loudness), truncated if the
  orbit escapes;
* ``julia_plot``   — a filled-Julia-set raster scanned left-to-right as
  a piano roll (column to time, row to pitch), with a slow-escape
  threshold filter deciding which cells sound and escape speed picking
  the instrument;
* ``ifs``          — deterministic expansion of an iterated function
  system of affine maps acting on (time, pitch, loudness, instrument);
  constant maps make this universal: any note set is exactly the leaf
  set of its own one-point maps;
* ``lsystem``      — built-in Lindenmayer rewriting systems interpreted
  by a time/pitch turtle.

Integer-flavored parameters (counts, sizes, rule selectors) are carried
as reals so every parameter space is a box in R^d; generators round
them on use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .dynamics import DEFAULT_BAILOUT, iterate_orbit, julia_grid
from .errors import BudgetError, SpecError
from .score import DEFAULT_LOUDNESS, Note, Score, normalize

KINDS = ("julia_orbit", "julia_plot", "ifs", "lsystem")

IFS_LEAF_BUDGET = 10**6
LSYSTEM_SYMBOL_BUDGET = 10**6

# Duplicate IFS leaves closer than this per field collapse to one note.
IFS_DEDUP_TOL = 1e-9


@dataclass(frozen=True)
class ParameterDescriptor:
    name: str
    min: float
    max: float
    default: float

    def __post_init__(self):
        if not self.min < self.max:
            raise ValueError(f"{self.name}: min must be < max")
        if not self.min <= self.default <= self.max:
            raise ValueError(f"{self.name}: default outside [min, max]")


@dataclass(frozen=True)
class GeneratorSpec:
    """A point in a generator's parameter space.

    ``seed`` is reserved for stochastic generator variants; the four
    built-in kinds are fully deterministic and ignore it.
    """

    kind: str
    params: dict[str, float] = field(default_factory=dict)
    seed: int = 0


@dataclass(frozen=True)
class AffineMap:
    """Affine transform of note coordinates (time, pitch, loudness, instrument)."""

    linear: tuple[float, ...]  # 16 entries, row-major 4x4
    translate: tuple[float, ...]  # 4 entries

    def __post_init__(self):
        if len(self.linear) != 16 or len(self.translate) != 4:
            raise ValueError("AffineMap needs a 4x4 linear part and a 4-vector translation")
        if not all(math.isfinite(v) for v in (*self.linear, *self.translate)):
            raise ValueError("AffineMap entries must be finite")

    @staticmethod
    def constant(vector: tuple[float, float, float, float]) -> "AffineMap":
        """Zero linear part: maps every point to `vector`."""
        return AffineMap(linear=(0.0,) * 16, translate=tuple(float(v) for v in vector))

    @staticmethod
    def diagonal(scales: tuple[float, float, float, float],
                 translate: tuple[float, float, float, float]) -> "AffineMap":
        lin = [0.0] * 16
        for i, s in enumerate(scales):
            lin[i * 4 + i] = float(s)
        return AffineMap(linear=tuple(lin), translate=tuple(float(v) for v in translate))

    def matrix(self) -> np.ndarray:
        return np.array(self.linear, dtype=np.float64).reshape(4, 4)


# --- parameter tables --------------------------------------------------------

_DESCRIPTORS: dict[str, tuple[ParameterDescriptor, ...]] = {
    "julia_orbit": (
        ParameterDescriptor("c_re", -2.0, 2.0, -1.0),
        ParameterDescriptor("c_im", -2.0, 2.0, 0.0),
        ParameterDescriptor("z0_re", -2.0, 2.0, 0.0),
        ParameterDescriptor("z0_im", -2.0, 2.0, 0.0),
        ParameterDescriptor("n_notes", 1.0, 1000.0, 64.0),
        ParameterDescriptor("time_step", 0.01, 2.0, 0.25),
        ParameterDescriptor("pitch_center", 24.0, 96.0, 60.0),
        ParameterDescriptor("pitch_scale", 0.0, 48.0, 12.0),
    ),
    "julia_plot": (
        ParameterDescriptor("c_re", -2.0, 2.0, -1.0),
        ParameterDescriptor("c_im", -2.0, 2.0, 0.0),
        ParameterDescriptor("width", 8.0, 256.0, 48.0),
        ParameterDescriptor("height", 8.0, 128.0, 24.0),
        ParameterDescriptor("max_iter", 16.0, 1024.0, 128.0),
        ParameterDescriptor("total_time", 0.5, 120.0, 16.0),
        ParameterDescriptor("pitch_low", 0.0, 127.0, 36.0),
        ParameterDescriptor("pitch_high", 0.0, 127.0, 96.0),
        ParameterDescriptor("threshold", 0.0, 1.0, 0.5),
    ),
    # Fixed-shape IFS family: three maps, each with diagonal time/pitch
    # scales and time/pitch translations.  Loudness and instrument rows
    # are pinned (loudness 100, instrument = map index), so each
    # top-level branch is a voice.  Defaults draw a Sierpinski triangle
    # over ~30 s between pitches 36 and 96.
    "ifs": (
        ParameterDescriptor("m0.s_t", -1.0, 1.0, 0.5),
        ParameterDescriptor("m0.s_p", -1.0, 1.0, 0.5),
        ParameterDescriptor("m0.t_t", 0.0, 30.0, 0.0),
        ParameterDescriptor("m0.t_p", 0.0, 64.0, 18.0),
        ParameterDescriptor("m1.s_t", -1.0, 1.0, 0.5),
        ParameterDescriptor("m1.s_p", -1.0, 1.0, 0.5),
        ParameterDescriptor("m1.t_t", 0.0, 30.0, 7.5),
        ParameterDescriptor("m1.t_p", 0.0, 64.0, 30.0),
        ParameterDescriptor("m2.s_t", -1.0, 1.0, 0.5),
        ParameterDescriptor("m2.s_p", -1.0, 1.0, 0.5),
        ParameterDescriptor("m2.t_t", 0.0, 30.0, 15.0),
        ParameterDescriptor("m2.t_p", 0.0, 64.0, 48.0),
        ParameterDescriptor("depth", 1.0, 12.0, 5.0),
        ParameterDescriptor("note_duration", 0.01, 4.0, 0.25),
    ),
    "lsystem": (
        ParameterDescriptor("rule_set", 0.0, 2.0, 0.0),
        ParameterDescriptor("iterations", 1.0, 8.0, 5.0),
        ParameterDescriptor("time_step", 0.01, 2.0, 0.25),
        ParameterDescriptor("pitch_step", 0.0, 12.0, 2.0),
        ParameterDescriptor("pitch_start", 0.0, 127.0, 60.0),
    ),
}


def descriptors(kind: str) -> tuple[ParameterDescriptor, ...]:
    """Ordered parameter table of a kind; the order is the axis order
    of the kind's parameter space."""
    try:
        return _DESCRIPTORS[kind]
    except KeyError:
        raise SpecError(f"unknown generator kind: {kind!r}") from None


def default_spec(kind: str) -> GeneratorSpec:
    return GeneratorSpec(kind=kind, params={d.name: d.default for d in descriptors(kind)})


def validate_spec(spec: GeneratorSpec) -> None:
    """Raise SpecError unless the spec satisfies its kind's contract."""
    table = descriptors(spec.kind)
    names = {d.name for d in table}
    given = set(spec.params)
    if given != names:
        missing = sorted(names - given)
        unknown = sorted(given - names)
        parts = []
        if missing:
            parts.append(f"missing {missing}")
        if unknown:
            parts.append(f"unknown {unknown}")
        raise SpecError(f"{spec.kind}: " + ", ".join(parts))
    for d in table:
        v = spec.params[d.name]
        if not (isinstance(v, (int, float)) and math.isfinite(v)):
            raise SpecError(f"{spec.kind}: {d.name} must be a finite number")
        if not d.min <= v <= d.max:
            raise SpecError(f"{spec.kind}: {d.name}={v} outside [{d.min}, {d.max}]")
    if spec.kind == "julia_plot" and not spec.params["pitch_low"] < spec.params["pitch_high"]:
        raise SpecError("julia_plot: pitch_low must be < pitch_high")
    if spec.seed < 0 or int(spec.seed) != spec.seed:
        raise SpecError("seed must be a non-negative integer")


def generate(spec: GeneratorSpec) -> Score:
    """Generate the score at a parameter point.  Pure: identical specs
    produce identical scores."""
    validate_spec(spec)
    fn = {
        "julia_orbit": generate_julia_orbit,
        "julia_plot": generate_julia_plot,
        "ifs": _generate_ifs_family,
        "lsystem": generate_lsystem,
    }[spec.kind]
    # Kind functions already normalize; just stamp the provenance.
    return replace(fn(spec.params), title=spec.kind, provenance=spec)


# --- julia orbit -------------------------------------------------------------


def generate_julia_orbit(p: dict[str, float]) -> Score:
    """Play one orbit of z' = z*z + c as a melody: note k takes its
    pitch from orbit[k].re and its loudness from orbit[k].im, truncated
    at the first orbit value beyond the escape radius."""
    c = complex(p["c_re"], p["c_im"])
    z0 = complex(p["z0_re"], p["z0_im"])
    n_notes = int(round(p["n_notes"]))
    step = p["time_step"]
    b2 = DEFAULT_BAILOUT * DEFAULT_BAILOUT
    notes = []
    for k, z in enumerate(iterate_orbit(z0, c, n_notes - 1)):
        if z.real * z.real + z.imag * z.imag > b2:
            break  # orbit escaped: the score truncates here
        notes.append(
            Note(
                time=k * step,
                duration=step,
                pitch=p["pitch_center"] + p["pitch_scale"] * z.real / 2.0,
                loudness=60.0 + 30.0 * z.imag / 2.0,
                instrument=0,
            )
        )
    return normalize(Score(notes=tuple(notes), title="julia_orbit"))


# --- julia plot --------------------------------------------------------------


def generate_julia_plot(p: dict[str, float]) -> Score:
    """Scan a filled-Julia-set raster over [-2, 2]^2 as a piano roll.

    Column i is a time slot, row j a pitch slot.  A cell sounds iff it
    is bounded or escapes slowly (iterations/max_iter >= threshold);
    escaped cells take one of four instruments by escape speed,
    bounded cells instrument 0.
    """
    width = int(round(p["width"]))
    height = int(round(p["height"]))
    max_iter = int(round(p["max_iter"]))
    grid = julia_grid(complex(p["c_re"], p["c_im"]), (-2.0, 2.0, -2.0, 2.0), width, height, max_iter)
    total_time = p["total_time"]
    pitch_low, pitch_high = p["pitch_low"], p["pitch_high"]
    threshold = p["threshold"]
    dt = total_time / width
    dp = (pitch_high - pitch_low) / height
    notes = []
    for j in range(height):
        for i in range(width):
            escaped = bool(grid.escaped[j, i])
            iters = int(grid.iterations[j, i])
            if escaped and iters / max_iter < threshold:
                continue  # fast escape: filtered out
            notes.append(
                Note(
                    time=(i + 0.5) * dt,
                    duration=dt,
                    pitch=pitch_low + (j + 0.5) * dp,
                    loudness=DEFAULT_LOUDNESS,
                    instrument=(iters * 4) // max_iter if escaped else 0,
                )
            )
    return normalize(Score(notes=tuple(notes), title="julia_plot"))


# --- iterated function systems ----------------------------------------------


def generate_ifs(
    maps: list[AffineMap],
    depth: int,
    p0: tuple[float, float, float, float],
    note_duration: float = 0.25,
) -> Score:
    """Expand an IFS to its depth-`depth` leaf set over p0 and read the
    leaves as notes.

    Every composition f_{i1} after ... after f_{i_depth} applied to p0
    yields one leaf 4-vector (time, pitch, loudness, instrument); leaves
    equal within IFS_DEDUP_TOL per field merge.  Duration is not part of
    the affine space: every note gets `note_duration`.
    """
    if not maps:
        raise SpecError("generate_ifs: need at least one map")
    if not 1 <= depth <= 12:
        raise SpecError(f"generate_ifs: depth {depth} outside [1, 12]")
    if len(maps) ** depth > IFS_LEAF_BUDGET:
        raise BudgetError(f"generate_ifs: {len(maps)}**{depth} leaves exceed budget {IFS_LEAF_BUDGET}")
    if note_duration <= 0:
        raise SpecError("generate_ifs: note_duration must be > 0")

    mats = [m.matrix().T for m in maps]
    trans = [np.array(m.translate, dtype=np.float64) for m in maps]
    pts = np.array([p0], dtype=np.float64)
    if not np.isfinite(pts).all():
        raise SpecError("generate_ifs: p0 must be finite")
    for _ in range(depth):
        pts = np.concatenate([pts @ mt + tr for mt, tr in zip(mats, trans)])
    # Wild user maps can overflow; pin the leaves back to finite land.
    pts = np.nan_to_num(pts, nan=0.0, posinf=1e15, neginf=-1e15)

    # Clamp to note ranges, then grid-dedup at the tolerance.
    times = np.maximum(pts[:, 0], 0.0)
    pitches = np.clip(pts[:, 1], 0.0, 127.0)
    louds = np.clip(pts[:, 2], 0.0, 127.0)
    instruments = np.maximum(np.rint(pts[:, 3]), 0.0).astype(np.int64)

    if len(times) > 256 and float(np.abs(times).max(initial=0.0)) < 9e9:
        # Vectorized dedup: quantized rows fit int64 comfortably.
        keys = np.column_stack([
            np.rint(times / IFS_DEDUP_TOL).astype(np.int64),
            np.rint(pitches / IFS_DEDUP_TOL).astype(np.int64),
            np.rint(louds / IFS_DEDUP_TOL).astype(np.int64),
            instruments,
        ])
        _, first = np.unique(keys, axis=0, return_index=True)
        picks = sorted(first)
    else:
        seen: dict[tuple, int] = {}
        for row, (t, pi, lo, ins) in enumerate(zip(times, pitches, louds, instruments)):
            key = (round(t / IFS_DEDUP_TOL), round(pi / IFS_DEDUP_TOL), round(lo / IFS_DEDUP_TOL), int(ins))
            if key not in seen:
                seen[key] = row
        picks = list(seen.values())
    notes = tuple(
        Note(float(times[r]), note_duration, float(pitches[r]), float(louds[r]), int(instruments[r]))
        for r in picks
    )
    return normalize(Score(notes=notes, title="ifs"))


def parse_explicit_ifs(d: dict) -> tuple[list[AffineMap], int, tuple[float, float, float, float], float]:
    """Parse the explicit-IFS JSON form.

    Schema: {"maps": [{"linear": [16 reals row-major], "translate":
    [4 reals]}, ...], "depth": int, "p0": [4 reals]}; an optional
    "note_duration" defaults to 0.25.  Returns the generate_ifs
    arguments.
    """
    try:
        maps = [
            AffineMap(linear=tuple(float(v) for v in m["linear"]),
                      translate=tuple(float(v) for v in m["translate"]))
            for m in d["maps"]
        ]
        depth = int(d["depth"])
        p0 = tuple(float(v) for v in d["p0"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"bad explicit-IFS JSON: {exc}") from None
    if len(p0) != 4:
        raise SpecError("bad explicit-IFS JSON: p0 must have 4 components")
    return maps, depth, p0, float(d.get("note_duration", 0.25))


def generate_ifs_from_dict(d: dict) -> Score:
    """Run an explicit-IFS JSON description through generate_ifs."""
    maps, depth, p0, note_duration = parse_explicit_ifs(d)
    return generate_ifs(maps, depth, p0, note_duration)


def ifs_from_score(score: Score) -> list[AffineMap]:
    """Constant maps whose depth-1 leaf set reproduces the score's notes.

    The universality construction: one zero-linear map per note, with
    the note's (time, pitch, loudness, instrument) as translation.
    """
    if not score.notes:
        raise SpecError("ifs_from_score: empty score")
    if len(score.notes) > IFS_LEAF_BUDGET:
        raise BudgetError(f"ifs_from_score: {len(score.notes)} notes exceed budget")
    return [AffineMap.constant((n.time, n.pitch, n.loudness, float(n.instrument))) for n in score.notes]


_IFS_P0 = (0.0, 60.0, 100.0, 0.0)


def _family_maps(p: dict[str, float]) -> list[AffineMap]:
    return [
        AffineMap.diagonal(
            scales=(p[f"m{k}.s_t"], p[f"m{k}.s_p"], 0.0, 0.0),
            translate=(p[f"m{k}.t_t"], p[f"m{k}.t_p"], DEFAULT_LOUDNESS, float(k)),
        )
        for k in range(3)
    ]


def _generate_ifs_family(p: dict[str, float]) -> Score:
    return generate_ifs(_family_maps(p), int(round(p["depth"])), _IFS_P0, p["note_duration"])


# --- L-systems ----------------------------------------------------------------
#
# Shared turtle interpretation: A emits a note at the cursor and
# advances time; B raises the pitch cursor by pitch_step (silently);
# '+' / '-' move the pitch cursor up / down; '[' pushes the cursor pair
# and ']' pops it.  Emitted notes take the bracket depth as instrument,
# so branches become voices.

_LSYSTEM_RULES: tuple[dict, ...] = (
    {"axiom": "A", "rules": {"A": "AB", "B": "A"}},
    {"axiom": "A", "rules": {"A": "A[+AB]-A", "B": "BB"}},
    {"axiom": "AB", "rules": {"A": "B-A+A", "B": "AB"}},
)


def lsystem_expand(rule_set: int, iterations: int) -> str:
    """Rewrite the rule set's axiom `iterations` times."""
    if not 0 <= rule_set < len(_LSYSTEM_RULES):
        raise SpecError(f"unknown rule set {rule_set}")
    table = _LSYSTEM_RULES[rule_set]
    s = table["axiom"]
    rules = table["rules"]
    for _ in range(iterations):
        s = "".join(rules.get(ch, ch) for ch in s)
        if len(s) > LSYSTEM_SYMBOL_BUDGET:
            raise BudgetError(f"lsystem expansion exceeds {LSYSTEM_SYMBOL_BUDGET} symbols")
    return s


def generate_lsystem(p: dict[str, float]) -> Score:
    """Rewrite a built-in rule set and interpret it with the time/pitch
    turtle documented above."""
    s = lsystem_expand(int(round(p["rule_set"])), int(round(p["iterations"])))
    step = p["time_step"]
    pitch_step = p["pitch_step"]
    time_cursor = 0.0
    pitch_cursor = p["pitch_start"]
    stack: list[tuple[float, float]] = []
    notes = []
    for ch in s:
        if ch == "A":
            notes.append(Note(time_cursor, step, pitch_cursor, DEFAULT_LOUDNESS, len(stack)))
            time_cursor += step
        elif ch == "B" or ch == "+":
            pitch_cursor += pitch_step
        elif ch == "-":
            pitch_cursor -= pitch_step
        elif ch == "[":
            stack.append((time_cursor, pitch_cursor))
        elif ch == "]":
            time_cursor, pitch_cursor = stack.pop()
    return normalize(Score(notes=tuple(notes), title="lsystem"))
