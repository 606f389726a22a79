"""Shared test helpers: random-but-valid specs and scores."""

import random

import pytest

from scoremap.generators import GeneratorSpec, descriptors
from scoremap.score import Note, Score, normalize

# Parameters whose full descriptor range makes random specs slow; random
# sampling stays inside these narrower (still valid) spans.
_CHEAP_RANGES = {
    "julia_plot": {"width": (8, 64), "height": (8, 32), "max_iter": (16, 128)},
    "ifs": {"depth": (1, 8)},
    "julia_orbit": {"n_notes": (1, 256)},
}


def random_spec(kind: str, rng: random.Random) -> GeneratorSpec:
    """Uniform random spec within descriptor bounds (cross-field valid)."""
    params = {}
    for d in descriptors(kind):
        lo, hi = _CHEAP_RANGES.get(kind, {}).get(d.name, (d.min, d.max))
        params[d.name] = rng.uniform(lo, hi)
    if kind == "julia_plot" and params["pitch_low"] >= params["pitch_high"]:
        params["pitch_low"], params["pitch_high"] = (
            min(params["pitch_low"], params["pitch_high"]) - 1.0,
            max(params["pitch_low"], params["pitch_high"]) + 1.0,
        )
        params["pitch_low"] = max(params["pitch_low"], 0.0)
        params["pitch_high"] = min(params["pitch_high"], 127.0)
    return GeneratorSpec(kind=kind, params=params)


def random_score(rng: random.Random, n_notes: int, duration: float = 0.25) -> Score:
    """Normalized score with n distinct notes sharing one duration."""
    notes = []
    seen = set()
    while len(notes) < n_notes:
        n = Note(
            time=round(rng.uniform(0.0, 60.0), 4),
            duration=duration,
            pitch=round(rng.uniform(0.0, 127.0), 4),
            loudness=round(rng.uniform(1.0, 127.0), 4),
            instrument=rng.randint(0, 8),
        )
        key = (n.time, n.pitch, n.loudness, n.instrument)
        if key not in seen:
            seen.add(key)
            notes.append(n)
    return normalize(Score(notes=tuple(notes), title="random"))


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """One PASS/FAIL line per acceptance criterion."""
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.fspath.basename == "test_acceptance.py":
        verdict = "PASS" if rep.passed else "FAIL"
        print(f"\n[acceptance] {verdict}: {item.name}")
