"""Sweet-spot search: coordinate-wise bracket halving over parameters.

The interactive protocol is a human A/B loop: propose k candidate
values for one parameter (the incumbent plus evenly spaced probes
across the parameter's current bracket), the composer picks one, the
bracket halves around the pick, repeat.  The automated form drives the
same propose/record_choice machinery with a scalar objective, cycling
through all parameters and revisiting them in later passes, since
earlier sweet spots drift as other parameters move.

Guarantees relied on by tests: candidate 0 is always the incumbent
value; ties in the automated chooser keep the lowest candidate index
(so a constant objective is a fixed point); each recorded choice halves
the active bracket exactly; the accepted-objective sequence is
nondecreasing.  Only local-optimum semantics are claimed.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field, replace
from typing import Callable

from .errors import BudgetError, SpecError
from .generators import GeneratorSpec, descriptors, generate, validate_spec
from .score import FEATURES, Score, extract_feature


class SearchStateError(RuntimeError):
    """Operation out of order, e.g. a choice with no outstanding proposal."""


@dataclass
class ChoiceRecord:
    param: str
    candidates: list[float]
    chosen: float


@dataclass
class SearchSession:
    id: str
    spec: GeneratorSpec
    param_order: list[str]
    round: int = 0
    history: list[ChoiceRecord] = field(default_factory=list)
    status: str = "active"  # active | converged | stopped
    brackets: dict[str, tuple[float, float]] = field(default_factory=dict)
    pending: tuple[str, list[float]] | None = None


def new_session(spec: GeneratorSpec, session_id: str | None = None) -> SearchSession:
    validate_spec(spec)
    table = descriptors(spec.kind)
    return SearchSession(
        id=session_id or uuid.uuid4().hex,
        spec=spec,
        param_order=[d.name for d in table],
        brackets={d.name: (d.min, d.max) for d in table},
    )


def propose(session: SearchSession, param_name: str, k: int) -> list[GeneratorSpec]:
    """k candidate specs for one parameter: the incumbent first, then
    k-1 probes evenly spaced across the parameter's current bracket.

    The k=2 probe would be the bracket midpoint; when the incumbent
    already sits there, the probe moves to the midpoint of the half not
    containing it, so a proposal always offers something new.
    """
    if k < 2:
        raise ValueError("propose: k must be >= 2")
    if param_name not in session.param_order:
        raise SpecError(f"propose: unknown parameter {param_name!r} for kind {session.spec.kind}")
    lo, hi = session.brackets[param_name]
    current = session.spec.params[param_name]
    probes = [lo + (i + 0.5) * (hi - lo) / (k - 1) for i in range(k - 1)]
    if k == 2 and probes[0] == current:
        mid = probes[0]
        probes[0] = (mid + hi) / 2.0 if current <= mid else (lo + mid) / 2.0
    values = [current] + probes
    session.pending = (param_name, values)
    return [
        replace(session.spec, params={**session.spec.params, param_name: v})
        for v in values
    ]


def record_choice(session: SearchSession, chosen_index: int) -> SearchSession:
    """Accept one candidate of the outstanding proposal.

    The session's spec moves to the chosen value and the parameter's
    bracket halves (exactly) around it, shifted to stay inside the
    parameter's [min, max].
    """
    if session.pending is None:
        raise SearchStateError("record_choice: no outstanding proposal")
    param, values = session.pending
    if not 0 <= chosen_index < len(values):
        raise ValueError(f"record_choice: index {chosen_index} out of range for {len(values)} candidates")
    chosen = values[chosen_index]

    desc = next(d for d in descriptors(session.spec.kind) if d.name == param)
    lo, hi = session.brackets[param]
    half = (hi - lo) / 2.0
    new_lo = chosen - half / 2.0
    new_lo = min(max(new_lo, desc.min), desc.max - half)
    session.brackets[param] = (new_lo, new_lo + half)

    session.spec = replace(session.spec, params={**session.spec.params, param: chosen})
    session.history.append(ChoiceRecord(param=param, candidates=list(values), chosen=chosen))
    session.round += 1
    session.pending = None
    return session


def make_objective(feature: str | None = None, weights: dict[str, float] | None = None) -> Callable[[Score], float]:
    """Objective from a feature name or a weighted sum of features."""
    if (feature is None) == (weights is None):
        raise ValueError("make_objective: give exactly one of feature or weights")
    if feature is not None:
        if feature not in FEATURES:
            raise ValueError(f"unknown feature {feature!r}")
        return lambda score: extract_feature(score, feature)
    for name in weights:
        if name not in FEATURES:
            raise ValueError(f"unknown feature {name!r}")
    items = sorted(weights.items())
    return lambda score: sum(w * extract_feature(score, name) for name, w in items)


def coordinate_search(
    objective: Callable[[Score], float],
    spec0: GeneratorSpec,
    rounds: int = 5,
    k: int = 3,
    tol: float = 0.005,
) -> GeneratorSpec:
    """Maximize the objective by cyclic per-parameter bracket halving.

    Parameters are visited in descriptor order.  Each visit re-opens the
    parameter's bracket to its full range and halves it around the
    best candidate until its width drops below `tol` (a fraction of the
    parameter's range), then the next parameter gets its turn; after a
    full cycle the search revisits the first parameter.  Stops after
    `rounds` cycles or when a cycle changes nothing.  Returns the
    best-seen spec; if generation fails mid-search the best-so-far is
    returned.
    """
    if rounds < 1:
        raise ValueError("coordinate_search: rounds must be >= 1")
    if not 0.0 < tol < 1.0:
        raise ValueError("coordinate_search: tol must be a fraction in (0, 1)")
    validate_spec(spec0)

    cache: dict[tuple, float] = {}

    def evaluate(spec: GeneratorSpec) -> float:
        key = tuple(sorted(spec.params.items()))
        if key not in cache:
            cache[key] = objective(generate(spec))
        return cache[key]

    session = new_session(spec0)
    table = {d.name: d for d in descriptors(spec0.kind)}
    best_spec = spec0
    try:
        best_val = evaluate(spec0)
    except (SpecError, BudgetError):
        return spec0

    try:
        for _ in range(rounds):
            changed = False
            for param in session.param_order:
                desc = table[param]
                span = desc.max - desc.min
                session.brackets[param] = (desc.min, desc.max)
                while session.brackets[param][1] - session.brackets[param][0] >= tol * span:
                    specs = propose(session, param, k)
                    scores = [evaluate(s) for s in specs]
                    idx = max(range(len(scores)), key=lambda i: (scores[i], -i))
                    record_choice(session, idx)
                    if idx != 0:
                        changed = True
                    if scores[idx] > best_val:
                        best_val = scores[idx]
                        best_spec = specs[idx]
            if not changed:
                session.status = "converged"
                break
    except (SpecError, BudgetError):
        session.status = "stopped"
    return best_spec


# --- persistence ----------------------------------------------------------------


def session_to_dict(session: SearchSession) -> dict:
    return {
        "id": session.id,
        "spec": {"kind": session.spec.kind, "seed": session.spec.seed, "params": session.spec.params},
        "param_order": session.param_order,
        "round": session.round,
        "history": [
            {"param": r.param, "candidates": r.candidates, "chosen": r.chosen}
            for r in session.history
        ],
        "status": session.status,
        "brackets": {k: list(v) for k, v in session.brackets.items()},
        "pending": None if session.pending is None else {"param": session.pending[0], "values": session.pending[1]},
    }


def session_from_dict(d: dict) -> SearchSession:
    spec = GeneratorSpec(kind=d["spec"]["kind"], params=dict(d["spec"]["params"]), seed=d["spec"].get("seed", 0))
    pending = d.get("pending")
    return SearchSession(
        id=d["id"],
        spec=spec,
        param_order=list(d["param_order"]),
        round=int(d["round"]),
        history=[ChoiceRecord(r["param"], list(r["candidates"]), r["chosen"]) for r in d["history"]],
        status=d["status"],
        brackets={k: (float(v[0]), float(v[1])) for k, v in d["brackets"].items()},
        pending=None if pending is None else (pending["param"], list(pending["values"])),
    )


def session_to_json(session: SearchSession) -> str:
    return json.dumps(session_to_dict(session), sort_keys=True)


def session_from_json(blob: str) -> SearchSession:
    return session_from_dict(json.loads(blob))
