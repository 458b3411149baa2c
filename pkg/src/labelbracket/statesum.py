"""Expanding a diagram into smoothing states and summing them."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

from .diagram import GraphDiagram, crossings
from .engine import normalize
from .laurent import Laurent
from .matching import replace_regions
from .planar import UN, PlanarMap, crossing_sign
from .rules import RuleSet, SmoothingRule
from .sums import FormalSum
from .trigraph import validate_trigraph

__all__ = [
    "StateSelector", "BracketResult", "RulesetIncomplete", "StateError",
    "enumerate_states", "resolve_state", "bracket", "state_sum",
]

StateSelector = dict  # crossing node id -> choice index 0/1


class RulesetIncomplete(ValueError):
    def __init__(self, rule_id: str):
        super().__init__(f"ruleset incomplete: {rule_id}")
        self.rule_id = rule_id


class StateError(ValueError):
    """A crossing class is not covered, or a state violates the signature table."""


@dataclass(frozen=True)
class BracketResult:
    raw: FormalSum
    normalized: FormalSum
    state_count: int
    fixpoint: bool


def enumerate_states(d: GraphDiagram, start: int = 0, stop: int | None = None) -> Iterator[StateSelector]:
    """Selectors in lexicographic order over crossings sorted by node id.

    ``start``/``stop`` slice the sequence without materializing it.
    """
    xs = crossings(d)
    return ({x: c for x, c in zip(xs, choice)}
            for choice in itertools.islice(itertools.product((0, 1), repeat=len(xs)), start, stop))


def _smoothing_for(rs: RuleSet, sign: int) -> SmoothingRule | None:
    want = "positive" if sign > 0 else "negative"
    exact = [r for r in rs.smoothing if r.crossing_class == want]
    generic = [r for r in rs.smoothing if r.crossing_class == "any"]
    return (exact or generic or [None])[0]


def _prepare(d: GraphDiagram, rs: RuleSet) -> PlanarMap:
    """Apply the vertex map and, for unoriented rulesets, forget orientation."""
    vmap = dict(rs.vertex_map)
    kinds = tuple(vmap.get(k, k) for k in d.kinds)
    dirs = d.dirs if rs.oriented else (UN,) * d.num_darts
    loops = d.loops if rs.oriented else tuple((k, "0") for k, _ in d.loops)
    return PlanarMap(kinds, d.labels, d.offsets, d.mate, dirs, d.ekinds, loops)


def resolve_state(d: GraphDiagram, s: StateSelector, rs: RuleSet,
                  check: bool = True) -> tuple[Laurent, PlanarMap]:
    """Smooth every crossing of ``d`` as ``s`` selects; return ``(coefficient, trigraph)``."""
    host = _prepare(d, rs)
    coeff = rs.one()
    placements = []
    for x in crossings(d):
        rule = _smoothing_for(rs, crossing_sign(d, x))
        if rule is None:
            raise StateError(f"no smoothing rule covers crossing {x} "
                             f"({'positive' if crossing_sign(d, x) > 0 else 'negative'})")
        c, frag = rule.choices[s[x]]
        coeff = coeff * c
        placements.append(([(x, i) for i in range(4)], frag))
    g, _ = replace_regions(host, set(crossings(d)), placements,
                           loop_sign="+" if rs.oriented else "0")
    if check:
        report = validate_trigraph(g, rs.signature_table, require_orientation=rs.oriented)
        if not report.ok:
            raise StateError(f"state violates the ruleset: {report.violations[0]}")
    return coeff, g


def _partial(args) -> FormalSum:
    d, rs, start, stop = args
    out: dict = {}
    reps: dict = {}
    for sel in enumerate_states(d, start, stop):
        c, g = resolve_state(d, sel, rs)
        term = FormalSum.of(g, c, rs.variables, rs.reflect)
        for k, v in term.items():
            out[k] = out[k] + v if k in out else v
            reps.setdefault(k, term.representative(k))
    return FormalSum(out, reps, rs.variables, rs.reflect)


def state_sum(d: GraphDiagram, rs: RuleSet, workers: int = 1) -> tuple[FormalSum, int]:
    """Unnormalized ``sum_s coeff_s [G_s]`` and the number of states."""
    incomplete = [r.id for r in rs.smoothing if r.todo] + [r.id for r in rs.relations if r.todo]
    if incomplete:
        raise RulesetIncomplete(incomplete[0])
    total = 2 ** len(crossings(d))
    chunks = max(1, min(workers, total))
    bounds = [total * i // chunks for i in range(chunks + 1)]
    jobs = [(d, rs, bounds[i], bounds[i + 1]) for i in range(chunks)]
    if workers > 1 and chunks > 1:
        with ProcessPoolExecutor(chunks) as pool:
            parts = list(pool.map(_partial, jobs))
    else:
        parts = [_partial(j) for j in jobs]
    result = FormalSum.zero(rs.variables, rs.reflect)
    for p in parts:
        result = result + p
    return result, total


def bracket(d: GraphDiagram, rs: RuleSet, budget: int = 10_000, workers: int = 1) -> BracketResult:
    """State sum of ``d`` followed by greedy normalization within ``budget`` steps."""
    raw, count = state_sum(d, rs, workers)
    norm = normalize(raw, rs, budget)
    return BracketResult(raw, norm.sum, count, norm.fixpoint)
