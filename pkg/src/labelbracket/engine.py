"""Rewriting formal sums with relation rules, and certified equivalence search.

A rule ``lhs = sum c_j rhs_j`` acts on the generator at ``key`` of a sum at a
match ``site`` inside its canonical representative:

* forward: ``a [G(lhs)]`` becomes ``sum a c_j [G(rhs_j)]``
* backward at term ``i``: ``q c_i [G(rhs_i)]`` becomes
  ``q [G(lhs)] - sum_{j != i} q c_j [G(rhs_j)]``

Both are additions of a multiple of the relation, so they preserve the
class of the sum in the quotient module.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .laurent import Laurent, NotDivisible, RingMismatch
from .matching import Match, glue, match_sites
from .planar import PlanarMap
from .rules import Fragment, RelationRule, RuleSet
from .sums import FormalSum
from .trigraph import canonical_layout

__all__ = [
    "FORWARD", "BACKWARD", "Step", "Trace", "Equal", "Unknown", "NormalizeResult",
    "rule_sites", "apply_rule", "apply_rule_with_images", "apply_step", "normalize",
    "equivalent", "replay", "ReplayError", "trace_json",
]

FORWARD = "forward"
BACKWARD = "backward"


class ReplayError(ValueError):
    """A trace step does not apply to the sum it is replayed on."""


@dataclass(frozen=True)
class Step:
    """One rewrite: ``term`` is -1 for forward, else the matched rhs index."""

    rule_id: str
    key: str
    site: Match
    direction: str = FORWARD
    term: int = -1
    amount: str | None = None  # lhs multiple moved; None = whole coefficient

    def to_json(self) -> dict:
        return {
            "rule": self.rule_id, "key": self.key, "direction": self.direction,
            "term": self.term, "amount": self.amount,
            "site": {"nodes": list(self.site.nodes), "offsets": list(self.site.offsets),
                     "loops": list(self.site.loops), "bindings": [list(b) for b in self.site.bindings]},
        }


@dataclass(frozen=True)
class Trace:
    """Meet-in-the-middle certificate: both step lists lead to the same sum."""

    from_a: tuple = ()
    from_b: tuple = ()

    def __len__(self):
        return len(self.from_a) + len(self.from_b)

    def to_json(self) -> dict:
        return {"from_a": [s.to_json() for s in self.from_a],
                "from_b": [s.to_json() for s in self.from_b]}


@dataclass(frozen=True)
class Equal:
    trace: Trace = field(default_factory=Trace)


@dataclass(frozen=True)
class Unknown:
    reason: str = "budget exhausted"
    explored: int = 0


@dataclass(frozen=True)
class NormalizeResult:
    sum: FormalSum
    fixpoint: bool
    steps: tuple = ()


# single steps ------------------------------------------------------------------

def _fragments(rule: RelationRule, direction: str, term: int) -> tuple[Fragment, list]:
    """The matched fragment and the ``(coefficient, fragment)`` list that replaces it."""
    if direction == FORWARD:
        return rule.lhs, list(rule.rhs)
    return rule.rhs[term][1], [(None, rule.lhs)] + [(c, f) for j, (c, f) in enumerate(rule.rhs) if j != term]


def rule_sites(rep: PlanarMap, rule: RelationRule, direction: str = FORWARD) -> list[tuple[int, Match]]:
    """``(term, site)`` pairs where ``rule`` applies to ``rep`` in ``direction``."""
    if rule.todo:
        return []
    if direction == FORWARD:
        return [(-1, m) for m in match_sites(rep, rule.lhs)]
    out = []
    for i, (_, frag) in enumerate(rule.rhs):
        out.extend((i, m) for m in match_sites(rep, frag))
    return out


def _image_site(result: PlanarMap, placed: list[int], frag: Fragment, bindings: tuple,
                reflect: bool) -> Match | None:
    """Site of a freshly glued fragment inside the canonical representative."""
    order, starts, mirrored = canonical_layout(result, reflect)
    pos = {v: i for i, v in enumerate(order)}
    interior = tuple(frag.interior)
    if any(v in mirrored for v in placed):
        return None
    nodes = tuple(pos[v] for v in placed)
    offsets = tuple((-starts[pos[v]]) % result.arity(v) for v in placed)
    loops, used = [], set()
    for token in frag.map.loops:
        i = next(i for i, lp in enumerate(result.loops) if lp == token and i not in used)
        used.add(i)
        loops.append(i)
    return Match(interior, nodes, offsets, tuple(sorted(loops)), bindings)


def apply_rule_with_images(s: FormalSum, rule: RelationRule, key: str, site: Match,
                           direction: str = FORWARD, term: int = -1,
                           amount: Laurent | None = None):
    """Apply one rewrite; also return, per replacement fragment, ``(key, site)`` of its image.

    ``amount`` is the multiple of the relation used (default: all of the
    coefficient at ``key`` for forward steps, that coefficient divided by
    the matched rhs coefficient for backward ones).
    """
    if key not in s.keys():
        raise KeyError(f"no term {key!r} in sum")
    if rule.todo:
        raise ValueError(f"rule {rule.id} has TODO bodies")
    a = s.coefficient(key)
    rep = s.representative(key)
    old, repl = _fragments(rule, direction, term)
    if direction == FORWARD:
        q = a if amount is None else amount
        removed = q
    else:
        ci = rule.rhs[term][0]
        q = a.exact_div(ci) if amount is None else amount
        removed = q * ci
    out = s - FormalSum({key: removed}, {key: rep}, s.variables, s.reflect)
    images = []
    for c, frag in repl:
        coeff = q if c is None else (q * c if direction == FORWARD else -(q * c))
        g, placed = glue(rep, site, old, frag)
        term_sum = FormalSum.of(g, coeff, s.variables, s.reflect)
        out = out + term_sum
        images.append((term_sum.keys()[0] if term_sum else None,
                       _image_site(g, placed, frag, site.bindings, s.reflect)))
    return out, images


def apply_rule(s: FormalSum, rule: RelationRule, key: str, site: Match,
               direction: str = FORWARD, term: int = -1, amount: Laurent | None = None) -> FormalSum:
    """Rewrite ``s`` at the generator ``key`` using ``rule`` at ``site``.

    Raises :class:`NotDivisible` when a backward step would leave the ring.
    """
    return apply_rule_with_images(s, rule, key, site, direction, term, amount)[0]


def apply_step(s: FormalSum, rs: RuleSet, step: Step, check: bool = True) -> FormalSum:
    rule = rs.rule(step.rule_id)
    if check:
        if step.key not in s.keys():
            raise ReplayError(f"step on missing generator {step.key!r}")
        sites = rule_sites(s.representative(step.key), rule, step.direction)
        if (step.term, step.site) not in sites:
            raise ReplayError(f"site is not a match of {step.rule_id}")
    amount = Laurent.parse(step.amount, s.variables) if step.amount is not None else None
    return apply_rule(s, rule, step.key, step.site, step.direction, step.term, amount)


# normalization -------------------------------------------------------------------

def _greedy_rules(rs: RuleSet) -> list[RelationRule]:
    rules = [r for r in rs.relations if not r.todo and (r.scalar or r.direction == "left_to_right")]
    return sorted(rules, key=lambda r: r.id)


def _first_greedy_step(s: FormalSum, rules: list[RelationRule]) -> Step | None:
    for key in s.keys():
        rep = s.representative(key)
        for rule in rules:
            sites = match_sites(rep, rule.lhs)
            if sites:
                return Step(rule.id, key, sites[0])
    return None


def normalize(s: FormalSum, rs: RuleSet, budget: int = 10_000) -> NormalizeResult:
    """Greedily apply left-to-right and scalar rules.

    Deterministic: the lowest key, then the lowest rule id, then the first
    site. ``budget`` caps the number of steps; a budget of 0 returns the
    input unexamined with ``fixpoint=False``.
    """
    if budget <= 0:
        return NormalizeResult(s, False, ())
    rules = _greedy_rules(rs)
    steps = []
    while len(steps) < budget:
        step = _first_greedy_step(s, rules)
        if step is None:
            return NormalizeResult(s, True, tuple(steps))
        s = apply_rule(s, rs.rule(step.rule_id), step.key, step.site)
        steps.append(step)
    return NormalizeResult(s, _first_greedy_step(s, rules) is None, tuple(steps))


# equivalence -------------------------------------------------------------------

def _check_ring(a: FormalSum, b: FormalSum, rs: RuleSet):
    for s in (a, b):
        if s and s.variables != rs.variables:
            raise RingMismatch(f"sum over {s.variables}, ruleset over {rs.variables}")


def _successors(s: FormalSum, rs: RuleSet) -> list[tuple[Step, FormalSum]]:
    """All single-step rewrites of ``s`` in deterministic order."""
    out = []
    rules = sorted((r for r in rs.relations if not r.todo), key=lambda r: r.id)
    for key in s.keys():
        rep = s.representative(key)
        for rule in rules:
            for direction in (FORWARD, BACKWARD):
                for term, site in rule_sites(rep, rule, direction):
                    try:
                        nxt = apply_rule(s, rule, key, site, direction, term)
                    except NotDivisible:
                        continue
                    out.append((Step(rule.id, key, site, direction, term), nxt))
    return out


def replay(a: FormalSum, b: FormalSum, trace: Trace, rs: RuleSet) -> bool:
    """Check a certificate: both halves must be valid and reach the same sum."""
    try:
        for step in trace.from_a:
            a = apply_step(a, rs, step)
        for step in trace.from_b:
            b = apply_step(b, rs, step)
    except (ReplayError, NotDivisible, KeyError):
        return False
    return a == b


def _path(parents: dict, h: str) -> list[Step]:
    steps = []
    while parents[h] is not None:
        h, step = parents[h]
        steps.append(step)
    return steps[::-1]


def equivalent(a: FormalSum, b: FormalSum, rs: RuleSet, max_nodes: int = 100_000,
               max_depth: int = 64, workers: int = 1):
    """Semi-decide ``a == b`` in the module presented by ``rs``.

    Tries greedy normalization of both sides first, then a level-synchronous
    bidirectional breadth-first search over sums started from the two
    normal forms, deduplicated by the
    whole-sum hash. ``max_nodes`` bounds the number of distinct sums
    discovered, ``max_depth`` the combined depth. Level expansion may use
    ``workers`` threads; merging follows frontier order, so the outcome and
    the trace do not depend on the worker count. An ``Equal`` is returned only
    after its trace replays.
    """
    _check_ring(a, b, rs)
    if a == b:
        return Equal(Trace())
    na = normalize(a, rs, max_nodes)
    nb = normalize(b, rs, max_nodes)
    if na.sum == nb.sum:
        trace = Trace(na.steps, nb.steps)
        if replay(a, b, trace, rs):
            return Equal(trace)

    # search from the normal forms; their normalization steps prefix the trace
    sides = [
        {"parents": {na.sum.hash_key(): None}, "frontier": [na.sum], "prefix": na.steps},
        {"parents": {nb.sum.hash_key(): None}, "frontier": [nb.sum], "prefix": nb.steps},
    ]
    explored = 2
    depth = 0
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while depth < max_depth and any(side["frontier"] for side in sides):
            live = [i for i in (0, 1) if sides[i]["frontier"]]
            i = min(live, key=lambda k: (len(sides[k]["frontier"]), k))
            side, other = sides[i], sides[1 - i]
            frontier = side["frontier"]
            expand = pool.map(lambda x: _successors(x, rs), frontier) if pool else map(
                lambda x: _successors(x, rs), frontier)
            nxt = []
            for parent, succ in zip(frontier, expand):
                ph = parent.hash_key()
                for step, t in succ:
                    h = t.hash_key()
                    if h in side["parents"]:
                        continue
                    side["parents"][h] = (ph, step)
                    explored += 1
                    if h in other["parents"]:
                        pa, pb = (side, other) if i == 0 else (other, side)
                        trace = Trace(pa["prefix"] + tuple(_path(pa["parents"], h)),
                                      pb["prefix"] + tuple(_path(pb["parents"], h)))
                        if replay(a, b, trace, rs):
                            return Equal(trace)
                    if explored >= max_nodes:
                        return Unknown("node budget exhausted", explored)
                    nxt.append(t)
            side["frontier"] = nxt
            depth += 1
    finally:
        if pool:
            pool.shutdown()
    if depth >= max_depth:
        return Unknown("depth budget exhausted", explored)
    return Unknown("search space exhausted without meeting", explored)


def trace_json(result) -> str:
    if isinstance(result, Equal):
        return json.dumps({"outcome": "Equal", "trace": result.trace.to_json()}, sort_keys=True)
    return json.dumps({"outcome": "Unknown", "reason": result.reason, "explored": result.explored},
                      sort_keys=True)
