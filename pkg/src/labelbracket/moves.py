"""Reidemeister moves for knotted trivalent graph diagrams and invariance certification.

Crossings store their darts counterclockwise from the incoming understrand,
so slots 0 and 2 are under and 1 and 3 are over. Every move is a local
surgery on a :class:`MapBuilder`; the new crossings are rotated back into
that normal form.

Variant table (``kind``: variants, crossing delta for apply/inverse)

* ``Ω1``: ``L+ L- R+ R-`` (side of the kink relative to the strand, and
  crossing sign); +1/-1. A site is an edge, named by its tail dart, or a
  free loop. A ``+`` loop only takes left kinks and a ``-`` loop only right
  ones, so that undoing the kink restores the loop's sign.
* ``Ω2``: ``over under`` (whether the strand of the first dart of the site
  passes over); +2/-2. A site is two darts of one face on different edges.
* ``Ω3``: ``triangle``; 0. A site is a triangular face whose three strands
  are stacked (one strand over at both its crossings). The move is its own
  inverse.
* ``Ω4``: ``over under`` (height of the strand sliding past the vertex);
  +1/-1. Apply moves a strand crossing edge ``k`` of a vertex to the far
  side, where it crosses edges ``k+1`` and ``k+2``.
* ``Ω5``: ``over under`` (whether edge ``k`` of the vertex passes over);
  +1/-1. Apply twists edges ``k`` and ``k+1`` of a vertex around each other.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .diagram import GraphDiagram, crossings, load_diagram, vertices
from .engine import Equal, Trace, equivalent
from .planar import IN, OUT, THICK, MapBuilder, crossing_sign
from .rules import RuleSet
from .statesum import RulesetIncomplete, state_sum

__all__ = [
    "KINDS", "VARIANTS", "DELTA", "MoveInstance", "MoveError", "Certified", "Unknown",
    "enumerate_move_sites", "apply_move", "apply_move_with_inverse",
    "certify_invariance", "sweep", "load_corpus", "normalize_kind",
]

KINDS = ("Ω1", "Ω2", "Ω3", "Ω4", "Ω5")
VARIANTS = {
    "Ω1": ("L+", "L-", "R+", "R-"),
    "Ω2": ("over", "under"),
    "Ω3": ("triangle",),
    "Ω4": ("over", "under"),
    "Ω5": ("over", "under"),
}
DELTA = {"Ω1": 1, "Ω2": 2, "Ω3": 0, "Ω4": 1, "Ω5": 1}
APPLY = "apply"
INVERSE = "inverse"


class MoveError(ValueError):
    pass


def normalize_kind(kind: str) -> str:
    """Accept ``Ω4``, ``O4``, ``R4`` or ``4``."""
    k = str(kind).strip()
    if k in KINDS:
        return k
    if k[-1:].isdigit() and k[:-1] in ("", "O", "o", "R", "r", "Omega", "omega"):
        if f"Ω{k[-1]}" in KINDS:
            return f"Ω{k[-1]}"
    raise MoveError(f"unknown move {kind!r}")


@dataclass(frozen=True)
class MoveInstance:
    kind: str
    variant: str
    site: tuple
    direction: str = APPLY

    def to_json(self) -> dict:
        return {"kind": self.kind, "variant": self.variant, "site": list(self.site),
                "direction": self.direction}


# helpers ------------------------------------------------------------------------

def _slot(d: GraphDiagram, x: int) -> tuple[int, int]:
    return d.node_of(x), d.slot_of(x)


def _mate_slot(d: GraphDiagram, v: int, k: int) -> tuple[int, int]:
    return _slot(d, d.mate[d.dart_at(v, k)])


def _dir(d: GraphDiagram, v: int, k: int) -> int:
    return d.dirs[d.dart_at(v, k)]


def _is_crossing(d: GraphDiagram, v: int) -> bool:
    return d.kinds[v] == "X"


def _add_crossing(b: MapBuilder, dirs: list[int], over_first: bool) -> list[tuple]:
    """New crossing from four counterclockwise positions; positions 0/2 and 1/3 are strands.

    Returns the builder slot of each position.
    """
    under = (1, 3) if over_first else (0, 2)
    r = next(p for p in under if dirs[p] == IN)
    nid = b.add_node("X", 4)
    pos = [(nid, (p - r) % 4) for p in range(4)]
    for p in range(4):
        b.dirs[pos[p]] = dirs[p]
        b.ekind[pos[p]] = THICK
    return pos


def _join(b: MapBuilder, s: tuple, t: tuple):
    b.mate[s] = t
    b.mate[t] = s
    b.ekind[s] = b.ekind[t] = THICK


def _freeze(b: MapBuilder):
    return b.freeze()


def _new_dart(pm, index, s):
    return pm.dart_at(index[s[0]], s[1])


# Ω1 -------------------------------------------------------------------------------

_KINK = {
    # positions counterclockwise from the incoming understrand
    "L+": ("p", "q", "lo", "li"),
    "L-": ("li", "p", "q", "lo"),
    "R+": ("li", "lo", "q", "p"),
    "R-": ("p", "li", "lo", "q"),
}
_ROLE_DIR = {"p": IN, "q": OUT, "lo": OUT, "li": IN}


def _o1_sites(d: GraphDiagram, direction: str) -> list[MoveInstance]:
    out = []
    if direction == APPLY:
        for x in range(d.num_darts):
            if d.dirs[x] == OUT:
                out.extend(MoveInstance("Ω1", v, ("edge", x)) for v in VARIANTS["Ω1"])
        for i, (_, sign) in enumerate(d.loops):
            side = "L" if sign == "+" else "R"
            out.extend(MoveInstance("Ω1", side + s, ("loop", i)) for s in "+-")
        return out
    for c in crossings(d):
        for i in range(4):
            if d.mate[d.dart_at(c, i)] == d.dart_at(c, i + 1):
                out.append(MoveInstance("Ω1", _o1_inverse_variant(d, c, i), ("crossing", c, i), INVERSE))
    return out


def _o1_roles(d: GraphDiagram, c: int, i: int) -> tuple[int, int, str]:
    a, b = (i + 2) % 4, (i + 3) % 4
    pin, qout = (a, b) if _dir(d, c, a) == IN else (b, a)
    li = i if _dir(d, c, i) == IN else (i + 1) % 4
    side = "L" if li == (pin + 3) % 4 else "R"
    return pin, qout, side


def _o1_inverse_variant(d: GraphDiagram, c: int, i: int) -> str:
    _, _, side = _o1_roles(d, c, i)
    return side + ("+" if crossing_sign(d, c) > 0 else "-")


def _o1_apply(d: GraphDiagram, m: MoveInstance):
    b = MapBuilder.from_map(d)
    layout = _KINK[m.variant]
    nid = b.add_node("X", 4)
    slot = {role: (nid, i) for i, role in enumerate(layout)}
    for role, s in slot.items():
        b.dirs[s] = _ROLE_DIR[role]
        b.ekind[s] = THICK
    _join(b, slot["lo"], slot["li"])
    if m.site[0] == "loop":
        b.loops.pop(m.site[1])
        _join(b, slot["q"], slot["p"])
    else:
        x = m.site[1]
        _join(b, _slot(d, x), slot["p"])
        _join(b, slot["q"], _slot(d, d.mate[x]))
    pm, index = _freeze(b)
    i = layout.index("lo")
    if layout[(i + 1) % 4] != "li":
        i = layout.index("li")
    inv = MoveInstance("Ω1", m.variant, ("crossing", index[nid], i), INVERSE)
    return pm, inv


def _o1_inverse(d: GraphDiagram, m: MoveInstance):
    _, c, i = m.site
    pin, qout, side = _o1_roles(d, c, i)
    p = _mate_slot(d, c, pin)
    q = _mate_slot(d, c, qout)
    b = MapBuilder.from_map(d)
    b.remove_nodes([c])
    if p[0] == c:
        b.loops.append((THICK, "+" if side == "L" else "-"))
        pm, index = _freeze(b)
        token = (THICK, "+" if side == "L" else "-")
        site = ("loop", pm.loops.index(token))
    else:
        _join(b, p, q)
        pm, index = _freeze(b)
        site = ("edge", _new_dart(pm, index, p))
    return pm, MoveInstance("Ω1", m.variant, site, APPLY)


# Ω2 -------------------------------------------------------------------------------

def _edge(d: GraphDiagram, x: int) -> int:
    return min(x, d.mate[x])


def _o2_sites(d: GraphDiagram, direction: str) -> list[MoveInstance]:
    out = []
    if direction == APPLY:
        for face in d.faces():
            darts = sorted(face)
            for a in range(len(darts)):
                for c in range(a + 1, len(darts)):
                    x1, x2 = darts[a], darts[c]
                    if _edge(d, x1) != _edge(d, x2):
                        out.extend(MoveInstance("Ω2", v, (x1, x2)) for v in VARIANTS["Ω2"])
        return out
    for face in d.faces():
        if len(face) != 2:
            continue
        y1, y2 = sorted(face)
        c, c2 = d.node_of(y1), d.node_of(y2)
        if c == c2 or not (_is_crossing(d, c) and _is_crossing(d, c2)):
            continue
        odd1 = d.slot_of(y1) % 2, d.slot_of(d.mate[y1]) % 2
        odd2 = d.slot_of(y2) % 2, d.slot_of(d.mate[y2]) % 2
        if odd1 in ((0, 0), (1, 1)) and odd2 in ((0, 0), (1, 1)) and odd1 != odd2:
            out.append(MoveInstance("Ω2", "over" if odd1 == (1, 1) else "under", (y1,), INVERSE))
    return out


def _o2_apply(d: GraphDiagram, m: MoveInstance):
    x1, x2 = m.site
    d1, d2 = d.mate[x1], d.mate[x2]
    s_d1, s_x1, s_d2, s_x2 = (_slot(d, y) for y in (d1, x1, d2, x2))
    # strand 1 runs d1 -> c1.S -> c1.N -> c2.N -> c2.S -> x1
    c1S = -d.dirs[d1]
    c1N, c2N, c2S = -c1S, c1S, -c1S
    # strand 2 runs d2 -> c2.E -> c2.W -> c1.E -> c1.W -> x2
    c2E = -d.dirs[d2]
    c2W, c1E, c1W = -c2E, c2E, -c2E
    strand1_over = m.variant == "over"
    b = MapBuilder.from_map(d)
    # positions E, N, W, S; strand 2 sits at E/W
    c1 = _add_crossing(b, [c1E, c1N, c1W, c1S], over_first=not strand1_over)
    c2 = _add_crossing(b, [c2E, c2N, c2W, c2S], over_first=not strand1_over)
    E, N, W, S = range(4)
    _join(b, s_d1, c1[S])
    _join(b, c1[N], c2[N])
    _join(b, c2[S], s_x1)
    _join(b, s_d2, c2[E])
    _join(b, c2[W], c1[E])
    _join(b, c1[W], s_x2)
    pm, index = _freeze(b)
    y = _new_dart(pm, index, c1[N])
    face = min(y, pm.face_next(y))
    return pm, MoveInstance("Ω2", "over" if pm.slot_of(face) % 2 else "under", (face,), INVERSE)


def _o2_inverse(d: GraphDiagram, m: MoveInstance):
    (y1,) = m.site
    c, c2 = d.node_of(y1), d.node_of(d.mate[y1])
    b = MapBuilder.from_map(d)
    inner = {}
    for n in (c, c2):
        for k in range(4):
            inner[(n, k)] = ((n, (k + 2) % 4), THICK)
    b.splice({c, c2}, inner, "+")
    pm, _ = _freeze(b)
    return pm, None


# Ω3 -------------------------------------------------------------------------------

def _o3_sites(d: GraphDiagram, direction: str) -> list[MoveInstance]:
    out = []
    for face in d.faces():
        if len(face) != 3:
            continue
        nodes = {d.node_of(t) for t in face}
        if len(nodes) != 3 or not all(_is_crossing(d, n) for n in nodes):
            continue
        if any(d.slot_of(t) % 2 == 1 and d.slot_of(d.mate[t]) % 2 == 1 for t in face):
            out.append(MoveInstance("Ω3", "triangle", (min(face),), direction))
    return out


def _o3_apply(d: GraphDiagram, m: MoveInstance):
    (t0,) = m.site
    face = [t0, d.face_next(t0), d.face_next(d.face_next(t0))]
    sigma = {}
    for t in face:
        m_ = d.mate[t]
        e1 = (d.node_of(t), (d.slot_of(t) + 2) % 4)
        e2 = (d.node_of(m_), (d.slot_of(m_) + 2) % 4)
        sigma[e1], sigma[e2] = e2, e1
    nodes = {d.node_of(t) for t in face}
    b = MapBuilder.from_map(d)
    old_mate = dict(b.mate)
    for s in sigma:
        t = old_mate[sigma[s]]
        b.mate[s] = sigma.get(t, t)
        b.mate[b.mate[s]] = s
    for n in nodes:
        for k in range(4):
            b.dirs[(n, k)] = -b.dirs[(n, k)]
    _rotate(b, nodes, 2)
    pm, index = _freeze(b)
    start = _new_dart(pm, index, (d.node_of(t0), (d.slot_of(t0) - 2) % 4))
    orbit = [start, pm.face_next(start), pm.face_next(pm.face_next(start))]
    flip = APPLY if m.direction == INVERSE else INVERSE
    return pm, MoveInstance("Ω3", "triangle", (min(orbit),), flip)


def _rotate(b: MapBuilder, nodes: set, shift: int):
    """Renumber slots of ``nodes`` so that old slot ``k`` becomes ``k - shift``."""
    def f(s):
        return (s[0], (s[1] - shift) % b.nodes[s[0]][2]) if s[0] in nodes else s

    b.mate = {f(s): f(t) for s, t in b.mate.items()}
    b.dirs = {f(s): v for s, v in b.dirs.items()}
    b.ekind = {f(s): v for s, v in b.ekind.items()}


# Ω4 -------------------------------------------------------------------------------

def _o4_apply_site(d: GraphDiagram, v: int, k: int):
    c, j = _mate_slot(d, v, k)
    if not _is_crossing(d, c):
        return None
    ends = [_mate_slot(d, c, j + i) for i in (1, 2, 3)]
    if any(e[0] in (c, v) for e in ends):
        return None
    for i in (1, 2):
        if _mate_slot(d, v, k + i)[0] == c:
            return None
    return c, j


def _o4_inverse_site(d: GraphDiagram, v: int, k: int):
    c1, a = _mate_slot(d, v, k + 1)
    c2, b = _mate_slot(d, v, k + 2)
    if c1 == c2 or not (_is_crossing(d, c1) and _is_crossing(d, c2)):
        return None
    if _mate_slot(d, c1, a + 3) != (c2, (b + 1) % 4) or a % 2 != b % 2:
        return None
    ends = [_mate_slot(d, c1, a + 1), _mate_slot(d, c1, a + 2),
            _mate_slot(d, c2, b + 2), _mate_slot(d, c2, b + 3), _mate_slot(d, v, k)]
    if any(e[0] in (c1, c2, v) for e in ends):
        return None
    return c1, a, c2, b


def _o4_sites(d: GraphDiagram, direction: str) -> list[MoveInstance]:
    out = []
    for v in vertices(d):
        for k in range(3):
            if direction == APPLY:
                hit = _o4_apply_site(d, v, k)
                if hit:
                    out.append(MoveInstance("Ω4", "over" if hit[1] % 2 == 0 else "under", (v, k)))
            else:
                hit = _o4_inverse_site(d, v, k)
                if hit:
                    out.append(MoveInstance("Ω4", "over" if hit[1] % 2 == 0 else "under", (v, k), INVERSE))
    return out


def _o4_apply(d: GraphDiagram, m: MoveInstance):
    v, k = m.site
    c, j = _o4_apply_site(d, v, k)
    m_s, cont, m_n = (_mate_slot(d, c, j + i) for i in (1, 2, 3))
    l1, l2 = _mate_slot(d, v, k + 1), _mate_slot(d, v, k + 2)
    dv1, dv2 = _dir(d, v, k + 1), _dir(d, v, k + 2)
    flow = d.dirs[d.dart_at(*m_s)]      # moving strand at its mS end
    over_first = m.variant == "under"   # positions 0/2 carry the vertex edge
    b = MapBuilder.from_map(d)
    c2p3 = -flow
    c2p1, c1p3 = -c2p3, c2p3
    c1p1 = -c1p3
    c1 = _add_crossing(b, [-dv1, c1p1, dv1, c1p3], over_first)
    c2 = _add_crossing(b, [-dv2, c2p1, dv2, c2p3], over_first)
    b.remove_nodes([c])
    _join(b, (v, k), cont)
    _join(b, c1[0], (v, (k + 1) % 3))
    _join(b, c1[1], m_n)
    _join(b, c1[2], l1)
    _join(b, c1[3], c2[1])
    _join(b, c2[0], (v, (k + 2) % 3))
    _join(b, c2[2], l2)
    _join(b, c2[3], m_s)
    pm, index = _freeze(b)
    return pm, MoveInstance("Ω4", m.variant, (index[v], k), INVERSE)


def _o4_inverse(d: GraphDiagram, m: MoveInstance):
    v, k = m.site
    c1, a, c2, b_ = _o4_inverse_site(d, v, k)
    m_n, l1 = _mate_slot(d, c1, a + 1), _mate_slot(d, c1, a + 2)
    l2, m_s = _mate_slot(d, c2, b_ + 2), _mate_slot(d, c2, b_ + 3)
    cont = _mate_slot(d, v, k)
    dvk = _dir(d, v, k)
    flow = d.dirs[d.dart_at(*m_s)]
    b = MapBuilder.from_map(d)
    c = _add_crossing(b, [-dvk, -flow, dvk, flow], m.variant == "under")
    b.remove_nodes([c1, c2])
    _join(b, (v, k), c[0])
    _join(b, c[1], m_s)
    _join(b, c[2], cont)
    _join(b, c[3], m_n)
    _join(b, (v, (k + 1) % 3), l1)
    _join(b, (v, (k + 2) % 3), l2)
    pm, index = _freeze(b)
    return pm, MoveInstance("Ω4", m.variant, (index[v], k), APPLY)


# Ω5 -------------------------------------------------------------------------------

def _o5_inverse_site(d: GraphDiagram, v: int, k: int):
    c, t = _mate_slot(d, v, k)
    if not _is_crossing(d, c) or _mate_slot(d, v, k + 1) != (c, (t - 1) % 4):
        return None
    ends = [_mate_slot(d, c, t + 1), _mate_slot(d, c, t + 2)]
    if any(e[0] in (c, v) for e in ends):
        return None
    return c, t


def _o5_sites(d: GraphDiagram, direction: str) -> list[MoveInstance]:
    out = []
    for v in vertices(d):
        for k in range(3):
            if direction == APPLY:
                out.extend(MoveInstance("Ω5", var, (v, k)) for var in VARIANTS["Ω5"])
            else:
                hit = _o5_inverse_site(d, v, k)
                if hit:
                    out.append(MoveInstance("Ω5", "over" if hit[1] % 2 else "under", (v, k), INVERSE))
    return out


def _o5_apply(d: GraphDiagram, m: MoveInstance):
    v, k = m.site
    a_end, b_end = _mate_slot(d, v, k), _mate_slot(d, v, k + 1)
    dv = _dir(d, v, k)
    b = MapBuilder.from_map(d)
    # positions A, B, v(k+1), v(k); the strand of v(k) runs 3 -> 1
    c = _add_crossing(b, [dv, dv, -dv, -dv], over_first=m.variant == "under")
    _join(b, c[0], a_end)
    _join(b, c[1], b_end)
    _join(b, c[2], (v, (k + 1) % 3))
    _join(b, c[3], (v, k))
    pm, index = _freeze(b)
    return pm, MoveInstance("Ω5", m.variant, (index[v], k), INVERSE)


def _o5_inverse(d: GraphDiagram, m: MoveInstance):
    v, k = m.site
    c, t = _o5_inverse_site(d, v, k)
    a_end, b_end = _mate_slot(d, c, t + 1), _mate_slot(d, c, t + 2)
    b = MapBuilder.from_map(d)
    b.remove_nodes([c])
    _join(b, (v, k), a_end)
    _join(b, (v, (k + 1) % 3), b_end)
    pm, index = _freeze(b)
    return pm, MoveInstance("Ω5", m.variant, (index[v], k), APPLY)


# dispatch -------------------------------------------------------------------------

_SITES = {"Ω1": _o1_sites, "Ω2": _o2_sites, "Ω3": _o3_sites, "Ω4": _o4_sites, "Ω5": _o5_sites}
_APPLY = {
    ("Ω1", APPLY): _o1_apply, ("Ω1", INVERSE): _o1_inverse,
    ("Ω2", APPLY): _o2_apply, ("Ω2", INVERSE): _o2_inverse,
    ("Ω3", APPLY): _o3_apply, ("Ω3", INVERSE): _o3_apply,
    ("Ω4", APPLY): _o4_apply, ("Ω4", INVERSE): _o4_inverse,
    ("Ω5", APPLY): _o5_apply, ("Ω5", INVERSE): _o5_inverse,
}


def enumerate_move_sites(d: GraphDiagram, kind: str, variant: str | None = None,
                         direction: str = APPLY) -> list[MoveInstance]:
    """All sites of ``kind`` in ``d``, optionally restricted to one variant."""
    kind = normalize_kind(kind)
    if variant is not None and variant not in VARIANTS[kind]:
        raise MoveError(f"{kind} has no variant {variant!r}; choose from {VARIANTS[kind]}")
    sites = _SITES[kind](d, direction)
    return [m for m in sites if variant is None or m.variant == variant]


def apply_move_with_inverse(d: GraphDiagram, m: MoveInstance):
    """Surgered diagram and the move undoing it (``None`` where not tracked)."""
    if m not in enumerate_move_sites(d, m.kind, m.variant, m.direction):
        raise MoveError(f"invalid site for {m.kind} {m.variant} {m.direction}: {m.site}")
    return _APPLY[(m.kind, m.direction)](d, m)


def apply_move(d: GraphDiagram, m: MoveInstance) -> GraphDiagram:
    return apply_move_with_inverse(d, m)[0]


# certification --------------------------------------------------------------------

@dataclass(frozen=True)
class Certified:
    trace: Trace = field(default_factory=Trace)


@dataclass(frozen=True)
class Unknown:
    reason: str = "budget exhausted"
    explored: int = 0


def certify_invariance(d: GraphDiagram, m: MoveInstance | None, rs: RuleSet,
                       max_nodes: int = 100_000, max_depth: int = 64, workers: int = 1):
    """Compare the state sums of ``d`` and of ``d`` after ``m`` in the quotient module.

    ``m=None`` is the identity move and certifies with an empty trace.
    """
    before, _ = state_sum(d, rs, workers)
    if m is None:
        return Certified(Trace())
    after, _ = state_sum(apply_move(d, m), rs, workers)
    result = equivalent(before, after, rs, max_nodes, max_depth)
    if isinstance(result, Equal):
        return Certified(result.trace)
    return Unknown(result.reason, result.explored)


def load_corpus(path: str | Path) -> list[tuple[str, GraphDiagram]]:
    """``(name, diagram)`` for every ``*.kd`` file in a directory, sorted by name."""
    return [(p.stem, load_diagram(p)) for p in sorted(Path(path).glob("*.kd"))]


def _cell(args) -> list[dict]:
    name, d, rs, kind, variant, direction, max_nodes, max_depth, deterministic = args
    rows = []
    sites = enumerate_move_sites(d, kind, variant, direction)
    for i, m in enumerate(sites):
        t0 = time.perf_counter()
        try:
            res = certify_invariance(d, m, rs, max_nodes, max_depth)
            outcome = "Certified" if isinstance(res, Certified) else "Unknown"
            length = len(res.trace) if isinstance(res, Certified) else 0
            detail = None if isinstance(res, Certified) else res.reason
        except RulesetIncomplete as exc:
            outcome, length, detail = "incomplete", 0, str(exc)
        rows.append({
            "diagram": name, "move": kind, "variant": variant, "direction": direction,
            "site": i, "site_data": list(m.site), "outcome": outcome, "trace_length": length,
            "wall_time": None if deterministic else round(time.perf_counter() - t0, 6),
            "detail": detail,
        })
    return rows


def sweep(corpus, rs: RuleSet, moves=KINDS, max_nodes: int = 100_000, max_depth: int = 64,
          workers: int = 1, deterministic: bool = False) -> list[dict]:
    """Certify every site of every move variant on every corpus diagram.

    ``corpus`` is a list of ``(name, diagram)``. Both directions of every
    variant are swept. Rows come out in input order (diagram, move,
    variant, direction, site) whatever the worker count. With
    ``deterministic=True`` wall times are omitted so the report is
    byte-stable.
    """
    jobs = []
    for name, d in corpus:
        for kind in moves:
            kind = normalize_kind(kind)
            for variant in VARIANTS[kind]:
                for direction in (APPLY, INVERSE):
                    jobs.append((name, d, rs, kind, variant, direction, max_nodes, max_depth, deterministic))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_cell, jobs))
    else:
        parts = [_cell(j) for j in jobs]
    return [row for part in parts for row in part]
