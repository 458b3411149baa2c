"""Label trigraphs: validation against the vertex taxonomy and canonical keys."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .diagram import ValidationReport, Violation, check_structure
from .planar import IN, OUT, THICK, THIN, UN, PlanarMap, is_leg

LabelTrigraph = PlanarMap
CanonicalKey = str

__all__ = [
    "LabelTrigraph", "CanonicalKey", "VertexSignature", "validate_trigraph",
    "canonical_form", "canonical_representative", "canonical_layout", "mirror",
    "UNMARKED", "MARKED", "SOURCE_TYPES", "SINK_TYPES",
]

UNMARKED = {"V.9", "V.10"}
MARKED = {f"V.{i}" for i in range(1, 9)}
SOURCE_TYPES = {"V.5", "V.6", "V.10"}
SINK_TYPES = {"V.7", "V.8", "V.9"}

ANY = None


@dataclass(frozen=True)
class VertexSignature:
    """One legal decoration of a vertex type, slot by slot counterclockwise.

    ``dirs`` entries are OUT/IN/UN or ``None`` for "any". Matching is up to
    cyclic rotation of the slots.
    """

    kind: str
    edge_kinds: tuple
    dirs: tuple

    def matches(self, ekinds: Sequence[str], dirs: Sequence[int]) -> bool:
        n = len(self.edge_kinds)
        if len(ekinds) != n:
            return False
        for r in range(n):
            if all(self.edge_kinds[(i + r) % n] == ekinds[i]
                   and (self.dirs[(i + r) % n] is ANY or self.dirs[(i + r) % n] == dirs[i])
                   for i in range(n)):
                return True
        return False


def validate_trigraph(g: LabelTrigraph,
                      signatures: Mapping[str, Sequence[VertexSignature]] | None = None,
                      require_orientation: bool = True) -> ValidationReport:
    """Check the structural trigraph rules, and the signature table when given.

    Unoriented thin edges are accepted only when a signature of an incident
    vertex explicitly allows them; otherwise they produce a warning, since
    the exemption rule is carried by the table and not hard-coded.
    ``require_orientation=False`` is for rulesets that forget orientation.
    """
    out = check_structure(g)
    warnings = []
    for v, kind in enumerate(g.kinds):
        if is_leg(kind):
            continue
        where = f"node {v} ({kind})"
        darts = list(g.darts_of(v))
        ek = [g.ekinds[d] for d in darts]
        dirs = [g.dirs[d] for d in darts]
        if kind in UNMARKED and ek != [THICK] * 3:
            out.append(Violation("unmarked vertex", where, "needs three thick edges"))
        if kind in MARKED and (len(ek) != 3 or ek.count(THIN) != 1):
            out.append(Violation("marked vertex", where, "needs one thin and two thick edges"))
        if kind in SOURCE_TYPES and dirs.count(IN):
            out.append(Violation("indegree", where, "indegree must be 0"))
        # exempt unoriented thin edges count toward neither in- nor outdegree
        if kind in SINK_TYPES and dirs.count(OUT):
            out.append(Violation("indegree", where, "indegree must be 3"))
        for d in darts:
            if require_orientation and g.dirs[d] == UN and g.ekinds[d] == THICK:
                out.append(Violation("unoriented thick edge", where, f"dart {d} is thick but unoriented"))
        if signatures is not None:
            sigs = signatures.get(kind)
            if not sigs:
                out.append(Violation("unknown vertex type", where, "not in the signature table"))
            elif not any(s.matches(ek, dirs) for s in sigs):
                out.append(Violation("vertex signature", where,
                                     f"decoration {list(zip(ek, dirs))} matches no signature"))
        if require_orientation and any(g.ekinds[d] == THIN and g.dirs[d] == UN for d in darts):
            covered = signatures is not None and any(
                s.matches(ek, dirs) and any(e == THIN and sd is not ANY and sd == UN
                                            for e, sd in zip(s.edge_kinds, s.dirs))
                for s in signatures.get(kind, ()))
            if not covered:
                warnings.append(f"{where}: unoriented thin edge not covered by a signature")
    return ValidationReport(tuple(out), tuple(warnings))


# canonical form -------------------------------------------------------------

def mirror(g: PlanarMap) -> PlanarMap:
    """Reverse every rotation (reflection of the plane)."""
    return _mirror_nodes(g, set(range(g.num_nodes)))


def _traverse(g: PlanarMap, start: int):
    """Deterministic breadth-first code of the component containing ``start``."""
    first = g.node_of(start)
    order = [first]
    number = {first: 0}
    entry = {first: g.slot_of(start)}
    code = []
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        a = g.arity(u)
        code.append((g.kinds[u], g.labels[u] or "", a))
        for j in range(a):
            x = g.dart_at(u, entry[u] + j)
            m = g.mate[x]
            w = g.node_of(m)
            if w not in entry:
                entry[w] = g.slot_of(m)
                number[w] = len(order)
                order.append(w)
            rel = (g.slot_of(m) - entry[w]) % g.arity(w)
            code.append((number[w], rel, g.dirs[x], g.ekinds[x]))
    return tuple(code), order, [entry[v] for v in order]


def _encode(code) -> str:
    parts = []
    for item in code:
        if isinstance(item[0], str):
            parts.append(f"/{item[0]}{'@' + item[1] if item[1] else ''}:{item[2]}")
        else:
            w, rel, d, ek = item
            parts.append(f"{w}.{rel}{'+-0'[[OUT, IN, UN].index(d)]}{'t' if ek == THIN else ''}")
    return ",".join(parts)


def _component_codes(g: PlanarMap, reflect: bool):
    variants = [(g, False)]
    if reflect:
        variants.append((mirror(g), True))
    result = []
    for comp in g.components():
        best = None
        for h, mirrored in variants:
            for v in comp:
                for d in h.darts_of(v):
                    code, order, starts = _traverse(h, d)
                    if best is None or code < best[0]:
                        best = (code, order, starts, mirrored)
        result.append((_encode(best[0]), best))
    return result


def _loop_code(loop) -> str:
    kind, sign = loop
    return f"O{sign}{'t' if kind == THIN else ''}"


def canonical_form(g: LabelTrigraph, reflect: bool = False, validate: bool = True) -> CanonicalKey:
    """Key identifying ``g`` up to orientation-preserving isomorphism of decorated maps.

    With ``reflect=True`` mirror images share a key.
    """
    return canonical_representative(g, reflect, validate)[0]


def canonical_representative(g: LabelTrigraph, reflect: bool = False, validate: bool = True):
    """Return ``(key, representative, order)``.

    ``representative`` is ``g`` renumbered into canonical node order with each
    rotation starting at its canonical entry dart; ``order[i]`` is the node
    of ``g`` that became node ``i``.
    """
    if validate:
        report = check_structure(g)
        if report:
            raise ValueError(f"cannot canonicalize invalid map: {report[0]}")
    comps = sorted(_component_codes(g, reflect), key=lambda c: c[0])
    keys = [c[0] for c in comps] + sorted(_loop_code(lp) for lp in g.loops)
    order, starts, mirrored_nodes = [], [], set()
    for _, (_, o, st, mirrored) in comps:
        order.extend(o)
        starts.extend(st)
        if mirrored:
            mirrored_nodes.update(o)
    src = _mirror_nodes(g, mirrored_nodes) if mirrored_nodes else g
    return "|".join(keys), src.relabel(order, starts), order


def canonical_layout(g: LabelTrigraph, reflect: bool = False):
    """Like :func:`canonical_representative` but also returns rotation starts
    and the set of nodes whose rotation was mirrored."""
    comps = sorted(_component_codes(g, reflect), key=lambda c: c[0])
    order, starts, mirrored_nodes = [], [], set()
    for _, (_, o, st, mirrored) in comps:
        order.extend(o)
        starts.extend(st)
        if mirrored:
            mirrored_nodes.update(o)
    return order, starts, mirrored_nodes


def _mirror_nodes(g: PlanarMap, nodes: set) -> PlanarMap:
    new_dart = {}
    for v in range(g.num_nodes):
        for j in range(g.arity(v)):
            src = g.dart_at(v, -j) if v in nodes else g.dart_at(v, j)
            new_dart[src] = g.offsets[v] + j
    n = g.num_darts
    mate, dirs, ek = [0] * n, [0] * n, [""] * n
    for d, nd in new_dart.items():
        mate[nd] = new_dart[g.mate[d]]
        dirs[nd] = g.dirs[d]
        ek[nd] = g.ekinds[d]
    return PlanarMap(g.kinds, g.labels, g.offsets, tuple(mate), tuple(dirs), tuple(ek), g.loops)
