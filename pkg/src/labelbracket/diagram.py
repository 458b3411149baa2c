"""Knotted trivalent graph diagrams and their validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .planar import IN, OUT, THICK, UN, PlanarMap, crossing_sign, format_map, parse_map

GraphDiagram = PlanarMap

__all__ = [
    "GraphDiagram", "Violation", "ValidationReport",
    "validate_diagram", "euler_check", "load_diagram", "dump_diagram",
    "crossing_sign", "crossings", "vertices",
]


@dataclass(frozen=True)
class Violation:
    rule: str
    where: str
    message: str

    def __str__(self):
        return f"{self.rule} at {self.where}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()
    warnings: tuple = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok and not self.warnings:
            return "valid"
        lines = [str(v) for v in self.violations]
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines)


def crossings(d: GraphDiagram) -> list[int]:
    return [v for v, k in enumerate(d.kinds) if k == "X"]


def vertices(d: GraphDiagram) -> list[int]:
    return [v for v, k in enumerate(d.kinds) if k in ("V+", "V-")]


def euler_check(g: PlanarMap) -> list[tuple[int, int, int, int]]:
    """Per connected component ``(V, E, F, genus)``."""
    return g.euler()


def check_structure(g: PlanarMap) -> list[Violation]:
    """Dart-level invariants shared by diagrams and trigraphs."""
    out = []
    for d in range(g.num_darts):
        m = g.mate[d]
        if not 0 <= m < g.num_darts or m == d or g.mate[m] != d:
            out.append(Violation("partner involution", f"dart {d}", "partner is not a fixed-point-free involution"))
            continue
        if g.ekinds[d] != g.ekinds[m]:
            out.append(Violation("edge kind", f"dart {d}", "the two darts of an edge disagree on thickness"))
        a, b = g.dirs[d], g.dirs[m]
        if a + b != 0:
            out.append(Violation("edge orientation", f"dart {d}", "an oriented edge needs one outgoing and one incoming dart"))
    for i, (V, E, F, genus) in enumerate(g.euler()):
        if genus != 0:
            out.append(Violation("non-planar embedding", f"component {i}",
                                 f"V - E + F = {V - E + F}, genus {genus}"))
    return out


def validate_diagram(d: GraphDiagram) -> ValidationReport:
    out = check_structure(d)
    if any(v.rule == "partner involution" for v in out):
        return ValidationReport(tuple(out))
    for v, kind in enumerate(d.kinds):
        where = f"node {v} ({kind})"
        darts = list(d.darts_of(v))
        dirs = [d.dirs[x] for x in darts]
        if any(d.ekinds[x] != THICK for x in darts):
            out.append(Violation("edge kind", where, "diagram edges are thick"))
        if UN in dirs:
            out.append(Violation("unoriented edge", where, "every diagram edge must be oriented"))
            continue
        if kind == "X":
            if len(darts) != 4:
                out.append(Violation("arity", where, "a crossing has 4 darts"))
            elif dirs[0] != IN or dirs[2] != OUT or dirs[1] + dirs[3] != 0:
                out.append(Violation("crossing strands", where,
                                     "darts must start at the incoming understrand with both strands passing through"))
        elif kind in ("V+", "V-"):
            if len(darts) != 3:
                out.append(Violation("arity", where, "a trivalent vertex has 3 darts"))
            elif len(set(dirs)) > 1:
                out.append(Violation("mixed orientation at vertex", where,
                                     f"indegree {dirs.count(IN)}; must be 0 (source) or 3 (sink)"))
            elif (kind == "V+") != (dirs[0] == OUT):
                out.append(Violation("vertex polarity", where, "source must be all outgoing, sink all incoming"))
        else:
            out.append(Violation("node kind", where, "diagrams contain only X, V+ and V- nodes"))
    for kind, sign in d.loops:
        if kind != THICK or sign not in "+-":
            out.append(Violation("free loop", f"loop O[{sign}]", "diagram loops are thick and oriented"))
    return ValidationReport(tuple(out))


def load_diagram(path: str | Path) -> GraphDiagram:
    return parse_map(Path(path).read_text())


def dump_diagram(d: GraphDiagram) -> str:
    return format_map(d) + "\n"
