"""Planar maps stored as rotation systems.

Every object in the package (knotted graph diagrams, label trigraphs, rule
fragments) is a :class:`PlanarMap`: typed nodes whose darts are listed
counterclockwise, an involution pairing darts into edges, a direction per
dart and a thickness per edge. Closed node-free components are carried as
a sorted tuple of loop tokens ``(kind, sign)``.

Darts are numbered consecutively node by node, so the counterclockwise
successor of a dart is the next dart of the same node (cyclically).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

OUT, IN, UN = 1, -1, 0
THICK, THIN = "thick", "thin"
DIRECTION_NAMES = {OUT: "outgoing", IN: "incoming", UN: "unoriented"}

__all__ = [
    "OUT", "IN", "UN", "THICK", "THIN",
    "Dart", "PlanarMap", "MapBuilder", "ParseError",
    "parse_map", "format_map", "is_leg", "leg_index",
]


class ParseError(ValueError):
    """Syntax error in the diagram/fragment text format."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {col}" if col is not None else "") + ": "
        super().__init__(where + message)


def is_leg(kind: str) -> bool:
    return kind[:1] == "L" and kind[1:].isdigit()


def leg_index(kind: str) -> int:
    return int(kind[1:])


@dataclass(frozen=True)
class Dart:
    id: int
    node: int
    partner: int
    next_at_node: int
    direction: int
    kind: str


@dataclass(frozen=True, eq=False)
class PlanarMap:
    """Immutable rotation system with decorated darts.

    ``offsets[v]`` is the first dart of node ``v``; node ``v`` owns darts
    ``offsets[v] .. offsets[v+1]-1`` in counterclockwise order.
    """

    kinds: tuple
    labels: tuple
    offsets: tuple
    mate: tuple
    dirs: tuple
    ekinds: tuple
    loops: tuple = ()
    _node_of: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        node_of = []
        for v in range(len(self.kinds)):
            node_of.extend([v] * (self.offsets[v + 1] - self.offsets[v]))
        object.__setattr__(self, "_node_of", tuple(node_of))
        object.__setattr__(self, "loops", tuple(sorted(self.loops)))

    # structure -------------------------------------------------------------

    @property
    def num_nodes(self) -> int:
        return len(self.kinds)

    @property
    def num_darts(self) -> int:
        return len(self.mate)

    @property
    def num_edges(self) -> int:
        return len(self.mate) // 2

    def arity(self, v: int) -> int:
        return self.offsets[v + 1] - self.offsets[v]

    def node_of(self, d: int) -> int:
        return self._node_of[d]

    def slot_of(self, d: int) -> int:
        return d - self.offsets[self._node_of[d]]

    def dart_at(self, v: int, i: int) -> int:
        return self.offsets[v] + i % self.arity(v)

    def darts_of(self, v: int) -> range:
        return range(self.offsets[v], self.offsets[v + 1])

    def next_at_node(self, d: int) -> int:
        v = self._node_of[d]
        start = self.offsets[v]
        return start + (d - start + 1) % (self.offsets[v + 1] - start)

    def prev_at_node(self, d: int) -> int:
        v = self._node_of[d]
        start = self.offsets[v]
        return start + (d - start - 1) % (self.offsets[v + 1] - start)

    def face_next(self, d: int) -> int:
        """Face permutation; the face of an orbit lies to the right of its darts."""
        return self.next_at_node(self.mate[d])

    def dart(self, d: int) -> Dart:
        return Dart(d, self._node_of[d], self.mate[d], self.next_at_node(d), self.dirs[d], self.ekinds[d])

    def darts(self) -> Iterator[Dart]:
        return (self.dart(d) for d in range(self.num_darts))

    def indegree(self, v: int) -> int:
        return sum(1 for d in self.darts_of(v) if self.dirs[d] == IN)

    def faces(self) -> list[list[int]]:
        seen = [False] * self.num_darts
        out = []
        for d in range(self.num_darts):
            if seen[d]:
                continue
            orbit = []
            x = d
            while not seen[x]:
                seen[x] = True
                orbit.append(x)
                x = self.face_next(x)
            out.append(orbit)
        return out

    def face_index(self) -> list[int]:
        idx = [0] * self.num_darts
        for i, orbit in enumerate(self.faces()):
            for d in orbit:
                idx[d] = i
        return idx

    def components(self) -> list[list[int]]:
        """Node sets of connected components (free loops excluded)."""
        seen = [False] * self.num_nodes
        comps = []
        for v in range(self.num_nodes):
            if seen[v]:
                continue
            stack, comp = [v], []
            seen[v] = True
            while stack:
                u = stack.pop()
                comp.append(u)
                for d in self.darts_of(u):
                    w = self._node_of[self.mate[d]]
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def euler(self) -> list[tuple[int, int, int, int]]:
        """Per component ``(V, E, F, genus)``; each free loop counts as (0, 0, 2, 0)."""
        face_of = self.face_index()
        out = []
        for comp in self.components():
            darts = [d for v in comp for d in self.darts_of(v)]
            V, E = len(comp), len(darts) // 2
            F = len({face_of[d] for d in darts})
            chi = V - E + F
            out.append((V, E, F, (2 - chi) // 2 if chi % 2 == 0 else (2 - chi) / 2))
        out.extend((0, 0, 2, 0) for _ in self.loops)
        return out

    def node_count(self, prefix: str) -> int:
        return sum(1 for k in self.kinds if k.startswith(prefix))

    def builder(self) -> MapBuilder:
        return MapBuilder.from_map(self)

    def __eq__(self, other):
        if not isinstance(other, PlanarMap):
            return NotImplemented
        return (self.kinds, self.labels, self.offsets, self.mate, self.dirs, self.ekinds, self.loops) == (
            other.kinds, other.labels, other.offsets, other.mate, other.dirs, other.ekinds, other.loops)

    def __hash__(self):
        return hash((self.kinds, self.mate, self.dirs, self.loops))

    def __str__(self):
        return format_map(self)

    @classmethod
    def empty(cls) -> PlanarMap:
        return cls((), (), (0,), (), (), (), ())

    def disjoint_union(self, other: PlanarMap) -> PlanarMap:
        shift = self.num_darts
        return PlanarMap(
            self.kinds + other.kinds,
            self.labels + other.labels,
            self.offsets + tuple(o + shift for o in other.offsets[1:]),
            self.mate + tuple(m + shift for m in other.mate),
            self.dirs + other.dirs,
            self.ekinds + other.ekinds,
            self.loops + other.loops,
        )

    def relabel(self, order: list[int], starts: list[int] | None = None) -> PlanarMap:
        """Renumber nodes (``order[i]`` becomes node ``i``), rotating node ``i`` to start at ``starts[i]``."""
        if starts is None:
            starts = [0] * len(order)
        new_dart = {}
        offsets = [0]
        for i, (v, s) in enumerate(zip(order, starts)):
            a = self.arity(v)
            for j in range(a):
                new_dart[self.dart_at(v, s + j)] = offsets[-1] + j
            offsets.append(offsets[-1] + a)
        n = len(new_dart)
        mate, dirs, ekinds = [0] * n, [0] * n, [""] * n
        for d, nd in new_dart.items():
            mate[nd] = new_dart[self.mate[d]]
            dirs[nd] = self.dirs[d]
            ekinds[nd] = self.ekinds[d]
        return PlanarMap(
            tuple(self.kinds[v] for v in order),
            tuple(self.labels[v] for v in order),
            tuple(offsets), tuple(mate), tuple(dirs), tuple(ekinds), self.loops,
        )


class MapBuilder:
    """Mutable editing surface for surgery on planar maps.

    Slots are ``(node_id, index)`` pairs. Node ids are stable while editing
    and are compacted by :meth:`freeze`.
    """

    def __init__(self):
        self.nodes: dict[int, list] = {}   # id -> [kind, label, arity]
        self.mate: dict[tuple, tuple] = {}
        self.dirs: dict[tuple, int] = {}
        self.ekind: dict[tuple, str] = {}
        self.loops: list[tuple] = []
        self._next_id = 0

    @classmethod
    def from_map(cls, pm: PlanarMap) -> MapBuilder:
        b = cls()
        for v in range(pm.num_nodes):
            b.nodes[v] = [pm.kinds[v], pm.labels[v], pm.arity(v)]
        for d in range(pm.num_darts):
            s = (pm.node_of(d), pm.slot_of(d))
            m = pm.mate[d]
            b.mate[s] = (pm.node_of(m), pm.slot_of(m))
            b.dirs[s] = pm.dirs[d]
            b.ekind[s] = pm.ekinds[d]
        b.loops = list(pm.loops)
        b._next_id = pm.num_nodes
        return b

    def add_node(self, kind: str, arity: int, label: str | None = None) -> int:
        nid = self._next_id
        self._next_id += 1
        self.nodes[nid] = [kind, label, arity]
        return nid

    def slots(self, nid: int) -> list[tuple]:
        return [(nid, i) for i in range(self.nodes[nid][2])]

    def link(self, s: tuple, t: tuple, kind: str = THICK, ds: int | None = None, dt: int | None = None):
        self.mate[s] = t
        self.mate[t] = s
        self.ekind[s] = self.ekind[t] = kind
        if ds is not None:
            self.dirs[s] = ds
        if dt is not None:
            self.dirs[t] = dt

    def remove_nodes(self, nids: Iterable[int]):
        for nid in nids:
            arity = self.nodes.pop(nid)[2]
            for i in range(arity):
                s = (nid, i)
                self.mate.pop(s, None)
                self.dirs.pop(s, None)
                self.ekind.pop(s, None)

    def splice(self, removed: Iterable[int], inner: dict[tuple, tuple],
               loop_sign: str = "+") -> None:
        """Delete ``removed`` nodes and reconnect the strands passing through them.

        ``inner[s] = (t, kind)`` says that the strand reaching removed slot
        ``s`` continues inside the deleted region to ``t``: another removed
        slot (a pass-through) or a slot of a live node. Removed slots absent
        from ``inner`` are internal to the region and simply disappear.
        Chains are followed until live slots are reached on both ends;
        chains that close up become free loops.
        """
        removed = set(removed)
        inner = dict(inner)
        for s, (t, kind) in list(inner.items()):
            if t[0] in removed:
                inner.setdefault(t, (s, kind))
        adj: dict[tuple, list] = {}
        edges: list = []

        def dead(s):
            return s[0] in removed

        def add(a, b, kind):
            eid = len(edges)
            edges.append(kind)
            adj.setdefault(a, []).append((b, eid))
            adj.setdefault(b, []).append((a, eid))

        for s, t in self.mate.items():
            if s < t and (dead(s) or dead(t)) and (s in inner or not dead(s)) \
                    and (t in inner or not dead(t)):
                add(s, t, self.ekind[s])
        seen_inner = set()
        for s, (t, kind) in inner.items():
            if frozenset((s, t)) not in seen_inner:
                seen_inner.add(frozenset((s, t)))
                add(s, t, kind)
        used = set()

        def walk(start):
            kinds, cur, oriented = set(), start, False
            while True:
                if self.dirs.get(cur, UN) != UN:
                    oriented = True
                nbrs = [(n, e) for n, e in adj[cur] if e not in used]
                if not nbrs:
                    return cur, kinds, oriented, False
                nxt, e = nbrs[0]
                used.add(e)
                k = edges[e]
                if k:
                    kinds.add(k)
                cur = nxt
                if not dead(cur) or cur == start:
                    return cur, kinds, oriented, True

        new_edges, new_loops = [], []
        for start in sorted(s for s in adj if not dead(s)):
            if all(e in used for _, e in adj[start]):
                continue
            end, kinds, _, ok = walk(start)
            if not ok or dead(end):
                raise GlueError(f"dangling strand from slot {start}")
            if len(kinds) > 1:
                raise GlueError(f"edge kinds {sorted(kinds)} meet along one strand")
            new_edges.append((start, end, kinds.pop() if kinds else THICK))
        for start in sorted(s for s in adj if dead(s)):
            if all(e in used for _, e in adj[start]):
                continue
            end, kinds, oriented, ok = walk(start)
            if not ok or end != start:
                raise GlueError(f"dangling strand through removed slot {start}")
            if len(kinds) > 1:
                raise GlueError("edge kinds disagree along a closed strand")
            new_loops.append((kinds.pop() if kinds else THICK, loop_sign if oriented else "0"))
        self.remove_nodes(removed)
        for s, t, kind in new_edges:
            self.mate[s] = t
            self.mate[t] = s
            self.ekind[s] = self.ekind[t] = kind
        self.loops.extend(new_loops)
        for s, t, _ in new_edges:
            a, b = self.dirs.get(s, UN), self.dirs.get(t, UN)
            if a + b != 0:
                raise GlueError(f"orientation clash joining slots {s} and {t}")

    def freeze(self) -> tuple[PlanarMap, dict[int, int]]:
        order = sorted(self.nodes)
        index = {nid: i for i, nid in enumerate(order)}
        offsets = [0]
        for nid in order:
            offsets.append(offsets[-1] + self.nodes[nid][2])
        n = offsets[-1]
        mate, dirs, ekinds = [0] * n, [UN] * n, [THICK] * n

        def dart(s):
            return offsets[index[s[0]]] + s[1]

        for nid in order:
            for i in range(self.nodes[nid][2]):
                s = (nid, i)
                if s not in self.mate:
                    raise GlueError(f"slot {s} left unconnected")
                mate[dart(s)] = dart(self.mate[s])
                dirs[dart(s)] = self.dirs.get(s, UN)
                ekinds[dart(s)] = self.ekind.get(s, THICK)
        pm = PlanarMap(
            tuple(self.nodes[nid][0] for nid in order),
            tuple(self.nodes[nid][1] for nid in order),
            tuple(offsets), tuple(mate), tuple(dirs), tuple(ekinds), tuple(self.loops),
        )
        return pm, index


class GlueError(ValueError):
    """Surgery produced an inconsistent map (kind or orientation clash)."""


# text format ---------------------------------------------------------------

_NODE = re.compile(r"(?P<neg>~)?(?P<kind>[A-Za-z][\w.]*[+-]?)(?:@(?P<label>\$?[\w.]+))?\[(?P<body>[^\]]*)\]")
_SLOT = re.compile(r"^(?P<thin>~)?(?P<arc>\d+)(?P<dir>[<>])?$")
_LOOP = re.compile(r"^(?P<thin>~)?(?P<sign>[+\-0])$")

DIAGRAM_KINDS = ("X", "X+", "X-", "V+", "V-")


def _tokens(text: str, line_offset: int = 0) -> Iterator[tuple[re.Match, int, int]]:
    for ln, raw in enumerate(text.splitlines(), start=1 + line_offset):
        line = raw.split("#", 1)[0]
        pos = 0
        for m in _NODE.finditer(line):
            gap = line[pos:m.start()]
            if gap.strip():
                raise ParseError(f"unexpected text {gap.strip()!r}", ln, pos + 1)
            pos = m.end()
            yield m, ln, m.start() + 1
        if line[pos:].strip():
            raise ParseError(f"unexpected text {line[pos:].strip()!r}", ln, pos + 1)


def parse_map(text: str, line_offset: int = 0) -> PlanarMap:
    """Parse the line-oriented node format.

    ``X[a,b,c,d]`` crossing listed counterclockwise from the incoming
    understrand (``X+``/``X-`` fix the sign, otherwise the overstrand
    direction is propagated from neighbours); ``V+[..]``/``V-[..]``
    source/sink vertices; ``O[+]``/``O[-]``/``O[0]`` free loops; any other
    ``KIND[..]`` is a generic node whose slots may carry ``>``/``<``
    (outgoing/incoming) and ``~`` (thin edge). ``KIND@tok[..]`` attaches a
    label token. ``L<i>[a]`` is boundary leg ``i`` of a fragment.
    """
    kinds, labels, slots_by_node, loops = [], [], [], []
    where = []
    for m, ln, col in _tokens(text, line_offset):
        kind, body = m.group("kind"), m.group("body").strip()
        if kind == "O":
            lm = _LOOP.match(body.replace(" ", ""))
            if not lm or m.group("label"):
                raise ParseError(f"bad free loop {m.group(0)!r}", ln, col)
            loops.append((THIN if lm.group("thin") else THICK, lm.group("sign")))
            continue
        if m.group("neg"):
            raise ParseError(f"'~' is only allowed on slots: {m.group(0)!r}", ln, col)
        parts = [p.strip() for p in body.split(",")] if body else []
        slots = []
        for p in parts:
            sm = _SLOT.match(p)
            if not sm:
                raise ParseError(f"bad slot {p!r} in {m.group(0)!r}", ln, col)
            arc = int(sm.group("arc"))
            if arc <= 0:
                raise ParseError(f"arc labels must be positive: {p!r}", ln, col)
            d = {">": OUT, "<": IN, None: None}[sm.group("dir")]
            slots.append((arc, d, bool(sm.group("thin"))))
        if kind in ("X", "X+", "X-") and len(slots) != 4:
            raise ParseError(f"crossing needs 4 arcs: {m.group(0)!r}", ln, col)
        if kind in ("V+", "V-") and len(slots) != 3:
            raise ParseError(f"trivalent vertex needs 3 arcs: {m.group(0)!r}", ln, col)
        if is_leg(kind) and len(slots) != 1:
            raise ParseError(f"leg needs exactly 1 arc: {m.group(0)!r}", ln, col)
        if not slots:
            raise ParseError(f"node without arcs: {m.group(0)!r}", ln, col)
        kinds.append(kind)
        labels.append(m.group("label"))
        slots_by_node.append(slots)
        where.append((ln, col))

    # pair arcs
    occurrences: dict[int, list] = {}
    for v, slots in enumerate(slots_by_node):
        for i, (arc, _, _) in enumerate(slots):
            occurrences.setdefault(arc, []).append((v, i))
    for arc, occ in occurrences.items():
        if len(occ) != 2:
            ln, col = where[occ[0][0]]
            raise ParseError(f"arc {arc} appears {len(occ)} time(s), expected 2", ln, col)

    # directions: explicit marks, then node-kind rules, then propagation
    dirs: dict[tuple, int | None] = {}
    for v, slots in enumerate(slots_by_node):
        k = kinds[v]
        for i, (_, d, _) in enumerate(slots):
            implied = None
            if k == "V+":
                implied = OUT
            elif k == "V-":
                implied = IN
            elif k in ("X", "X+", "X-"):
                implied = {0: IN, 2: OUT}.get(i)
                if k == "X+" and i in (1, 3):
                    implied = OUT if i == 1 else IN
                if k == "X-" and i in (1, 3):
                    implied = IN if i == 1 else OUT
            if k in ("V+", "V-") and d is not None:
                implied = d  # explicit marks win so bad vertices reach validation
            if d is not None and implied is not None and d != implied:
                ln, col = where[v]
                raise ParseError(f"direction mark contradicts node type at {k}", ln, col)
            dirs[(v, i)] = d if d is not None else implied

    def other(s):
        arc = slots_by_node[s[0]][s[1]][0]
        a, b = occurrences[arc]
        return b if a == s else a

    def settle():
        changed = True
        while changed:
            changed = False
            for s, d in list(dirs.items()):
                if d is None:
                    continue
                t = other(s)
                if dirs[t] is None:
                    dirs[t] = -d
                    changed = True
                elif dirs[t] != -d:
                    ln, col = where[s[0]]
                    raise ParseError("inconsistent orientation along an arc", ln, col)
                v, i = s
                if kinds[v] == "X" and i in (1, 3):
                    j = 4 - i
                    if dirs[(v, j)] is None:
                        dirs[(v, j)] = -d
                        changed = True

    settle()
    # over-strands left undetermined: consecutive-label convention (a -> a+1)
    for v, slots in enumerate(slots_by_node):
        if kinds[v] == "X" and dirs[(v, 1)] is None:
            b, d = slots[1][0], slots[3][0]
            if d == b + 1 or (b > d + 1 and d == 1):
                dirs[(v, 1)], dirs[(v, 3)] = IN, OUT
            elif b == d + 1 or (d > b + 1 and b == 1):
                dirs[(v, 1)], dirs[(v, 3)] = OUT, IN
            else:
                ln, col = where[v]
                raise ParseError("cannot infer overstrand direction; write X+ or X-", ln, col)
            settle()
    for s, d in dirs.items():
        if d is None:
            dirs[s] = UN

    offsets = [0]
    for slots in slots_by_node:
        offsets.append(offsets[-1] + len(slots))
    n = offsets[-1]
    mate, dvec, evec = [0] * n, [UN] * n, [THICK] * n
    for v, slots in enumerate(slots_by_node):
        for i, (arc, _, thin) in enumerate(slots):
            t = other((v, i))
            d = offsets[v] + i
            mate[d] = offsets[t[0]] + t[1]
            dvec[d] = dirs[(v, i)]
            if thin or slots_by_node[t[0]][t[1]][2]:
                evec[d] = THIN
    kinds = ["X" if k in ("X+", "X-") else k for k in kinds]
    return PlanarMap(tuple(kinds), tuple(labels), tuple(offsets), tuple(mate), tuple(dvec), tuple(evec), tuple(loops))


def crossing_sign(pm: PlanarMap, v: int) -> int:
    """+1 when the overstrand enters at slot 3 (right-handed), -1 otherwise."""
    return 1 if pm.dirs[pm.dart_at(v, 3)] == IN else -1


def format_map(pm: PlanarMap, one_per_line: bool = True) -> str:
    arc_of: dict[int, int] = {}
    counter = itertools.count(1)
    for d in range(pm.num_darts):
        if d not in arc_of:
            arc_of[d] = arc_of[pm.mate[d]] = next(counter)
    items = []
    for v in range(pm.num_nodes):
        kind = pm.kinds[v]
        implied = kind in DIAGRAM_KINDS
        if kind in ("V+", "V-"):
            want = OUT if kind == "V+" else IN
            implied = all(pm.dirs[d] == want for d in pm.darts_of(v))
        if kind == "X":
            kind = "X+" if crossing_sign(pm, v) > 0 else "X-"
        parts = []
        for d in pm.darts_of(v):
            tok = ("~" if pm.ekinds[d] == THIN else "") + str(arc_of[d])
            if not implied:
                tok += {OUT: ">", IN: "<", UN: ""}[pm.dirs[d]]
            parts.append(tok)
        label = f"@{pm.labels[v]}" if pm.labels[v] else ""
        items.append(f"{kind}{label}[{','.join(parts)}]")
    for kind, sign in pm.loops:
        items.append(f"O[{'~' if kind == THIN else ''}{sign}]")
    return ("\n" if one_per_line else " ").join(items)
