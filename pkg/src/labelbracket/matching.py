"""Locating fragment occurrences in trigraphs and gluing fragments in their place."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .planar import GlueError, MapBuilder, PlanarMap, is_leg
from .rules import Fragment

__all__ = ["Match", "match_sites", "glue", "replace_regions", "GlueError"]


@dataclass(frozen=True)
class Match:
    """An embedding of a fragment's interior into a host map.

    ``nodes[i]`` and ``offsets[i]`` say that interior node ``interior[i]`` of
    the fragment sits on host node ``nodes[i]`` with its slot ``k`` on host
    slot ``k + offsets[i]``. ``loops`` are indices into the host's sorted
    loop tuple; ``bindings`` resolves label variables. For a bare-arc
    fragment ``arc`` is the host dart on the side of leg 0.
    """

    interior: tuple
    nodes: tuple
    offsets: tuple
    loops: tuple = ()
    bindings: tuple = ()
    arc: int | None = None

    def host_slot(self, frag: Fragment, host: PlanarMap, node: int, slot: int) -> tuple[int, int]:
        i = self.interior.index(node)
        h = self.nodes[i]
        return h, (slot + self.offsets[i]) % host.arity(h)

    def leg_slots(self, frag: Fragment, host: PlanarMap) -> list[tuple[int, int]]:
        out = []
        fm = frag.map
        for i in range(frag.num_legs):
            m = fm.mate[frag.leg_dart(i)]
            out.append(self.host_slot(frag, host, fm.node_of(m), fm.slot_of(m)))
        return out


def _label_ok(flabel, hlabel, bindings: dict) -> bool:
    if flabel is None:
        return hlabel is None
    if flabel.startswith("$"):
        if hlabel is None:
            return False
        if flabel in bindings:
            return bindings[flabel] == hlabel
        bindings[flabel] = hlabel
        return True
    return flabel == hlabel


def _match_component(host: PlanarMap, fm: PlanarMap, comp: list[int], used: set, bindings: dict):
    """Yield ``(assignment, bindings)`` for one connected interior component."""
    anchor = comp[0]
    a = fm.arity(anchor)
    for h in range(host.num_nodes):
        if h in used or host.kinds[h] != fm.kinds[anchor] or host.arity(h) != a:
            continue
        for r in range(a):
            binds = dict(bindings)
            if not _label_ok(fm.labels[anchor], host.labels[h], binds):
                continue
            assign = {anchor: (h, r)}
            taken = {h}
            queue = [anchor]
            ok = True
            while queue and ok:
                n = queue.pop(0)
                hn, rn = assign[n]
                for k in range(fm.arity(n)):
                    fd = fm.dart_at(n, k)
                    hd = host.dart_at(hn, k + rn)
                    if fm.ekinds[fd] != host.ekinds[hd] or fm.dirs[fd] != host.dirs[hd]:
                        ok = False
                        break
                    fmate = fm.mate[fd]
                    n2 = fm.node_of(fmate)
                    if is_leg(fm.kinds[n2]):
                        continue
                    hmate = host.mate[hd]
                    h2 = host.node_of(hmate)
                    if fm.arity(n2) != host.arity(h2):
                        ok = False
                        break
                    r2 = (host.slot_of(hmate) - fm.slot_of(fmate)) % host.arity(h2)
                    if n2 in assign:
                        if assign[n2] != (h2, r2):
                            ok = False
                        continue
                    if h2 in taken or h2 in used or host.kinds[h2] != fm.kinds[n2] \
                            or not _label_ok(fm.labels[n2], host.labels[h2], binds):
                        ok = False
                        break
                    assign[n2] = (h2, r2)
                    taken.add(h2)
                    queue.append(n2)
            if ok:
                yield assign, binds


def match_sites(g: PlanarMap, f: Fragment) -> list[Match]:
    """All embeddings of ``f`` in ``g``, in deterministic order.

    Interior nodes must agree on kind, label, edge thickness, dart
    orientation and rotation. Fragments that are not anchored-matchable
    (leg-to-leg arcs, several boundary components) have no sites.
    """
    if f.todo or not f.matchable:
        return []
    fm = f.map
    if f.through_arcs():
        return _match_arc(g, f)
    inner = set(f.interior)
    comps = [[v for v in c if v in inner] for c in fm.components()]
    comps = [c for c in comps if c]
    # boundary-touching component first so leg order drives the enumeration
    comps.sort(key=lambda c: (not any(is_leg(fm.kinds[fm.node_of(fm.mate[d])])
                                      for v in c for d in fm.darts_of(v)), c[0]))
    results = []

    def extend(ci: int, assign: dict, used: set, binds: dict):
        if ci == len(comps):
            results.append((dict(assign), dict(binds)))
            return
        for part, b2 in _match_component(g, fm, comps[ci], used, binds):
            assign.update(part)
            extend(ci + 1, assign, used | {h for h, _ in part.values()}, b2)
            for n in part:
                del assign[n]

    extend(0, {}, set(), {})

    # free loops: choose distinct host loops of each required token
    loop_choices = _loop_choices(g, fm)

    interior = tuple(sorted(inner))
    out = []
    for assign, binds in results:
        for lc in loop_choices:
            out.append(Match(interior,
                             tuple(assign[n][0] for n in interior),
                             tuple(assign[n][1] for n in interior),
                             lc, tuple(sorted(binds.items()))))
    return out


def _loop_choices(g: PlanarMap, fm: PlanarMap) -> list[tuple]:
    need = Counter(fm.loops)
    pools = []
    for token, count in sorted(need.items()):
        idx = [i for i, lp in enumerate(g.loops) if lp == token]
        pools.append(list(itertools.combinations(idx, count)))
    return [tuple(sorted(itertools.chain.from_iterable(c))) for c in itertools.product(*pools)]


def _match_arc(g: PlanarMap, f: Fragment) -> list[Match]:
    fm = f.map
    d0 = f.leg_dart(0)
    out = []
    for x in range(g.num_darts):
        # x is the host end outside leg 0; the edge must enter the fragment there as the leg does
        if g.ekinds[x] == fm.ekinds[d0] and g.dirs[x] == fm.dirs[d0]:
            out.extend(Match((), (), (), lc, (), x) for lc in _loop_choices(g, fm))
    return out


def glue(host: PlanarMap, site: Match, old: Fragment, new: Fragment, loop_sign: str = "+"):
    """Replace the occurrence of ``old`` at ``site`` by ``new``.

    Returns ``(map, new_nodes)`` where ``new_nodes[i]`` is the node id in
    the result of the ``i``-th interior node of ``new`` (before any
    canonical renumbering).
    """
    if old.interface != new.interface:
        raise GlueError("fragments do not share a boundary interface")
    if site.arc is not None:
        legs = [("cut", 0, 0), ("cut", 0, 1)]
        cuts = [site.arc]
    else:
        legs, cuts = site.leg_slots(old, host), []
    pm, placed = replace_regions(host, set(site.nodes), [(legs, new)],
                                 site.loops, dict(site.bindings), loop_sign, cuts)
    return pm, placed[0]


def replace_regions(host: PlanarMap, removed: set, placements: list, drop_loops=(),
                    bindings: dict | None = None, loop_sign: str = "+", cuts=()):
    """Delete ``removed`` nodes and glue each ``(legs, fragment)`` placement.

    ``legs[i]`` is the host slot (on a removed node) that fragment leg ``i``
    attaches to, or ``("cut", k, end)`` for end 0/1 of the ``k``-th cut
    edge: ``cuts[k]`` is the host dart at end 0, and the edge is removed.
    Returns the new map and, per placement, the result node ids of the
    fragment's interior nodes.
    """
    bindings = bindings or {}
    b = MapBuilder.from_map(host)
    removed = set(removed)
    cut_nodes = []
    for x in cuts:
        t = b.add_node("_cut", 2)
        for end, d in enumerate((x, host.mate[x])):
            s = (host.node_of(d), host.slot_of(d))
            b.link(s, (t, end), host.ekinds[d], host.dirs[d], -host.dirs[d])
        cut_nodes.append(t)
        removed.add(t)

    def slot(leg):
        return (cut_nodes[leg[1]], leg[2]) if leg[0] == "cut" else leg

    inner = {}
    fresh_per = []
    extra_loops = []
    for legs, new in placements:
        nm = new.map
        if len(legs) != new.num_legs:
            raise GlueError(f"fragment has {new.num_legs} legs, site has {len(legs)}")
        fresh = {}
        for v in new.interior:
            label = nm.labels[v]
            if label and label.startswith("$"):
                if label not in bindings:
                    raise GlueError(f"unbound label variable {label}")
                label = bindings[label]
            fresh[v] = b.add_node(nm.kinds[v], nm.arity(v), label)
        for v in new.interior:
            for k in range(nm.arity(v)):
                d = nm.dart_at(v, k)
                s = (fresh[v], k)
                b.dirs[s] = nm.dirs[d]
                b.ekind[s] = nm.ekinds[d]
                m = nm.mate[d]
                w = nm.node_of(m)
                if is_leg(nm.kinds[w]):
                    inner[slot(legs[int(nm.kinds[w][1:])])] = (s, nm.ekinds[d])
                else:
                    b.mate[s] = (fresh[w], nm.slot_of(m))
        for i, j in new.through_arcs():
            inner[slot(legs[i])] = (slot(legs[j]), nm.ekinds[new.leg_dart(i)])
        extra_loops.extend(nm.loops)
        fresh_per.append(fresh)
    drop = set(drop_loops)
    b.loops = [lp for i, lp in enumerate(host.loops) if i not in drop] + extra_loops
    b.splice(removed, inner, loop_sign)
    pm, index = b.freeze()
    placed = [[index[f[v]] for v in new.interior] for f, (_, new) in zip(fresh_per, placements)]
    return pm, placed
