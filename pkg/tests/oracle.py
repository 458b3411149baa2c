"""Reference computations that share no code with the package.

``skein_bracket`` evaluates the Kauffman bracket of a PD code with sympy by
brute force over states and union-find loop counting. ``isomorphic`` decides
orientation-preserving isomorphism of small rotation systems by trying every
bijection of nodes and every rotation.
"""

import itertools
import re

import sympy

A = sympy.Symbol("A")
DELTA = -A**2 - A**-2

_NODE = re.compile(r"([A-Za-z][\w+-]*)\[([^\]]*)\]")


def pd_code(text: str) -> tuple[list[tuple[int, ...]], int]:
    """Crossing tuples and the number of free loops of a crossings-only diagram."""
    crossings, loops = [], 0
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        for kind, body in _NODE.findall(line):
            if kind == "O":
                loops += 1
            else:
                assert kind.rstrip("+-") == "X", kind
                crossings.append(tuple(int(x) for x in body.split(",")))
    return crossings, loops


def _count_loops(pairs: list[tuple[int, int]]) -> int:
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        parent[find(a)] = find(b)
    return len({find(x) for x in parent})


def skein_bracket(text: str) -> sympy.Expr:
    """Sum over states of A^(#A - #B) * delta^(loops), empty diagram = 1."""
    crossings, free = pd_code(text)
    total = sympy.Integer(0)
    for state in itertools.product((0, 1), repeat=len(crossings)):
        pairs = []
        for (a, b, c, d), s in zip(crossings, state):
            pairs += [(a, b), (c, d)] if s == 0 else [(a, d), (b, c)]
        weight = A ** (state.count(0) - state.count(1))
        total += weight * DELTA ** (_count_loops(pairs) + free)
    return sympy.expand(total)


def laurent_to_sympy(poly) -> sympy.Expr:
    (name,) = poly.variables or ("A",)
    sym = sympy.Symbol(name)
    return sympy.expand(sum((c * sym ** e[0] for e, c in poly.items()), sympy.Integer(0)))


def isomorphic(g, h) -> bool:
    """Brute-force orientation-preserving isomorphism of decorated rotation systems."""
    if (sorted(g.kinds) != sorted(h.kinds) or g.num_darts != h.num_darts
            or sorted(g.loops) != sorted(h.loops)):
        return False
    n = g.num_nodes
    for perm in itertools.permutations(range(n)):
        if any(g.kinds[v] != h.kinds[perm[v]] or g.labels[v] != h.labels[perm[v]]
               or g.arity(v) != h.arity(perm[v]) for v in range(n)):
            continue
        for rots in itertools.product(*(range(g.arity(v)) for v in range(n))):
            image = {}
            for v in range(n):
                for k in range(g.arity(v)):
                    image[g.dart_at(v, k)] = h.dart_at(perm[v], k + rots[v])
            if all(image[g.mate[d]] == h.mate[image[d]] and g.dirs[d] == h.dirs[image[d]]
                   and g.ekinds[d] == h.ekinds[image[d]] for d in range(g.num_darts)):
                return True
    return False
