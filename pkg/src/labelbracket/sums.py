"""Formal sums of canonical trigraphs with Laurent coefficients."""

from __future__ import annotations

from typing import Iterable, Mapping

from .laurent import Laurent, RingMismatch
from .planar import PlanarMap, format_map, parse_map
from .trigraph import canonical_representative

__all__ = ["FormalSum", "generator"]


def generator(g: PlanarMap, reflect: bool = False) -> tuple[str, PlanarMap]:
    """Canonical key and canonical representative of a trigraph."""
    key, rep, _ = canonical_representative(g, reflect)
    return key, rep


def _rep_text(rep: PlanarMap) -> str:
    if not rep.num_nodes and not rep.loops:
        return "empty"
    return format_map(rep, one_per_line=False)


class FormalSum:
    """Finite combination ``sum c_i [G_i]`` keyed by canonical form.

    Instances are treated as immutable; arithmetic returns new sums.
    """

    __slots__ = ("variables", "reflect", "_terms", "_reps", "_hash_key")

    def __init__(self, terms: Mapping[str, Laurent] | None = None,
                 reps: Mapping[str, PlanarMap] | None = None,
                 variables: Iterable[str] = (), reflect: bool = False):
        self.variables = tuple(variables)
        self.reflect = reflect
        clean = {}
        for k, c in (terms or {}).items():
            if isinstance(c, int):
                c = Laurent.constant(c, self.variables)
            if c.variables != self.variables and not c.is_constant():
                raise RingMismatch(f"coefficient over {c.variables}, sum over {self.variables}")
            if c:
                clean[k] = c if c.variables == self.variables else Laurent.constant(c.constant_term(), self.variables)
        self._terms = dict(sorted(clean.items()))
        reps = reps or {}
        self._reps = {k: reps[k] for k in self._terms}
        self._hash_key = None

    @classmethod
    def zero(cls, variables: Iterable[str] = (), reflect: bool = False) -> FormalSum:
        return cls({}, {}, variables, reflect)

    @classmethod
    def of(cls, g: PlanarMap, coeff: Laurent | int = 1, variables: Iterable[str] = (),
           reflect: bool = False) -> FormalSum:
        key, rep = generator(g, reflect)
        return cls({key: coeff}, {key: rep}, variables, reflect)

    # access -----------------------------------------------------------------

    def keys(self) -> list[str]:
        return list(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, key: str) -> Laurent:
        return self._terms.get(key, Laurent.constant(0, self.variables))

    def representative(self, key: str) -> PlanarMap:
        return self._reps[key]

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def hash_key(self) -> str:
        """Whole-sum canonical hash: sorted (key, coefficient) pairs serialized."""
        if self._hash_key is None:
            self._hash_key = "\n".join(f"{k}\t{c}" for k, c in self._terms.items())
        return self._hash_key

    def __eq__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self.hash_key())

    # arithmetic --------------------------------------------------------------

    def _check(self, other: FormalSum):
        if self.variables != other.variables and self and other:
            raise RingMismatch(f"{self.variables} vs {other.variables}")

    def __add__(self, other: FormalSum) -> FormalSum:
        if not isinstance(other, FormalSum):
            return NotImplemented
        self._check(other)
        variables = self.variables or other.variables
        terms = dict(self._terms)
        reps = dict(self._reps)
        for k, c in other._terms.items():
            terms[k] = terms[k] + c if k in terms else c
            reps.setdefault(k, other._reps[k])
        return FormalSum(terms, reps, variables, self.reflect)

    def __neg__(self) -> FormalSum:
        return FormalSum({k: -c for k, c in self._terms.items()}, self._reps, self.variables, self.reflect)

    def __sub__(self, other: FormalSum) -> FormalSum:
        return self + (-other)

    def scale(self, c: Laurent | int) -> FormalSum:
        return FormalSum({k: v * c for k, v in self._terms.items()}, self._reps, self.variables, self.reflect)

    def __rmul__(self, c):
        if isinstance(c, (int, Laurent)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        """Scalar multiple, or product of sums via disjoint union of generators."""
        if isinstance(other, (int, Laurent)):
            return self.scale(other)
        if not isinstance(other, FormalSum):
            return NotImplemented
        self._check(other)
        out = FormalSum.zero(self.variables or other.variables, self.reflect)
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                union = self._reps[k1].disjoint_union(other._reps[k2])
                out = out + FormalSum.of(union, c1 * c2, out.variables, self.reflect)
        return out

    def add_term(self, g: PlanarMap, coeff: Laurent | int) -> FormalSum:
        return self + FormalSum.of(g, coeff, self.variables, self.reflect)

    # display ------------------------------------------------------------------

    @staticmethod
    def display_generator(rep: PlanarMap) -> str:
        if not rep.num_nodes and not rep.loops:
            return "[empty]"
        return "[" + format_map(rep, one_per_line=False) + "]"

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"({c}) * {self.display_generator(self._reps[k])}" for k, c in self._terms.items())

    def __repr__(self):
        return f"FormalSum({str(self)!r})"

    def to_json(self) -> list[dict]:
        return [
            {"canonical_key": k, "representative": _rep_text(self._reps[k]),
             "coefficient": str(c)}
            for k, c in self._terms.items()
        ]

    @classmethod
    def from_json(cls, terms: list[dict], variables: Iterable[str] = (), reflect: bool = False) -> FormalSum:
        """Inverse of :meth:`to_json`; keys are recomputed and must agree when given."""
        out = cls.zero(variables, reflect)
        for t in terms:
            rep = parse_map(t["representative"]) if t["representative"] != "empty" else PlanarMap.empty()
            term = cls.of(rep, Laurent.parse(t["coefficient"], out.variables), out.variables, reflect)
            if "canonical_key" in t and term and term.keys()[0] != t["canonical_key"]:
                raise ValueError(f"canonical key mismatch for {t['representative']!r}")
            out = out + term
        return out
