"""Sparse Laurent polynomials with integer coefficients.

A :class:`Laurent` is an immutable mapping from exponent tuples to nonzero
integers over a fixed tuple of variable names. With no variables it is just
an integer, which is how plain Z-module coefficients are carried.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

__all__ = ["Laurent", "RingMismatch", "NotDivisible"]


class RingMismatch(ValueError):
    """Two coefficients live over different variable lists."""


class NotDivisible(ArithmeticError):
    """Exact division is not possible inside the ring."""


class Laurent:
    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, int] | None = None, variables: Iterable[str] = ()):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError(f"exponent {exps} does not fit variables {self.variables}")
            if c:
                clean[exps] = clean.get(exps, 0) + int(c)
                if not clean[exps]:
                    del clean[exps]
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # construction ----------------------------------------------------------

    @classmethod
    def constant(cls, c: int, variables: Iterable[str] = ()) -> Laurent:
        variables = tuple(variables)
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def monomial(cls, c: int, exps: Iterable[int], variables: Iterable[str]) -> Laurent:
        return cls({tuple(exps): c}, variables)

    @classmethod
    def gen(cls, name: str, variables: Iterable[str]) -> Laurent:
        variables = tuple(variables)
        exps = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        return cls({exps: 1}, variables)

    @classmethod
    def parse(cls, text: str, variables: Iterable[str] = ()) -> Laurent:
        """Parse strings like ``-A^2 - A^-2``, ``3*A*B^-1`` or ``(A + 1)``."""
        variables = tuple(variables)
        s = text.strip()
        while s.startswith("(") and _matching_paren(s) == len(s) - 1:
            s = s[1:-1].strip()
        if not s:
            raise ValueError("empty coefficient")
        total = cls.constant(0, variables)
        pos = 0
        first = True
        for m in _TERM.finditer(s):
            if m.start() != pos or not m.group(0).strip():
                raise ValueError(f"cannot parse coefficient {text!r} near {s[pos:]!r}")
            sign, body = m.group("sign"), m.group("body")
            if not first and not sign:
                raise ValueError(f"missing operator in {text!r}")
            first = False
            total = total + _parse_monomial(body, sign == "-", variables, text)
            pos = m.end()
        if pos != len(s):
            raise ValueError(f"cannot parse coefficient {text!r} near {s[pos:]!r}")
        return total

    # basic protocol --------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Laurent.constant(other, self.variables)
        if not isinstance(other, Laurent):
            return NotImplemented
        if not self._terms and not other._terms:
            return True
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, tuple(self._terms.items()))) if self._terms else hash(0)
        return self._hash

    def __repr__(self):
        return f"Laurent({str(self)!r}, variables={self.variables!r})"

    # arithmetic ------------------------------------------------------------

    def _ring_of(self, other: Laurent) -> tuple:
        if self.variables == other.variables:
            return self.variables
        if self.is_constant():
            return other.variables
        if other.is_constant():
            return self.variables
        raise RingMismatch(f"{self.variables} vs {other.variables}")

    def _lift(self, variables: tuple) -> Laurent:
        if self.variables == variables:
            return self
        if not self.is_constant():
            raise RingMismatch(f"{self.variables} vs {variables}")
        return Laurent.constant(self.constant_term(), variables)

    def __add__(self, other):
        if isinstance(other, int):
            other = Laurent.constant(other, self.variables)
        if not isinstance(other, Laurent):
            return NotImplemented
        ring = self._ring_of(other)
        a, b = self._lift(ring), other._lift(ring)
        out = dict(a._terms)
        for e, c in b._terms.items():
            out[e] = out.get(e, 0) + c
        return Laurent(out, ring)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({e: -c for e, c in self._terms.items()}, self.variables)

    def __sub__(self, other):
        if isinstance(other, int):
            other = Laurent.constant(other, self.variables)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Laurent({e: c * other for e, c in self._terms.items()}, self.variables)
        if not isinstance(other, Laurent):
            return NotImplemented
        ring = self._ring_of(other)
        a, b = self._lift(ring), other._lift(ring)
        out: dict = {}
        for e1, c1 in a._terms.items():
            for e2, c2 in b._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Laurent(out, ring)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.unit_inverse() ** (-n)
        result = Laurent.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # queries ---------------------------------------------------------------

    def is_constant(self) -> bool:
        zero = (0,) * len(self.variables)
        return all(e == zero for e in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0,) * len(self.variables), 0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit(self) -> bool:
        """True for +-1 times a monomial, the units of Z[x, x^-1]."""
        return len(self._terms) == 1 and abs(next(iter(self._terms.values()))) == 1

    def unit_inverse(self) -> Laurent:
        if not self.is_unit():
            raise NotDivisible(f"{self} is not a unit")
        (e, c), = self._terms.items()
        return Laurent({tuple(-x for x in e): c}, self.variables)

    def exact_div(self, divisor: Laurent) -> Laurent:
        """Divide exactly by a monomial divisor; raise NotDivisible otherwise."""
        if isinstance(divisor, int):
            divisor = Laurent.constant(divisor, self.variables)
        ring = self._ring_of(divisor)
        a, d = self._lift(ring), divisor._lift(ring)
        if d.is_zero():
            raise ZeroDivisionError("division by zero coefficient")
        if not d.is_monomial():
            raise NotDivisible(f"exact division by non-monomial {d} is not supported")
        (de, dc), = d._terms.items()
        out = {}
        for e, c in a._terms.items():
            if c % dc:
                raise NotDivisible(f"{a} is not divisible by {d}")
            out[tuple(x - y for x, y in zip(e, de))] = c // dc
        return Laurent(out, ring)

    def divides(self, other: Laurent) -> bool:
        try:
            other.exact_div(self)
        except (NotDivisible, ZeroDivisionError):
            return False
        return True

    # formatting ------------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            mono = _format_monomial(e, self.variables)
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)


_TERM = re.compile(r"\s*(?P<sign>[+-])?\s*(?P<body>[^+\-\s](?:[^+\-]|(?<=\^)-)*)")
_FACTOR = re.compile(r"^(?P<base>[A-Za-z_]\w*|\d+)(?:\^(?P<exp>-?\d+))?$")


def _matching_paren(s: str) -> int:
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return i
    return -1


def _parse_monomial(body: str, negative: bool, variables: tuple, text: str) -> Laurent:
    coeff = 1
    exps = [0] * len(variables)
    for factor in body.replace(" ", "").split("*"):
        m = _FACTOR.match(factor)
        if not m:
            raise ValueError(f"bad factor {factor!r} in coefficient {text!r}")
        base, exp = m.group("base"), int(m.group("exp") or 1)
        if base.isdigit():
            if exp < 0:
                raise ValueError(f"negative power of an integer in {text!r}")
            coeff *= int(base) ** exp
        else:
            if base not in variables:
                raise ValueError(f"unknown variable {base!r} in coefficient {text!r}")
            exps[variables.index(base)] += exp
    return Laurent({tuple(exps): -coeff if negative else coeff}, variables)


def _format_monomial(exps: tuple, variables: tuple) -> str:
    out = []
    for v, e in zip(variables, exps):
        if e == 1:
            out.append(v)
        elif e:
            out.append(f"{v}^{e}")
    return "*".join(out)
