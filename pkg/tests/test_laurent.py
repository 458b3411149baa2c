import pytest
from hypothesis import given, strategies as st

from labelbracket.laurent import Laurent, NotDivisible, RingMismatch

VARS = ("A",)
exps = st.integers(-6, 6)
coeffs = st.integers(-5, 5)
polys = st.dictionaries(exps.map(lambda e: (e,)), coeffs, max_size=5).map(lambda t: Laurent(t, VARS))
units = st.tuples(st.sampled_from([1, -1]), exps).map(lambda p: Laurent.monomial(p[0], (p[1],), VARS))


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    assert a * 1 == a


@given(polys, units)
def test_unit_division_roundtrip(a, u):
    assert (a * u).exact_div(u) == a
    assert u * u.unit_inverse() == 1


@given(polys)
def test_str_parse_roundtrip(a):
    assert Laurent.parse(str(a), VARS) == a


@pytest.mark.parametrize("text, expected", [
    ("-A^2 - A^-2", {(2,): -1, (-2,): -1}),
    ("(A + 1)", {(1,): 1, (0,): 1}),
    ("3*A^-1", {(-1,): 3}),
    ("0", {}),
])
def test_parse(text, expected):
    assert Laurent.parse(text, VARS).terms == expected


def test_display():
    assert str(Laurent.parse("-A^-2 - A^2", VARS)) == "-A^2 - A^-2"


@pytest.mark.parametrize("bad", ["", "A^", "A B", "2**A", "B"])
def test_parse_errors(bad):
    with pytest.raises(ValueError):
        Laurent.parse(bad, VARS)


def test_non_monomial_division_refused():
    delta = Laurent.parse("-A^2 - A^-2", VARS)
    with pytest.raises(NotDivisible):
        (delta * delta).exact_div(delta)
    with pytest.raises(NotDivisible):
        Laurent.parse("A + 1", VARS).exact_div(Laurent.parse("2*A", VARS))
    with pytest.raises(ZeroDivisionError):
        delta.exact_div(Laurent.constant(0, VARS))


def test_ring_mismatch():
    a = Laurent.gen("A", ("A",))
    t = Laurent.gen("t", ("t",))
    with pytest.raises(RingMismatch):
        a + t
    # constants lift into any ring
    assert a + Laurent.constant(2) == Laurent.parse("A + 2", VARS)


def test_multivariate():
    vs = ("A", "B")
    x = Laurent.parse("A*B^-1 + 2", vs)
    assert x * Laurent.parse("B", vs) == Laurent.parse("A + 2*B", vs)
