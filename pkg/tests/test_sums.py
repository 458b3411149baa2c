import pytest

from labelbracket.laurent import Laurent, RingMismatch
from labelbracket.planar import parse_map
from labelbracket.sums import FormalSum

VARS = ("A",)
THETA = parse_map("Y[1,2,3] Y[3,2,1]")
LOOP = parse_map("O[0]")


def test_relabeled_generators_merge():
    a = FormalSum.of(THETA, 2, VARS)
    b = FormalSum.of(parse_map("Y[3,2,1] Y[1,2,3]"), 3, VARS)
    assert len(a + b) == 1 and str(a + b) == "(5) * [Y[1,2,3] Y[1,3,2]]"


def test_cancellation_drops_term():
    a = FormalSum.of(THETA, Laurent.parse("A", VARS), VARS)
    assert not (a - a) and str(a - a) == "0"


def test_product_is_disjoint_union():
    a = FormalSum.of(LOOP, 2, VARS) + FormalSum.of(THETA, 1, VARS)
    sq = a * a
    assert sq.coefficient(FormalSum.of(parse_map("O[0] O[0]"), 1, VARS).keys()[0]) == 4
    assert sq.coefficient(FormalSum.of(LOOP.disjoint_union(THETA), 1, VARS).keys()[0]) == 4
    assert len(sq) == 3


def test_empty_generator_display_and_json():
    e = FormalSum.of(parse_map(""), Laurent.parse("-A^2 - A^-2", VARS), VARS)
    assert str(e) == "(-A^2 - A^-2) * [empty]"
    assert e.to_json() == [{"canonical_key": "", "representative": "empty", "coefficient": "-A^2 - A^-2"}]


def test_from_json_checks_keys():
    (term,) = FormalSum.of(THETA, 1, VARS).to_json()
    with pytest.raises(ValueError, match="canonical key mismatch"):
        FormalSum.from_json([{**term, "canonical_key": "bogus"}], VARS)


def test_ring_mismatch():
    t = FormalSum.of(THETA, Laurent.gen("t", ("t",)), ("t",))
    with pytest.raises(RingMismatch):
        t + FormalSum.of(THETA, Laurent.gen("A", VARS), VARS)


def test_hash_consistent_with_equality():
    a = FormalSum.of(THETA, 1, VARS) + FormalSum.of(LOOP, 1, VARS)
    b = FormalSum.of(LOOP, 1, VARS) + FormalSum.of(THETA, 1, VARS)
    assert a == b and hash(a) == hash(b) and a.hash_key() == b.hash_key()
