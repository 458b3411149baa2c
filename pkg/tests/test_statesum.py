import random

import pytest
from hypothesis import given, settings, strategies as st

from labelbracket.diagram import crossings, dump_diagram, load_diagram
from labelbracket.laurent import Laurent
from labelbracket.moves import KINDS, apply_move, enumerate_move_sites
from labelbracket.rules import parse_ruleset, serialize_ruleset
from labelbracket.statesum import (RulesetIncomplete, StateError, bracket, enumerate_states,
                                   resolve_state, state_sum)
from conftest import CORPUS_DIR, STRESS_DIR
from oracle import laurent_to_sympy, skein_bracket

# hand skein recursion, with <empty> = 1 and a loop worth -A^2 - A^-2
GOLDEN = {
    "unknot": "-A^2 - A^-2",
    "kink-right": "A^5 + A",
    "kink-left": "A^-1 + A^-5",
    "hopf": "A^6 + A^2 + A^-2 + A^-6",
    "trefoil": "A^7 + A^3 + A^-1 - A^-9",
    "figure-eight": "-A^10 - A^-10",
    "torus-2-5": "A^9 + A^5 + A - A^-15",
}
KNOTS = [p for p in sorted(CORPUS_DIR.glob("*.kd")) if "V" not in p.read_text().split("\n", 1)[1]]


def scalar_bracket(d, rs):
    res = bracket(d, rs)
    assert res.fixpoint
    terms = dict(res.normalized.items())
    assert set(terms) <= {""}, "a knot bracket reduces to a multiple of the empty diagram"
    return terms.get("", Laurent.constant(0, rs.variables))


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_golden_values(name, kauffman):
    d = load_diagram(CORPUS_DIR / f"{name}.kd")
    assert scalar_bracket(d, kauffman) == Laurent.parse(GOLDEN[name], ("A",))


@pytest.mark.parametrize("path", KNOTS, ids=lambda p: p.stem)
def test_matches_skein_oracle(path, kauffman):
    d = load_diagram(path)
    assert laurent_to_sympy(scalar_bracket(d, kauffman)) == skein_bracket(path.read_text())


def test_display_of_unknot(kauffman):
    res = bracket(load_diagram(CORPUS_DIR / "unknot.kd"), kauffman)
    assert str(res.normalized) == "(-A^2 - A^-2) * [empty]"
    assert res.state_count == 1


def test_theta_keeps_its_vertex_generator(kauffman):
    res = bracket(load_diagram(CORPUS_DIR / "theta.kd"), kauffman)
    assert str(res.normalized) == "(1) * [Y[1,2,3] Y[1,3,2]]"


def _walk(d, rng, steps, max_crossings):
    for _ in range(steps):
        kind = rng.choice(KINDS[:3])
        sites = [m for m in enumerate_move_sites(d, kind) if
                 len(crossings(d)) + 2 <= max_crossings or kind == "Ω3"]
        if sites:
            d = apply_move(d, rng.choice(sites))
    return d


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), start=st.sampled_from(["unknot", "kink-right", "hopf", "trefoil"]))
def test_random_diagrams_match_oracle(kauffman, seed, start):
    d = _walk(load_diagram(CORPUS_DIR / f"{start}.kd"), random.Random(seed), 4, 7)
    assert laurent_to_sympy(scalar_bracket(d, kauffman)) == skein_bracket(dump_diagram(d))


@pytest.mark.parametrize("pair", [("trefoil", "hopf"), ("kink-left", "figure-eight"), ("unknot", "unknot")])
def test_disjoint_union_is_multiplicative(kauffman, pair):
    a, b = (load_diagram(CORPUS_DIR / f"{n}.kd") for n in pair)
    assert scalar_bracket(a.disjoint_union(b), kauffman) == scalar_bracket(a, kauffman) * scalar_bracket(b, kauffman)


@given(seed=st.integers(0, 2**32 - 1))
def test_node_renumbering_leaves_raw_sum_unchanged(kauffman, seed):
    d = load_diagram(CORPUS_DIR / "trefoil-theta.kd")
    rng = random.Random(seed)
    order = list(range(d.num_nodes))
    rng.shuffle(order)
    assert state_sum(d.relabel(order), kauffman)[0] == state_sum(d, kauffman)[0]


def test_state_enumeration_order_and_slicing():
    d = load_diagram(CORPUS_DIR / "trefoil.kd")
    states = list(enumerate_states(d))
    assert len(states) == 8
    assert states[0] == {0: 0, 1: 0, 2: 0} and states[-1] == {0: 1, 1: 1, 2: 1}
    assert list(enumerate_states(d, 3, 5)) == states[3:5]


def test_all_a_state_of_trefoil(kauffman):
    d = load_diagram(CORPUS_DIR / "trefoil.kd")
    coeff, g = resolve_state(d, {x: 0 for x in crossings(d)}, kauffman)
    assert str(coeff) == "A^3" and len(g.loops) == 2 and g.num_nodes == 0


def test_state_count_of_stress_diagram(kauffman):
    d = load_diagram(next(STRESS_DIR.glob("*.kd")))
    assert sum(1 for _ in enumerate_states(d)) == 2 ** 12


def test_incomplete_ruleset_reports_first_todo(skeleton):
    with pytest.raises(RulesetIncomplete, match="ruleset incomplete: RS.1"):
        bracket(load_diagram(CORPUS_DIR / "theta.kd"), skeleton)


def test_uncovered_crossing_class_names_the_crossing(kauffman):
    text = serialize_ruleset(kauffman)
    head, _, tail = text.partition("smoothing RS.2 negative:")
    positive_only = parse_ruleset(head + "\n".join(tail.splitlines()[3:]) + "\n")
    assert [r.crossing_class for r in positive_only.smoothing] == ["positive"]
    eight = load_diagram(CORPUS_DIR / "figure-eight.kd")
    with pytest.raises(StateError, match=r"crossing \d+ \(negative\)"):
        state_sum(eight, positive_only)


def test_parallel_state_sum_agrees(kauffman):
    d = load_diagram(CORPUS_DIR / "torus-2-5.kd")
    assert state_sum(d, kauffman, workers=3) == state_sum(d, kauffman, workers=1)

