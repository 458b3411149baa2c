import pytest

from labelbracket.matching import GlueError, glue, match_sites
from labelbracket.planar import parse_map
from labelbracket.rules import Fragment
from labelbracket.trigraph import canonical_form

THETA = parse_map("V.10[1>,2>,3>] V.9[3<,2<,1<]")


def test_oriented_edge_fragment_matches_each_theta_edge_once():
    assert len(match_sites(THETA, Fragment.parse("L0[1>] L1[1<]"))) == 3


def test_loop_fragments():
    assert match_sites(THETA, Fragment.parse("O[+]")) == []
    two = parse_map("O[0] O[0]")
    assert len(match_sites(two, Fragment.parse("O[0]"))) == 2
    assert len(match_sites(two, Fragment.parse("O[0] O[0]"))) == 1


def test_vertex_fragment_respects_rotation_and_orientation():
    source = Fragment.parse("V.10[1>,2>,3>] L0[1<] L1[2<] L2[3<]")
    # three rotations of the single source vertex
    assert len(match_sites(THETA, source)) == 3
    sink_pattern = Fragment.parse("V.10[1<,2>,3>] L0[1>] L1[2<] L2[3<]")
    assert match_sites(THETA, sink_pattern) == []


def test_label_variables_bind_consistently():
    host = parse_map("V.6@a[~1,2>,3>] V.7@a[3<,2<,~1]")
    same = Fragment.parse("V.6@$x[~1,2>,3>] V.7@$x[3<,2<,~1]")
    assert len(match_sites(host, same)) == 1
    other = parse_map("V.6@a[~1,2>,3>] V.7@b[3<,2<,~1]")
    assert match_sites(other, same) == []
    assert len(match_sites(other, Fragment.parse("V.6@$x[~1,2>,3>] V.7@$y[3<,2<,~1]"))) == 1


def test_glue_identity_replacement():
    edge = Fragment.parse("L0[1>] L1[1<]")
    for site in match_sites(THETA, edge):
        g, placed = glue(THETA, site, edge, edge)
        assert placed == [] and canonical_form(g) == canonical_form(THETA)


def test_glue_inserts_fragment_on_edge():
    edge = Fragment.parse("L0[1>] L1[1<]")
    marked = Fragment.parse("B[1<,2>] L0[1>] L1[2<]")
    site = match_sites(THETA, edge)[0]
    g, placed = glue(THETA, site, edge, marked)
    assert g.num_nodes == 3 and len(placed) == 1
    assert g.kinds[placed[0]] == "B"
    # and back again
    (back,) = [s for s in match_sites(g, marked)]
    g2, _ = glue(g, back, marked, edge)
    assert canonical_form(g2) == canonical_form(THETA)


def test_glue_interface_mismatch():
    edge = Fragment.parse("L0[1>] L1[1<]")
    with pytest.raises(GlueError):
        glue(THETA, match_sites(THETA, edge)[0], edge, Fragment.parse("L0[1] L1[1] L2[2] L3[2]"))


def test_todo_fragment_has_no_sites():
    assert match_sites(THETA, Fragment.parse("TODO")) == []
