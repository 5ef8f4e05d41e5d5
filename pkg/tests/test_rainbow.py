import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from necklace import rainbow
from necklace.errors import InvalidParameter, NotPrime, TooLarge
from necklace.polytope import parse_polytope, simplex

SMALL_BASES = ["point", "simplex:1", "simplex:2", "square", "polygon:5", "xpoly:2",
               "prod:simplex:2,simplex:1"]


def test_cell_counts_interval():
    cx = rainbow.build(simplex(1), 2)
    # two colored endpoints each, four colored edges
    assert cx.counts() == (4, 4)
    assert cx.is_pure()


def test_square_counts():
    cx = rainbow.build(parse_polytope("square"), 2)
    assert cx.counts() == (8, 16, 16)
    assert rainbow.cell_count(cx.base, 2) == 40


@pytest.mark.parametrize("nu", range(4))
@pytest.mark.parametrize("k", [1, 2, 3])
def test_simplex_homology_is_a_wedge_of_spheres(nu, k):
    # over a simplex the complex is a join of nu+1 discrete k-point sets
    hom = rainbow.homology_mod2(rainbow.build(simplex(nu), k))
    expected = [0] * nu + [(k - 1) ** (nu + 1)]
    assert hom.reduced == expected


@pytest.mark.parametrize("spec", SMALL_BASES)
@pytest.mark.parametrize("k", [2, 3])
def test_euler_three_ways(spec, k):
    base = parse_polytope(spec)
    cx = rainbow.build(base, k)
    direct = rainbow.euler_direct(base, k)
    assert direct == cx.alternating_count()
    assert direct == rainbow.homology_mod2(cx).euler()


@pytest.mark.parametrize("k", [2, 3, 4])
def test_square_euler_discrepancy(k):
    rep = rainbow.euler_report(parse_polytope("square"), k)
    assert rep.direct == 4 * k - 4 * k**2 + k**4
    assert rep.formula == 4 * k - 4 * k**2 + k**3
    assert not rep.agree
    assert rep.to_json()["note"]


@pytest.mark.parametrize("nu", range(5))
@pytest.mark.parametrize("k", [2, 3, 4])
def test_simplex_euler_closed_form(nu, k):
    rep = rainbow.euler_report(simplex(nu), k)
    assert rep.direct == rep.formula == 1 + (-1) ** nu * (k - 1) ** (nu + 1)
    assert rep.to_json()["note"] is None


def test_square_shelling():
    rep = rainbow.lex_shelling_check(parse_polytope("square"), 2)
    assert rep.ok, rep.failures
    assert rep.kinds() == {"first": 1, "a": 8, "b": 7}
    assert rep.sphere_count == 7


@pytest.mark.parametrize("nu, k", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_simplex_shelling_sphere_count(nu, k):
    rep = rainbow.lex_shelling_check(simplex(nu), k)
    assert rep.ok
    # a coloring is type (b) exactly when no vertex gets color 1
    assert rep.sphere_count == (k - 1) ** (nu + 1)


@pytest.mark.parametrize("spec", ["square", "simplex:2", "polygon:5"])
def test_sphere_count_crosscheck(spec):
    out = rainbow.sphere_count_crosscheck(parse_polytope(spec), 2)
    assert out["sphere_count"] == out["top_betti"] == out["from_euler"]


@pytest.mark.parametrize("spec", SMALL_BASES)
@pytest.mark.parametrize("p", [2, 3])
def test_free_action(spec, p):
    cx = rainbow.build(parse_polytope(spec), p)
    out = rainbow.zp_action_check(cx, p)
    assert out["free"]
    assert out["orbits"] * p == out["cells"]


def test_action_requirements():
    cx = rainbow.build(simplex(1), 4)
    with pytest.raises(NotPrime):
        rainbow.zp_action_check(cx, 4)
    with pytest.raises(InvalidParameter):
        rainbow.zp_action_check(cx, 2)


def test_size_limits():
    with pytest.raises(TooLarge):
        rainbow.build(parse_polytope("cube:3"), 5, max_cells=1000)
    with pytest.raises(TooLarge):
        rainbow.lex_shelling_check(parse_polytope("cube:3"), 5, max_top_cells=1000)


@pytest.mark.parametrize("m, k, top", [([0], 2, 1), ([1, 1], 2, 7), ([2], 3, 8)])
def test_connectivity_examples(m, k, top):
    out = rainbow.connectivity_report(m, k)
    assert out["pure"]
    assert out["low_homology_vanishes"]
    assert out["dimension"] == sum(m)
    assert out["top_betti"] == top


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(SMALL_BASES), st.integers(1, 3))
def test_cells_are_closed_under_facets(spec, k):
    cx = rainbow.build(parse_polytope(spec), k)
    for c, facets in enumerate(cx.facets):
        for f in facets:
            assert cx.dims[f] == cx.dims[c] - 1
            fid, h = cx.cells[f]
            parent, hp = cx.cells[c]
            parent_verts = cx.base.faces[parent].vertices
            pos = {v: i for i, v in enumerate(parent_verts)}
            assert h == tuple(hp[pos[v]] for v in cx.base.faces[fid].vertices)
