import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from necklace.errors import NecklaceError, NegativeCell, OutOfRange, UnknownColor, ZeroTotalMass
from necklace.measures import (
    Box,
    GridDensity,
    MeasureSet,
    bead_necklace_to_measures,
    box_mass,
    cdf,
    normalize,
    parse_beads,
)


def riemann_mass(density, box, samples=64):
    """Midpoint rule on a fine tensor grid; exact up to cells cut by the grid."""
    axes = [lo + (np.arange(samples) + 0.5) * (hi - lo) / samples for lo, hi in zip(box.lo, box.hi)]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, density.dimension)
    vals = np.array([density.value_at(p) for p in pts])
    return float(vals.mean() * box.volume())


@pytest.fixture
def step2d():
    return GridDensity(([0, 0.5, 1], [0, 0.25, 1]), [[1.0, 2.0], [3.0, 4.0]])


def test_total_mass_and_prefix(step2d):
    # cells: 0.5*0.25, 0.5*0.75, ...
    expected = 1 * 0.125 + 2 * 0.375 + 3 * 0.125 + 4 * 0.375
    assert step2d.total_mass() == pytest.approx(expected)
    assert step2d.shape == (2, 2)


@pytest.mark.parametrize("point, expected", [
    ((0.0, 0.0), 0.0),
    ((1.0, 1.0), 2.75),
    ((0.5, 0.25), 0.125),
    ((0.25, 0.25), 0.0625),
    ((0.5, 0.625), 0.125 + 2 * 0.5 * 0.375),
    ((0.75, 1.0), 0.125 + 0.75 + 0.5 * (0.375 + 1.5)),
])
def test_cdf_hand_values(step2d, point, expected):
    assert cdf(step2d, point) == pytest.approx(expected, abs=1e-14)


def test_box_mass_matches_riemann(step2d):
    box = Box((0.1, 0.2), (0.9, 0.7))
    # the box edges align with the sample grid only approximately
    assert box_mass(step2d, box) == pytest.approx(riemann_mass(step2d, box, 200), rel=2e-2)


def test_box_mass_exact_on_uniform():
    u = GridDensity.uniform(3)
    box = Box((0.1, 0.2, 0.3), (0.5, 0.9, 0.4))
    assert box_mass(u, box) == pytest.approx(0.4 * 0.7 * 0.1)


def test_degenerate_box_has_zero_mass(step2d):
    assert box_mass(step2d, Box((0.3, 0.1), (0.3, 0.9))) == 0.0


def test_normalize():
    g = normalize(GridDensity(([0, 0.5, 1],), [2.0, 6.0]))
    assert g.total_mass() == pytest.approx(1.0)
    assert g.is_probability()
    with pytest.raises(ZeroTotalMass):
        normalize(GridDensity(([0, 1],), [0.0]))
    with pytest.raises(NegativeCell):
        normalize(GridDensity(([0, 0.5, 1],), [-1.0, 3.0]))
    signed = normalize(GridDensity(([0, 0.5, 1],), [-1.0, 3.0]), probability=False)
    assert signed.total_mass() == pytest.approx(1.0)


@pytest.mark.parametrize("breakpoints", [
    ([0.1, 1.0],),
    ([0.0, 0.9],),
    ([0.0, 0.5, 0.5, 1.0],),
    ([0.0],),
])
def test_bad_breakpoints(breakpoints):
    with pytest.raises(NecklaceError):
        GridDensity(breakpoints, np.ones(max(len(breakpoints[0]) - 1, 1)))


def test_value_count_checked():
    with pytest.raises(NecklaceError):
        GridDensity(([0, 0.5, 1],), [1.0])


def test_out_of_range_point(step2d):
    with pytest.raises(OutOfRange):
        cdf(step2d, (1.2, 0.5))


def test_measure_set_requires_shared_dimension():
    with pytest.raises(NecklaceError):
        MeasureSet((GridDensity.uniform(1), GridDensity.uniform(2)))


def test_json_round_trip(step2d):
    back = GridDensity.from_json(step2d.to_json())
    assert np.array_equal(back.values, step2d.values)
    assert all(np.array_equal(a, b) for a, b in zip(back.breakpoints, step2d.breakpoints))


@pytest.mark.parametrize("beads, expected", [
    ("AABB", [1, 1, 2, 2]),
    ("abca", [1, 2, 3, 1]),
    ([2, 1, 2], [2, 1, 2]),
])
def test_parse_beads(beads, expected):
    assert parse_beads(beads) == expected


def test_parse_beads_rejects():
    with pytest.raises(UnknownColor):
        parse_beads("A-B")
    with pytest.raises(UnknownColor):
        parse_beads([1, 4], n=3)


def test_bead_embedding():
    ms = bead_necklace_to_measures("ABBA")
    assert len(ms) == 2
    assert box_mass(ms[0], Box((0.0,), (0.25,))) == pytest.approx(0.5)
    assert box_mass(ms[1], Box((0.25,), (0.75,))) == pytest.approx(1.0)
    assert ms.is_probability()


@st.composite
def densities(draw, d=2):
    bps = []
    for _ in range(d):
        inner = draw(st.lists(st.floats(0.01, 0.99), max_size=4, unique=True))
        bps.append([0.0] + sorted(inner) + [1.0])
    size = int(np.prod([len(b) - 1 for b in bps]))
    vals = draw(st.lists(st.floats(0.0, 5.0), min_size=size, max_size=size))
    return GridDensity(tuple(bps), vals)


unit = st.floats(0.0, 1.0)


@settings(max_examples=60, deadline=None)
@given(densities(), unit, unit, unit, unit, unit)
def test_box_mass_is_additive(g, a, b, c, d, split):
    lo, hi = (min(a, b), min(c, d)), (max(a, b), max(c, d))
    mid = lo[0] + split * (hi[0] - lo[0])
    whole = box_mass(g, Box(lo, hi))
    left = box_mass(g, Box(lo, (mid, hi[1])))
    right = box_mass(g, Box((mid, lo[1]), hi))
    assert whole == pytest.approx(left + right, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(densities(), unit, unit, unit, unit)
def test_cdf_is_monotone(g, x1, y1, x2, y2):
    lo = (min(x1, x2), min(y1, y2))
    hi = (max(x1, x2), max(y1, y2))
    assert cdf(g, lo) <= cdf(g, hi) + 1e-12


@settings(max_examples=30, deadline=None)
@given(densities(d=1), unit, unit)
def test_1d_box_mass_matches_piecewise_integral(g, a, b):
    lo, hi = min(a, b), max(a, b)
    # independent oracle: integrate cell by cell
    bp, vals = g.breakpoints[0], g.values
    expected = sum(v * max(0.0, min(hi, r) - max(lo, l)) for l, r, v in zip(bp[:-1], bp[1:], vals))
    assert box_mass(g, Box((lo,), (hi,))) == pytest.approx(expected, abs=1e-12)
