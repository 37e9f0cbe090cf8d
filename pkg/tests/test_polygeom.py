import math
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from helpers import applicable_moves, random_semitoric_fan, realize
from oracles import box_area, expabsx_quad, random_convex_points, sliced_symdiff_area, sobol_symdiff_area
from semitoric.moves import ActT, Chop, CommuteFakeDelzant, RemoveHidden, Unchop
from semitoric.polygeom import (
    Density,
    GeometryError,
    Marker,
    PrimitiveSemitoricPolygon,
    RationalPolygon,
    family_distance,
    fan_of_polygon,
    measure,
    move_polygon_family,
    polygon_realizing_fan,
    same_fan_interpolate,
    shear_polygon,
    symmetric_difference_measure,
    twisting_shift,
    vertical_shear,
)
from semitoric.semitoricfan import D, F, H, SemitoricFan, apply_move, standard_fan

SQUARE = RationalPolygon(((0, 0), (1, 0), (1, 1), (0, 1)))
HALF = RationalPolygon(((0, 0), (1, 0), (1, Fr(1, 2)), (0, Fr(1, 2))))
TRIANGLE = RationalPolygon(((0, 0), (1, 0), (0, 1)))
STD1 = PrimitiveSemitoricPolygon(RationalPolygon(((0, 2), (2, 0), (2, 2), (1, 3), (0, 3))), (Marker(Fr(1)),))

polys = st.builds(lambda s: RationalPolygon(tuple(random_convex_points(random.Random(s)))), st.integers(0, 10**9))


def rect(w, h, x=0, y=0):
    return RationalPolygon(((x, y), (x + w, y), (x + w, y + h), (x, y + h)))


def test_polygon_canonical_form():
    assert SQUARE.vertices[0] == (0, 0)
    assert RationalPolygon(((1, 1), (0, 1), (0, 0), (1, 0))) == SQUARE
    assert RationalPolygon(((0, 0), (Fr(1, 2), 0), (1, 0), (1, 1), (0, 1))) == SQUARE
    with pytest.raises(GeometryError):
        RationalPolygon(((0, 0), (1, 0), (2, 0)))
    with pytest.raises(GeometryError):
        RationalPolygon(((0, 0), (2, 0), (1, 1), (2, 2), (0, 2)))


def test_fan_of_square_and_triangle():
    assert fan_of_polygon(SQUARE).same_up_to_rotation(standard_fan(0))
    f = fan_of_polygon(TRIANGLE)
    assert f.same_up_to_rotation(SemitoricFan.all_delzant(((1, 0), (0, 1), (-1, -1))))
    with pytest.raises(GeometryError):
        fan_of_polygon(RationalPolygon(((0, 0), (2, 0), (0, 1))))


def test_fan_of_marked_polygon():
    assert STD1.fan == standard_fan(1) or STD1.fan.same_up_to_rotation(standard_fan(1))
    with pytest.raises(GeometryError):
        PrimitiveSemitoricPolygon(STD1.polygon, (Marker(Fr(1, 2)),))
    with pytest.raises(GeometryError):
        PrimitiveSemitoricPolygon(STD1.polygon, (Marker(Fr(1), eps=-1),))
    # the marked corner also satisfies the Delzant condition, so dropping the marker is legal
    assert PrimitiveSemitoricPolygon(STD1.polygon, ()).fan.complexity == 0


@pytest.mark.parametrize("c", range(5))
def test_realization_round_trip(c):
    p = polygon_realizing_fan(standard_fan(c))
    assert p.fan.same_up_to_rotation(standard_fan(c))
    assert p.m_f == c and p.twisting == (0,) * c
    assert all(v[0].denominator == 1 and v[1].denominator == 1 for v in p.polygon.vertices)


def test_realization_examples():
    assert polygon_realizing_fan(standard_fan(0)).polygon == SQUARE
    tri = SemitoricFan.all_delzant(((1, 0), (0, 1), (-1, -1)))
    assert polygon_realizing_fan(tri).polygon == TRIANGLE


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 3))
def test_realization_random_fans(seed, c):
    f = random_semitoric_fan(random.Random(seed), c, 8)
    assert polygon_realizing_fan(f).fan.same_up_to_rotation(f)


def test_vertical_shear_examples():
    assert vertical_shear(SQUARE, Fr(1, 2), 0) == SQUARE
    # Any nonzero shear through the middle of the square bends a horizontal edge into a reflex corner.
    for k in (1, -1):
        with pytest.raises(GeometryError, match="not convex"):
            vertical_shear(SQUARE, Fr(1, 2), k)
    sheared = vertical_shear(STD1.polygon, 1, 1)
    assert set(sheared.vertices) == {(0, 2), (1, 1), (2, 1), (2, 3), (0, 3)}


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 3))
def test_shear_inverse_on_families(seed, c):
    p = realize(random_semitoric_fan(random.Random(seed), c, 5))
    shears = [(lam, 1) for lam in p.lambdas]
    there = shear_polygon(p.polygon, shears)
    assert shear_polygon(there, [(lam, -1) for lam in p.lambdas]) == p.polygon


def test_measure_examples():
    assert measure(SQUARE) == 1
    assert measure(TRIANGLE) == Fr(1, 2)
    assert measure(SQUARE, Density.EXPABSX) == pytest.approx(1 - math.exp(-1), abs=1e-15)
    assert measure(rect(2, 1, -1, 0), "expabsx") == pytest.approx(2 * (1 - math.exp(-1)), abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(polys)
def test_expabsx_matches_quadrature(p):
    assert measure(p, Density.EXPABSX) == pytest.approx(expabsx_quad(p.vertices), abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(polys, st.fractions(min_value=-6, max_value=6, max_denominator=7))
def test_measure_additive_under_vertical_split(p, x):
    from semitoric.polygeom import _slab_measure

    lo, hi = p.x_range()
    for density in Density:
        left = _slab_measure(p, lo, max(lo, min(hi, x)), density)
        right = _slab_measure(p, max(lo, min(hi, x)), hi, density)
        assert left + right == pytest.approx(measure(p, density), abs=1e-12)


def test_symmetric_difference_examples():
    assert symmetric_difference_measure(SQUARE, SQUARE) == 0
    assert symmetric_difference_measure(SQUARE, SQUARE.translate((1, 0))) == 2
    assert symmetric_difference_measure(SQUARE, SQUARE.translate((5, 5))) == 2
    assert symmetric_difference_measure(SQUARE, HALF) == Fr(1, 2)


@settings(max_examples=100, deadline=None)
@given(polys, polys, polys)
def test_symmetric_difference_is_a_metric(a, b, c):
    d = symmetric_difference_measure
    assert d(a, b) == d(b, a) >= 0
    assert d(a, c) <= d(a, b) + d(b, c)
    assert d(a, a) == 0


@settings(max_examples=30, deadline=None)
@given(polys, polys)
def test_symmetric_difference_matches_sampling(a, b):
    exact = float(symmetric_difference_measure(a, b))
    assert exact == pytest.approx(sliced_symdiff_area(a.vertices, b.vertices), abs=1e-3)
    rough = sobol_symdiff_area(a.vertices, b.vertices, log2n=16)
    assert exact == pytest.approx(rough, abs=2e-3 * box_area(a.vertices, b.vertices))


def test_family_distance_unmarked_rectangles():
    a = PrimitiveSemitoricPolygon(rect(1, 1))
    for b in (rect(2, 1), rect(1, 3), rect(3, 2)):
        pb = PrimitiveSemitoricPolygon(b)
        for density in Density:
            assert family_distance(a, pb, density) == symmetric_difference_measure(a.polygon, b, density)
    assert family_distance(a, a) == 0


def test_family_distance_unmarked_ignores_global_shear():
    p = realize(standard_fan(0), scale=2)
    for k in (-2, 1, 3):
        assert family_distance(p, p.act(k), Density.LEBESGUE) == 0
    q = PrimitiveSemitoricPolygon(rect(3, 2))
    assert family_distance(p, q, Density.LEBESGUE) == family_distance(p.act(2), q.act(-1), Density.LEBESGUE)


def test_family_distance_chop_family_matches_sampling():
    p = realize(standard_fan(1), scale=2)
    half = move_polygon_family(p, Chop(0), Fr(1, 2))
    full = move_polygon_family(p, Chop(0), 1)
    exact = family_distance(half, full, Density.LEBESGUE)
    assert exact == 2 * symmetric_difference_measure(half.polygon, full.polygon)
    shears = [(lam, 1) for lam in half.lambdas]
    approx = (sliced_symdiff_area(half.polygon.vertices, full.polygon.vertices)
              + sliced_symdiff_area(half.polygon.vertices, full.polygon.vertices, shears,
                                    [(lam, 1) for lam in full.lambdas]))
    assert float(exact) == pytest.approx(approx, abs=1e-3)


def test_family_distance_marker_shift_matches_sampling():
    p = realize(standard_fan(1), scale=2)
    q = realize(standard_fan(1), scale=3)
    q = PrimitiveSemitoricPolygon(q.polygon.translate((-1, 0)), (q.markers[0]._replace(lam=q.lambdas[0] - 1),))
    exact = float(family_distance(p, q, Density.LEBESGUE))
    approx = sum(sliced_symdiff_area(p.polygon.vertices, q.polygon.vertices,
                                     [(p.lambdas[0], u)], [(q.lambdas[0], u)]) for u in (0, 1))
    assert exact == pytest.approx(approx, abs=1e-3)
    rough = sum(sobol_symdiff_area(p.polygon.vertices, q.polygon.vertices,
                                   [(p.lambdas[0], u)], [(q.lambdas[0], u)]) for u in (0, 1))
    assert exact == pytest.approx(rough, abs=2e-2)


def test_family_distance_component_checks():
    p = realize(standard_fan(1))
    with pytest.raises(GeometryError, match="m_f mismatch"):
        family_distance(p, realize(standard_fan(2)))
    assert twisting_shift(p, p.act(3)) == 3
    assert family_distance(p, p.act(3)) == 0
    two = realize(standard_fan(2))
    bad = PrimitiveSemitoricPolygon(two.polygon, (two.markers[0], two.markers[1]._replace(k=1)))
    with pytest.raises(GeometryError, match="classes"):
        family_distance(two, bad)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 2))
def test_family_distance_metric_axioms(seed, c):
    rng = random.Random(seed)
    a, b, e = (realize(random_semitoric_fan(rng, c, 4), scale=rng.randint(1, 3)) for _ in range(3))
    d = lambda x, y: family_distance(x, y, Density.LEBESGUE)  # noqa: E731
    assert d(a, a) == 0
    assert d(a, b) == d(b, a) >= 0
    assert d(a, e) <= d(a, b) + d(b, e)


def test_same_fan_interpolate_example():
    out = same_fan_interpolate(SQUARE, rect(2, 1), Fr(1, 2))
    assert out == rect(Fr(3, 2), 1)
    with pytest.raises(GeometryError):
        same_fan_interpolate(SQUARE, TRIANGLE, Fr(1, 2))


def test_chop_family_on_square():
    p = realize(standard_fan(0))
    assert move_polygon_family(p, Chop(1), 0) == p
    end = move_polygon_family(p, Chop(1), 1)
    assert len(end.polygon) == 5
    assert end.fan.same_up_to_rotation(apply_move(p.fan, Chop(1)))


def test_remove_hidden_family_endpoint_labels():
    fan = SemitoricFan(((0, -1), (1, 0), (1, 1), (-1, 0), (-2, -1)), (D, D, D, D, H))
    p = realize(fan, scale=2)
    move = RemoveHidden(p.fan.labels.index(H))
    end = move_polygon_family(p, move, 1)
    assert end.fan.same_up_to_rotation(apply_move(fan, RemoveHidden(4)))
    assert (D, F) in {(a, b) for a, b in zip(end.fan.labels, end.fan.labels[1:] + end.fan.labels[:1])}


def test_family_rejects_bad_parameters():
    p = realize(standard_fan(0))
    with pytest.raises(GeometryError):
        move_polygon_family(p, Chop(0), 2)
    with pytest.raises(GeometryError):
        move_polygon_family(p, Chop(0), Fr(1, 2), eps0=5)
    one = realize(standard_fan(1))
    with pytest.raises(ValueError):
        move_polygon_family(one, Chop(one.fan.labels.index(F)), Fr(1, 2))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 2))
def test_move_families_hit_the_moved_fan(seed, c):
    rng = random.Random(seed)
    f = random_semitoric_fan(rng, c, 5)
    p = realize(f, scale=2)
    for m in applicable_moves(p.fan, rng):
        try:
            end = move_polygon_family(p, m, 1)
        except GeometryError:
            continue  # the corner is too short for this realization
        target = apply_move(p.fan, m)
        assert end.fan == target or end.fan.same_up_to_rotation(target)
        assert end.m_f == p.m_f
        mid = move_polygon_family(p, m, Fr(1, 3))
        assert mid.m_f == p.m_f


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 2))
def test_move_families_are_continuous(seed, c):
    rng = random.Random(seed)
    p = realize(random_semitoric_fan(rng, c, 4), scale=2)
    moves = [m for m in applicable_moves(p.fan, rng) if not isinstance(m, ActT)]
    for m in rng.sample(moves, min(2, len(moves))):
        try:
            members = [move_polygon_family(p, m, Fr(i, 32)) for i in range(33)]
        except GeometryError:
            continue
        jumps = [family_distance(a, b, Density.LEBESGUE) for a, b in zip(members, members[1:])]
        coarse = [family_distance(members[i], members[i + 8], Density.LEBESGUE) for i in range(0, 25, 8)]
        assert max(jumps) <= max(coarse)


def test_commute_family_moves_marker():
    fan = SemitoricFan(((-1, -1), (0, -1), (1, -1), (1, 0), (0, 1), (-1, 0)), (F, D, D, D, D, D))
    p = realize(fan, scale=4)
    out = move_polygon_family(p, CommuteFakeDelzant(p.fan.labels.index(F)), 1)
    assert out.fan.same_up_to_rotation(apply_move(fan, CommuteFakeDelzant(0)))
    assert out.lambdas != p.lambdas


def test_json_round_trip():
    assert PrimitiveSemitoricPolygon.from_json(STD1.to_json()) == STD1
    assert STD1.to_json()["markers"] == [{"lambda": "1", "eps": 1, "k": 0}]
