import itertools
import random

import pytest
from hypothesis import given, strategies as st

from latticeiv import linalg
from latticeiv.acceptance import oracle_sign_cells, random_fan_instance
from latticeiv.cones import (
    cone_cut,
    cone_hull,
    fan_from_hyperplanes,
    fan_from_points,
    intersect,
    isotropic_center,
    plane_support_space,
    support_space,
)
from latticeiv.errors import LatticeError
from latticeiv.k3 import k3_context, plane_support_example

QUADRANT = cone_hull([(1, 0), (0, 1)])
HYPERBOLIC_2 = [[0, 1], [1, 0]]
FORM_3 = [[0, 1, 0], [1, 0, 0], [0, 0, -2]]


def span_equal(a, b, n):
    a = [list(v) for v in a]
    b = [list(v) for v in b]
    if not a or not b:
        return not a and not b
    return linalg.rank(a) == linalg.rank(b) == linalg.rank(a + b)


def counts(fan):
    by_dim = {}
    for c in fan.cones:
        by_dim[c.dim] = by_dim.get(c.dim, 0) + 1
    return by_dim


def test_quadrant_descriptions():
    assert set(QUADRANT.facets) == {(1, 0), (0, 1)}
    assert QUADRANT.equations == ()
    assert QUADRANT.dim == 2


def test_double_description_of_a_wedge():
    c = cone_hull([(1, 1), (1, -1)])
    assert set(c.facets) == {(1, -1), (1, 1)}
    assert cone_cut(c.facets).rays == c.rays


def test_line_is_rejected():
    with pytest.raises(LatticeError):
        cone_hull([(1, 0), (-1, 0)])


def test_redundant_generators_are_dropped_and_rays_primitive():
    c = cone_hull([(2, 0), (0, 3), (1, 1), (5, 5)])
    assert c.rays == ((0, 1), (1, 0))


def test_lower_dimensional_cone_keeps_equations():
    c = cone_hull([(1, 0, 0), (0, 1, 0)])
    assert c.dim == 2
    assert len(c.equations) == 1
    assert c.contains((3, 4, 0)) and not c.contains((1, 1, 1))


def test_faces_of_the_quadrant():
    faces = QUADRANT.faces()
    assert len(faces) == 4
    assert {f.dim for f in faces} == {0, 1, 2}


def test_one_hyperplane_splits_the_quadrant():
    fan = fan_from_hyperplanes(QUADRANT, [(1, -1)])
    assert len(fan.cones) == 6
    assert counts(fan) == {0: 1, 1: 3, 2: 2}
    assert fan.check_face_closure() and fan.check_intersections()


def test_two_hyperplanes_in_the_quadrant():
    fan = fan_from_hyperplanes(QUADRANT, [(1, -1), (1, -2)])
    assert counts(fan) == {0: 1, 1: 4, 2: 3}


def test_no_hyperplanes_gives_the_face_fan():
    fan = fan_from_hyperplanes(QUADRANT, [])
    assert {c.rays for c in fan.cones} == {f.rays for f in QUADRANT.faces()}


def test_hyperplane_missing_the_interior_changes_nothing():
    fan = fan_from_hyperplanes(QUADRANT, [(1, 1)])
    assert len(fan.chambers) == 1


def test_points_split_along_the_diagonal():
    fan = fan_from_points(QUADRANT, HYPERBOLIC_2, [(1, 0), (0, 1)])
    assert sorted(c.rays for c in fan.chambers) == [((0, 1), (1, 1)), ((1, 0), (1, 1))]


def test_single_or_repeated_points():
    one = fan_from_points(QUADRANT, HYPERBOLIC_2, [(1, 1)])
    assert len(one.chambers) == 1
    a = fan_from_points(QUADRANT, HYPERBOLIC_2, [(1, 0), (0, 1)])
    b = fan_from_points(QUADRANT, HYPERBOLIC_2, [(1, 0), (0, 1), (1, 0)])
    assert {c.rays for c in a.cones} == {c.rays for c in b.cones}


def test_points_need_positive_pairing():
    with pytest.raises(LatticeError):
        fan_from_points(QUADRANT, HYPERBOLIC_2, [])
    with pytest.raises(LatticeError):
        fan_from_points(QUADRANT, HYPERBOLIC_2, [(-1, 0)])


def test_min_pairing_is_linear_on_each_chamber():
    pts = [(1, 0), (0, 1), (1, 1), (2, 1)]
    fan = fan_from_points(QUADRANT, HYPERBOLIC_2, pts)

    def pairing(x, p):
        return x[0] * p[1] + x[1] * p[0]

    for ch in fan.chambers:
        # one point realises the minimum on every ray of the chamber
        assert any(all(pairing(r, p) == min(pairing(r, q) for q in pts) for r in ch.rays) for p in pts)


def _isotropic_fan():
    pi = cone_hull([(1, 0, 0), (0, 1, 0), (1, 1, 1)])
    return pi, fan_from_hyperplanes(pi, [], form=FORM_3)


def test_support_of_an_isotropic_ray():
    pi, fan = _isotropic_fan()
    ray = cone_hull([(1, 0, 0)])
    rep = support_space(fan, ray)
    assert not rep.meets_positive_cone
    assert span_equal(rep.support_space, [(1, 0, 0), (0, 0, 1)], 3)
    assert span_equal(rep.isotropic_center, [(1, 0, 0)], 3)


def test_support_of_an_isotropic_ray_cut_by_a_hyperplane():
    _, fan = _isotropic_fan()
    rep = support_space(fan, cone_hull([(1, 0, 0)]), hyperplanes=[(0, 0, 1)])
    assert span_equal(rep.support_space, [(1, 0, 0)], 3)
    assert span_equal(rep.isotropic_center, [(1, 0, 0)], 3)


def test_support_of_a_positive_chamber():
    pi, fan = _isotropic_fan()
    rep = support_space(fan, pi)
    assert rep.meets_positive_cone
    assert linalg.rank([list(v) for v in rep.support_space]) == 3
    assert rep.isotropic_center == ()


def test_support_space_errors():
    _, fan = _isotropic_fan()
    with pytest.raises(LatticeError):
        support_space(fan, cone_hull([(1, 2, 3)]))
    with pytest.raises(LatticeError):
        support_space(fan_from_hyperplanes(QUADRANT, []), QUADRANT)


def test_plane_support_without_hyperplanes_is_the_perp():
    form = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    J = [(1, 0, 0, 0), (0, 0, 1, 0)]
    assert span_equal(plane_support_space(form, J, []), J, 4)
    form5 = [[0, 1, 0, 0, 0], [1, 0, 0, 0, 0], [0, 0, 0, 1, 0], [0, 0, 1, 0, 0], [0, 0, 0, 0, -2]]
    J5 = [(1, 0, 0, 0, 0), (0, 0, 1, 0, 0)]
    got = plane_support_space(form5, J5, [])
    assert span_equal(got, J5 + [(0, 0, 0, 0, 1)], 5)
    assert span_equal(plane_support_space(form5, J5, [(0, 0, 0, 0, 1)]), J5, 5)


def test_plane_support_rejects_bad_planes():
    form = [[0, 1], [1, 0]]
    with pytest.raises(LatticeError):
        plane_support_space(form, [(1, 0), (0, 1)], [])
    with pytest.raises(LatticeError):
        plane_support_space(form, [(1, 0), (2, 0)], [])


@pytest.mark.parametrize("g", [2, 3, 5])
def test_plane_support_in_the_k3_lattice_has_rank_three(g):
    space = plane_support_example(g)
    assert linalg.rank([list(v) for v in space]) == 3
    ctx = k3_context(g)
    n = ctx.lattice.rank
    e1 = tuple(int(i == 16) for i in range(n))
    e2 = tuple(int(i == 18) for i in range(n))
    assert linalg.rank([list(v) for v in space] + [list(e1), list(e2)]) == 3


def test_isotropic_center_is_isotropic():
    center = isotropic_center(FORM_3, [(1, 0, 0), (0, 0, 1)], 3)
    for a in center:
        for b in center:
            assert sum(x * y for x, y in zip(a, linalg.matvec(FORM_3, list(b)))) == 0


@given(st.integers(0, 10**6))
def test_random_fans_match_the_sign_cell_oracle(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3])
    facets, hyps = random_fan_instance(rng, n, rng.randint(1, 4))
    fan = fan_from_hyperplanes(cone_cut(facets, n), hyps)
    assert len(fan.chambers) == len(oracle_sign_cells(facets, hyps, n))
    assert fan.check_face_closure() and fan.check_intersections()


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=5))
def test_hull_contains_its_generators(gens):
    gens = [g for g in gens if any(g)]
    if not gens:
        return
    try:
        c = cone_hull(gens, 3)
    except LatticeError:
        return
    assert all(c.contains(g) for g in gens)
    assert cone_hull(c.rays, 3).facets == c.facets
    i = intersect(c, c)
    assert i.rays == c.rays
    for f in c.faces():
        assert c.has_face(f)
