import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from latticeiv import linalg
from latticeiv.enumeration import VectorQuery, fincke_pohst, isotropic_with_definite_part, short_vectors, vectors_in_box
from latticeiv.errors import LatticeError
from latticeiv.k3 import U3_COORDS, k3_context
from latticeiv.lattice import IntLattice, direct_sum, inner, is_definite, k3_vector, make_standard, rescale

from strategies import symmetric_matrices

E8m = make_standard("E", 8, -1)
U = make_standard("U")


def grid(L, box, ok):
    """Every nonzero vector in the box satisfying ``ok`` (plain Python loop)."""
    out = []
    for v in itertools.product(range(-box, box + 1), repeat=L.rank):
        if any(v) and ok(v):
            out.append(v)
    return out


class TestShortVectors:
    def test_e8_roots(self):
        roots = short_vectors(E8m, VectorQuery(norm=-2))
        assert len(roots) == 120
        # every root is ± a nonnegative combination bounded by the highest root
        theta = (2, 3, 4, 6, 5, 4, 3, 2)
        X = np.array(list(itertools.product(*[range(t + 1) for t in theta])))
        G = np.array(E8m.gram)
        norms = np.einsum("ij,jk,ik->i", X, G, X)
        box = {tuple(int(t) for t in v) for v in X[norms == -2]}
        assert set(roots) == box

    def test_small_cases(self):
        assert short_vectors(make_standard("A", 1, -1), VectorQuery(norm=-2)) == [(1,)]
        assert short_vectors(E8m, VectorQuery(norm=-1)) == []

    def test_indefinite_rejected(self):
        with pytest.raises(LatticeError):
            short_vectors(U, VectorQuery(norm=0))

    def test_pairing_breaks_sign_symmetry(self):
        A2 = make_standard("A", 2)
        got = short_vectors(A2, VectorQuery(norm=2, pairings=(((1, 0), 1),)))
        assert all(inner(A2, v, (1, 0)) == 1 for v in got)
        assert len(got) == 2

    @given(symmetric_matrices(n=st.integers(1, 3), entries=st.integers(-3, 3)), st.integers(1, 8))
    def test_agrees_with_grid(self, m, bound):
        L = IntLattice(m, even=False)
        s = is_definite(L)
        if s == 0:
            return
        lo, hi = (1, bound) if s > 0 else (-bound, -1)
        got = short_vectors(L, VectorQuery(norm=(lo, hi)))
        # every vector is reverified, and matches a brute-force box of radius derived from the inverse
        inv = np.linalg.inv(s * np.array(m, dtype=float))
        b = int(np.floor(np.sqrt(bound * inv.diagonal().max()) + 1e-9))
        want = sorted({linalg.canonical_sign(v) for v in grid(L, b, lambda v: lo <= inner(L, v, v) <= hi)})
        assert got == want

    def test_fincke_pohst_includes_zero_and_signs(self):
        vs = set(fincke_pohst([[2]], 2))
        assert vs == {(0,), (1,), (-1,)}


class TestBoxWindows:
    def test_requires_box(self):
        with pytest.raises(LatticeError):
            vectors_in_box(U, VectorQuery(norm=0))

    def test_u_isotropic(self):
        got = vectors_in_box(U, VectorQuery(norm=0, primitive_only=True, box_bound=1))
        assert got == [(0, 1), (1, 0)]

    def test_box_zero(self):
        assert vectors_in_box(U, VectorQuery(norm=2, box_bound=0)) == []

    def test_k3_window_contains_triple(self):
        ctx = k3_context(4)
        q = VectorQuery(norm=0, pairings=((ctx.h, 2),), box_bound=2, support=U3_COORDS)
        got = set(vectors_in_box(ctx.lattice, q))
        for v in (k3_vector(f3=2, f2=1), k3_vector(f3=2, e2=1), k3_vector(e3=1, f3=-1, e2=-1, f2=-1)):
            assert v in got
        assert all(inner(ctx.lattice, v, v) == 0 and inner(ctx.lattice, v, ctx.h) == 2 for v in got)

    @given(st.integers(-2, 2), st.integers(0, 3))
    def test_matches_grid_on_u_plus_a2(self, norm, box):
        L = direct_sum(U, make_standard("A", 2, -1))
        got = vectors_in_box(L, VectorQuery(norm=norm, box_bound=box))
        want = sorted({linalg.canonical_sign(v) for v in grid(L, box, lambda v: inner(L, v, v) == norm)})
        assert got == want


class TestIsotropicDefinitePart:
    def test_enriques_window(self):
        L = rescale(direct_sum(U, make_standard("E", 8, -1)), 2)
        w = (1, 1) + (0,) * 8
        got = isotropic_with_definite_part(L, w, 2, primitive_only=False)
        assert sorted(got) == [(0, 1) + (0,) * 8, (1, 0) + (0,) * 8]
        assert isotropic_with_definite_part(L, w, 2, primitive_only=False, radius_slack=3) == got

    def test_complete_against_box(self):
        L = direct_sum(U, make_standard("A", 1, -1))
        w = (1, 1, 0)
        got = isotropic_with_definite_part(L, w, 1, primitive_only=False)
        box = sorted(vectors_in_box(L, VectorQuery(norm=0, pairings=((w, 1),), box_bound=5)))
        assert got == box
        assert isotropic_with_definite_part(L, w, 1, primitive_only=False, radius_slack=4) == got

    @given(st.integers(1, 4))
    def test_radius_saturation(self, value):
        L = direct_sum(U, make_standard("A", 2, -1))
        w = (1, 2, 0, 0)
        base = isotropic_with_definite_part(L, w, value, primitive_only=False)
        assert isotropic_with_definite_part(L, w, value, primitive_only=False, radius_slack=3) == base
        for v in base:
            assert inner(L, v, v) == 0 and inner(L, v, w) == value

    def test_split_form_required(self):
        L = IntLattice([[0, 1, 1], [1, 0, 0], [1, 0, -2]])
        with pytest.raises(LatticeError):
            isotropic_with_definite_part(L, (1, 1, 0), 1)
