import itertools
from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from latticeiv import linalg

from strategies import int_matrices, symmetric_matrices


def sym_rank(a):
    return sympy.Matrix(a).rank()


def determinantal_divisors(a):
    """Smith invariants from gcds of k x k minors (independent of elimination)."""
    m, n = len(a), len(a[0])
    out, prev = [], 1
    M = sympy.Matrix(a)
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, int(M.extract(list(rows), list(cols)).det()))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def test_det_examples():
    assert linalg.det([[0, 1], [1, 0]]) == -1
    assert linalg.det([]) == 1
    assert linalg.det([[2, 4], [1, 2]]) == 0


def test_primitive_and_sign():
    assert linalg.primitive([Fraction(1, 2), 1]) == (1, 2)
    assert linalg.primitive([0, -4, 6]) == (0, -2, 3)
    assert linalg.canonical_sign((0, -1, 2)) == (0, 1, -2)
    with pytest.raises(ValueError):
        linalg.primitive([0, 0])


@given(int_matrices())
def test_det_and_rank_match_sympy(a):
    assert linalg.rank(a) == sym_rank(a)
    if len(a) == len(a[0]):
        assert linalg.det(a) == int(sympy.Matrix(a).det())


@given(int_matrices(rows=st.integers(1, 5), cols=st.integers(1, 5)))
def test_hnf_contract(a):
    h, u = linalg.hnf(a)
    assert abs(linalg.det(u)) == 1
    assert linalg.matmul(u, a) == h
    pivots = []
    for r in h:
        nz = [j for j, x in enumerate(r) if x]
        if not nz:
            continue
        pivots.append(nz[0])
    assert pivots == sorted(pivots) and len(set(pivots)) == len(pivots)
    for i, c in enumerate(pivots):
        assert h[i][c] > 0
        assert all(0 <= h[k][c] < h[i][c] for k in range(i))
    # zero rows at the bottom
    nonzero = [any(r) for r in h]
    assert nonzero == sorted(nonzero, reverse=True)


@given(int_matrices(rows=st.integers(1, 3), cols=st.integers(1, 3), entries=st.integers(-6, 6)))
def test_smith_matches_determinantal_divisors(a):
    d = [x for x in linalg.smith_diagonal(a) if x]
    assert d == determinantal_divisors(a)


@given(int_matrices(rows=st.integers(1, 3), cols=st.integers(2, 5)))
def test_integer_kernel_is_saturated_kernel(a):
    n = len(a[0])
    ker = linalg.integer_kernel(a, n)
    assert len(ker) == n - sym_rank(a)
    for v in ker:
        assert all(x == 0 for x in linalg.matvec(a, v))
    if ker:
        assert all(d == 1 for d in linalg.smith_diagonal(ker))


@given(int_matrices(rows=st.integers(1, 3), cols=st.integers(2, 4)))
def test_saturation_contains_span_and_is_primitive(a):
    n = len(a[0])
    sat = linalg.saturation(a, n)
    assert len(sat) == sym_rank(a)
    for v in a:
        if any(v):
            assert linalg.solve(linalg.transpose([list(s) for s in sat]), v) is not None
    if sat:
        assert all(d == 1 for d in linalg.smith_diagonal(sat))


def test_complete_basis_unimodular():
    cols = [(1, 2, 3), (0, 1, 1)]
    extra = linalg.complete_basis(cols, 3)
    assert abs(linalg.det([list(c) for c in cols] + [list(e) for e in extra])) == 1


def test_complete_basis_rejects_imprimitive():
    with pytest.raises(Exception):
        linalg.complete_basis([(2, 0)], 2)


@given(symmetric_matrices())
def test_solve_and_inverse(m):
    if linalg.det(m) == 0:
        return
    inv = linalg.inverse(m)
    assert linalg.matmul(m, inv) == linalg.identity(len(m))
    b = list(range(1, len(m) + 1))
    x = linalg.solve(m, b)
    assert linalg.matvec(m, x) == b
