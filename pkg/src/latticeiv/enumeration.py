"""Vector searches: complete short-vector lists in definite lattices
(Fincke-Pohst over exact rational Cholesky data) and coordinate-box windows in
indefinite ones."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .errors import LatticeError
from .lattice import IntLattice, Vector, inner, is_definite, signature_of_matrix

MAX_WINDOW = 20_000_000


@dataclass(frozen=True)
class VectorQuery:
    """Conditions on a lattice vector.

    ``norm`` is an exact value or an inclusive ``(lo, hi)`` range.  Each pairing
    ``(w, c)`` demands ``v.w == c``.  ``box_bound`` bounds every coordinate and
    is mandatory for indefinite lattices; ``support`` optionally restricts the
    window to vectors vanishing outside the listed coordinates.
    """

    norm: int | tuple[int, int]
    pairings: tuple[tuple[Vector, int], ...] = ()
    primitive_only: bool = False
    box_bound: int | None = None
    support: tuple[int, ...] | None = None

    @property
    def norm_range(self) -> tuple[int, int]:
        if isinstance(self.norm, tuple):
            lo, hi = self.norm
            return (min(lo, hi), max(lo, hi))
        return (self.norm, self.norm)

    @property
    def sign_symmetric(self) -> bool:
        return all(c == 0 for _, c in self.pairings)

    def accepts(self, L: IntLattice, v: Sequence[int]) -> bool:
        lo, hi = self.norm_range
        if not any(v):
            return False
        if not lo <= inner(L, v, v) <= hi:
            return False
        if any(inner(L, v, w) != c for w, c in self.pairings):
            return False
        if self.box_bound is not None and max(abs(x) for x in v) > self.box_bound:
            return False
        if self.support is not None and any(v[i] for i in range(len(v)) if i not in self.support):
            return False
        return not (self.primitive_only and linalg.content(v) != 1)


def _finalize(L: IntLattice, query: VectorQuery, found) -> list[Vector]:
    out = set()
    for v in found:
        v = tuple(int(x) for x in v)
        if not query.accepts(L, v):
            continue
        if query.sign_symmetric:
            v = linalg.canonical_sign(v)
        out.add(v)
    return sorted(out)


# ---------------------------------------------------------------- Fincke-Pohst

def _ldl(gram: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """The Fincke-Pohst coefficients: Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2."""
    n = len(gram)
    q = [[Fraction(x) for x in row] for row in gram]
    for i in range(n):
        if q[i][i] <= 0:
            raise LatticeError("form is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def fincke_pohst(gram: Sequence[Sequence[int]], bound: int, box: int | None = None) -> Iterator[tuple[int, ...]]:
    """All integer x (both signs, zero included) with xᵀ gram x <= bound.

    ``gram`` must be positive definite.  Candidate ranges per coordinate come
    from a float square root widened by one; every candidate is then accepted
    or rejected by the exact rational inequality, so the output is exact.
    """
    n = len(gram)
    if n == 0:
        yield ()
        return
    if bound < 0:
        return
    q = _ldl(gram)
    x = [0] * n
    bound = Fraction(bound)

    def rec(i: int, remaining: Fraction):
        c = sum((q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        r = math.sqrt(float(remaining / q[i][i]))
        lo = math.floor(-c - r) - 1
        hi = math.ceil(-c + r) + 1
        if box is not None:
            lo, hi = max(lo, -box), min(hi, box)
        for xi in range(lo, hi + 1):
            t = xi + c
            used = q[i][i] * t * t
            if used > remaining:
                continue
            x[i] = xi
            if i == 0:
                yield tuple(x)
            else:
                yield from rec(i - 1, remaining - used)
        x[i] = 0

    yield from rec(n - 1, bound)


def short_vectors(L: IntLattice, query: VectorQuery) -> list[Vector]:
    """Every nonzero vector of a definite lattice meeting ``query``.

    If every required pairing value is 0 the answer is closed under ``v -> -v``
    and each ± pair is reported once, first nonzero coordinate positive.
    """
    sign = is_definite(L)
    if sign == 0:
        raise LatticeError("short_vectors needs a definite lattice; use vectors_in_box")
    lo, hi = query.norm_range
    gram = [[sign * x for x in row] for row in L.gram]
    bound = max(sign * lo, sign * hi)
    if bound <= 0:
        return []
    return _finalize(L, query, fincke_pohst(gram, bound, query.box_bound))


# ------------------------------------------------------------------ box windows

def _components(gram: Sequence[Sequence[int]], idx: Sequence[int]) -> list[list[int]]:
    idx = list(idx)
    seen, comps = set(), []
    for s in idx:
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in idx:
                if j not in seen and gram[i][j] != 0:
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def _box_grid(k: int, b: int) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    axes = [np.arange(-b, b + 1, dtype=np.int64)] * k
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, k)


def vectors_in_box(L: IntLattice, query: VectorQuery) -> list[Vector]:
    """Nonzero vectors meeting ``query`` inside the coordinate box (a window).

    Complete within the window only.  The supported coordinates are split into
    orthogonal blocks; definite blocks of one sign are searched by Fincke-Pohst
    against the norm still needed, the remaining coordinates by brute force.
    """
    if query.box_bound is None:
        raise LatticeError("vectors_in_box needs an explicit box_bound")
    b = query.box_bound
    n = L.rank
    if b < 0:
        return []
    support = sorted(set(range(n) if query.support is None else query.support))
    g = L.gram
    blocks = _components(g, support)
    signs = [is_definite(IntLattice([[g[i][j] for j in c] for i in c], even=False)) for c in blocks]
    neg = [i for c, s in zip(blocks, signs) if s < 0 for i in c]
    pos = [i for c, s in zip(blocks, signs) if s > 0 for i in c]
    if neg and pos:
        if len(pos) <= len(neg):
            pos = []
        else:
            neg = []
    dcoords, dsign = (neg, -1) if neg else (pos, 1)
    fcoords = [i for i in support if i not in dcoords]
    if (2 * b + 1) ** len(fcoords) > MAX_WINDOW:
        raise LatticeError("box window too large; restrict the support or the bound")

    lo, hi = query.norm_range
    full_forms = np.array([L.pairing_form(w) for w, _ in query.pairings], dtype=object).reshape(len(query.pairings), n)
    targets = np.array([c for _, c in query.pairings], dtype=np.int64)
    gf = np.array([[g[i][j] for j in fcoords] for i in fcoords], dtype=np.int64).reshape(len(fcoords), len(fcoords))
    pf = full_forms[:, fcoords].astype(np.int64) if len(query.pairings) else np.zeros((0, len(fcoords)), np.int64)
    pd = full_forms[:, dcoords].astype(np.int64) if len(query.pairings) else np.zeros((0, len(dcoords)), np.int64)
    d_free_rows = [k for k in range(len(query.pairings)) if not pd[k].any()]

    free = _box_grid(len(fcoords), b)
    fnorm = np.einsum("ij,jk,ik->i", free, gf, free)
    fpair = free @ pf.T
    keep = np.ones(len(free), dtype=bool)
    for k in d_free_rows:
        keep &= fpair[:, k] == targets[k]
    free, fnorm, fpair = free[keep], fnorm[keep], fpair[keep]

    dgram = [[dsign * g[i][j] for j in dcoords] for i in dcoords]
    cache: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def dpart(bound: int):
        if bound not in cache:
            vs = list(fincke_pohst(dgram, bound, b)) if dcoords else [()]
            arr = np.array(vs, dtype=np.int64).reshape(len(vs), len(dcoords))
            dn = np.einsum("ij,jk,ik->i", arr, np.array(dgram, dtype=np.int64).reshape(len(dcoords), len(dcoords)), arr) * dsign
            cache[bound] = (arr, dn, arr @ pd.T)
        return cache[bound]

    found = []
    for u, un, up in zip(free, fnorm, fpair):
        need_lo, need_hi = lo - int(un), hi - int(un)
        bound = max(dsign * need_lo, dsign * need_hi)
        if bound < 0:
            continue
        arr, dn, dp = dpart(bound)
        mask = (dn >= need_lo) & (dn <= need_hi)
        if len(query.pairings):
            mask &= np.all(dp + up == targets, axis=1)
        for d in arr[mask]:
            v = [0] * n
            for i, x in zip(fcoords, u):
                v[i] = int(x)
            for i, x in zip(dcoords, d):
                v[i] = int(x)
            found.append(v)
    return _finalize(L, query, found)


# --------------------------------------------------- hyperbolic plane + definite

def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


def _solve_plane(h: Sequence[Sequence[int]], w: Sequence[int], c: int, n: int) -> list[tuple[int, int]]:
    """Integer (a, b) with form value n and pairing c against w in a rank-2 form."""
    (al, be), (_, ga) = h
    A = al * w[0] + be * w[1]
    B = be * w[0] + ga * w[1]
    sols = set()
    if B != 0:
        # b = (c - A a) / B ;  al a^2 + 2 be a b + ga b^2 = n
        P = Fraction(al) - Fraction(2 * be * A, B) + Fraction(ga * A * A, B * B)
        Q = Fraction(2 * be * c, B) - Fraction(2 * ga * A * c, B * B)
        R = Fraction(ga * c * c, B * B) - n
        roots = _quad_roots(P, Q, R)
        for a in roots:
            bb = (c - A * a) / Fraction(B)
            if a.denominator == 1 and bb.denominator == 1:
                sols.add((int(a), int(bb)))
    else:
        if A == 0:
            raise LatticeError("pairing vector has no component in the hyperbolic block")
        a = Fraction(c, A)
        if a.denominator == 1:
            for bb in _quad_roots(Fraction(ga), Fraction(2 * be) * a, al * a * a - n):
                if bb.denominator == 1:
                    sols.add((int(a), int(bb)))
    return sorted(sols)


def _quad_roots(P: Fraction, Q: Fraction, R: Fraction) -> list[Fraction]:
    if P == 0:
        if Q == 0:
            if R == 0:
                raise LatticeError("degenerate plane equation (infinitely many solutions)")
            return []
        return [-R / Q]
    s = _rational_sqrt(Q * Q - 4 * P * R)
    if s is None:
        return []
    return sorted({(-Q + s) / (2 * P), (-Q - s) / (2 * P)})


def isotropic_with_definite_part(
    L: IntLattice,
    w: Sequence[int],
    value: int,
    hyperbolic: tuple[int, int] = (0, 1),
    primitive_only: bool = True,
    radius_slack: int = 0,
) -> list[Vector]:
    """All isotropic v with v.w == value in L = H ⊕ D (H a rank-2 indefinite
    block on the ``hyperbolic`` coordinates, D definite on the rest).

    Complete: for w.w > 0 the definite part obeys |d.d| <= value^2/(√q-√W)^2
    with q = w_H.w_H and W = |w_D.w_D|; those d come from Fincke-Pohst and the
    hyperbolic coordinates are then solved exactly.  ``radius_slack`` enlarges
    the definite search radius (the answer must not change).
    """
    n = L.rank
    hi = list(hyperbolic)
    di = [i for i in range(n) if i not in hi]
    g = L.gram
    if len(set(hi)) != 2 or any(g[i][j] for i in hi for j in di):
        raise LatticeError("lattice is not split as (rank-2 block) ⊕ (rest) on these coordinates")
    hgram = [[g[i][j] for j in hi] for i in hi]
    if linalg.det(hgram) >= 0:
        raise LatticeError("the rank-2 block must be indefinite and nondegenerate")
    dgram = [[g[i][j] for j in di] for i in di]
    dsign = is_definite(IntLattice(dgram, even=False)) if di else -1
    if dsign == 0:
        raise LatticeError("complement of the rank-2 block must be definite")
    flip = -dsign  # multiply the form by `flip` so that D is negative definite
    hg = [[flip * x for x in r] for r in hgram]
    dg = [[flip * x for x in r] for r in dgram]
    c = flip * value
    ww = flip * inner(L, w, w)
    if ww <= 0:
        raise LatticeError("pairing vector must have positive norm (after orienting D negative)")
    wh = [w[i] for i in hi]
    wd = [w[i] for i in di]
    q = linalg.dot(wh, linalg.matvec(hg, wh))
    W = -linalg.dot(wd, linalg.matvec(dg, wd)) if di else 0
    if c == 0:
        return []
    radius = (abs(c) / (math.sqrt(q) - math.sqrt(W))) ** 2
    nmax = int(math.floor(radius)) + 1 + radius_slack
    found = set()
    neg_d = [[-x for x in r] for r in dg]
    for d in fincke_pohst(neg_d, nmax) if di else [()]:
        dn = -linalg.dot(d, linalg.matvec(neg_d, d)) if di else 0
        cp = c - (linalg.dot(d, linalg.matvec(dg, wd)) if di else 0)
        for a, bb in _solve_plane(hg, wh, cp, -dn):
            v = [0] * n
            v[hi[0]], v[hi[1]] = a, bb
            for i, x in zip(di, d):
                v[i] = x
            found.add(tuple(v))
    query = VectorQuery(norm=0, pairings=((tuple(w), value),), primitive_only=primitive_only)
    return _finalize(L, query, found)
