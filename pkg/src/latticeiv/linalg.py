"""Exact integer and rational linear algebra on nested lists.

Matrices are lists of rows.  Integer routines never leave ``int``; rational
routines work over :class:`fractions.Fraction`.  Nothing here touches floating
point, so every identity checked downstream is an exact identity.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def block_diag(*blocks: Sequence[Sequence[int]]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return out


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector on the ray of a rational vector ``v`` (nonzero)."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    iv = [int(Fraction(x) * den) for x in v]
    g = content(iv)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in iv)


def canonical_sign(v: Sequence[int]) -> tuple[int, ...]:
    """Flip ``v`` so that its first nonzero coordinate is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def det(a: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rref(a: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x in Q^n : a x = 0}``."""
    if not a:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    n = len(a[0])
    m, piv = rref(a)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for r, p in enumerate(piv):
            x[p] = -m[r][f]
        basis.append(x)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One rational solution of ``a x = b`` (free variables set to 0), or None."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    m, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for r, p in enumerate(piv):
        x[p] = m[r][n]
    return x


def inverse(a: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(a)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    m, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in m[:n]]


def hnf(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ a == h``; ``h`` is in
    echelon form with positive pivots and entries above each pivot reduced
    into ``[0, pivot)``.  Zero rows sit at the bottom.
    """
    h = [list(map(int, r)) for r in a]
    rows = len(h)
    cols = len(h[0]) if rows else 0
    u = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        for i in range(r + 1, rows):
            if h[i][c] == 0:
                continue
            a0, b0 = h[r][c], h[i][c]
            g, s, t = xgcd(a0, b0)
            p, q = a0 // g, b0 // g
            hr, hi = h[r], h[i]
            h[r] = [s * x + t * y for x, y in zip(hr, hi)]
            h[i] = [-q * x + p * y for x, y in zip(hr, hi)]
            ur, ui = u[r], u[i]
            u[r] = [s * x + t * y for x, y in zip(ur, ui)]
            u[i] = [-q * x + p * y for x, y in zip(ur, ui)]
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        piv = h[r][c]
        for i in range(r):
            f = h[i][c] // piv
            if f:
                h[i] = [x - f * y for x, y in zip(h[i], h[r])]
                u[i] = [x - f * y for x, y in zip(u[i], u[r])]
        r += 1
    return h, u


def lattice_basis(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Canonical (HNF) basis of the Z-span of integer vectors."""
    if not vectors:
        return []
    h, _ = hnf(vectors)
    return [tuple(r) for r in h if any(r)]


def integer_kernel(a: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """HNF basis of ``{x in Z^n : a x = 0}``; always a saturated sublattice."""
    if not a:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    at = transpose(a)
    h, u = hnf(at)
    ker = [u[i] for i in range(ncols) if not any(h[i])]
    return lattice_basis(ker)


def integer_vector(v: Sequence) -> list[int]:
    """Clear denominators of a rational vector (not made primitive)."""
    den = 1
    for x in v:
        d = Fraction(x).denominator
        den = den * d // gcd(den, d)
    return [int(Fraction(x) * den) for x in v]


def saturation(vectors: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """HNF basis of ``span_Q(vectors) ∩ Z^n``."""
    vs = [list(v) for v in vectors if any(v)]
    if not vs:
        return []
    ann = [integer_vector(y) for y in nullspace(vs)]
    return integer_kernel(ann, n)


def smith_diagonal(a: Sequence[Sequence[int]]) -> list[int]:
    """Nonnegative Smith invariants d_1 | d_2 | ... (length = min shape)."""
    m = [list(map(int, r)) for r in a]
    if not m or not m[0]:
        return []
    for _ in range(4 * (len(m) + len(m[0])) + 8):
        m, _ = hnf(m)
        m = transpose(m)
        if all(m[i][j] == 0 for i in range(len(m)) for j in range(len(m[0])) if i != j):
            break
    diag = [abs(m[i][i]) for i in range(min(len(m), len(m[0])))]
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                a0, b0 = diag[i], diag[j]
                if a0 == 0 and b0 == 0:
                    continue
                g = gcd(a0, b0)
                l = a0 * b0 // g if g else 0
                if (a0, b0) != (g, l):
                    diag[i], diag[j] = g, l
                    changed = True
    zeros = diag.count(0)
    return sorted(d for d in diag if d) + [0] * zeros


def complete_basis(cols: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Extend a saturated family of vectors to a basis of Z^n.

    Returns the added vectors ``q`` so that ``cols + q`` is a Z-basis.
    Raises if the family does not span a saturated sublattice.
    """
    k = len(cols)
    if k == 0:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    # Rows of u are a unimodular change with u @ A = [H; 0] for A = cols as columns.
    a = transpose([list(c) for c in cols])
    h, u = hnf(a)
    top = [h[i] for i in range(k)]
    if abs(det(top)) != 1:
        raise ValueError("vectors do not span a primitive sublattice")
    uinv = inverse(u)
    return [tuple(int(uinv[i][j]) for i in range(n)) for j in range(k, n)]
