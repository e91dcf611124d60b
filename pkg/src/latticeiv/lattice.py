"""Integral lattices given by Gram matrices, and their basic invariants."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import LatticeError

Vector = tuple[int, ...]


@dataclass(frozen=True)
class Signature:
    positive: int
    negative: int
    null: int

    @property
    def rank(self) -> int:
        return self.positive + self.negative + self.null

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.positive, self.negative, self.null)


@dataclass(frozen=True)
class IntLattice:
    """A free Z-module with an integral symmetric bilinear form.

    ``gram`` is stored as a tuple of tuples.  With ``even=True`` (default)
    every diagonal entry must be even.
    """

    gram: tuple[tuple[int, ...], ...]
    label: str = ""
    even: bool = True

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise LatticeError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise LatticeError("Gram matrix must be symmetric")
        if self.even and any(g[i][i] % 2 for i in range(n)):
            raise LatticeError("odd diagonal entry in an even lattice")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def inner(self, x: Sequence[int], y: Sequence[int]):
        return inner(self, x, y)

    def norm(self, x: Sequence[int]):
        return inner(self, x, x)

    def pairing_form(self, x: Sequence[int]) -> tuple:
        """Linear functional ``y -> x . y`` as a coefficient vector."""
        self._check_dim(x)
        return tuple(linalg.matvec(self.gram, x))

    def _check_dim(self, x):
        if len(x) != self.rank:
            raise LatticeError(f"vector of length {len(x)} in a rank {self.rank} lattice")

    def __str__(self):
        return self.label or f"<lattice rank {self.rank}>"


@dataclass(frozen=True)
class LatticeMap:
    """Integer matrix whose columns are the images of the source basis."""

    matrix: tuple[tuple[int, ...], ...]
    source: IntLattice
    target: IntLattice

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)

    def __call__(self, v: Sequence[int]) -> Vector:
        return tuple(linalg.matvec(self.matrix, v))

    def compose(self, other: "LatticeMap") -> "LatticeMap":
        """``self ∘ other``."""
        return LatticeMap(linalg.matmul(self.matrix, other.matrix), other.source, self.target)

    def determinant(self) -> int:
        return linalg.det(self.matrix)


@dataclass(frozen=True)
class DiscriminantGroup:
    divisors: tuple[int, ...] = field(default_factory=tuple)

    @property
    def order(self) -> int:
        out = 1
        for d in self.divisors:
            out *= d
        return out


# ---------------------------------------------------------------- constructors

def _cartan_from_edges(n: int, edges: Iterable[tuple[int, int]], sign: int) -> list[list[int]]:
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2 * sign
    for i, j in edges:
        g[i][j] = g[j][i] = -sign
    return g


def root_lattice_edges(kind: str, k: int) -> list[tuple[int, int]]:
    """Dynkin-diagram edges in the fixed node order used across the package.

    A_k: a path 0-1-...-(k-1).  D_k: nodes 0 and 1 are the two short legs, both
    joined to node 2, then a path 2-3-...-(k-1); D_2 is two isolated nodes and
    D_3 is the path 0-2-1 (A_3).  E_k: Bourbaki labels shifted by one, i.e. the
    path 0-2-3-...-(k-1) with node 1 attached to node 3.
    """
    if kind == "A":
        if k < 1:
            raise LatticeError("A(k) needs k >= 1")
        return [(i, i + 1) for i in range(k - 1)]
    if kind == "D":
        if k < 2:
            raise LatticeError("D(k) needs k >= 2")
        edges = [(0, 2), (1, 2)] if k >= 3 else []
        edges += [(i, i + 1) for i in range(2, k - 1)]
        return edges
    if kind == "E":
        if k not in (6, 7, 8):
            raise LatticeError("E(k) needs k in {6, 7, 8}")
        return [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, k - 1)]
    raise LatticeError(f"unknown root lattice type {kind!r}")


def make_standard(name: str, n: int | None = None, sign: int = 1) -> IntLattice:
    """Standard lattices: ``U``, ``I`` (rank one, Gram ``[[n]]``), ``A``, ``D``, ``E``.

    Root lattices are positive definite for ``sign=1`` and negative definite
    for ``sign=-1``.  ``sign`` is ignored for ``U`` and ``I``.
    """
    name = name.upper()
    if name == "U":
        return IntLattice(((0, 1), (1, 0)), label="U")
    if name == "I":
        if n is None or n == 0:
            raise LatticeError("I(n) needs a nonzero integer n")
        return IntLattice(((n,),), label=f"I({n})", even=n % 2 == 0)
    if name in ("A", "D", "E"):
        if n is None:
            raise LatticeError(f"{name}(k) needs k")
        if sign not in (1, -1):
            raise LatticeError("sign must be +1 or -1")
        g = _cartan_from_edges(n, root_lattice_edges(name, n), sign)
        return IntLattice(g, label=f"{name}{n}" + ("(-1)" if sign < 0 else ""))
    if name.startswith("LEECH"):
        raise LatticeError("the Leech lattice is not provided")
    raise LatticeError(f"unknown standard lattice {name!r}")


def zero_lattice() -> IntLattice:
    return IntLattice((), label="0")


def direct_sum(*lattices: IntLattice, label: str | None = None) -> IntLattice:
    gram = linalg.block_diag(*(L.gram for L in lattices))
    if label is None:
        label = "+".join(L.label or "?" for L in lattices if L.rank) or "0"
    return IntLattice(gram, label=label, even=all(L.even for L in lattices))


def rescale(L: IntLattice, n: int) -> IntLattice:
    if n == 0:
        raise LatticeError("cannot rescale a lattice by 0")
    g = [[n * x for x in row] for row in L.gram]
    even = all(g[i][i] % 2 == 0 for i in range(L.rank))
    return IntLattice(g, label=f"{L.label}({n})" if L.label else "", even=even)


def sublattice(L: IntLattice, basis: Sequence[Sequence[int]], label: str = "") -> IntLattice:
    """Lattice spanned by ``basis`` (rows, in L coordinates) with the induced form."""
    b = [list(v) for v in basis]
    g = linalg.matmul(linalg.matmul(b, L.gram), linalg.transpose(b)) if b else []
    return IntLattice(g, label=label, even=all(g[i][i] % 2 == 0 for i in range(len(g))))


def embedding(L: IntLattice, basis: Sequence[Sequence[int]], label: str = "") -> LatticeMap:
    """The inclusion of ``sublattice(L, basis)`` into ``L`` as a map."""
    sub = sublattice(L, basis, label)
    mat = linalg.transpose([list(v) for v in basis]) if basis else [[] for _ in range(L.rank)]
    return LatticeMap(mat, sub, L)


def k3_lattice() -> IntLattice:
    """E8(-1)+E8(-1)+U+U+U; coordinates 0-7, 8-15 the two E8 blocks, then
    e1, f1, e2, f2, e3, f3."""
    e8 = make_standard("E", 8, sign=-1)
    u = make_standard("U")
    return direct_sum(e8, e8, u, u, u, label="K3")


K3_INDEX = {"e1": 16, "f1": 17, "e2": 18, "f2": 19, "e3": 20, "f3": 21}


def k3_vector(**coeffs: int) -> Vector:
    """Vector of the K3 lattice from named hyperbolic coordinates, e.g. ``e3=1, f3=2``."""
    v = [0] * 22
    for k, c in coeffs.items():
        v[K3_INDEX[k]] = c
    return tuple(v)


_NAME_RE = re.compile(r"^\s*(K3|U|I|A|D|E)(\d*)\s*(?:\(\s*(-?\d+)\s*\))?\s*$", re.I)


def parse_lattice_name(text: str) -> IntLattice:
    """Parse names like ``U``, ``U(2)``, ``I(-6)``, ``E8(-1)``, ``U+A1(-1)``."""
    parts = []
    for token in text.split("+"):
        m = _NAME_RE.match(token)
        if not m:
            raise LatticeError(f"cannot parse lattice name {token!r}")
        kind, k, scale = m.group(1).upper(), m.group(2), m.group(3)
        if kind == "K3":
            L = k3_lattice()
        elif kind == "I":
            if scale is None:
                raise LatticeError("write I(n), e.g. I(-6)")
            parts.append(make_standard("I", int(scale)))
            continue
        elif kind == "U":
            L = make_standard("U")
        else:
            if not k:
                raise LatticeError(f"{kind} needs a rank, e.g. {kind}8")
            L = make_standard(kind, int(k))
        if scale is not None:
            s = int(scale)
            L = rescale(L, s)
            L = IntLattice(L.gram, label=f"{kind}{k}({s})", even=L.even)
        parts.append(L)
    return parts[0] if len(parts) == 1 else direct_sum(*parts)


# ------------------------------------------------------------------ invariants

def inner(L: IntLattice, x: Sequence[int], y: Sequence[int]):
    L._check_dim(x)
    L._check_dim(y)
    return linalg.dot(x, linalg.matvec(L.gram, y))


def signature_of_matrix(gram: Sequence[Sequence]) -> Signature:
    """Signature by symmetric Gaussian reduction over Q.

    Pivot on the first nonzero diagonal entry; if the diagonal of the remaining
    block vanishes, replace x_i by x_i + x_j for the first nonzero off-diagonal
    entry (i, j), which makes the (i, i) entry 2*a_ij.
    """
    a = [[Fraction(x) for x in row] for row in gram]
    pos = neg = 0
    while a:
        n = len(a)
        p = next((i for i in range(n) if a[i][i] != 0), None)
        if p is None:
            ij = next(((i, j) for i in range(n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if ij is None:
                break
            i, j = ij
            a[i] = [x + y for x, y in zip(a[i], a[j])]
            for row in a:
                row[i] += row[j]
            p = i
        d = a[p][p]
        if d > 0:
            pos += 1
        else:
            neg += 1
        col = [a[i][p] for i in range(n)]
        rest = [i for i in range(n) if i != p]
        a = [[a[i][j] - col[i] * col[j] / d for j in rest] for i in rest]
    return Signature(pos, neg, len(gram) - pos - neg)


def signature(L: IntLattice) -> Signature:
    return signature_of_matrix(L.gram)


def determinant(L: IntLattice) -> int:
    return linalg.det(L.gram)


def discriminant_group(L: IntLattice) -> DiscriminantGroup:
    if determinant(L) == 0:
        raise LatticeError("discriminant group of a degenerate lattice")
    return DiscriminantGroup(tuple(d for d in linalg.smith_diagonal(L.gram) if d > 1))


def is_definite(L: IntLattice) -> int:
    """+1 / -1 for positive / negative definite lattices, 0 otherwise."""
    s = signature(L)
    if s.null == 0 and s.negative == 0:
        return 1
    if s.null == 0 and s.positive == 0:
        return -1
    return 0


# ----------------------------------------------------------------- sublattices

def orthogonal_complement(L: IntLattice, vectors: Sequence[Sequence[int]]) -> list[Vector]:
    """Basis of ``{x : x.s = 0 for all s}``; a primitive sublattice of L."""
    for v in vectors:
        L._check_dim(v)
    rows = [L.pairing_form(v) for v in vectors if any(v)]
    return linalg.integer_kernel(rows, L.rank)


def saturate(L: IntLattice, vectors: Sequence[Sequence[int]]) -> list[Vector]:
    """Basis of the primitive hull ``span_Q(vectors) ∩ L``."""
    for v in vectors:
        L._check_dim(v)
    return linalg.saturation(vectors, L.rank)


def span_basis(vectors: Sequence[Sequence[int]]) -> list[Vector]:
    return linalg.lattice_basis(vectors)


def is_saturated(L: IntLattice, vectors: Sequence[Sequence[int]]) -> bool:
    """True iff the span of ``vectors`` is a primitive sublattice."""
    basis = span_basis(vectors)
    return not basis or all(d == 1 for d in linalg.smith_diagonal(basis))


def is_primitive(L: IntLattice, v: Sequence[int]) -> bool:
    L._check_dim(v)
    if not any(v):
        raise LatticeError("primitivity of the zero vector is undefined")
    return linalg.content(v) == 1


def coordinates_in(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[Fraction] | None:
    """Rational coordinates of ``v`` in ``basis`` (rows), or None if not in the span."""
    return linalg.solve(linalg.transpose([list(b) for b in basis]), list(v))


@dataclass(frozen=True)
class IsotropicQuotient:
    """``I^⊥ / I`` for a totally isotropic primitive ``I``.

    ``lifts`` are vectors of the ambient lattice whose classes form the basis
    of ``lattice``; ``perp`` is the basis of ``I^⊥`` used to build them.
    """

    lattice: IntLattice
    lifts: tuple[Vector, ...]
    perp: tuple[Vector, ...]
    isotropic: tuple[Vector, ...]

    def coordinates(self, v: Sequence[int]) -> list[int]:
        """Class of ``v ∈ I^⊥`` in the quotient basis."""
        c = coordinates_in(list(self.lifts) + list(self.isotropic), v)
        if c is None or any(x.denominator != 1 for x in c):
            raise LatticeError("vector is not in I^⊥")
        return [int(x) for x in c[: len(self.lifts)]]


def isotropic_quotient(L: IntLattice, isotropic: Sequence[Sequence[int]], inside: Sequence[Sequence[int]] | None = None) -> IsotropicQuotient:
    """The lattice ``(I^⊥ ∩ M) / I`` where M is ``inside`` (default all of L).

    I is replaced by its primitive hull; the quotient is computed by completing
    a basis of I to one of ``I^⊥ ∩ M``.
    """
    iso = saturate(L, isotropic)
    if any(inner(L, a, b) for a in iso for b in iso):
        raise LatticeError("I is not totally isotropic")
    if inside is None:
        perp = orthogonal_complement(L, iso)
    else:
        inside = [list(v) for v in inside]
        rows = [linalg.matvec(inside, L.pairing_form(v)) for v in iso]
        ker = linalg.integer_kernel(rows, len(inside))
        perp = span_basis([linalg.matvec(linalg.transpose(inside), k) for k in ker])
    coords = []
    for v in iso:
        c = coordinates_in(perp, v)
        if c is None or any(x.denominator != 1 for x in c):
            raise LatticeError("I is not contained in the ambient sublattice")
        coords.append([int(x) for x in c])
    extra = linalg.complete_basis(coords, len(perp))
    pt = linalg.transpose([list(p) for p in perp])
    lifts = tuple(tuple(linalg.matvec(pt, q)) for q in extra)
    gram = tuple(tuple(inner(L, a, b) for b in lifts) for a in lifts)
    return IsotropicQuotient(IntLattice(gram, label="I^perp/I", even=L.even), lifts, tuple(perp), tuple(map(tuple, iso)))


# ------------------------------------------------------------------ isometries

def is_isometry(m: LatticeMap) -> bool:
    """``matrixᵀ · G_target · matrix == G_source`` (embeddings included)."""
    mat = [list(r) for r in m.matrix]
    if len(mat) != m.target.rank or any(len(r) != m.source.rank for r in mat):
        raise LatticeError("map matrix has the wrong shape")
    if m.source.rank == 0:
        return True
    lhs = linalg.matmul(linalg.matmul(linalg.transpose(mat), m.target.gram), mat)
    return lhs == [list(r) for r in m.source.gram]


def identity_map(L: IntLattice) -> LatticeMap:
    return LatticeMap(linalg.identity(L.rank), L, L)


def _transvection_matrix(L: IntLattice, image) -> LatticeMap:
    cols = [image([int(i == j) for j in range(L.rank)]) for i in range(L.rank)]
    return LatticeMap(linalg.transpose(cols), L, L)


def eichler_transvection(L: IntLattice, e: Sequence[int], f: Sequence[int]) -> LatticeMap:
    """``z -> z + (z.e) f - (z.f) e - 1/2 (f.f)(z.e) e`` for isotropic e and f ⊥ e."""
    if inner(L, e, e) != 0:
        raise LatticeError("e must be isotropic")
    if inner(L, e, f) != 0:
        raise LatticeError("f must be orthogonal to e")
    ff = inner(L, f, f)
    if ff % 2:
        raise LatticeError("f.f must be even for the map to be integral")

    def image(z):
        ze, zf = inner(L, z, e), inner(L, z, f)
        return [zi + ze * fi - zf * ei - (ff // 2) * ze * ei for zi, ei, fi in zip(z, e, f)]

    return _transvection_matrix(L, image)


def plane_transvection(L: IntLattice, e: Sequence[int], f: Sequence[int]) -> LatticeMap:
    """``z -> z + (z.e) f - (z.f) e`` for e, f spanning an isotropic sublattice."""
    if inner(L, e, e) or inner(L, f, f) or inner(L, e, f):
        raise LatticeError("e and f must span a totally isotropic sublattice")

    def image(z):
        ze, zf = inner(L, z, e), inner(L, z, f)
        return [zi + ze * fi - zf * ei for zi, ei, fi in zip(z, e, f)]

    return _transvection_matrix(L, image)


def small_rank_isometric(L1: IntLattice, L2: IntLattice, coeff_bound: int) -> LatticeMap | None:
    """Bounded search for an isometry ``L1 -> L2``.

    Columns (images of the L1 basis) are chosen one at a time among vectors of
    L2 with entries in ``[-coeff_bound, coeff_bound]``, pruning on norms and
    pairings.  ``None`` means no witness inside the box, not a disproof.
    """
    if L1.rank != L2.rank:
        return None
    n = L1.rank
    if n > 4:
        raise LatticeError("exhaustive isometry search is limited to rank <= 4")
    if determinant(L1) != determinant(L2) or signature(L1) != signature(L2):
        return None
    if n == 0:
        return LatticeMap((), L1, L2)
    g1 = L1.gram
    rng = range(-coeff_bound, coeff_bound + 1)
    by_norm: dict[int, list[Vector]] = {}
    wanted = {g1[i][i] for i in range(n)}
    for v in itertools.product(rng, repeat=n):
        q = inner(L2, v, v)
        if q in wanted:
            by_norm.setdefault(q, []).append(v)

    def extend(cols: list[Vector]):
        i = len(cols)
        if i == n:
            mat = linalg.transpose([list(c) for c in cols])
            if abs(linalg.det(mat)) == 1:
                return LatticeMap(mat, L1, L2)
            return None
        for v in by_norm.get(g1[i][i], []):
            if all(inner(L2, v, cols[j]) == g1[i][j] for j in range(i)):
                found = extend(cols + [v])
                if found is not None:
                    return found
        return None

    return extend([])
