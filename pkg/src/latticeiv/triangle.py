"""Lattices of T-shaped (-2)-curve configurations and embeddings of their
affine E_k sublattices."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .enumeration import VectorQuery, short_vectors
from .errors import LatticeError
from .lattice import (
    IntLattice,
    LatticeMap,
    Vector,
    direct_sum,
    inner,
    is_isometry,
    isotropic_quotient,
    make_standard,
    saturate,
    signature,
)
from .roots import ade_decompose, containing_component_type

# arm node counts of the affine diagrams as T-shapes (center excluded)
AFFINE_ARMS = {6: (2, 2, 2), 7: (1, 3, 3), 8: (1, 2, 5)}


def k_of(p: tuple[int, int, int]) -> int:
    p1, p2, _ = p
    if p1 == 2 and p2 == 3:
        return 8
    if p1 == 2:
        return 7
    return 6


def t_shape_gram(arms: tuple[int, ...]) -> list[list[int]]:
    """All-(-2) Gram of a T-shape: node 0 is the center, then each arm outward."""
    n = 1 + sum(arms)
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = -2
    idx = 1
    for a in arms:
        prev = 0
        for _ in range(a):
            g[prev][idx] = g[idx][prev] = 1
            prev = idx
            idx += 1
    return g


def resolution_gram(p: tuple[int, int, int]) -> list[list[int]]:
    """Intersection matrix of the central (-1)-curve and the three (-p_i)-curves."""
    g = [[-1, 1, 1, 1]] + [[1] + [0] * 3 for _ in range(3)]
    for i, pi in enumerate(p):
        g[i + 1][i + 1] = -pi
    return g


@dataclass(frozen=True)
class TriangleContext:
    p: tuple[int, int, int]
    q_lattice: IntLattice
    k: int
    affine_nodes: tuple[int, ...]  # indices of the affine E_k nodes
    fundamental_isotropic: Vector

    @property
    def arm_nodes(self) -> list[list[int]]:
        out, idx = [], 1
        for pi in self.p:
            out.append(list(range(idx, idx + pi - 1)))
            idx += pi - 1
        return out


def triangle_context(p1: int, p2: int, p3: int) -> TriangleContext:
    p = (p1, p2, p3)
    if not 2 <= p1 <= p2 <= p3:
        raise LatticeError("need 2 <= p1 <= p2 <= p3")
    if Fraction(1, p1) + Fraction(1, p2) + Fraction(1, p3) >= 1:
        raise LatticeError("need 1/p1 + 1/p2 + 1/p3 < 1")
    arms = tuple(x - 1 for x in p)
    Q = IntLattice(t_shape_gram(arms), label=f"Q_{p1},{p2},{p3}")
    sig = signature(Q).as_tuple()
    if sig != (1, sum(arms), 0):
        raise LatticeError(f"T-shape Gram has signature {sig}")
    k = k_of(p)
    nodes = [0]
    idx = 1
    for a, take in zip(arms, AFFINE_ARMS[k]):
        nodes += list(range(idx, idx + take))
        idx += a
    sub = [[Q.gram[i][j] for j in nodes] for i in nodes]
    rad = linalg.nullspace(sub)
    if len(rad) != 1:
        raise LatticeError("affine sublattice does not have a rank-one radical")
    coeff = linalg.primitive(rad[0])
    if coeff[0] < 0:
        coeff = tuple(-c for c in coeff)
    if any(c <= 0 for c in coeff):
        raise LatticeError("radical generator is not a positive combination")
    n = [0] * Q.rank
    for i, c in zip(nodes, coeff):
        n[i] = c
    return TriangleContext(p, Q, k, tuple(nodes), tuple(n))


def affine_basis(tctx: TriangleContext) -> list[Vector]:
    return [tuple(int(j == i) for j in range(tctx.q_lattice.rank)) for i in tctx.affine_nodes]


@dataclass(frozen=True)
class EmbeddingReport:
    k: int
    k_of_j: int
    critical: bool
    good: bool
    component_types: tuple[str, ...]
    obstructions: tuple[Vector, ...]  # root classes of the hull quotient that break goodness


def _quotient_roots(ambient: IntLattice, iso: Vector, inside=None):
    q = isotropic_quotient(ambient, [iso], inside=inside)
    return q, short_vectors(q.lattice, VectorQuery(norm=-2)) if q.lattice.rank else []


def is_critical_embedding(tctx: TriangleContext, j: LatticeMap) -> EmbeddingReport:
    """Compare the root component around ``j(affine E_k)`` in ``I^⊥/I`` with E_k."""
    if j.source.gram != tctx.q_lattice.gram:
        raise LatticeError("map source is not the triangle lattice")
    if not is_isometry(j) or linalg.rank(j.matrix) != j.source.rank:
        raise LatticeError("j is not an isometric embedding")
    M = j.target
    sig = signature(M).as_tuple()
    if sig[0] != 1 or sig[2] != 0:
        raise LatticeError("target must be nondegenerate of signature (1, rho)")
    iso = j(tctx.fundamental_isotropic)
    imgs = [j(b) for b in affine_basis(tctx)]

    quot, _ = _quotient_roots(M, iso)
    decomp = ade_decompose(quot.lattice)
    classes = [quot.coordinates(v) for v in imgs]
    classes = [c for c in classes if any(c)]
    kj_type = containing_component_type(decomp, classes)
    if not kj_type.startswith("E"):
        raise LatticeError(f"affine image lies in a component of type {kj_type}")
    kj = int(kj_type[1:])

    hull = saturate(M, [j(tuple(int(r == c) for r in range(j.source.rank))) for c in range(j.source.rank)])
    hq, hroots = _quotient_roots(M, iso, inside=hull)
    ecls = [hq.coordinates(v) for v in imgs]
    span = [c for c in ecls if any(c)]
    bad = []
    for r in hroots:
        in_span = linalg.solve(linalg.transpose(span), list(r))
        if in_span is not None and all(x.denominator == 1 for x in in_span):
            continue
        if all(inner(hq.lattice, r, c) == 0 for c in span):
            continue
        bad.append(tuple(r))
    return EmbeddingReport(tctx.k, kj, kj > tctx.k, not bad, tuple(decomp.types), tuple(bad))


# ------------------------------------------------------------ worked embeddings

HIGHEST_ROOT = {6: (1, 2, 2, 3, 2, 1), 7: (2, 2, 3, 4, 3, 2, 1), 8: (2, 3, 4, 6, 5, 4, 3, 2)}
# affine E_k arms in E_k node labels; "a" is the affine node
AFFINE_ARM_LABELS = {6: ([2, 0], [4, 5], [1, "a"]), 7: ([1], [2, 0, "a"], [4, 5, 6]), 8: ([1], [2, 0], [4, 5, 6, 7, "a"])}


def identity_embedding(tctx: TriangleContext) -> LatticeMap:
    Q = tctx.q_lattice
    return LatticeMap(linalg.identity(Q.rank), Q, Q)


def affine_embedding(p: tuple[int, int, int], ambient_k: int) -> tuple[TriangleContext, LatticeMap]:
    """``Q_p -> U + E_m(-1)`` (m = ambient_k) sending the affine E_k nodes to
    E_k ⊂ E_m plus ``e - θ`` and one extra arm-3 node to ``f - e``.

    Only for p whose third arm has exactly one node beyond the affine part and
    where the affine node ends that arm (k = 6 or 8).
    """
    tctx = triangle_context(*p)
    k = tctx.k
    if k == 7 or ambient_k < k:
        raise LatticeError("construction needs k in {6, 8} and E_k inside the ambient E")
    arms = AFFINE_ARM_LABELS[k]
    if [a + 0 for a in (x - 1 for x in p)] != [len(arms[0]), len(arms[1]), len(arms[2]) + 1]:
        raise LatticeError("arm lengths do not fit this construction")
    M = direct_sum(make_standard("U"), make_standard("E", ambient_k, -1))
    dim = M.rank
    theta = HIGHEST_ROOT[k]

    def node(label):
        v = [0] * dim
        if label == "a":
            v[0] = 1
            for i, c in enumerate(theta):
                v[2 + i] -= c
        else:
            v[2 + label] = 1
        return v

    cols = [node(3)]
    for arm_i, labels in enumerate(arms):
        cols += [node(x) for x in labels]
        if arm_i == 2:
            extra = [0] * dim
            extra[0], extra[1] = -1, 1
            cols.append(extra)
    jm = LatticeMap(linalg.transpose(cols), tctx.q_lattice, M)
    if not is_isometry(jm):
        raise LatticeError("constructed map is not an isometry")
    return tctx, jm
