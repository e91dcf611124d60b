"""Polarized K3 lattices, the unigonal/digonal vectors, the non-Cartier
computation for the (-2)-vector arrangement, and the Enriques involution."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import linalg
from .divisors import WeightedArrangement, noproduct_condition, qcartier_proportional
from .enumeration import VectorQuery, isotropic_with_definite_part, short_vectors, vectors_in_box
from .errors import LatticeError
from .lattice import (
    K3_INDEX,
    IntLattice,
    LatticeMap,
    Vector,
    determinant,
    direct_sum,
    embedding,
    inner,
    is_isometry,
    is_primitive,
    is_saturated,
    isotropic_quotient,
    k3_lattice,
    k3_vector,
    make_standard,
    orthogonal_complement,
    rescale,
    signature,
    small_rank_isometric,
    span_basis,
    sublattice,
)
from .roots import root_span_corank

U3_COORDS = tuple(range(16, 22))
E8_BLOCKS = (tuple(range(0, 8)), tuple(range(8, 16)))


def _unit(i: int, n: int = 22) -> Vector:
    return tuple(int(j == i) for j in range(n))


@dataclass(frozen=True)
class K3Context:
    """The K3 lattice with the degree ``2g-2`` vector ``h = e3 + (g-1) f3``."""

    g: int
    lattice: IntLattice
    h: Vector
    lambda_g_basis: tuple[Vector, ...]
    lambda_g: IntLattice

    @property
    def isotropic_generator(self) -> Vector:
        """``e3 - (g-1) f3``: spans the rank-one summand of norm ``2-2g``."""
        return k3_vector(e3=1, f3=-(self.g - 1))


def k3_context(g: int) -> K3Context:
    if g < 2:
        raise LatticeError("genus must be at least 2")
    L = k3_lattice()
    h = k3_vector(e3=1, f3=g - 1)
    basis = tuple(_unit(i) for i in range(20)) + (k3_vector(e3=1, f3=-(g - 1)),)
    if span_basis(basis) != orthogonal_complement(L, [h]):
        raise LatticeError("explicit basis does not span h^⊥")
    lam = sublattice(L, basis, label=f"Lambda_{g}")
    ctx = K3Context(g, L, h, basis, lam)
    assert inner(L, h, h) == 2 * g - 2 and is_primitive(L, h)
    assert signature(lam).as_tuple() == (2, 19, 0)
    assert determinant(lam) == 2 - 2 * g
    return ctx


# ------------------------------------------------------------ isotropic classes

@dataclass(frozen=True)
class IsotropicClass:
    kind: str  # "unigonal", "digonal" or "neither"
    excluded: bool = False  # digonal vectors do not enter the arrangement when g = 2

    def __str__(self):
        return self.kind + (" (excluded at g=2)" if self.excluded else "")


def classify_isotropic(ctx: K3Context, f) -> IsotropicClass:
    L = ctx.lattice
    if not any(f) or inner(L, f, f) != 0 or linalg.content(f) != 1:
        return IsotropicClass("neither")
    p = inner(L, f, ctx.h)
    if p == 1:
        return IsotropicClass("unigonal")
    if p == 2:
        return IsotropicClass("digonal", excluded=ctx.g == 2)
    return IsotropicClass("neither")


def in_N_g(ctx: K3Context, r) -> bool:
    """(-2)-vector orthogonal to h spanning with h a primitive sublattice."""
    L = ctx.lattice
    return inner(L, r, r) == -2 and inner(L, r, ctx.h) == 0 and is_saturated(L, [ctx.h, r])


@dataclass(frozen=True)
class SpanType:
    name: str  # "U(2)" or "I(2)+I(-2)"
    raw_gram: tuple[tuple[int, ...], ...]
    basis: tuple[Vector, Vector]
    gram: tuple[tuple[int, ...], ...]


def span_type(ctx: K3Context, f) -> SpanType:
    """Identify span(h, f) for digonal f, with the explicit base change."""
    if classify_isotropic(ctx, f).kind != "digonal":
        raise LatticeError("f must be a digonal isotropic vector")
    L, g, h = ctx.lattice, ctx.g, ctx.h
    raw = ((inner(L, h, h), inner(L, h, f)), (inner(L, f, h), inner(L, f, f)))
    if g % 2:
        a = (g - 1) // 2
        b = (tuple(f), tuple(x - a * y for x, y in zip(h, f)))
        name, want = "U(2)", ((0, 2), (2, 0))
    else:
        a = (g - 2) // 2
        w = tuple(x - a * y for x, y in zip(h, f))
        b = (w, tuple(x - y for x, y in zip(w, f)))
        name, want = "I(2)+I(-2)", ((2, 0), (0, -2))
    gram = tuple(tuple(inner(L, x, y) for y in b) for x in b)
    if gram != want or span_basis(b) != span_basis([h, f]):
        raise LatticeError("base change does not produce the expected form")
    return SpanType(name, raw, b, gram)


# ------------------------------------------------ pairs spanning (1,2) with h

@dataclass(frozen=True)
class ArrPair:
    g: int
    v1: Vector
    v2: Vector
    a1: int
    a2: int
    lam: int
    det: int

    @property
    def formula_matches(self) -> bool:
        return self.det == 2 * self.lam * (self.a1 * self.a2 - (self.g - 1) * self.lam)


@dataclass(frozen=True)
class ArrTriple:
    vectors: tuple[Vector, Vector, Vector]
    gram: tuple[tuple[int, ...], ...]
    sums_to_h: bool
    witness: LatticeMap | None


@dataclass(frozen=True)
class ArrReport:
    g: int
    box: int
    candidates: int
    pairs: tuple[ArrPair, ...]
    triples: tuple[ArrTriple, ...]

    @property
    def conclusions(self) -> dict:
        return {
            "nonempty": bool(self.pairs),
            "g_in_3_4": not self.pairs or self.g in (3, 4),
            "all_a_equal_2": all(p.a1 == 2 and p.a2 == 2 for p in self.pairs),
            "all_lambda_1": all(p.lam == 1 for p in self.pairs),
            "determinant_formula": all(p.formula_matches for p in self.pairs),
            "triples_ok": all(t.sums_to_h and t.witness is not None for t in self.triples),
        }


def unigonal_digonal_window(ctx: K3Context, box: int, support=U3_COORDS) -> list[Vector]:
    """Vectors of E_g (E'_2 when g = 2) inside the coordinate window."""
    values = (1,) if ctx.g == 2 else (1, 2)
    out = []
    for c in values:
        q = VectorQuery(norm=0, pairings=((ctx.h, c),), primitive_only=True, box_bound=box, support=tuple(support))
        out += vectors_in_box(ctx.lattice, q)
    return sorted(out)


@lru_cache(maxsize=None)
def _triangle_witness(gram: tuple) -> LatticeMap | None:
    target = direct_sum(make_standard("U"), make_standard("I", -2))
    return small_rank_isometric(IntLattice(gram), target, 3)


def k3arr_search(ctx: K3Context, box: int = 3, support=U3_COORDS) -> ArrReport:
    """Pairs in E_g spanning with h a rank-3 lattice of signature (1,2)."""
    L, g, h = ctx.lattice, ctx.g, ctx.h
    vs = unigonal_digonal_window(ctx, box, support)
    if not vs:
        return ArrReport(g, box, 0, (), ())
    V = np.array(vs, dtype=np.int64)
    G = np.array(L.gram, dtype=np.int64)
    a = V @ G @ np.array(h, dtype=np.int64)
    P = V @ G @ V.T
    i, j = np.triu_indices(len(vs), k=1)
    lam = P[i, j]
    det = 2 * lam * (a[i] * a[j] - (g - 1) * lam)
    pairs = []
    for s in np.nonzero(det > 0)[0]:
        v1, v2 = vs[i[s]], vs[j[s]]
        gram = [[inner(L, x, y) for y in (h, v1, v2)] for x in (h, v1, v2)]
        if signature(IntLattice(gram)).as_tuple() != (1, 2, 0):
            continue
        pairs.append(ArrPair(g, v1, v2, int(a[i[s]]), int(a[j[s]]), int(lam[s]), linalg.det(gram)))
    triples = {}
    if g == 4:
        for p in pairs:
            v3 = tuple(x - y - z for x, y, z in zip(h, p.v1, p.v2))
            if classify_isotropic(ctx, v3).kind == "neither":
                continue
            key = tuple(sorted((p.v1, p.v2, v3)))
            if key in triples:
                continue
            gram = tuple(tuple(inner(L, x, y) for y in key) for x in key)
            sums = all(sum(c) == hc for c, hc in zip(zip(*key), h))
            triples[key] = ArrTriple(key, gram, sums, _triangle_witness(gram))
    return ArrReport(g, box, len(vs), tuple(pairs), tuple(triples[k] for k in sorted(triples)))


# ---------------------------------------------------------------- the M_r lattices

@dataclass(frozen=True)
class MrReport:
    r: int
    gram: IntLattice
    base_change: tuple[tuple[int, ...], ...]
    transformed_gram: tuple[tuple[int, ...], ...]
    target: IntLattice
    matches: bool


def m_r_lattice(r: int) -> MrReport:
    """Span of h (norm 4) and isotropic v_1..v_r (v_i.h = 2, v_i.v_j = 1),
    compared with U + D_{r-1}(-1) under the explicit base change."""
    if not 3 <= r <= 19:
        raise LatticeError("r must lie in 3..19")
    n = r + 1
    gram = [[0] * n for _ in range(n)]
    gram[0][0] = 4
    for i in range(1, n):
        gram[0][i] = gram[i][0] = 2
        for j in range(1, n):
            if i != j:
                gram[i][j] = 1
    M = IntLattice(gram, label=f"M_{r}")

    def vec(h=0, **vs):
        out = [0] * n
        out[0] = h
        for k, c in vs.items():
            out[int(k[1:])] += c
        return out

    rows = [vec(v1=1), vec(v2=1), vec(h=1, v1=-1, v2=-1, v3=-1), vec(v1=1, v2=1, v3=-1)]
    for i in range(3, r):
        rows.append(vec(**{f"v{i}": 1, f"v{i + 1}": -1}))
    if abs(linalg.det(rows)) != 1:
        raise LatticeError("base change is not unimodular")
    tg = tuple(tuple(inner(M, x, y) for y in rows) for x in rows)
    target = direct_sum(make_standard("U"), make_standard("D", r - 1, -1))
    return MrReport(r, M, tuple(map(tuple, rows)), tg, target, tg == target.gram)


# ------------------------------------------------------------ non-Cartier report

@dataclass(frozen=True)
class Section33Report:
    g: int
    quotient: IntLattice
    quotient_lifts: tuple[Vector, ...]
    quotient_matches_expected: bool
    quotient_signature: tuple[int, int, int]
    roots_total: int
    image_roots: tuple[Vector, ...]
    canonical_lift_rejected: tuple[Vector, ...]
    corank: int
    qcartier: Fraction | None
    noproduct: bool
    # roots with *some* lift r + a e1 + b e2 in N_g; differs from image_roots at g = 2
    any_lift_roots: tuple[Vector, ...]
    corank_any_lift: int


def _lift_in_N(ctx: K3Context, lift: Vector, isotropic: tuple[Vector, Vector]) -> bool:
    for a, b in itertools.product((0, 1, -1), repeat=2):
        r = tuple(x + a * y + b * z for x, y, z in zip(lift, *isotropic))
        if in_N_g(ctx, r):
            return True
    return False


def section33_report(g: int) -> Section33Report:
    """Roots of ``(Π^⊥ ∩ Λ_g)/Π`` for ``Π = span(e1, e2)`` that come from N_g.

    A quotient root counts when its canonical lift (in the span of the E8
    units and ``e3 - (g-1) f3``) lies in N_g. At g = 2 this drops the
    I(-2) generator, whose lift is ``e3 - f3``.

    The looser rule, where any lift ``r + a e1 + b e2`` may lie in N_g, is
    reported alongside. ``|a|, |b| <= 1`` suffices, because adding e1
    already breaks any 2-divisibility. At g = 2 it keeps the I(-2)
    generator via ``e3 - f3 + e1``, and the root span then has full rank.
    """
    ctx = k3_context(g)
    L = ctx.lattice
    pi = (k3_vector(e1=1), k3_vector(e2=1))
    computed = isotropic_quotient(L, pi, inside=ctx.lambda_g_basis)
    lifts = tuple(_unit(i) for i in range(16)) + (ctx.isotropic_generator,)
    if span_basis(list(lifts) + list(pi)) != span_basis(computed.perp):
        raise LatticeError("explicit lifts do not span Π^⊥ ∩ Λ_g")
    Q = IntLattice(tuple(tuple(inner(L, a, b) for b in lifts) for a in lifts), label="quotient")
    e8 = make_standard("E", 8, -1)
    expected = direct_sum(e8, e8, make_standard("I", 2 - 2 * g))
    roots = short_vectors(Q, VectorQuery(norm=-2))

    def lift_of(rv):
        return tuple(sum(c * l[t] for c, l in zip(rv, lifts)) for t in range(22))

    image, rejected, loose = [], [], []
    for rv in roots:
        lv = lift_of(rv)
        (image if in_N_g(ctx, lv) else rejected).append(rv)
        if _lift_in_N(ctx, lv, pi):
            loose.append(rv)
    arr = WeightedArrangement.of([linalg.canonical_sign(Q.pairing_form(rv)) for rv in image])
    c = qcartier_proportional(Q.gram, arr)
    return Section33Report(
        g=g,
        quotient=Q,
        quotient_lifts=lifts,
        quotient_matches_expected=Q.gram == expected.gram and determinant(Q) == determinant(computed.lattice),
        quotient_signature=signature(Q).as_tuple(),
        roots_total=len(roots),
        image_roots=tuple(image),
        canonical_lift_rejected=tuple(rejected),
        corank=root_span_corank(Q, image),
        qcartier=c,
        noproduct=noproduct_condition(Q.rank, arr.functionals),
        any_lift_roots=tuple(loose),
        corank_any_lift=root_span_corank(Q, loose),
    )


def plane_support_example(g: int) -> list[Vector]:
    """``J^⊥ ∩ ⋂{H ⊇ J}`` in Λ_g for J = span(e1, e2) and the E8 root walls."""
    from .cones import plane_support_space

    ctx = k3_context(g)
    lam = ctx.lambda_g
    basis = ctx.lambda_g_basis
    e1, e2 = (_coords_in_basis(basis, k3_vector(e1=1)), _coords_in_basis(basis, k3_vector(e2=1)))
    e8 = make_standard("E", 8, -1)
    walls = []
    for block in E8_BLOCKS:
        for r in short_vectors(e8, VectorQuery(norm=-2)):
            v = [0] * 22
            for i, x in zip(block, r):
                v[i] = x
            walls.append(lam.pairing_form(_coords_in_basis(basis, tuple(v))))
    return plane_support_space(lam.gram, [e1, e2], walls)


def _coords_in_basis(basis, v) -> list[int]:
    from .lattice import coordinates_in

    c = coordinates_in(basis, v)
    if c is None or any(x.denominator != 1 for x in c):
        raise LatticeError("vector not in the sublattice")
    return [int(x) for x in c]


# -------------------------------------------------------------------- Enriques

@dataclass(frozen=True)
class EnriquesContext:
    iota: LatticeMap
    lambda_plus: tuple[Vector, ...]
    lambda_minus: tuple[Vector, ...]
    plus_witness: LatticeMap  # Λ_E(2) -> Λ, onto Λ^+
    minus_witness: LatticeMap  # Λ_E(2) + U -> Λ, onto Λ^-
    h_plus: Vector
    checks: dict


def enriques_lattice() -> IntLattice:
    """E8(-1) + U with coordinates (8 E8 coordinates, e, f)."""
    return direct_sum(make_standard("E", 8, -1), make_standard("U"), label="Lambda_E")


def enriques_context() -> EnriquesContext:
    """ι swaps the two (E8(-1) + U) blocks of Λ and negates the third U."""
    L = k3_lattice()
    first = list(range(0, 8)) + [16, 17]
    second = list(range(8, 16)) + [18, 19]
    cols = []
    for i in range(22):
        img = [0] * 22
        if i in first:
            img[second[first.index(i)]] = 1
        elif i in second:
            img[first[second.index(i)]] = 1
        else:
            img[i] = -1
        cols.append(img)
    iota = LatticeMap(linalg.transpose(cols), L, L)
    plus = tuple(tuple(int(t in (a, b)) for t in range(22)) for a, b in zip(first, second))
    minus = tuple(tuple((t == a) - (t == b) for t in range(22)) for a, b in zip(first, second))
    minus += (_unit(20), _unit(21))
    le2 = rescale(enriques_lattice(), 2)
    pw = LatticeMap(linalg.transpose(plus), le2, L)
    mw = LatticeMap(linalg.transpose(minus), direct_sum(le2, make_standard("U")), L)
    ident = linalg.identity(22)
    eig = lambda s: linalg.integer_kernel([[iota.matrix[r][c] - s * ident[r][c] for c in range(22)] for r in range(22)], 22)
    h_plus = tuple(a + b for a, b in zip(plus[8], plus[9]))
    checks = {
        "iota_isometry": is_isometry(iota),
        "iota_squared_identity": [list(r) for r in iota.compose(iota).matrix] == ident,
        "plus_witness_isometry": is_isometry(pw),
        "minus_witness_isometry": is_isometry(mw),
        "plus_onto_eigenlattice": span_basis(plus) == eig(1),
        "minus_onto_eigenlattice": span_basis(minus) == eig(-1),
        "plus_signature": signature(pw.source).as_tuple(),
        "minus_signature": signature(mw.source).as_tuple(),
    }
    return EnriquesContext(iota, plus, minus, pw, mw, h_plus, checks)


def enriques_isotropic_pair(radius_slack: int = 0) -> list[Vector]:
    """All isotropic v in Λ^+ with v.h^+ = 2, as vectors of Λ (complete)."""
    ctx = enriques_context()
    le2 = ctx.plus_witness.source
    h = [0] * 8 + [1, 1]
    found = isotropic_with_definite_part(le2, h, 2, hyperbolic=(8, 9), primitive_only=False, radius_slack=radius_slack)
    return sorted(ctx.plus_witness(v) for v in found)
