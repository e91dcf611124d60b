"""Weighted hyperplane arrangements: the Q-Cartier proportionality test, wall
cocycles, piecewise-linear functions on fans and Weyl-point checks."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .cones import Fan, RationalCone
from .errors import LatticeError
from .lattice import LatticeMap

Functional = tuple[Fraction, ...]
WEYL_POINT_MAX_K = 10**6


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class WeightedArrangement:
    """Hyperplanes ``{x : f.x = 0}`` with integer multiplicities."""

    members: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        clean = []
        for f, m in self.members:
            f = linalg.primitive(f)
            if m == 0:
                raise LatticeError("multiplicities must be nonzero")
            clean.append((f, int(m)))
        rays = [linalg.canonical_sign(f) for f, _ in clean]
        if len(set(rays)) != len(rays):
            raise LatticeError("arrangement functionals must be pairwise non-proportional")
        object.__setattr__(self, "members", tuple(clean))

    @classmethod
    def of(cls, functionals: Sequence[Sequence[int]], multiplicities: Sequence[int] | None = None) -> "WeightedArrangement":
        ms = [1] * len(functionals) if multiplicities is None else list(multiplicities)
        return cls(tuple((tuple(f), m) for f, m in zip(functionals, ms)))

    @property
    def functionals(self) -> list[tuple[int, ...]]:
        return [f for f, _ in self.members]

    @property
    def dim(self) -> int | None:
        return len(self.members[0][0]) if self.members else None


# ----------------------------------------------------------------- Q-Cartier

def weighted_square_sum(arr: WeightedArrangement, n: int) -> list[list[int]]:
    s = [[0] * n for _ in range(n)]
    for f, m in arr.members:
        if len(f) != n:
            raise LatticeError("functional dimension does not match the form")
        for i in range(n):
            for j in range(n):
                s[i][j] += m * f[i] * f[j]
    return s


def qcartier_proportional(q: Sequence[Sequence], arr: WeightedArrangement) -> Fraction | None:
    """The rational c with ``sum m_H l_H l_Hᵀ == c q``, or None if there is none.

    Decided by comparing ranks of ``[vec q]`` and ``[vec q | vec S]``.
    """
    n = len(q)
    if any(len(r) != n for r in q):
        raise LatticeError("q must be square")
    if any(Fraction(q[i][j]) != Fraction(q[j][i]) for i in range(n) for j in range(n)):
        raise LatticeError("q must be symmetric")
    s = weighted_square_sum(arr, n)
    vq = [Fraction(x) for row in q for x in row]
    vs = [Fraction(x) for row in s for x in row]
    if not any(vq):
        raise LatticeError("q must be nonzero")
    if linalg.rank([list(t) for t in zip(vq, vs)]) != 1:
        return None
    k = next(i for i, x in enumerate(vq) if x)
    c = vs[k] / vq[k]
    assert all(a == c * b for a, b in zip(vs, vq))
    return c


def noproduct_condition(quotient_rank: int, functionals: Sequence[Sequence]) -> bool:
    """True iff the functionals cut the quotient space down to zero."""
    fs = [list(f) for f in functionals if any(f)]
    if any(len(f) != quotient_rank for f in fs):
        raise LatticeError("functional dimension does not match the quotient rank")
    return (linalg.rank(fs) if fs else 0) == quotient_rank


# -------------------------------------------------------------- wall cocycle

def _side(f: Sequence[int], cone: RationalCone) -> int:
    vals = [_dot(f, r) for r in cone.rays]
    if any(v > 0 for v in vals) and any(v < 0 for v in vals):
        raise LatticeError("an arrangement member cuts through the cone interior")
    if any(v > 0 for v in vals):
        return 1
    if any(v < 0 for v in vals):
        return -1
    return 0


def _require_chamber(c: RationalCone):
    if c.dim != c.dim_ambient or not c.rays:
        raise LatticeError("cone has empty interior")


def separating_walls(sigma: RationalCone, sigma2: RationalCone, arr: WeightedArrangement) -> list[tuple[tuple[int, ...], int]]:
    """Members with strictly opposite signs on the two interiors."""
    _require_chamber(sigma)
    _require_chamber(sigma2)
    return [(f, m) for f, m in arr.members if _side(f, sigma) * _side(f, sigma2) < 0]


def cocycle_exponent(sigma: RationalCone, sigma2: RationalCone, arr: WeightedArrangement) -> Functional:
    """``sum m_H f_H`` over separating walls, each f_H oriented positive on sigma."""
    n = sigma.dim_ambient
    out = [Fraction(0)] * n
    for f, m in separating_walls(sigma, sigma2, arr):
        s = _side(f, sigma)
        for i in range(n):
            out[i] += m * s * f[i]
    return tuple(out)


# ----------------------------------------------------------------- PL functions

@dataclass(frozen=True)
class PLFunction:
    fan: Fan
    pieces: tuple[tuple[RationalCone, Functional], ...]

    def linear_part(self, chamber: RationalCone) -> Functional:
        for c, f in self.pieces:
            if c.rays == chamber.rays:
                return f
        raise LatticeError("not a chamber of this function")

    def __call__(self, x: Sequence) -> Fraction:
        for c, f in self.pieces:
            if c.contains(x):
                return _dot(f, x)
        raise LatticeError("point outside the support of the fan")

    def is_continuous(self) -> bool:
        n = self.fan.dim_ambient
        for (c1, f1), (c2, f2) in itertools.combinations(self.pieces, 2):
            common = sorted(set(c1.rays) & set(c2.rays))
            if len(common) >= n - 1 and common and linalg.rank(common) == n - 1:
                if any(_dot(f1, r) != _dot(f2, r) for r in common):
                    return False
        return True


def build_pl_function(fan: Fan, arr: WeightedArrangement, rho: Sequence, base: RationalCone | None = None) -> PLFunction:
    """``rho + cocycle_exponent(base, C)`` on every chamber C of the fan."""
    chambers = fan.chambers
    base = base if base is not None else chambers[0]
    if not any(c.rays == base.rays for c in chambers):
        raise LatticeError("base is not a chamber of the fan")
    rho = tuple(Fraction(x) for x in rho)
    if len(rho) != fan.dim_ambient:
        raise LatticeError("rho has the wrong dimension")
    pieces = []
    for c in chambers:
        e = cocycle_exponent(base, c, arr)
        pieces.append((c, tuple(a + b for a, b in zip(rho, e))))
    pl = PLFunction(fan, tuple(pieces))
    if not pl.is_continuous():
        raise LatticeError("PL function is discontinuous: fan does not match the arrangement")
    return pl


def _apply(g: LatticeMap, x: Sequence) -> tuple:
    return tuple(linalg.matvec(g.matrix, list(x)))


def _in_support(fan: Fan, x) -> bool:
    return any(c.contains(x) for c in fan.chambers)


def pl_invariance_check(pl: PLFunction, generators: Sequence[LatticeMap]) -> bool:
    """True iff ``r(γx) == r(x)`` on every ray generator x and every γ."""
    for g in generators:
        for x in pl.fan.rays:
            gx = _apply(g, x)
            if not _in_support(pl.fan, gx):
                raise LatticeError("generator does not preserve the support of the fan")
            if pl(gx) != pl(x):
                return False
    return True


def solve_rho(fan: Fan, arr: WeightedArrangement, generators: Sequence[LatticeMap], base: RationalCone | None = None) -> Functional | None:
    """A rho making the PL function invariant under the generators, if one exists."""
    zero = build_pl_function(fan, arr, [0] * fan.dim_ambient, base)
    rows, rhs = [], []
    for g in generators:
        for x in fan.rays:
            gx = _apply(g, x)
            if not _in_support(fan, gx):
                raise LatticeError("generator does not preserve the support of the fan")
            rows.append([a - b for a, b in zip(gx, x)])
            rhs.append(zero(x) - zero(gx))
    if not rows:
        return tuple(Fraction(0) for _ in range(fan.dim_ambient))
    sol = linalg.solve(rows, rhs)
    return None if sol is None else tuple(sol)


# ---------------------------------------------------------------- Weyl points

def chamber_weyl_point(chamber: RationalCone, arr: WeightedArrangement) -> tuple[Fraction, ...]:
    """A rational interior point lying on no member.

    Starts at the sum of the rays and, if needed, moves to ``v + r/k`` for the
    first ray r and least k that clear every member.
    """
    _require_chamber(chamber)
    fs = arr.functionals
    for f in fs:
        if all(_dot(f, r) == 0 for r in chamber.rays):
            raise LatticeError("chamber lies inside an arrangement member")
    v = [Fraction(x) for x in chamber.interior_point()]
    if all(_dot(f, v) != 0 for f in fs):
        return tuple(v)
    for r in chamber.rays:
        if any(_dot(f, v) == 0 and _dot(f, r) == 0 for f in fs):
            continue
        bad = set()
        for f in fs:
            fv, fr = _dot(f, v), _dot(f, r)
            if fv != 0 and fr != 0:
                k = -Fraction(fr) / fv
                if k.denominator == 1 and k > 0:
                    bad.add(int(k))
        k = next((k for k in range(1, WEYL_POINT_MAX_K + 1) if k not in bad), None)
        if k is not None:
            return tuple(a + Fraction(b, k) for a, b in zip(v, r))
    raise LatticeError("no perturbation with k <= 10^6 avoids every member")


@dataclass(frozen=True)
class ChamberReport:
    v_norm_sign: str
    is_rational_polyhedral: bool
    isotropic_edge: tuple[int, ...] | None
    caveat: str = "only the restriction to the supplied cone description is seen"


def chamber_structure_report(chamber: RationalCone, v: Sequence, form) -> ChamberReport:
    if not chamber.contains(v):
        raise LatticeError("v is not in the chamber")
    fq = [[Fraction(x) for x in row] for row in form]
    vv = _dot(v, linalg.matvec(fq, [Fraction(x) for x in v]))
    sign = "positive" if vv > 0 else "zero" if vv == 0 else "negative"
    edge = None
    for r in chamber.rays:
        if _dot(r, linalg.matvec(fq, list(r))) == 0 and linalg.rank([list(r), list(v)]) == 1:
            edge = r
            break
    return ChamberReport(sign, True, edge)
