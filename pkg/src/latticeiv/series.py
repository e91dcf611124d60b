"""Truncated evaluation of lattice series and wall products, each with an
a-posteriori tail bound."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import LatticeError

POLE_TOL = 1e-12
TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class SeriesEvaluation:
    value: complex
    truncation: int
    tail_bound: float
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tail_bound < 0:
            raise LatticeError("tail bound must be nonnegative")


def _check_poles(bases: np.ndarray, what: str):
    if np.any(np.abs(bases) < POLE_TOL):
        raise LatticeError(f"{what}: pole in the summation window")


def eval_S_k(a: int, k: int, z: complex, N: int) -> SeriesEvaluation:
    """Symmetric partial sum of ``(a z + n)^(-k)`` over ``|n| <= N``.

    The two tails are bounded by ``∫_N^∞ (t - c)^(-k) dt`` with ``c = |Re(a z)|``.
    """
    if a <= 0 or k < 2:
        raise LatticeError("need a >= 1 and k >= 2")
    w = a * complex(z)
    if abs(w - round(w.real)) < POLE_TOL:
        raise LatticeError("a z is an integer: pole of the series")
    c = abs(w.real)
    if N <= c + 1:
        raise LatticeError("truncation must exceed |Re(a z)| + 1")
    n = np.arange(-N, N + 1, dtype=np.float64)
    terms = (w + n) ** (-k)
    tail = 2 * (N - c) ** (1 - k) / (k - 1)
    return SeriesEvaluation(complex(np.sum(terms)), N, float(tail))


def _phi(gram, z, v) -> complex:
    g = np.asarray(gram, dtype=np.float64)
    return complex(np.asarray(z, dtype=np.complex128) @ g @ np.asarray(v, dtype=np.float64))


def eval_F_k(gram, orbit: Sequence[Sequence[int]], k: int, z: Sequence[complex]) -> SeriesEvaluation:
    """Finite sum of ``φ(z, v)^(-k)`` over the supplied orbit window."""
    if not orbit:
        raise LatticeError("orbit window is empty")
    g = np.array([[float(Fraction(x)) for x in row] for row in gram])
    zs = np.asarray(z, dtype=np.complex128)
    vs = np.asarray(orbit, dtype=np.float64)
    if vs.shape[1] != g.shape[0] or zs.shape[0] != g.shape[0]:
        raise LatticeError("dimension mismatch between gram, orbit and z")
    phis = vs @ (g @ zs)
    _check_poles(phis, "F_k")
    return SeriesEvaluation(complex(np.sum(phis ** (-k))), len(orbit), 0.0)


# ------------------------------------------------------------- wall products

Wall = tuple  # (linear coefficients, constant, multiplicity)


def _normalize_walls(walls) -> list[tuple[tuple, float, int]]:
    out = []
    for w in walls:
        if len(w) == 2:
            f, m = w
            c = 0
        else:
            f, c, m = w
        out.append((tuple(f), c, int(m)))
    return out


def _wall_exponentials(walls, z) -> np.ndarray:
    zs = np.asarray(z, dtype=np.complex128)
    return np.array([cmath.exp(TWO_PI_I * (complex(np.dot(np.asarray(f, dtype=np.float64), zs)) + float(c))) for f, c, _ in walls])


def eval_product_Pm(walls, z: Sequence[complex], N: int | None = None, strict: bool = True) -> SeriesEvaluation:
    """``Π (1 - e(f_H(z)))^(m_H)`` with ``e(x) = exp(2πi x)``, accumulated in log space.

    With ``strict`` every factor must satisfy ``|e(f_H(z))| < 1``. The
    diagnostic ``Σ |m_H| |e(f_H(z))|`` is returned in ``extras``.
    """
    ws = _normalize_walls(walls)
    if not ws:
        return SeriesEvaluation(1 + 0j, 0, 0.0, {"convergence": 0.0})
    qs = _wall_exponentials(ws, z)
    if strict and np.any(np.abs(qs) >= 1):
        raise LatticeError("z lies outside the convergence region of the product")
    ms = np.array([m for _, _, m in ws], dtype=np.float64)
    one_minus = 1 - qs
    if np.any((np.abs(one_minus) < POLE_TOL) & (ms < 0)):
        raise LatticeError("product has a pole at z")
    if np.any((np.abs(one_minus) < POLE_TOL) & (ms > 0)):
        value = 0j
    else:
        value = complex(np.exp(np.sum(ms * np.log(one_minus))))
    return SeriesEvaluation(value, len(ws), 0.0, {"convergence": float(np.sum(np.abs(ms) * np.abs(qs)))})


@dataclass(frozen=True)
class FunctionalEquationCheck:
    lhs: complex
    rhs: complex
    residual: float
    exponent: tuple[Fraction, ...]
    sign: int


def product_functional_equation(arr, sigma, gamma, z: Sequence[complex]) -> FunctionalEquationCheck:
    """Compare ``P_σ(γ⁻¹ z)`` with ``±e(-E(z)) P_σ(z)``.

    ``E`` is the wall cocycle from σ to γσ and the sign is ``(-1)^(Σ m)``
    over the separating walls. γ must permute the arrangement, preserving
    multiplicities.
    """
    from . import linalg
    from .cones import cone_hull
    from .divisors import _side, cocycle_exponent, separating_walls

    mult = {linalg.canonical_sign(f): m for f, m in arr.members}
    inv = linalg.inverse(gamma.matrix)
    oriented = []
    for f, m in arr.members:
        s = _side(f, sigma)
        if s == 0:
            raise LatticeError("sigma lies on an arrangement member")
        oriented.append((tuple(s * x for x in f), m))
        moved = linalg.matvec(linalg.transpose(inv), list(f))
        if any(Fraction(x).denominator != 1 for x in moved):
            raise LatticeError("gamma does not permute the weighted arrangement")
        if mult.get(linalg.canonical_sign(tuple(int(x) for x in moved))) != m:
            raise LatticeError("gamma does not permute the weighted arrangement")
    gsigma = cone_hull([gamma(r) for r in sigma.rays], sigma.dim_ambient)
    E = cocycle_exponent(sigma, gsigma, arr)
    sign = (-1) ** sum(m for _, m in separating_walls(sigma, gsigma, arr))

    zs = np.asarray(z, dtype=np.complex128)
    ginv = np.array([[float(x) for x in row] for row in inv])
    walls = [(tuple(float(x) for x in f), 0.0, m) for f, m in oriented]
    lhs = eval_product_Pm(walls, ginv @ zs, strict=False).value
    base = eval_product_Pm(walls, zs, strict=False).value
    rhs = sign * cmath.exp(-TWO_PI_I * complex(np.dot([float(x) for x in E], zs))) * base
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return FunctionalEquationCheck(lhs, rhs, abs(lhs - rhs) / scale, E, sign)


# ---------------------------------------------------------------- Eisenstein

def _edge_distance(tau: complex) -> float:
    """``min |s τ + t|`` over the boundary of the square ``max(|s|,|t|) = 1``."""
    t = min(1.0, max(-1.0, -tau.real))
    d1 = abs(tau + t)
    # |s τ + 1| over s in [-1, 1]
    s = min(1.0, max(-1.0, -tau.real / abs(tau) ** 2))
    d2 = abs(s * tau + 1)
    return min(d1, d2)


def translate_argument(gram, e: Sequence[int], f0: Sequence, z: Sequence[complex]) -> complex:
    """``φ(z, f0) / φ(z, e)``, the argument of the translate series."""
    den = _phi(gram, z, e)
    if abs(den) < POLE_TOL:
        raise LatticeError("φ(z, e) vanishes")
    return _phi(gram, z, f0) / den


def eval_eisenstein_Ek(k: int, w: complex, tau: complex, N: int) -> SeriesEvaluation:
    """Sum of ``(w + m τ + n)^(-k)`` over the square window ``|m|, |n| <= N``.

    The tail is bounded by comparing the ``8r`` points on each square shell
    of radius r with ``(r δ - |w|)^(-k)``.
    """
    if k < 3:
        raise LatticeError("need k >= 3 for absolute convergence")
    tau, w = complex(tau), complex(w)
    if tau.imag <= 0:
        raise LatticeError("tau must lie in the upper half-plane")
    delta = _edge_distance(tau)
    r0 = abs(w) / delta
    if N <= r0 + 1:
        raise LatticeError("window too small for the tail estimate")
    r = np.arange(-N, N + 1, dtype=np.float64)
    grid = w + r[:, None] * tau + r[None, :]
    _check_poles(grid, "Eisenstein")
    value = complex(np.sum(grid ** (-k)))
    tail = 8 * delta ** (-k) * ((N - r0) ** (2 - k) / (k - 2) + r0 * (N - r0) ** (1 - k) / (k - 1))
    return SeriesEvaluation(value, N, float(tail), {"edge_distance": delta})
