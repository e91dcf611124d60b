"""The acceptance criteria as runnable checks.

Each check returns a :class:`CriterionResult`. The oracles used here are
independent of the code under test: LP feasibility for fan cells,
closed forms for series, raw numpy grids for vector enumeration.
"""
from __future__ import annotations

import cmath
import itertools
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from . import linalg
from .cones import cone_cut, cone_hull, fan_from_hyperplanes
from .divisors import (
    WeightedArrangement,
    build_pl_function,
    cocycle_exponent,
    pl_invariance_check,
    solve_rho,
)
from .enumeration import VectorQuery, short_vectors
from .errors import LatticeError
from .k3 import (
    enriques_context,
    enriques_isotropic_pair,
    k3_context,
    k3arr_search,
    m_r_lattice,
    section33_report,
)
from .lattice import (
    IntLattice,
    LatticeMap,
    determinant,
    direct_sum,
    inner,
    is_definite,
    is_isometry,
    k3_lattice,
    k3_vector,
    make_standard,
    signature,
)
from .series import eval_F_k, eval_S_k, product_functional_equation
from .triangle import affine_basis, affine_embedding, identity_embedding, is_critical_embedding, triangle_context


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


# ---------------------------------------------------------------- 1 lattices

def check_lattice_invariants() -> tuple[bool, str]:
    L = k3_lattice()
    ok = signature(L).as_tuple() == (3, 19, 0) and determinant(L) == -1
    bad = []
    for g in range(2, 11):
        lam = k3_context(g).lambda_g
        if signature(lam).as_tuple() != (2, 19, 0) or determinant(lam) != 2 - 2 * g:
            bad.append(g)
    return ok and not bad, f"K3 (3,19,0) det -1: {ok}; failing genera: {bad or 'none'}"


# ---------------------------------------------------------- 2 the K3 quotient

def check_section33() -> tuple[bool, str]:
    rows, ok = [], True
    for g in range(2, 7):
        r = section33_report(g)
        good = r.quotient_matches_expected and r.corank == 1 and r.qcartier is None
        ok &= good
        rows.append(f"g={g}:corank={r.corank},qcartier={r.qcartier}" + ("" if good else "!"))
    return ok, "; ".join(rows)


# ---------------------------------------------------- 3 K3 pair search

SPEC_TRIPLE = (
    k3_vector(f3=2, f2=1),
    k3_vector(f3=2, e2=1),
    k3_vector(e3=1, f3=-1, e2=-1, f2=-1),
)


def check_k3arr() -> tuple[bool, str]:
    ok, parts = True, []
    for g in range(2, 7):
        rep = k3arr_search(k3_context(g), box=3)
        c = rep.conclusions
        ok &= c["nonempty"] == (g in (3, 4))
        ok &= c["all_a_equal_2"] and c["all_lambda_1"] and c["determinant_formula"]
        if g == 4:
            ok &= bool(rep.triples) and c["triples_ok"]
            ok &= all(
                all(t.gram[i][j] == 1 for i in range(3) for j in range(3) if i != j) and is_isometry(t.witness)
                for t in rep.triples
            )
            ok &= tuple(sorted(SPEC_TRIPLE)) in {t.vectors for t in rep.triples}
        parts.append(f"g={g}:{len(rep.pairs)}p/{len(rep.triples)}t")
    return ok, " ".join(parts)


# ---------------------------------------------------------------- 4 M_r

def check_m_r() -> tuple[bool, str]:
    res = {r: m_r_lattice(r).matches for r in range(3, 9)}
    return all(res.values()), f"matches for r=3..8: {[r for r, v in res.items() if v]}"


# ---------------------------------------------------------------- 5 Enriques

def check_enriques() -> tuple[bool, str]:
    ctx = enriques_context()
    c = ctx.checks
    flags = all(v for k, v in c.items() if not k.endswith("signature"))
    sigs = c["plus_signature"] == (1, 9, 0) and c["minus_signature"] == (2, 10, 0)
    pair = set(enriques_isotropic_pair())
    want = {k3_vector(e1=1, e2=1), k3_vector(f1=1, f2=1)}
    return flags and sigs and pair == want, f"witnesses ok={flags}, signatures ok={sigs}, pair={'e+,f+' if pair == want else sorted(pair)}"


# ---------------------------------------------------------------- 6 triangles

def k8_instances():
    """Embeddings of triangle lattices with k = 8 exercised by criterion 6."""
    out = []
    for p3 in range(7, 18):
        t = triangle_context(2, 3, p3)
        out.append((f"id Q_2,3,{p3}", t, identity_embedding(t)))
    t, j = affine_embedding((2, 3, 7), 8)
    out.append(("Q_2,3,7 -> U+E8(-1)", t, j))
    t = triangle_context(2, 3, 7)
    for extra in (make_standard("A", 1, -1), make_standard("A", 2, -1), make_standard("E", 8, -1)):
        M = direct_sum(t.q_lattice, extra)
        mat = [[int(r == c) for c in range(t.q_lattice.rank)] for r in range(M.rank)]
        out.append((f"Q_2,3,7 -> Q+{extra.label}", t, LatticeMap(mat, t.q_lattice, M)))
    return out


def check_triangle() -> tuple[bool, str]:
    t = triangle_context(2, 3, 7)
    Q, n = t.q_lattice, t.fundamental_isotropic
    basic = Q.rank == 10 and signature(Q).as_tuple() == (1, 9, 0) and t.k == 8
    iso = inner(Q, n, n) == 0 and all(inner(Q, n, b) == 0 for b in affine_basis(t))
    instances = k8_instances()
    critical = [name for name, tc, j in instances if is_critical_embedding(tc, j).critical]
    return basic and iso and not critical, f"rank/signature/k ok={basic}, isotropic ok={iso}, critical k=8 instances: {critical or 'none'} of {len(instances)}"


# ------------------------------------------------------- 7 fan oracle

def _lp_interior(constraints: list[list[int]], n: int) -> bool:
    """Is ``{x : a.x > 0 for all a}`` nonempty?  Maximize a common slack."""
    A = np.array(constraints, dtype=float)
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-A, np.ones((len(A), 1))])
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(len(A)), bounds=[(-1, 1)] * n + [(None, 1)], method="highs")
    return res.status == 0 and -res.fun > 1e-7


def _oracle_rays(constraints: list[list[int]], n: int) -> frozenset:
    rays = set()
    for sub in itertools.combinations(constraints, n - 1):
        if linalg.rank(sub) != n - 1:
            continue
        r = linalg.primitive(linalg.nullspace(list(sub), n)[0])
        for s in (1, -1):
            v = tuple(s * x for x in r)
            if all(sum(a * b for a, b in zip(v, c)) >= 0 for c in constraints):
                rays.add(v)
    return frozenset(rays)


def oracle_sign_cells(pi_facets, hyperplanes, n):
    cells = []
    for signs in itertools.product((1, -1), repeat=len(hyperplanes)):
        cons = [list(f) for f in pi_facets] + [[s * x for x in h] for s, h in zip(signs, hyperplanes)]
        if _lp_interior(cons, n):
            cells.append(_oracle_rays(cons, n))
    return cells


def random_fan_instance(rng: random.Random, n: int, m: int):
    while True:
        facets = [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(rng.randint(n, n + 2))]
        if linalg.rank(facets) == n and _lp_interior([list(f) for f in facets], n):
            break
    hs, seen = [], set()
    while len(hs) < m:
        h = tuple(rng.randint(-2, 2) for _ in range(n))
        if not any(h):
            continue
        key = linalg.canonical_sign(linalg.primitive(h))
        if key not in seen:
            seen.add(key)
            hs.append(h)
    return facets, hs


def check_fan_oracle(instances: int = 50, seed: int = 20240607) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = []
    for i in range(instances):
        n = rng.choice((2, 3, 4))
        facets, hs = random_fan_instance(rng, n, rng.randint(1, 6))
        fan = fan_from_hyperplanes(cone_cut(facets, n), hs)
        cells = oracle_sign_cells(facets, hs, n)
        got = [frozenset(c.rays) for c in fan.chambers]
        all_rays = set().union(*cells)
        if sorted(map(sorted, got)) != sorted(map(sorted, cells)) or set(fan.rays) != all_rays:
            bad.append(i)
    return not bad, f"{instances - len(bad)}/{instances} instances match the LP sign-cell oracle"


# --------------------------------------------------------- 8 divisor criteria

def symmetric_instance(multiplicities=(1, 1)):
    pi = cone_hull([(1, 0), (0, 1)])
    walls = [(1, -2), (2, -1)]
    fan = fan_from_hyperplanes(pi, walls)
    arr = WeightedArrangement.of(walls, multiplicities)
    L = direct_sum(make_standard("A", 1), make_standard("A", 1))
    swap = LatticeMap([[0, 1], [1, 0]], L, L)
    base = next(c for c in fan.chambers if c.contains((1, 0)))
    return fan, arr, swap, base


def check_divisor_criteria(fans: int = 30, seed: int = 99) -> tuple[bool, str]:
    rng = random.Random(seed)
    triples = 0
    additive = continuous = True
    for _ in range(fans):
        n = rng.choice((2, 3))
        facets, hs = random_fan_instance(rng, n, rng.randint(2, 5))
        fan = fan_from_hyperplanes(cone_cut(facets, n), hs)
        arr = WeightedArrangement.of(hs, [rng.choice((1, 2, 3, -1)) for _ in hs])
        ch = fan.chambers
        e = {(i, j): cocycle_exponent(a, b, arr) for i, a in enumerate(ch) for j, b in enumerate(ch)}
        for i, j, k in itertools.product(range(len(ch)), repeat=3):
            triples += 1
            if tuple(x + y for x, y in zip(e[i, j], e[j, k])) != e[i, k]:
                additive = False
        try:
            continuous &= build_pl_function(fan, arr, [rng.randint(-3, 3) for _ in range(n)]).is_continuous()
        except LatticeError:
            continuous = False
    fan, arr, swap, base = symmetric_instance()
    rho = solve_rho(fan, arr, [swap], base)
    sym = rho is not None and pl_invariance_check(build_pl_function(fan, arr, rho, base), [swap])
    fan2, arr2, _, base2 = symmetric_instance((1, 2))
    asym = not pl_invariance_check(build_pl_function(fan2, arr2, rho or (0, 0), base2), [swap])
    ok = additive and continuous and sym and asym
    return ok, f"additivity on {triples} triples={additive}, continuity={continuous}, symmetric invariant={sym}, perturbed not invariant={asym}"


# ---------------------------------------------------------------- 9 series

def check_series() -> tuple[bool, str]:
    z = 0.5 + 0.3j
    s = eval_S_k(1, 2, z, 10**6)
    oracle = math.pi**2 / cmath.sin(math.pi * z) ** 2
    err_s = abs(s.value - oracle)
    G = [[0, 1, 0], [1, 0, 0], [0, 0, -2]]
    orbit = [(1, 2, 0), (2, 1, 1), (1, 1, -1), (3, 1, 2)]
    zz = [0.3 + 1.1j, 0.7 + 0.2j, 0.1 - 0.4j]
    F = eval_F_k(G, orbit, 4, zz).value
    hom = max(abs(eval_F_k(G, orbit, 4, [t * x for x in zz]).value - t**-4 * F) / abs(t**-4 * F) for t in (2, 1 + 1j))
    fan, arr, swap, base = symmetric_instance()
    fe = max(product_functional_equation(arr, c, swap, [0.13 + 0.9 * r[0] + 0.2j, 0.31 + 0.9 * r[1] + 0.1j]).residual
             for c in fan.chambers for r in [c.interior_point()])
    ok = err_s <= 1e-5 and hom <= 1e-12 and fe <= 1e-10
    return ok, f"S_k error {err_s:.2e} (tail {s.tail_bound:.2e}), F_k homogeneity {hom:.1e}, product equation {fe:.1e}"


# ---------------------------------------------------------- 10 enumeration

def box_oracle(gram, lo: int, hi: int) -> list[tuple[int, ...]]:
    """All nonzero x with lo <= xᵀGx <= hi in a box that provably covers them."""
    n = len(gram)
    G = np.array(gram, dtype=float)
    sign = 1 if np.all(np.linalg.eigvalsh(G) > 0) else -1
    inv = np.linalg.inv(sign * G)
    bound = max(abs(lo), abs(hi))
    b = int(math.floor(math.sqrt(bound * max(np.diag(inv))) + 1e-9))
    rng = np.arange(-b, b + 1)
    X = np.array(np.meshgrid(*[rng] * n, indexing="ij")).reshape(n, -1).T
    Gi = np.array(gram, dtype=np.int64)
    norms = np.einsum("ij,jk,ik->i", X, Gi, X)
    sel = X[(norms >= lo) & (norms <= hi) & np.any(X != 0, axis=1)]
    return sorted({linalg.canonical_sign(tuple(int(x) for x in v)) for v in sel})


def definite_grams(seed: int = 5, sample: int = 150):
    """Every definite Gram of rank 1-2 with entries in [-4, 4], plus a seeded sample of ranks 3-4."""
    out = [[[a]] for a in range(-4, 5) if a]
    for a, b, c in itertools.product(range(-4, 5), repeat=3):
        if a * c - b * b > 0:
            out.append([[a, b], [b, c]])
    rng = random.Random(seed)
    for n in (3, 4):
        got = 0
        while got < sample:
            m = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    m[i][j] = m[j][i] = rng.randint(-4, 4)
            if is_definite(IntLattice(m, even=False)):
                out.append(m)
                got += 1
    return out


def check_enumeration(seed: int = 5) -> tuple[bool, str]:
    count, bad = 0, 0
    for gram in definite_grams(seed):
        L = IntLattice(gram, even=False)
        lo, hi = (1, 8) if gram[0][0] > 0 else (-8, -1)
        count += 1
        if short_vectors(L, VectorQuery(norm=(lo, hi))) != box_oracle(gram, lo, hi):
            bad += 1
    return bad == 0, f"{count - bad}/{count} definite lattices agree with the grid oracle"


CRITERIA = [
    (1, "lattice invariants", check_lattice_invariants),
    (2, "K3 rank-17 quotient", check_section33),
    (3, "K3 pair search", check_k3arr),
    (4, "M_r lattices", check_m_r),
    (5, "Enriques eigenlattices", check_enriques),
    (6, "triangle lattices", check_triangle),
    (7, "fan oracle", check_fan_oracle),
    (8, "divisor criteria", check_divisor_criteria),
    (9, "series", check_series),
    (10, "enumeration oracle", check_enumeration),
]


def run_criterion(number: int) -> CriterionResult:
    _, name, fn = next(c for c in CRITERIA if c[0] == number)
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except LatticeError as exc:
        passed, detail = False, f"error: {exc}"
    return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - t0)


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("LATTICEIV_THREADS", "1")))
    except ValueError:
        return 1


def run_all(numbers=None, workers: int | None = None) -> list[CriterionResult]:
    numbers = [c[0] for c in CRITERIA] if numbers is None else list(numbers)
    workers = thread_cap() if workers is None else workers
    if workers <= 1:
        return [run_criterion(k) for k in numbers]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_criterion, numbers))
