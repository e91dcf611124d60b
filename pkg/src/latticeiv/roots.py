"""ADE decomposition of the (−2)-vectors of a negative definite even lattice."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .enumeration import VectorQuery, short_vectors
from .errors import LatticeError
from .lattice import IntLattice, Vector, inner, is_definite, make_standard

ROOT_COUNT = {"A": lambda n: n * (n + 1), "D": lambda n: 2 * n * (n - 1)}
E_ROOT_COUNT = {6: 72, 7: 126, 8: 240}


@dataclass(frozen=True)
class RootComponent:
    kind: str  # "A", "D" or "E"
    rank: int
    simple_roots: tuple[Vector, ...]  # in the node order of make_standard
    roots: tuple[Vector, ...]  # sign classes, first nonzero coordinate positive

    @property
    def ade_type(self) -> str:
        return f"{self.kind}{self.rank}"

    def contains(self, v: Sequence[int]) -> bool:
        return linalg.canonical_sign(v) in self._root_set

    @property
    def _root_set(self) -> frozenset:
        return frozenset(self.roots)


@dataclass(frozen=True)
class RootDecomposition:
    components: tuple[RootComponent, ...]
    total_root_span_rank: int

    @property
    def types(self) -> list[str]:
        return sorted(c.ade_type for c in self.components)


def _arms(adj: dict[int, set[int]], center: int) -> list[list[int]]:
    arms = []
    for start in sorted(adj[center]):
        arm, prev, cur = [start], center, start
        while True:
            nxt = [x for x in adj[cur] if x != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            arm.append(cur)
        arms.append(arm)
    return sorted(arms, key=len)


def dynkin_type(nodes: Sequence[int], adj: dict[int, set[int]]) -> tuple[str, int, list[int]]:
    """Recognize a connected simply-laced Dynkin diagram.

    Returns the type letter, rank and the nodes reordered to match
    :func:`latticeiv.lattice.root_lattice_edges`.
    """
    n = len(nodes)
    edges = sum(len(adj[v]) for v in nodes) // 2
    if edges != n - 1:
        raise LatticeError("root graph is not a tree; not an ADE diagram")
    branch = [v for v in nodes if len(adj[v]) >= 3]
    if not branch:
        start = min(nodes, key=lambda v: (len(adj[v]), v))
        order, prev = [start], None
        while len(order) < n:
            cur = order[-1]
            nxt = [x for x in adj[cur] if x != prev]
            prev = cur
            order.append(nxt[0])
        return "A", n, order
    if len(branch) > 1 or len(adj[branch[0]]) > 3:
        raise LatticeError("diagram has too many branch points for ADE")
    c = branch[0]
    a1, a2, a3 = _arms(adj, c)
    lengths = (len(a1), len(a2), len(a3))
    if lengths[:2] == (1, 1):
        return "D", n, [a1[0], a2[0], c] + a3
    if lengths in ((1, 2, 2), (1, 2, 3), (1, 2, 4)):
        return "E", n, [a2[1], a1[0], a2[0], c] + a3
    raise LatticeError(f"diagram with arms {lengths} is not of ADE type")


def _classical_count(kind: str, n: int) -> int:
    return E_ROOT_COUNT[n] if kind == "E" else ROOT_COUNT[kind](n)


def ade_decompose(L: IntLattice, roots: Sequence[Sequence[int]] | None = None) -> RootDecomposition:
    """Split the roots of ``L`` (or a supplied closed root subset) into ADE components.

    Positive roots are the lexicographically positive ones (lex order is
    additive, so this is a genuine positive system); simple roots are the
    positive roots that are not a sum of two positive roots.
    """
    if is_definite(L) != -1:
        raise LatticeError("ade_decompose needs a negative definite lattice")
    if roots is None:
        pos = short_vectors(L, VectorQuery(norm=-2))
    else:
        pos = sorted({linalg.canonical_sign(r) for r in roots})
        if any(inner(L, r, r) != -2 for r in pos):
            raise LatticeError("supplied vectors are not all roots")
    pos_set = set(pos)
    simple = [s for s in pos
              if not any(tuple(a - b for a, b in zip(s, p)) in pos_set for p in pos if p != s)]
    for i, s in enumerate(simple):
        for t in simple[i + 1:]:
            if inner(L, s, t) not in (0, 1):
                raise LatticeError("root subset is not closed (simple roots pair outside {0,1})")
    adj = {i: {j for j in range(len(simple)) if j != i and inner(L, simple[i], simple[j])}
           for i in range(len(simple))}
    seen, comps = set(), []
    for s in range(len(simple)):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v] - seen:
                seen.add(w)
                stack.append(w)
        comps.append(sorted(comp))

    # assign each positive root to the component of its simple-root support
    where = {}
    for r in pos:
        coeffs = linalg.solve(linalg.transpose(simple), r) if simple else None
        if coeffs is None:
            raise LatticeError("root set is not spanned by its simple roots")
        support = {i for i, c in enumerate(coeffs) if c}
        owner = [k for k, comp in enumerate(comps) if support <= set(comp)]
        if len(owner) != 1:
            raise LatticeError("root straddles two components")
        where.setdefault(owner[0], []).append(r)

    components = []
    for k, comp in enumerate(comps):
        kind, n, order = dynkin_type(comp, adj)
        sroots = tuple(simple[i] for i in order)
        gram = tuple(tuple(inner(L, a, b) for b in sroots) for a in sroots)
        if gram != tuple(map(tuple, make_standard(kind, n, -1).gram)):
            raise LatticeError("simple-root Gram does not match the recognized Cartan matrix")
        rs = tuple(sorted(where.get(k, [])))
        if 2 * len(rs) != _classical_count(kind, n):
            raise LatticeError(f"{kind}{n} component has {2 * len(rs)} roots")
        components.append(RootComponent(kind, n, sroots, rs))
    components.sort(key=lambda c: (c.kind, -c.rank, c.simple_roots))
    total = sum(c.rank for c in components)
    return RootDecomposition(tuple(components), total)


def root_span_corank(L: IntLattice, roots: Sequence[Sequence[int]] | None = None) -> int:
    """``rank(L)`` minus the rank of the span of its (−2)-vectors."""
    if is_definite(L) != -1:
        raise LatticeError("root_span_corank needs a negative definite lattice")
    if roots is None:
        roots = short_vectors(L, VectorQuery(norm=-2))
    return L.rank - (linalg.rank(roots) if roots else 0)


def containing_component_type(decomp: RootDecomposition, roots: Sequence[Sequence[int]]) -> str:
    """Type of the single component containing all of ``roots``."""
    owners = set()
    for r in roots:
        hit = [c for c in decomp.components if c.contains(r)]
        if not hit:
            raise LatticeError(f"{tuple(r)} is not a root of the decomposition")
        owners.add(hit[0])
    if len(owners) != 1:
        raise LatticeError("roots lie in more than one component")
    return owners.pop().ade_type
