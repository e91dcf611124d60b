"""Rational polyhedral cones, fans inside a fixed cone, and support spaces.

Functionals are integer vectors paired with points by the plain dot product;
the ambient quadratic form is only used where a statement is about it
(argmin fans, support spaces, isotropic centers).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import LatticeError

Vec = tuple[int, ...]
RatMatrix = tuple[tuple[Fraction, ...], ...]


def _prim(v: Sequence) -> Vec:
    return linalg.primitive(v)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _rank(rows) -> int:
    rows = [r for r in rows if any(r)]
    return linalg.rank(rows) if rows else 0


def _extreme_rays(n: int, equations: Sequence[Sequence[int]], inequalities: Sequence[Sequence[int]]) -> list[Vec]:
    """Extreme rays of ``{x : E x = 0, A x >= 0}`` by double description.

    Starts from the whole subspace ``E x = 0`` (all lineality) and cuts by one
    inequality at a time.  Raises if the final cone still contains a line.
    """
    eqs = [list(e) for e in equations if any(e)]
    lin = [list(v) for v in linalg.integer_kernel(eqs, n)] if eqs else [list(r) for r in linalg.identity(n)]
    rays: list[list[int]] = []
    done: list[list[int]] = []

    def tight(r):
        return [a for a in done if _dot(a, r) == 0]

    for a in inequalities:
        a = list(a)
        if not any(a):
            continue
        k = next((i for i, l in enumerate(lin) if _dot(a, l) != 0), None)
        if k is not None:
            pivot = lin[k] if _dot(a, lin[k]) > 0 else [-x for x in lin[k]]
            al = _dot(a, pivot)
            rest = [[al * x - _dot(a, l) * y for x, y in zip(l, pivot)] for i, l in enumerate(lin) if i != k]
            rest = [r for r in rest if any(r)]
            lin = [list(b) for b in linalg.lattice_basis(rest)] if rest else []
            rays = [list(_prim([al * x - _dot(a, r) * y for x, y in zip(r, pivot)])) for r in rays]
            rays.append(list(_prim(pivot)))
            done.append(a)
            continue
        plus = [r for r in rays if _dot(a, r) > 0]
        zero = [r for r in rays if _dot(a, r) == 0]
        minus = [r for r in rays if _dot(a, r) < 0]
        if not minus:
            done.append(a)
            continue
        target = n - len(lin) - 2
        new = plus + zero
        for p in plus:
            tp = tight(p)
            for m in minus:
                common = [b for b in tp if _dot(b, m) == 0]
                if _rank(eqs + common) != target:
                    continue
                ap, am = _dot(a, p), _dot(a, m)
                new.append(list(_prim([ap * x - am * y for x, y in zip(m, p)])))
        done.append(a)
        keep = n - len(lin) - 1
        uniq = {}
        for r in new:
            if any(r) and _rank(eqs + tight(r)) == keep:
                uniq[tuple(r)] = r
        rays = list(uniq.values())
    if lin:
        raise LatticeError("cone contains a line")
    return sorted({_prim(r) for r in rays})


@dataclass(frozen=True)
class RationalCone:
    """A pointed rational polyhedral cone in both descriptions.

    ``rays`` are primitive extreme rays; ``facets`` are primitive functionals
    ``y`` with ``y.x >= 0`` on the cone, chosen inside the linear span of the
    cone; ``equations`` is an HNF basis of the functionals vanishing on it.
    """

    dim_ambient: int
    rays: tuple[Vec, ...]
    facets: tuple[Vec, ...]
    equations: tuple[Vec, ...]

    @property
    def dim(self) -> int:
        return self.dim_ambient - len(self.equations)

    def contains(self, x: Sequence) -> bool:
        return all(_dot(y, x) >= 0 for y in self.facets) and all(_dot(e, x) == 0 for e in self.equations)

    def in_relative_interior(self, x: Sequence) -> bool:
        return all(_dot(y, x) > 0 for y in self.facets) and all(_dot(e, x) == 0 for e in self.equations)

    def interior_point(self) -> Vec:
        """Sum of the rays: a point of the relative interior."""
        return tuple(sum(c) for c in zip(*self.rays)) if self.rays else (0,) * self.dim_ambient

    def span(self) -> list[Vec]:
        return linalg.saturation(self.rays, self.dim_ambient) if self.rays else []

    def faces(self) -> list["RationalCone"]:
        """All faces, the cone itself and the origin included."""
        memo: dict[tuple, RationalCone] = {}

        def walk(c: RationalCone):
            if c.rays in memo:
                return
            memo[c.rays] = c
            for y in c.facets:
                walk(cone_hull([r for r in c.rays if _dot(y, r) == 0], c.dim_ambient))

        walk(self)
        return sorted(memo.values(), key=_cone_key)

    def face_containing(self, sub: "RationalCone") -> "RationalCone":
        """Smallest face of this cone containing ``sub`` (assumed inside it)."""
        ys = [y for y in self.facets if all(_dot(y, r) == 0 for r in sub.rays)]
        return cone_hull([r for r in self.rays if all(_dot(y, r) == 0 for y in ys)], self.dim_ambient)

    def has_face(self, sub: "RationalCone") -> bool:
        if not all(self.contains(r) for r in sub.rays):
            return False
        return self.face_containing(sub).rays == sub.rays


def _cone_key(c: RationalCone):
    return (c.dim, c.rays)


def _dual_facets(rays: Sequence[Vec], n: int) -> tuple[list[Vec], list[Vec]]:
    eqs = linalg.integer_kernel([list(r) for r in rays], n)
    # facets: extreme rays of the dual cone inside span(rays) = eqs^⊥
    return _extreme_rays(n, eqs, rays), list(eqs)


def cone_hull(rays: Iterable[Sequence], n: int | None = None) -> RationalCone:
    """Cone generated by rational vectors; raises if it contains a line."""
    rays = [tuple(r) for r in rays]
    if n is None:
        if not rays:
            raise LatticeError("ambient dimension needed for an empty generator list")
        n = len(rays[0])
    gens = sorted({_prim(r) for r in rays if any(r)})
    if not gens:
        return RationalCone(n, (), (), tuple(tuple(r) for r in linalg.identity(n)))
    facets, eqs = _dual_facets(gens, n)
    if _rank([list(e) for e in eqs] + [list(f) for f in facets]) != n:
        raise LatticeError("cone contains a line")
    extreme = tuple(sorted(g for g in gens if _rank([list(e) for e in eqs] + [list(f) for f in facets if _dot(f, g) == 0]) == n - 1))
    return RationalCone(n, extreme, tuple(sorted(facets)), tuple(sorted(eqs)))


def cone_cut(facets: Iterable[Sequence], n: int | None = None, equations: Iterable[Sequence] = ()) -> RationalCone:
    """Cone ``{x : y.x >= 0 for y in facets, e.x = 0 for e in equations}``."""
    facets = [tuple(linalg.integer_vector(f)) for f in facets]
    equations = [tuple(linalg.integer_vector(e)) for e in equations]
    if n is None:
        allv = facets + equations
        if not allv:
            raise LatticeError("ambient dimension needed")
        n = len(allv[0])
    rays = _extreme_rays(n, equations, facets)
    return cone_hull(rays, n)


def intersect(c1: RationalCone, c2: RationalCone) -> RationalCone:
    return cone_cut(list(c1.facets) + list(c2.facets), c1.dim_ambient, list(c1.equations) + list(c2.equations))


# -------------------------------------------------------------------------- fans

@dataclass(frozen=True)
class Fan:
    cones: tuple[RationalCone, ...]
    form: RatMatrix | None = None

    @property
    def dim_ambient(self) -> int:
        return self.cones[0].dim_ambient

    @property
    def max_dim(self) -> int:
        return max(c.dim for c in self.cones)

    @property
    def chambers(self) -> list[RationalCone]:
        d = self.max_dim
        return [c for c in self.cones if c.dim == d]

    @property
    def rays(self) -> list[Vec]:
        return sorted(c.rays[0] for c in self.cones if c.dim == 1)

    def maximal_cones(self) -> list[RationalCone]:
        out = []
        for c in self.cones:
            if not any(o is not c and o.dim > c.dim and o.has_face(c) for o in self.cones):
                out.append(c)
        return out

    def __contains__(self, cone: RationalCone) -> bool:
        return any(c.rays == cone.rays for c in self.cones)

    def check_face_closure(self) -> bool:
        keys = {c.rays for c in self.cones}
        return all(f.rays in keys for c in self.cones for f in c.faces())

    def check_intersections(self) -> bool:
        ms = self.maximal_cones()
        for a, b in itertools.combinations(ms, 2):
            i = intersect(a, b)
            if not (a.has_face(i) and b.has_face(i)):
                return False
        return True


def _fan_from_chambers(chambers: Sequence[RationalCone], form) -> Fan:
    allc: dict[tuple, RationalCone] = {}
    for ch in chambers:
        for f in ch.faces():
            allc.setdefault(f.rays, f)
    return Fan(tuple(sorted(allc.values(), key=_cone_key)), _as_form(form))


def _as_form(form) -> RatMatrix | None:
    if form is None:
        return None
    return tuple(tuple(Fraction(x) for x in row) for row in form)


def _form_integral(form) -> list[list[int]]:
    """Integer multiple of a rational form (same orthogonality relation)."""
    den = math.lcm(1, *(Fraction(x).denominator for row in form for x in row))
    return [[int(Fraction(x) * den) for x in row] for row in form]


def fan_from_hyperplanes(pi: RationalCone, hyperplanes: Sequence[Sequence[int]], form=None) -> Fan:
    """Closures of the sign cells of the arrangement inside ``pi``, with faces."""
    n = pi.dim_ambient
    cells = [pi]
    for h in hyperplanes:
        h = tuple(linalg.integer_vector(h))
        if not any(h):
            continue
        nxt = []
        for c in cells:
            vals = [_dot(h, r) for r in c.rays]
            if any(v > 0 for v in vals) and any(v < 0 for v in vals):
                base = list(c.facets)
                nxt.append(cone_cut(base + [h], n, c.equations))
                nxt.append(cone_cut(base + [tuple(-x for x in h)], n, c.equations))
            else:
                nxt.append(c)
        cells = nxt
    return _fan_from_chambers(cells, form)


def pairing_functional(form, p: Sequence) -> Vec:
    """Primitive integer functional proportional to ``x -> form(x, p)``."""
    return _prim(linalg.matvec([[Fraction(x) for x in row] for row in form], [Fraction(x) for x in p]))


def fan_from_points(pi: RationalCone, form, points: Sequence[Sequence]) -> Fan:
    """Coarsest fan in ``pi`` on which ``x -> min_p form(x, p)`` is linear."""
    if not points:
        raise LatticeError("need at least one point")
    fq = [[Fraction(x) for x in row] for row in form]
    functionals = []
    seen = set()
    inner_pt = pi.interior_point()
    for p in points:
        lin = tuple(linalg.matvec(fq, [Fraction(x) for x in p]))
        if _dot(lin, inner_pt) <= 0 or any(_dot(lin, r) < 0 for r in pi.rays):
            raise LatticeError("every point must pair positively with pi")
        if lin not in seen:
            seen.add(lin)
            functionals.append(lin)
    chambers = []
    for p in functionals:
        cuts = [linalg.integer_vector([a - b for a, b in zip(q, p)]) for q in functionals if q != p]
        c = cone_cut(list(pi.facets) + cuts, pi.dim_ambient, pi.equations)
        if c.dim == pi.dim and not any(c.rays == d.rays for d in chambers):
            chambers.append(c)
    return _fan_from_chambers(chambers, form)


# ------------------------------------------------------------- support spaces

def subspace_intersection(n: int, *spaces: Sequence[Sequence[int]]) -> list[Vec]:
    """Integer basis of the intersection of rational subspaces (each a spanning list)."""
    ann = []
    for s in spaces:
        s = [list(v) for v in s if any(v)]
        if not s:
            return []
        ann += [list(a) for a in linalg.integer_kernel(s, n)]
    return linalg.integer_kernel(ann, n) if ann else [tuple(r) for r in linalg.identity(n)]


def form_perp(form, vectors: Sequence[Sequence[int]], n: int) -> list[Vec]:
    g = _form_integral(form)
    rows = [linalg.matvec(g, list(v)) for v in vectors if any(v)]
    return linalg.integer_kernel(rows, n)


def isotropic_center(form, space: Sequence[Sequence[int]], n: int) -> list[Vec]:
    """``V ∩ V^⊥`` for the form."""
    if not space:
        return []
    return subspace_intersection(n, space, form_perp(form, space, n))


@dataclass(frozen=True)
class SupportSpaceReport:
    sigma: RationalCone
    meets_positive_cone: bool
    support_space: tuple[Vec, ...]
    isotropic_center: tuple[Vec, ...]


def _q(form, v) -> Fraction:
    return _dot(v, linalg.matvec([[Fraction(x) for x in r] for r in form], v))


def support_space(fan: Fan, sigma: RationalCone, hyperplanes: Sequence[Sequence[int]] = (), form=None) -> SupportSpaceReport:
    """Support space of a cone of the fan and its isotropic center.

    A cone whose relative interior has positive norm gets its own span.  An
    isotropic ray I gets ``I^⊥ ∩ ⋂{H ⊇ I}`` over the supplied hyperplanes.
    """
    form = form if form is not None else fan.form
    if form is None:
        raise LatticeError("support spaces need the ambient form")
    if sigma not in fan:
        raise LatticeError("sigma is not a cone of the fan")
    n = fan.dim_ambient
    v = sigma.interior_point()
    if sigma.rays and _q(form, v) > 0:
        span = sigma.span()
        return SupportSpaceReport(sigma, True, tuple(span), tuple(isotropic_center(form, span, n)))
    if sigma.dim != 1 or _q(form, sigma.rays[0]) != 0:
        raise LatticeError("only cones meeting the positive cone or isotropic rays have support spaces here")
    i = sigma.rays[0]
    pieces = [form_perp(form, [i], n)]
    through = [linalg.integer_vector(h) for h in hyperplanes if _dot(linalg.integer_vector(h), i) == 0]
    if through:
        pieces.append(linalg.integer_kernel(through, n))
    space = subspace_intersection(n, *pieces)
    return SupportSpaceReport(sigma, False, tuple(space), tuple(isotropic_center(form, space, n)))


def plane_support_space(form, plane: Sequence[Sequence[int]], hyperplanes: Sequence[Sequence[int]]) -> list[Vec]:
    """``J^⊥ ∩ ⋂{H ⊇ J}`` for a totally isotropic rank-2 ``J``; always contains J."""
    plane = [list(v) for v in plane]
    n = len(plane[0])
    if linalg.rank(plane) != 2:
        raise LatticeError("J must have rank 2")
    fq = [[Fraction(x) for x in r] for r in form]
    if any(_dot(a, linalg.matvec(fq, b)) for a in plane for b in plane):
        raise LatticeError("J is not totally isotropic")
    through = [linalg.integer_vector(h) for h in hyperplanes
               if all(_dot(linalg.integer_vector(h), v) == 0 for v in plane)]
    pieces = [form_perp(form, plane, n)]
    if through:
        pieces.append(linalg.integer_kernel(through, n))
    return subspace_intersection(n, *pieces)
