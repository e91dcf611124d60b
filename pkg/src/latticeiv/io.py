"""JSON encodings for lattices, maps, fans and arrangements.

Exact rationals are written as integers or ``"p/q"`` strings, never floats.
"""
from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .cones import Fan, RationalCone, cone_hull
from .divisors import WeightedArrangement
from .errors import LatticeError
from .lattice import IntLattice, LatticeMap, parse_lattice_name


def rational(x) -> Fraction:
    if isinstance(x, bool):
        raise LatticeError("booleans are not rationals")
    if isinstance(x, float):
        raise LatticeError("exact inputs must be integers or 'p/q' strings, not floats")
    try:
        return Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise LatticeError(f"not a rational number: {x!r}") from exc


def rational_text(x) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_matrix(rows) -> list[list[Fraction]]:
    return [[rational(x) for x in row] for row in rows]


def int_matrix(rows) -> list[list[int]]:
    out = []
    for row in rows:
        r = [rational(x) for x in row]
        if any(x.denominator != 1 for x in r):
            raise LatticeError("expected an integer matrix")
        out.append([int(x) for x in r])
    return out


# ------------------------------------------------------------------ lattices

def lattice_to_json(L: IntLattice) -> dict:
    return {"label": L.label, "gram": [list(r) for r in L.gram]}


def lattice_from_json(obj) -> IntLattice:
    if isinstance(obj, str):
        return parse_lattice_name(obj)
    if "name" in obj and "gram" not in obj:
        return parse_lattice_name(obj["name"])
    gram = int_matrix(obj["gram"])
    even = all(gram[i][i] % 2 == 0 for i in range(len(gram)))
    return IntLattice(gram, label=obj.get("label", ""), even=even)


def map_to_json(m: LatticeMap) -> dict:
    return {"matrix": [list(r) for r in m.matrix], "source": m.source.label, "target": m.target.label}


def map_from_json(obj, source: IntLattice | None = None, target: IntLattice | None = None) -> LatticeMap:
    """Maps reference lattices by label; pass them in, or embed full lattice objects."""
    matrix = int_matrix(obj["matrix"])

    def resolve(key, given):
        if given is not None:
            return given
        v = obj.get(key)
        if isinstance(v, dict):
            return lattice_from_json(v)
        if isinstance(v, str):
            return parse_lattice_name(v)
        raise LatticeError(f"map needs a {key} lattice")

    return LatticeMap(matrix, resolve("source", source), resolve("target", target))


# ---------------------------------------------------------------------- fans

def cone_to_json(c: RationalCone) -> dict:
    return {"rays": [list(r) for r in c.rays]}


def fan_to_json(fan: Fan) -> dict:
    out: dict[str, Any] = {"dim": fan.dim_ambient, "cones": [cone_to_json(c) for c in fan.cones]}
    if fan.form is not None:
        out["form"] = [[rational_text(x) for x in row] for row in fan.form]
    return out


def cone_from_json(obj, n: int | None = None) -> RationalCone:
    if "facets" in obj and "rays" not in obj:
        from .cones import cone_cut

        return cone_cut(int_matrix(obj["facets"]), n)
    return cone_hull(int_matrix(obj["rays"]), n)


def fan_from_json(obj) -> Fan:
    form = tuple(map(tuple, rational_matrix(obj["form"]))) if obj.get("form") is not None else None
    if not obj.get("cones"):
        raise LatticeError("fan has no cones")
    n = obj.get("dim")
    if n is None:
        n = next((len(c["rays"][0]) for c in obj["cones"] if c.get("rays")), None)
    if n is None:
        raise LatticeError("fan needs a 'dim' entry when no cone lists rays")
    cones = [cone_from_json(c, n) for c in obj["cones"]]
    # close under faces so that the object is a fan in the strict sense
    seen, closed = set(), []
    for c in cones:
        for f in c.faces():
            key = tuple(sorted(f.rays))
            if key not in seen:
                seen.add(key)
                closed.append(f)
    if any(c.dim_ambient != n for c in closed):
        raise LatticeError("cones live in different dimensions")
    return Fan(tuple(closed), form)


def arrangement_to_json(arr: WeightedArrangement) -> dict:
    return {"functionals": [list(f) for f, _ in arr.members], "multiplicities": [m for _, m in arr.members]}


def arrangement_from_json(obj) -> WeightedArrangement:
    fs = int_matrix(obj["functionals"])
    return WeightedArrangement.of(fs, obj.get("multiplicities"))


# -------------------------------------------------------------- generic output

def to_jsonable(x):
    """Recursively encode results: exact values stay exact, complex -> [re, im]."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return rational_text(x)
    if isinstance(x, float):
        return x
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, IntLattice):
        return lattice_to_json(x)
    if isinstance(x, LatticeMap):
        return map_to_json(x)
    if isinstance(x, RationalCone):
        return cone_to_json(x)
    if isinstance(x, Fan):
        return fan_to_json(x)
    if isinstance(x, WeightedArrangement):
        return arrangement_to_json(x)
    if dataclasses.is_dataclass(x):
        out = {f.name: to_jsonable(getattr(x, f.name)) for f in dataclasses.fields(x)}
        for name in ("conclusions", "ade_type", "types"):
            if hasattr(type(x), name) and isinstance(getattr(type(x), name), property):
                out[name] = to_jsonable(getattr(x, name))
        return out
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalars
        return to_jsonable(x.item())
    raise TypeError(f"cannot encode {type(x).__name__}")


def dumps(x) -> str:
    return json.dumps(to_jsonable(x), sort_keys=True)


def load(path: str | Path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise LatticeError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise LatticeError(f"{path} is not valid JSON: {exc}") from exc
