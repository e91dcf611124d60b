"""Command-line entry point: ``latticeiv <subcommand> ...``.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import io as jio
from . import linalg
from .cones import fan_from_hyperplanes, fan_from_points, support_space
from .divisors import build_pl_function, chamber_weyl_point, pl_invariance_check, qcartier_proportional, solve_rho
from .enumeration import VectorQuery, short_vectors, vectors_in_box
from .errors import LatticeError
from .lattice import (
    IntLattice,
    LatticeMap,
    determinant,
    direct_sum,
    discriminant_group,
    eichler_transvection,
    is_definite,
    orthogonal_complement,
    parse_lattice_name,
    rescale,
    saturate,
    signature,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ------------------------------------------------------------------ helpers

def _lattice(args) -> IntLattice:
    if getattr(args, "lattice", None):
        return jio.lattice_from_json(jio.load(args.lattice))
    if getattr(args, "name", None):
        return parse_lattice_name(args.name[0] if isinstance(args.name, list) else args.name)
    raise UsageError("give --lattice FILE or --name NAME")


def _vectors(path) -> list[list[int]]:
    data = jio.load(path)
    if isinstance(data, dict):
        data = data.get("vectors", data)
    return jio.int_matrix(data)


def _parse_vector(text: str, named: dict) -> list[int]:
    if text in named:
        return named[text]
    try:
        return [int(x) for x in text.strip("[]").split(",")]
    except ValueError:
        raise UsageError(f"cannot read vector {text!r}: use a comma list or a name from --vectors") from None


def _dummy_lattice(n: int) -> IntLattice:
    return IntLattice(linalg.identity(n), label=f"Z^{n}", even=False)


def _maps(path, n: int) -> list[LatticeMap]:
    data = jio.load(path)
    items = data.get("generators", data) if isinstance(data, dict) else data
    L = _dummy_lattice(n)
    return [LatticeMap(jio.int_matrix(m["matrix"] if isinstance(m, dict) else m), L, L) for m in items]


def _complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        return complex(float(x[0]), float(x[1]))
    return complex(x)


def _lattice_info(L: IntLattice) -> dict:
    d = discriminant_group(L)
    return {
        "label": L.label,
        "rank": L.rank,
        "signature": list(signature(L).as_tuple()),
        "determinant": determinant(L),
        "even": all(L.gram[i][i] % 2 == 0 for i in range(L.rank)),
        "definite": is_definite(L),
        "discriminant_invariants": list(d.divisors),
        "gram": [list(r) for r in L.gram],
    }


# ---------------------------------------------------------------- commands

def cmd_lattice(args):
    if args.action == "info":
        return _lattice_info(_lattice(args))
    if args.action == "sum":
        parts = [parse_lattice_name(n) for n in (args.name or [])]
        parts += [jio.lattice_from_json(jio.load(p)) for p in (args.lattice_files or [])]
        if len(parts) < 2:
            raise UsageError("sum needs at least two lattices (--name / --lattice-file)")
        return jio.lattice_to_json(direct_sum(*parts))
    L = _lattice(args)
    if args.action == "rescale":
        if args.n is None:
            raise UsageError("rescale needs --n")
        return jio.lattice_to_json(rescale(L, args.n))
    if args.action in ("complement", "saturate"):
        if not args.vectors:
            raise UsageError(f"{args.action} needs --vectors FILE")
        vs = _vectors(args.vectors)
        basis = orthogonal_complement(L, vs) if args.action == "complement" else saturate(L, vs)
        return {"basis": [list(v) for v in basis]}
    if args.action == "transvect":
        if not (args.e and args.f):
            raise UsageError("transvect needs --e and --f")
        m = eichler_transvection(L, _parse_vector(args.e, {}), _parse_vector(args.f, {}))
        return jio.map_to_json(m)
    raise UsageError(f"unknown lattice action {args.action}")


def cmd_enum(args):
    L = _lattice(args)
    named = {k: list(v) for k, v in jio.load(args.vectors).items()} if args.vectors else {}
    pairings = []
    for p in args.pair or []:
        vec, _, val = p.rpartition(":")
        if not vec:
            raise UsageError(f"--pair wants VECTOR:VALUE, got {p!r}")
        pairings.append((tuple(_parse_vector(vec, named)), int(val)))
    if args.norm_max is not None:
        norm = (args.norm, args.norm_max)
    else:
        norm = args.norm
    q = VectorQuery(norm=norm, pairings=tuple(pairings), primitive_only=args.primitive, box_bound=args.box)
    if is_definite(L) and args.box is None:
        return short_vectors(L, q)
    if args.box is None:
        raise UsageError("indefinite lattice: --box is required")
    return vectors_in_box(L, q)


def cmd_roots(args):
    from .roots import ade_decompose, root_span_corank

    L = _lattice(args)
    d = ade_decompose(L)
    return {
        "components": [{"type": c.ade_type, "rank": c.rank} for c in sorted(d.components, key=lambda c: (c.kind, c.rank))],
        "corank": root_span_corank(L),
    }


def cmd_fan(args):
    data = jio.load(args.input)
    form = jio.rational_matrix(data["form"]) if data.get("form") is not None else None
    if args.action == "hyperplanes":
        pi = jio.cone_from_json(data["pi"])
        return jio.fan_to_json(fan_from_hyperplanes(pi, jio.int_matrix(data["hyperplanes"]), form))
    if args.action == "points":
        pi = jio.cone_from_json(data["pi"])
        if form is None:
            raise LatticeError("fan points needs a form")
        return jio.fan_to_json(fan_from_points(pi, form, jio.rational_matrix(data["points"])))
    if args.action == "support":
        fan = jio.fan_from_json(data["fan"])
        sigma = jio.cone_from_json(data["sigma"], fan.dim_ambient)
        rep = support_space(fan, sigma, jio.int_matrix(data.get("hyperplanes", [])), form)
        return {
            "meets_positive_cone": rep.meets_positive_cone,
            "support_space": [list(v) for v in rep.support_space],
            "isotropic_center": [list(v) for v in rep.isotropic_center],
        }
    raise UsageError(f"unknown fan action {args.action}")


def _form_arg(path):
    data = jio.load(path)
    return jio.rational_matrix(data["form"] if isinstance(data, dict) else data)


def cmd_qcartier(args):
    q = _form_arg(args.form)
    arr = jio.arrangement_from_json(jio.load(args.arr))
    c = qcartier_proportional(q, arr)
    return {"proportional": c is not None, "c": None if c is None else jio.rational_text(c)}


def _base(fan, args):
    if not args.base:
        return None
    rays = jio.int_matrix(jio.load(args.base)["rays"])
    key = tuple(sorted(linalg.primitive(r) for r in rays))
    for c in fan.chambers:
        if tuple(sorted(c.rays)) == key:
            return c
    raise LatticeError("base chamber is not a chamber of the fan")


def cmd_plcheck(args):
    fan = jio.fan_from_json(jio.load(args.fan))
    arr = jio.arrangement_from_json(jio.load(args.arr))
    gens = _maps(args.gens, fan.dim_ambient)
    base = _base(fan, args)
    if args.solve_rho:
        rho = solve_rho(fan, arr, gens, base)
        if rho is None:
            return {"solvable": False, "rho": None, "invariant": False}
    else:
        rho = [jio.rational(x) for x in json.loads(args.rho)] if args.rho else [0] * fan.dim_ambient
    pl = build_pl_function(fan, arr, rho, base)
    out = {"rho": [jio.rational_text(x) for x in rho], "continuous": pl.is_continuous(), "invariant": pl_invariance_check(pl, gens)}
    if args.solve_rho:
        out["solvable"] = True
    return out


def cmd_weylpoint(args):
    cone = jio.cone_from_json(jio.load(args.chamber))
    arr = jio.arrangement_from_json(jio.load(args.arr))
    return {"point": [jio.rational_text(x) for x in chamber_weyl_point(cone, arr)]}


def cmd_k3(args):
    from . import k3

    if args.report == "section33":
        r = k3.section33_report(args.g)
        return {
            "g": r.g,
            "quotient_gram_matches": r.quotient_matches_expected,
            "quotient_signature": list(r.quotient_signature),
            "quotient_determinant": determinant(r.quotient),
            "roots_total": r.roots_total,
            "image_roots": len(r.image_roots),
            "excluded_roots": [list(v) for v in r.canonical_lift_rejected],
            "corank": r.corank,
            "qcartier": None if r.qcartier is None else jio.rational_text(r.qcartier),
            "noproduct": r.noproduct,
            "any_lift_roots": len(r.any_lift_roots),
            "corank_any_lift": r.corank_any_lift,
        }
    ctx = k3.k3_context(args.g)
    if args.report == "k3arr":
        rep = k3.k3arr_search(ctx, box=args.box)
        out = {
            "g": rep.g,
            "box": rep.box,
            "candidates": rep.candidates,
            "pairs": len(rep.pairs),
            "pair_types": sorted({(p.a1, p.a2, p.lam) for p in rep.pairs}),
            "triples": len(rep.triples),
            "conclusions": rep.conclusions,
        }
        if args.full:
            out["pair_list"] = [{"v1": p.v1, "v2": p.v2, "a1": p.a1, "a2": p.a2, "lambda": p.lam, "det": p.det} for p in rep.pairs]
            out["triple_list"] = [{"vectors": t.vectors, "witness": t.witness.matrix if t.witness else None} for t in rep.triples]
        return out
    if args.report == "spans":
        from .lattice import k3_vector

        f_uni, f_di = k3_vector(f3=1), k3_vector(f3=2, f2=1)
        st = k3.span_type(ctx, f_di) if args.g > 2 else None
        return {
            "g": args.g,
            "f3": str(k3.classify_isotropic(ctx, f_uni)),
            "2f3+f2": str(k3.classify_isotropic(ctx, f_di)),
            "span_type": None if st is None else {"name": st.name, "raw_gram": st.raw_gram, "basis": st.basis, "gram": st.gram},
        }
    raise UsageError(f"unknown report {args.report}")


def cmd_enriques(args):
    from . import k3

    ctx = k3.enriques_context()
    out = {}
    if args.check in ("all", "iota"):
        out["checks"] = ctx.checks
    if args.check in ("all", "pair"):
        out["isotropic_pair"] = k3.enriques_isotropic_pair()
        out["h_plus"] = ctx.h_plus
    return out


def cmd_triangle(args):
    from . import triangle

    try:
        p = tuple(int(x) for x in args.p.split(","))
        if len(p) != 3:
            raise ValueError
    except ValueError:
        raise UsageError("--p wants three comma-separated integers") from None
    if args.embed and args.example:
        raise UsageError("use either --embed or --example")
    if args.example:
        ambient = {"affine-e6": 6, "affine-e7": 7, "affine-e8": 8}[args.example]
        t, j = triangle.affine_embedding(p, ambient)
    else:
        t = triangle.triangle_context(*p)
        j = None
        if args.embed:
            data = jio.load(args.embed)
            j = jio.map_from_json(data, source=t.q_lattice)
    out = {
        "p": list(t.p),
        "rank": t.q_lattice.rank,
        "signature": list(signature(t.q_lattice).as_tuple()),
        "k": t.k,
        "affine_nodes": list(t.affine_nodes),
        "fundamental_isotropic": list(t.fundamental_isotropic),
    }
    if j is not None:
        r = triangle.is_critical_embedding(t, j)
        out["embedding"] = {"k_of_j": r.k_of_j, "critical": r.critical, "good": r.good, "component_types": list(r.component_types)}
    return out


def cmd_series(args):
    from . import series

    d = jio.load(args.input)
    try:
        if args.kind == "s_k":
            r = series.eval_S_k(int(d["a"]), int(d["k"]), _complex(d["z"]), int(d["N"]))
        elif args.kind == "f_k":
            r = series.eval_F_k(d["gram"], d["orbit"], int(d["k"]), [_complex(x) for x in d["z"]])
        elif args.kind == "product":
            walls = [(w["f"], w.get("c", 0), w.get("m", 1)) for w in d["walls"]]
            r = series.eval_product_Pm(walls, [_complex(x) for x in d["z"]])
        else:
            if "w" in d:
                w = _complex(d["w"])
            else:
                w = series.translate_argument(jio.rational_matrix(d["gram"]), d["e"], d["f0"], [_complex(x) for x in d["z"]])
            r = series.eval_eisenstein_Ek(int(d["k"]), w, _complex(d["tau"]), int(d["N"]))
    except KeyError as exc:
        raise LatticeError(f"series input is missing {exc}") from None
    return {"value": [r.value.real, r.value.imag], "N": r.truncation, "tail_bound": r.tail_bound, **r.extras}


def cmd_acceptance(args):
    from .acceptance import run_all

    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_all(only)
    return {"results": results, "_failed": not all(r.passed for r in results)}


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="latticeiv", description="Exact lattice, fan and series computations.")
    p.add_argument("--format", choices=("json", "text"), default="json")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def lattice_args(sp):
        sp.add_argument("--lattice", help="JSON lattice file")
        sp.add_argument("--name", help="standard name such as U, E8(-1), A2, K3")

    s = sub.add_parser("lattice", help="lattice constructions and invariants")
    s.add_argument("action", choices=("info", "sum", "rescale", "complement", "saturate", "transvect"))
    s.add_argument("--lattice")
    s.add_argument("--name", action="append", help="standard lattice name (repeatable for sum)")
    s.add_argument("--lattice-file", dest="lattice_files", action="append")
    s.add_argument("--n", type=int, help="rescaling factor")
    s.add_argument("--vectors", help="JSON list of vectors")
    s.add_argument("--e", help="isotropic vector (comma list)")
    s.add_argument("--f", help="vector orthogonal to e (comma list)")
    s.set_defaults(func=cmd_lattice)

    s = sub.add_parser("enum", help="enumerate vectors of given norm")
    lattice_args(s)
    s.add_argument("--norm", type=int, required=True)
    s.add_argument("--norm-max", type=int, help="upper end of a norm range")
    s.add_argument("--pair", action="append", help="VECTOR:VALUE, vector as comma list or name from --vectors")
    s.add_argument("--vectors", help="JSON object of named vectors")
    s.add_argument("--box", type=int)
    s.add_argument("--primitive", action="store_true")
    s.set_defaults(func=cmd_enum)

    s = sub.add_parser("roots", help="ADE decomposition of the root system")
    lattice_args(s)
    s.set_defaults(func=cmd_roots)

    s = sub.add_parser("fan", help="fans from hyperplanes or points; support spaces")
    s.add_argument("action", choices=("hyperplanes", "points", "support"))
    s.add_argument("--input", required=True, help="JSON with pi/hyperplanes/points/fan/sigma/form")
    s.set_defaults(func=cmd_fan)

    s = sub.add_parser("qcartier", help="proportionality of the weighted square sum")
    s.add_argument("--form", required=True)
    s.add_argument("--arr", required=True)
    s.set_defaults(func=cmd_qcartier)

    s = sub.add_parser("plcheck", help="PL function continuity and invariance")
    s.add_argument("--fan", required=True)
    s.add_argument("--arr", required=True)
    s.add_argument("--gens", required=True)
    s.add_argument("--rho", help="JSON list; ignored with --solve-rho")
    s.add_argument("--base", help="JSON cone giving the base chamber")
    s.add_argument("--solve-rho", action="store_true")
    s.set_defaults(func=cmd_plcheck)

    s = sub.add_parser("weylpoint", help="interior point of a chamber off the arrangement")
    s.add_argument("--chamber", required=True)
    s.add_argument("--arr", required=True)
    s.set_defaults(func=cmd_weylpoint)

    s = sub.add_parser("k3", help="K3 lattice reports")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--report", choices=("section33", "k3arr", "spans"), required=True)
    s.add_argument("--box", type=int, default=3)
    s.add_argument("--full", action="store_true", help="list every pair and triple")
    s.set_defaults(func=cmd_k3)

    s = sub.add_parser("enriques", help="Enriques involution checks")
    s.add_argument("--check", choices=("all", "iota", "pair"), default="all")
    s.set_defaults(func=cmd_enriques)

    s = sub.add_parser("triangle", help="triangle singularity lattices and embeddings")
    s.add_argument("--p", required=True, help="p1,p2,p3")
    s.add_argument("--embed", help="JSON map {matrix, target}")
    s.add_argument("--example", choices=("affine-e6", "affine-e7", "affine-e8"), help="built-in embedding into U + E_m(-1)")
    s.set_defaults(func=cmd_triangle)

    s = sub.add_parser("series", help="truncated series with tail bounds")
    s.add_argument("kind", choices=("s_k", "f_k", "product", "eisenstein"))
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_series)

    s = sub.add_parser("paper-checks", help="run the acceptance suite")
    s.add_argument("--only", help="comma-separated criterion numbers")
    s.set_defaults(func=cmd_acceptance)
    return p


def _text(result) -> str:
    if isinstance(result, list) and all(isinstance(v, (list, tuple)) for v in result):
        return "\n".join(" ".join(str(x) for x in v) for v in result)
    if isinstance(result, dict) and "results" in result:
        return "\n".join(r.line() for r in result["results"])
    if isinstance(result, dict):
        return "\n".join(f"{k}: {json.dumps(jio.to_jsonable(v), sort_keys=True)}" for k, v in result.items())
    return json.dumps(jio.to_jsonable(result), sort_keys=True)


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        result = args.func(args)
    except UsageError as exc:
        print(exc, file=err)
        return 2
    except LatticeError as exc:
        print(f"latticeiv: {exc}", file=err)
        return 1
    failed = isinstance(result, dict) and result.pop("_failed", False)
    if args.format == "text":
        print(_text(result), file=out)
    else:
        print(json.dumps(jio.to_jsonable(result), sort_keys=True), file=out)
    return 1 if failed else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
