"""Command-line front end.

Each subcommand reads a symbol (or model) JSON, runs one analysis, and writes
a single canonical JSON report, plus SVG where it makes sense.  Exit codes:
verdict returns 0/1/2 for Embeddable/NotEmbeddable/Unknown; other commands
return 0 on success; 64 flags a usage error, 65 unreadable input, 70 an
internal numeric failure (with a diagnostic JSON when possible).
"""

import argparse
import json
import os
import sys

import numpy as np

from . import fig8 as fig8_mod
from . import semigroups, serialize, svg, verdict as verdict_mod
from ._errors import ToeplitzEmbedError
from .spectral import (
    Disk,
    Sector,
    kreiss_constant,
    numerical_range,
)
from .symbols import discretize, evaluate, toeplitz_truncation
from .topology import NearCurve, winding_number
from .hardy import eigenvector

EXIT_USAGE = 64
EXIT_BAD_INPUT = 65
EXIT_NUMERIC = 70


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def thread_budget():
    """Worker cap from TOEPLITZ_EMBED_THREADS (default: 1)."""
    raw = os.environ.get("TOEPLITZ_EMBED_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _build_parser():
    p = _Parser(
        prog="toeplitz-embed",
        description="Embeddability analysis of Toeplitz operators: winding "
                    "regions, boundary indices, eigenvectors, model "
                    "semigroups, numerical-range and Kreiss certificates.",
        epilog="The environment variable TOEPLITZ_EMBED_THREADS caps the "
               "worker threads used by sampling loops.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("input", help="input JSON (symbol schema, or model "
                                      "configuration for fig8)")
        sp.add_argument("--n", type=int, default=64,
                        help="Toeplitz truncation order (2..512)")
        sp.add_argument("--p", type=float, default=2.0,
                        help="Hardy space exponent in (1, inf)")
        sp.add_argument("--grid", type=int, default=512,
                        help="render/export grid resolution (128..4096)")
        sp.add_argument("--seed", type=int, default=0,
                        help="seed for randomized trials")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--tol", action="append", default=[],
                        metavar="KEY=VAL", help="tolerance override "
                        "(law, embed, quadrature; repeatable)")
        sp.add_argument("--svg", action="store_true",
                        help="also write an SVG figure where supported")
        return sp

    add("analyze", "full topology pipeline: regions, intersections, "
                   "hypotheses, boundary index")
    w = add("winding", "winding number of the curve around a point")
    w.add_argument("--point", nargs=2, type=float, default=(0.0, 0.0),
                   metavar=("X", "Y"))
    add("regions", "region decomposition of the curve complement")
    add("wplus", "boundary kernel index of the symbol")
    e = add("eigen", "explicit eigenvector against the truncation")
    e.add_argument("--lambda", dest="lam", nargs=2, type=float,
                   default=(0.0, 0.0), metavar=("X", "Y"))
    e.add_argument("--j", type=int, default=0, help="eigenvector index")
    add("verdict", "embeddability decision with provenance")
    s = add("semigroup", "build and verify a candidate semigroup")
    s.add_argument("--route", choices=("auto", "dunford", "sectorial"),
                   default="auto")
    add("numrange", "numerical range boundary of the truncation")
    k = add("kreiss", "Kreiss constant estimate for a region")
    k.add_argument("--region", default="hull",
                   help="hull | sector:OMEGA | disk:CX,CY,R")
    f = add("fig8", "explicit two-by-two model family checks")
    f.add_argument("--trials", type=int, default=1000)
    add("plot", "curve rendering only")
    return p


def _validate(args):
    if not 2 <= args.n <= 512:
        raise _UsageError("--n must lie in [2, 512]")
    if not 1.0 < args.p < np.inf:
        raise _UsageError("--p must lie in (1, inf)")
    if args.grid < 128 or args.grid > 4096 or args.grid & (args.grid - 1):
        raise _UsageError("--grid must be a power of two in [128, 4096]")


def _tolerances(args):
    out = {}
    for item in args.tol:
        if "=" not in item:
            raise _UsageError(f"bad --tol entry {item!r}, need KEY=VAL")
        key, val = item.split("=", 1)
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise _UsageError(f"bad --tol value in {item!r}")
    return out


def _load_symbol(path):
    data = serialize.read_json(path)
    if "analysis_schema" in data:
        data = data["symbol"]
    return serialize.symbol_from_dict(data)


def _write(args, name, payload):
    os.makedirs(args.out, exist_ok=True)
    out_path = os.path.join(args.out, name)
    serialize.write_json(payload, out_path)
    return out_path


def _analysis_payload(symbol, bundle):
    payload = {
        "analysis_schema": 1,
        "symbol": serialize.symbol_to_dict(symbol),
        "notes": list(bundle.notes),
    }
    if bundle.decomposition is not None:
        payload["decomposition"] = bundle.decomposition.as_dict()
    if bundle.intersections is not None:
        payload["intersections"] = [
            {"location": [p.location.real, p.location.imag],
             "params": list(p.params),
             "tangential": bool(p.tangential),
             "classification": p.classification,
             "sector_windings": [s for s in p.sector_windings]}
            for p in bundle.intersections]
    if bundle.hypotheses is not None:
        payload["hypotheses"] = bundle.hypotheses.as_dict()
    if bundle.ahern_clark is not None:
        ac = bundle.ahern_clark
        payload["w_plus"] = {
            "value": str(ac.value), "float": ac.float_value,
            "zeros_on_circle": ac.zero_count, "validity": ac.validity,
            "kernel_dimension": ac.kernel_dimension,
            "notes": list(ac.notes)}
    return payload


def _run(args):
    tols = _tolerances(args)
    cmd = args.command

    if cmd == "fig8":
        data = serialize.read_json(args.input)
        pair = serialize.zeta_pair_from_dict(data, seed=args.seed)
        sep = fig8_mod.separation_check(pair)
        model = fig8_mod.ModelSemigroup.build(pair)
        ident = fig8_mod.verify_identities(model, trials=args.trials,
                                           seed=args.seed)
        lam = complex(pair.samples[0])
        b1 = model.B(lam, 1.0)
        payload = {"separation": sep.as_dict(), "identities": ident,
                   "b1_equals_lambda_identity": float(
                       np.max(np.abs(b1 - lam * np.eye(2)))),
                   "config": serialize.zeta_pair_to_dict(pair)}
        path = _write(args, "fig8.json", payload)
        print(path)
        return 0

    symbol = _load_symbol(args.input)

    if cmd == "winding":
        disc = discretize(symbol, _step_for(symbol))
        z = complex(args.point[0], args.point[1])
        try:
            w = winding_number(disc, z)
            payload = {"point": [z.real, z.imag], "winding": w}
        except NearCurve as exc:
            payload = {"point": [z.real, z.imag], "winding": None,
                       "near_curve": True, "distance": exc.distance}
        path = _write(args, "winding.json", payload)
        print(json.dumps({"winding": payload["winding"]}))
        return 0

    if cmd == "plot":
        disc = discretize(symbol, _step_for(symbol))
        os.makedirs(args.out, exist_ok=True)
        out_path = os.path.join(args.out, "curve.svg")
        svg.render_curve(disc, out_path)
        print(out_path)
        return 0

    if cmd == "numrange":
        trunc = toeplitz_truncation(symbol, args.n)
        nr = numerical_range(trunc.matrix)
        payload = {"n": args.n, "numerical_radius": nr.numerical_radius,
                   "support_min": float(np.min(nr.support)),
                   "boundary": nr.as_dict()}
        path = _write(args, "numrange.json", payload)
        if args.svg:
            svg.render_numrange(nr, os.path.join(args.out, "numrange.svg"))
        print(path)
        return 0

    if cmd == "kreiss":
        trunc = toeplitz_truncation(symbol, args.n)
        region = _parse_region(args.region, trunc.matrix)
        est = kreiss_constant(trunc.matrix, region, budget=200)
        payload = {"n": args.n, "estimate": est.as_dict()}
        path = _write(args, "kreiss.json", payload)
        print(path)
        return 0

    if cmd == "eigen":
        lam = complex(args.lam[0], args.lam[1])
        ev = eigenvector(symbol, lam, args.j, args.n)
        payload = {
            "lambda": [lam.real, lam.imag], "j": args.j, "n": args.n,
            "winding": ev.winding,
            "coefficients": [[c.real, c.imag] for c in ev.coefficients],
            "residual": ev.residual, "full_residual": ev.full_residual,
            "tail_mass": ev.tail_mass}
        path = _write(args, "eigen.json", payload)
        print(path)
        return 0

    bundle = verdict_mod.analyze(symbol, grid=args.grid,
                                 truncation_order=args.n, seed=args.seed)

    if cmd in ("analyze", "regions", "wplus"):
        payload = _analysis_payload(symbol, bundle)
        name = {"analyze": "analysis.json", "regions": "regions.json",
                "wplus": "wplus.json"}[cmd]
        if cmd == "regions" and bundle.decomposition is None:
            raise ToeplitzEmbedError("no region decomposition for this symbol")
        if cmd == "wplus" and bundle.ahern_clark is None:
            raise ToeplitzEmbedError("boundary index unavailable; see notes")
        path = _write(args, name, payload)
        if args.svg and bundle.decomposition is not None:
            svg.render_regions(bundle.decomposition,
                               os.path.join(args.out, "regions.svg"),
                               intersections=bundle.intersections)
        print(path)
        return 0

    if cmd == "verdict":
        v = verdict_mod.decide(symbol, bundle=bundle, p=args.p)
        payload = v.as_dict()
        path = _write(args, "verdict.json", payload)
        print(verdict_mod.explain(v))
        return {"Embeddable": 0, "NotEmbeddable": 1, "Unknown": 2}[v.status]

    if cmd == "semigroup":
        trunc = toeplitz_truncation(symbol, args.n)
        route = args.route
        family = None
        errors = {}
        if route in ("auto", "dunford"):
            try:
                family = semigroups.build_dunford(trunc, bundle.decomposition)
            except ToeplitzEmbedError as exc:
                errors["dunford"] = str(exc)
        if family is None and route in ("auto", "sectorial"):
            try:
                family = semigroups.build_sectorial(trunc)
            except ToeplitzEmbedError as exc:
                errors["sectorial"] = str(exc)
        if family is None:
            payload = {"built": False, "errors": errors, "n": args.n}
            _write(args, "semigroup.json", payload)
            raise ToeplitzEmbedError("no semigroup route succeeded: "
                                     + "; ".join(f"{k}: {v}" for k, v in errors.items()))
        report = semigroups.verify(
            family, trunc.matrix,
            law_tol=tols.get("law", semigroups.LAW_TOL),
            embed_tol=tols.get("embed", semigroups.EMBED_TOL))
        payload = {"built": True, "kind": family.kind, "n": args.n,
                   "meta": verdict_mod._jsonable(family.meta),
                   "report": report.as_dict(), "errors": errors}
        path = _write(args, "semigroup.json", payload)
        print(path)
        return 0 if report.accepted else EXIT_NUMERIC

    raise _UsageError(f"unhandled command {cmd!r}")


def _step_for(symbol):
    th = np.linspace(0, 2 * np.pi, 512, endpoint=False)
    vals = evaluate(symbol, th)
    diameter = max(float(np.ptp(vals.real)), float(np.ptp(vals.imag)), 1e-9)
    return diameter / 256.0


def _parse_region(spec, matrix):
    if spec == "hull":
        return numerical_range(matrix).hull
    if spec.startswith("sector:"):
        return Sector(float(spec.split(":", 1)[1]))
    if spec.startswith("disk:"):
        cx, cy, r = (float(x) for x in spec.split(":", 1)[1].split(","))
        return Disk(complex(cx, cy), r)
    raise _UsageError(f"bad --region {spec!r}")


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(args)
        return _run(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (json.JSONDecodeError, FileNotFoundError, KeyError, ValueError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ToeplitzEmbedError as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        try:
            out = getattr(args, "out", ".")
            os.makedirs(out, exist_ok=True)
            serialize.write_json(diag, os.path.join(out, "diagnostic.json"))
        except OSError:
            pass
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
