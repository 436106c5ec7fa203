"""Command line front end.

    xoplab eval   --family lag1 --m 1 --n 1 --alpha 1 --at 1
    xoplab zeros  --family genhermite --partition 1,1
    xoplab verify --n-max 8 --format json --out report.json
    xoplab compare --family hermite11 --n 5 --method wronskian --method det
    xoplab table  --family laguerre --alpha 1/2 --n-min 0 --n-max 4
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from . import xop_det
from .classical import Partition, generalized_hermite, hermite, jacobi, laguerre
from .poly import Polynomial, coeffs_to_json, format_poly
from .rootfind import RootFindError, classical_zeros, zeros
from .verify import SUITES, RunConfig, cmd_verify as run_grid
from .xop_direct import (
    HERMITE,
    HERMITE11,
    JACOBI,
    LAG1,
    LAG2,
    LAG3,
    InvalidSpecError,
    XopSpec,
    build,
    methods_for,
)

CLASSICAL = ("laguerre", "jacobi", "hermite", "genhermite")
EXCEPTIONAL = {
    "lag1": LAG1,
    "lag2": LAG2,
    "lag3": LAG3,
    "jacobi-x": JACOBI,
    "hermite11": HERMITE11,
    "hermite-x": HERMITE,
}
DET = "det"


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _point(text: str) -> Fraction | complex:
    """Rational when possible so exact polynomials stay exact."""
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


# ---------------------------------------------------------------------------
# descriptors


def _require(args, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"family {args.family} requires {', '.join(missing)}")


def xop_spec(args, n: int | None = None) -> XopSpec:
    n = args.n if n is None else n
    if n is None:
        raise UsageError("--n is required")
    part = Partition.parse(args.partition) if args.partition else None
    spec = XopSpec(EXCEPTIONAL[args.family], n, args.m, args.alpha, args.beta, part)
    bad = spec.violations()
    if bad:
        raise UsageError(f"invalid {args.family} parameters: " + "; ".join(bad))
    return spec


def classical_poly(args, n: int | None = None) -> Polynomial:
    fam = args.family
    n = args.n if n is None else n
    if fam == "genhermite":
        if not args.partition:
            raise UsageError("family genhermite requires --partition")
        return generalized_hermite(Partition.parse(args.partition))
    if n is None:
        raise UsageError("--n is required")
    if n < 0:
        raise UsageError("n must be non-negative")
    if fam == "laguerre":
        _require(args, "alpha")
        return laguerre(n, args.alpha)
    if fam == "jacobi":
        _require(args, "alpha", "beta")
        return jacobi(n, args.alpha, args.beta)
    return hermite(n)


def polynomial(args, method: str | None = None, n: int | None = None) -> Polynomial:
    if args.family in CLASSICAL:
        if method not in (None, "explicit"):
            raise UsageError(f"classical families have no method {method!r}")
        return classical_poly(args, n)
    spec = xop_spec(args, n)
    if method == DET:
        if not xop_det.supported(spec):
            raise UsageError(f"no determinantal formula for {spec}")
        return xop_det.det_xop(spec)
    if method is not None and method not in methods_for(spec.family):
        raise UsageError(f"method {method!r} not available for {args.family}; "
                         f"choose from {', '.join(methods_for(spec.family) + (DET,))}")
    return build(spec, method)


def _descriptor(args) -> str:
    if args.family in CLASSICAL:
        parts = [args.family]
        if args.family == "genhermite":
            parts.append(f"lambda=({args.partition})")
        else:
            parts.append(f"n={args.n}")
            if args.alpha is not None and args.family != "hermite":
                parts.append(f"alpha={args.alpha}")
            if args.beta is not None and args.family == "jacobi":
                parts.append(f"beta={args.beta}")
        return " ".join(parts)
    return str(xop_spec(args))


# ---------------------------------------------------------------------------
# output helpers


def _num(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    v = complex(v)
    if v.imag == 0:
        return repr(v.real)
    return f"{v.real!r}{v.imag:+}i"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _csv(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(args) -> int:
    p = polynomial(args, args.method)
    if not args.coeffs and not args.at:
        args.coeffs = True
    if args.format == "json":
        doc = {"polynomial": _descriptor(args), "method": args.method, "degree": p.degree}
        if args.coeffs:
            doc.update(coeffs_to_json(p))
        if args.at:
            doc["values"] = [[_num(z), _num(_value(p, z))] for z in args.at]
        _emit(json.dumps(doc, indent=2), args.out)
        return 0
    if args.format == "csv":
        if args.coeffs:
            text = _csv([(k, _num(c)) for k, c in enumerate(p.coeffs)], ["k", "coefficient"])
        else:
            text = ""
        if args.at:
            text += _csv([(_num(z), _num(_value(p, z))) for z in args.at], ["x", "value"])
        _emit(text, args.out)
        return 0
    lines = []
    if args.coeffs:
        lines.append(format_poly(p))
    for z in args.at or ():
        lines.append(_num(_value(p, z)) if len(args.at) == 1 and not args.coeffs
                     else f"{_num(z)}\t{_num(_value(p, z))}")
    _emit("\n".join(lines), args.out)
    return 0


def _value(p: Polynomial, z):
    if p.exact and isinstance(z, complex):
        return p.to_float()(z)
    return p(z)


def _zero_set(args):
    fam = args.family
    if fam in ("laguerre", "jacobi", "hermite") and args.method == "eigen":
        return classical_zeros(fam, args.n, args.alpha, args.beta)
    p = polynomial(args, None if args.method == "eigen" else args.method)
    if p.degree < 1:
        raise UsageError("zeros need a polynomial of degree at least 1")
    return zeros(p, tol=args.tol, source=_descriptor(args))


def cmd_zeros(args) -> int:
    nodes = _zero_set(args)
    source = nodes.source or _descriptor(args)
    rows = [(repr(z.real + 0.0), repr(z.imag + 0.0), source) for z in nodes.points]
    if args.format == "json":
        doc = {"source": source, "zeros": [[float(r), float(i)] for r, i, _ in rows]}
        _emit(json.dumps(doc, indent=2), args.out)
    elif args.format == "text":
        _emit("\n".join(f"{r}\t{i}" for r, i, _ in rows), args.out)
    else:
        _emit(_csv(rows, ["re", "im", "source"]), args.out)
    return 0


def cmd_verify_args(args) -> int:
    kw = dict(m_max=args.m_max, n_max=args.n_max, jobs=args.jobs, seed=args.seed,
              fmt=args.format, timings=args.timings)
    if args.suite:
        kw["suites"] = tuple(args.suite)
    if args.tol is not None:
        kw["agreement_tol"] = args.tol
    if args.alphas:
        kw["alphas"] = tuple(_fraction(a) for a in args.alphas.split(","))
    if args.betas:
        kw["betas"] = tuple(_fraction(b) for b in args.betas.split(","))
    try:
        config = RunConfig(**kw).validate()
    except ValueError as err:
        raise UsageError(str(err))
    report = run_grid(config)
    _emit(report.render(config.fmt, config.timings), args.out)
    if args.out:
        t = report.totals
        print(f"{t['total']} cases: {t['PASS']} pass, {t['FAIL']} fail -> {args.out}", file=sys.stderr)
    return 0 if report.ok else 1


def cmd_compare(args) -> int:
    methods = list(args.method or [])
    if args.family in CLASSICAL:
        raise UsageError("compare needs an exceptional family")
    spec = xop_spec(args)
    available = list(methods_for(spec.family)) + ([DET] if xop_det.supported(spec) else [])
    if not methods:
        methods = available[:2] if len(available) > 1 else available + [DET]
    if len(methods) != 2:
        raise UsageError("compare takes exactly two --method values")
    for m in methods:
        if m not in available:
            raise UsageError(f"method {m!r} not available for {args.family}; choose from {', '.join(available)}")
    a, b = (polynomial(args, m) for m in methods)
    width = max(len(a), len(b))
    rows = []
    for k in range(width):
        ca, cb = a.coeff(k), b.coeff(k)
        diff = abs(complex(ca) - complex(cb))
        scale = abs(complex(cb)) or abs(complex(ca)) or 1.0
        rows.append((k, _num(ca), _num(cb), diff / scale))
    exactly_equal = a.exact and b.exact and a == b
    worst = max((r[3] for r in rows), default=0.0)
    if args.format == "json":
        doc = {"spec": str(spec), "methods": methods, "identical": exactly_equal, "max_rel_diff": worst,
               "rows": [{"k": k, methods[0]: x, methods[1]: y, "rel_diff": d} for k, x, y, d in rows]}
        _emit(json.dumps(doc, indent=2), args.out)
    elif args.format == "csv":
        _emit(_csv(rows, ["k", methods[0], methods[1], "rel_diff"]), args.out)
    else:
        lines = [f"{spec}: {methods[0]} vs {methods[1]}"]
        lines += [f"  x^{k:<3} {x:>28}  {y:>28}  {d:.2e}" for k, x, y, d in rows]
        lines.append("identical (exact)" if exactly_equal else f"max relative difference {worst:.3e}")
        _emit("\n".join(lines), args.out)
    return 0


def cmd_table(args) -> int:
    if args.family == "genhermite":
        raise UsageError("table iterates over n; use eval for genhermite")
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        try:
            p = polynomial(args, args.method, n)
        except UsageError:
            if args.family in CLASSICAL:
                raise
            continue  # degree not in the family
        rows.extend((n, k, _num(c)) for k, c in enumerate(p.coeffs))
    if args.format == "json":
        doc: dict = {"family": args.family, "rows": [{"n": n, "k": k, "coefficient": c} for n, k, c in rows]}
        _emit(json.dumps(doc, indent=2), args.out)
    elif args.format == "csv":
        _emit(_csv(rows, ["n", "k", "coefficient"]), args.out)
    else:
        lines = []
        for n in sorted({r[0] for r in rows}):
            lines.append(f"n={n}: " + format_poly(polynomial(args, args.method, n)))
        _emit("\n".join(lines), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_spec_args(p: argparse.ArgumentParser, with_n: bool = True) -> None:
    p.add_argument("--family", required=True, choices=CLASSICAL + tuple(EXCEPTIONAL))
    p.add_argument("--m", type=int, default=1)
    if with_n:
        p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=_fraction)
    p.add_argument("--beta", type=_fraction)
    p.add_argument("--partition", help="comma separated, e.g. 2,2")


def _add_output_args(p: argparse.ArgumentParser, default: str = "text") -> None:
    p.add_argument("--format", choices=("json", "csv", "text"), default=default)
    p.add_argument("--out", metavar="FILE")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xoplab", description="Classical and exceptional orthogonal polynomials.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="coefficients or values of one polynomial")
    _add_spec_args(p)
    p.add_argument("--method", help="product, integral, wronskian, closed_form or det")
    p.add_argument("--coeffs", action="store_true", help="print the coefficients")
    p.add_argument("--at", type=_point, action="append", help="evaluation point (repeatable)")
    _add_output_args(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("zeros", help="zeros in canonical order as CSV (re, im, source)")
    _add_spec_args(p)
    p.add_argument("--method", help="'eigen' for the tridiagonal route on classical families")
    p.add_argument("--tol", type=float, default=1e-12)
    _add_output_args(p, default="csv")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("verify", help="run the verification grid")
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--alphas", help="comma separated alphas for the classical identities")
    p.add_argument("--betas", help="comma separated betas for the Jacobi grid")
    p.add_argument("--suite", action="append", choices=SUITES)
    p.add_argument("--tol", type=float, help="determinantal agreement tolerance")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timings", action="store_true", help="include wall times (output no longer byte-stable)")
    _add_output_args(p)
    p.set_defaults(func=cmd_verify_args)

    p = sub.add_parser("compare", help="two construction methods side by side")
    _add_spec_args(p)
    p.add_argument("--method", action="append", help="give twice; default: first two available")
    _add_output_args(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("table", help="coefficient table over a range of degrees")
    _add_spec_args(p, with_n=False)
    p.add_argument("--n-min", type=int, default=0)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--method")
    _add_output_args(p, default="csv")
    p.set_defaults(func=cmd_table)
    return parser


_NEGATIVE = re.compile(r"^-[0-9.]")


def _glue_negatives(argv: Sequence[str]) -> list[str]:
    """``--alpha -1/2`` -> ``--alpha=-1/2``; argparse only recognises plain negative numbers."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in ("--alpha", "--beta", "--at"):
            nxt = next(it, None)
            if nxt is not None and _NEGATIVE.match(nxt):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_negatives(sys.argv[1:] if argv is None else list(argv)))
    try:
        return args.func(args)
    except (UsageError, InvalidSpecError) as err:
        parser.error(str(err))
    except RootFindError as err:
        print(f"xoplab: root finding failed: {err}", file=sys.stderr)
        return 3
    except (xop_det.ConditioningError, ValueError) as err:
        print(f"xoplab: {err}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
