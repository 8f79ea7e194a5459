"""Command-line interface: ``polydyn <subcommand> [options]``.

Exit codes: 0 on success, 1 when the library raises a domain error, 2 on
usage errors (bad flags or an unparsable polynomial). Errors are reported
on stderr as JSON ``{"error": CODE, "message": ...}``.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, PolydynError
from .parser import parse_poly, parse_scalar

SUBCOMMANDS = (
    "lyapunov",
    "green",
    "bottcher",
    "spectrum",
    "height",
    "crit-height",
    "connectivity",
    "intertwine-demo",
    "solve-unicritical",
    "experiments",
)


@dataclass(frozen=True)
class Config:
    tol: float = 1e-10
    budget: int = 10**4
    seed: int = 0
    precision_bits: int = 53
    output: str = "json"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.precision_bits < 53:
            raise ValueError("precision_bits must be >= 53")
        if self.output not in ("json", "csv", "text"):
            raise ValueError("output must be json, csv or text")


# ---------------------------------------------------------------------------
# deterministic serialisation


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def to_json(obj) -> str:
    """JSON with sorted keys and floats written to 17 significant digits."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, complex):
        return to_json([obj.real, obj.imag])
    if isinstance(obj, Fraction):
        return to_json(str(obj))
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{to_json(k)}: {to_json(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    if hasattr(obj, "tolist"):
        return to_json(obj.tolist())
    if hasattr(obj, "item"):
        return to_json(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    else:
        yield prefix, obj


def _render(result, cfg: Config) -> str:
    if isinstance(result, str):
        return result
    if cfg.output == "json":
        return to_json(result) + "\n"
    if cfg.output == "text":
        return "".join(f"{k}: {to_json(v)}\n" for k, v in _flatten(result))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in _flatten(result):
        w.writerow([k, to_json(v)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands


def _poly(args):
    return parse_poly(args.poly)


def _point(args, default=None):
    if args.point is None:
        if default is None:
            raise ParseError("missing --point", 0, "--point VALUE")
        return default
    return parse_scalar(args.point)


def cmd_lyapunov(args, cfg):
    from .lyapunov import lyap_ergodic, lyap_przytycki, lyap_spectral

    f = _poly(args)
    if args.method == "przytycki":
        est = lyap_przytycki(f, tol=cfg.tol, budget=cfg.budget)
    elif args.method == "spectral":
        est = lyap_spectral(f, args.n or 8)
    else:
        est = lyap_ergodic(f, samples=args.samples, seed=cfg.seed)
    out = est.to_dict()
    out.pop("metadata", None)
    return out


def cmd_green(args, cfg):
    from .escape import green

    f = _poly(args)
    bits = cfg.precision_bits if cfg.precision_bits > 53 else None
    g = green(f, complex(_point(args)), tol=cfg.tol, budget=cfg.budget, precision_bits=bits)
    return g.to_dict()


def cmd_bottcher(args, cfg):
    from .bottcher import bottcher_eval, bottcher_series

    f = _poly(args)
    out = bottcher_series(f, args.order).to_dict()
    if args.point is not None:
        out["value"] = bottcher_eval(f, complex(_point(args)), tol=min(cfg.tol, 1e-14))
    return out


def cmd_spectrum(args, cfg):
    from .spectra import spectrum

    level = spectrum(_poly(args), args.n or 1, tol=cfg.tol)
    if cfg.output == "csv":
        return level.to_csv()
    return level.to_dict()


def cmd_height(args, cfg):
    from .heights import canonical_height

    f = _poly(args)
    a = _point(args)
    if not isinstance(a, Fraction):
        raise ParseError("heights need a rational point", 0, "rational --point")
    return canonical_height(f, a, tol=min(cfg.tol, 1e-12)).to_dict()


def cmd_crit_height(args, cfg):
    from .heights import critical_height

    return critical_height(_poly(args), tol=min(cfg.tol, 1e-12)).to_dict()


def cmd_connectivity(args, cfg):
    from .escape import julia_connectivity

    return julia_connectivity(_poly(args), budget=cfg.budget).to_dict()


def cmd_intertwine_demo(args, cfg):
    from .intertwine import make_intertwined_pair, verify_rigidity_if_direction
    from .poly import format_expression

    h = parse_poly(args.h)
    k = parse_poly(args.k)
    f, g, w = make_intertwined_pair(h, k)
    rep = verify_rigidity_if_direction(f, g, w)
    return {
        "f": format_expression(f),
        "g": format_expression(g),
        "witness": w.to_dict(),
        "report": rep.to_dict(),
    }


def cmd_solve_unicritical(args, cfg):
    from .lyapunov import _lyap_unicritical, unicritical_solve

    c = unicritical_solve(args.d, args.L0, tol=args.solve_tol, budget=cfg.budget)
    return {"d": args.d, "L0": args.L0, "c": c, "residual": abs(_lyap_unicritical(args.d, c, 1e-12) - args.L0)}


def cmd_experiments(args, cfg):
    from .experiments import run_acceptance, to_csv, write_csv

    if args.suite != "acceptance":
        raise ParseError(f"unknown suite {args.suite!r}", 0, "acceptance")
    ids = None if not args.only else {int(x) for x in args.only.split(",")}
    rows = run_acceptance(ids)
    if args.out:
        write_csv(rows, args.out)
    if cfg.output == "text":
        return "".join(r.line() + "\n" for r in rows)
    if cfg.output == "json":
        return to_json([r.as_csv_row() for r in rows]) + "\n"
    return to_csv(rows)


HANDLERS = {
    "lyapunov": cmd_lyapunov,
    "green": cmd_green,
    "bottcher": cmd_bottcher,
    "spectrum": cmd_spectrum,
    "height": cmd_height,
    "crit-height": cmd_crit_height,
    "connectivity": cmd_connectivity,
    "intertwine-demo": cmd_intertwine_demo,
    "solve-unicritical": cmd_solve_unicritical,
    "experiments": cmd_experiments,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--budget", type=int, default=10**4)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--precision-bits", type=int, default=53)
    common.add_argument("--output", choices=("json", "csv", "text"), default="json")

    ap = argparse.ArgumentParser(prog="polydyn", description="Dynamical invariants of polynomials.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_, poly=True, point=False):
        p = sub.add_parser(name, parents=[common], help=help_)
        if poly:
            p.add_argument("--poly", required=True, help='e.g. "z^2-6" or "1,0,-6"')
        if point:
            p.add_argument("--point", help="rational or complex constant, e.g. 1/2 or 3+4i")
        return p

    p = add("lyapunov", "Lyapunov exponent")
    p.add_argument("--method", choices=("przytycki", "spectral", "ergodic"), default="przytycki")
    p.add_argument("--n", type=int, default=None, help="spectral level")
    p.add_argument("--samples", type=int, default=10**5)
    add("green", "Green function at a point", point=True)
    p = add("bottcher", "Boettcher series and optional point value", point=True)
    p.add_argument("--order", type=int, default=20)
    p = add("spectrum", "multiplier spectrum S_n")
    p.add_argument("--n", type=int, default=1)
    add("height", "canonical height of a rational point", point=True)
    add("crit-height", "critical height")
    add("connectivity", "connectivity of the Julia set")
    p = add("intertwine-demo", "build and check an intertwined pair f = h o k, g = k o h", poly=False)
    p.add_argument("--h", default="z^2-3")
    p.add_argument("--k", default="z^2-5")
    p = add("solve-unicritical", "real c > 0 with L(z^d + c) = L0", poly=False)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--L0", type=float, required=True)
    p.add_argument("--solve-tol", type=float, default=1e-8)
    p = add("experiments", "run the acceptance suite", poly=False)
    p.add_argument("--suite", default="acceptance")
    p.add_argument("--out", default="acceptance.csv", help="CSV path ('' to skip)")
    p.add_argument("--only", default="", help="comma-separated row ids")
    return ap


def _fail(code, message, status):
    sys.stderr.write(to_json({"error": code, "message": message}) + "\n")
    return status


def run_command(argv=None, stdout=None) -> int:
    """Run one CLI invocation; returns the exit code."""
    stdout = stdout or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = Config(args.tol, args.budget, args.seed, args.precision_bits, args.output)
    except ValueError as exc:
        return _fail("USAGE", str(exc), 2)
    try:
        result = HANDLERS[args.command](args, cfg)
    except ParseError as exc:
        return _fail(exc.code, str(exc), 2)
    except PolydynError as exc:
        return _fail(exc.code, str(exc), 1)
    except ValueError as exc:
        return _fail("INVALID_ARGUMENT", str(exc), 2)
    stdout.write(_render(result, cfg))
    return 0


def main(argv=None):
    sys.exit(run_command(argv))


if __name__ == "__main__":
    main()
