"""Command-line front end.

Exit codes: 0 success, 1 tolerance failure, 2 bad flags, 3 numeric overflow.
"""

from __future__ import annotations

import argparse
import csv
import math
import re
import sys
from pathlib import Path

import numpy as np

from .delay import delay_ml, dexp_scaled
from .errors import DelayAdvectError, GridError, SeriesOverflowError
from .initial import Cosh, Gaussian, parse_ic, parse_profile
from .solutions import (
    DelayParams,
    GridSpec,
    eval_cosh_closed,
    eval_gaussian_hermite,
    eval_grid,
    make_evaluator,
)
from .verification import (
    OracleConfig,
    compare,
    comparison_text,
    format_report,
    oracle_solve,
    residual_fractional,
    residual_integer,
)

EXIT_OK, EXIT_TOL, EXIT_USAGE, EXIT_OVERFLOW = 0, 1, 2, 3

FIGURES = {
    "fig1": dict(kind="cosh", x=5.0, a=1.0, taus=(0.0, 0.30, 0.32, 0.34), t=(-1.0, 14.0, 1501)),
    "fig2": dict(kind="cosh", x=5.0, a=1.0, taus=(0.0, 3.0, 3.2, 3.4), t=(-50.0, 165.0, 2151)),
    "fig3": dict(kind="gaussian", t=4.0, a=2.0, taus=(0.0, 0.1), x=(-10.0, 30.0, 4001)),
}


class UsageError(Exception):
    pass


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _finite(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return v


def _positive(text: str) -> float:
    v = _finite(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
    return v


def _alpha(text: str) -> float:
    v = _finite(text)
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1]: {text!r}")
    return v


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


def _complex(text: str) -> complex | float:
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise argparse.ArgumentTypeError(f"expected RE or RE,IM: {text!r}")
    re_, im = _finite(parts[0]), _finite(parts[1]) if len(parts) == 2 else 0.0
    return re_ if im == 0 else complex(re_, im)


def _range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX:N, got {text!r}")
    lo, hi, n = _finite(parts[0]), _finite(parts[1]), _count(parts[2])
    if hi < lo:
        raise argparse.ArgumentTypeError(f"MAX < MIN in {text!r}")
    return lo, hi, n


def _window(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX, got {text!r}")
    return _finite(parts[0]), _finite(parts[1])


def _ic(text: str):
    try:
        return parse_ic(text)
    except DelayAdvectError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _profile(text: str):
    try:
        return parse_profile(text)
    except DelayAdvectError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _grid(xr, tr) -> GridSpec:
    return GridSpec(xr[0], xr[1], xr[2], tr[0], tr[1], tr[2])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delayadvect",
        description="Exact solutions of the time-delay advection equation u_t = -a u_x(x, t - tau).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dexp", help="delay exponential dexp(lambda t; lambda tau)")
    p.add_argument("--t", type=_finite, required=True)
    p.add_argument("--tau", type=_positive, required=True)
    p.add_argument("--lambda", dest="lam", type=_complex, default=1.0, metavar="RE[,IM]")

    p = sub.add_parser("delay-ml", help="delay Mittag-Leffler dE_alpha(-t; -tau)")
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--t", type=_finite, required=True)
    p.add_argument("--tau", type=_positive, required=True)

    p = sub.add_parser("solve", help="evaluate a solution on an (x, t) grid as CSV")
    p.add_argument("--ic", type=_ic, required=True, help="exp:c, cosh, sinh, gaussian, sin:k, cos:k, poly:c0,c1,...")
    p.add_argument("--a", type=_positive, required=True)
    p.add_argument("--tau", type=_positive, required=True)
    p.add_argument("--alpha", type=_alpha, default=1.0)
    p.add_argument("--g", type=_profile, default=None, help="time profile: const:c, exp:r, poly:...")
    p.add_argument("--method", choices=("series", "modes", "closed", "spectral"), default="series")
    p.add_argument("--x", type=_range, required=True, metavar="MIN:MAX:N")
    p.add_argument("--t", type=_range, required=True, metavar="MIN:MAX:N")
    p.add_argument("--out", default="-", help="CSV path, '-' for stdout")

    p = sub.add_parser("figure", help="write a figure dataset as CSV")
    p.add_argument("name", choices=sorted(FIGURES))
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("verify", help="run a verification check")
    vsub = p.add_subparsers(dest="check", required=True)
    v = vsub.add_parser("residual-integer")
    v.add_argument("--ic", type=_ic, default=Cosh())
    v.add_argument("--a", type=_positive, default=1.0)
    v.add_argument("--tau", type=_positive, default=0.3)
    v.add_argument("--x", type=_range, default=(-2.0, 2.0, 50))
    v.add_argument("--t", type=_range, default=(0.5, 5.0, 50))
    v.add_argument("--fd-step", type=_positive, default=1e-4)
    v.add_argument("--exclusion", type=_positive, default=1e-2)
    v.add_argument("--tol", type=_positive, default=1e-5)
    v = vsub.add_parser("residual-fractional")
    v.add_argument("--ic", type=_ic, default=Gaussian())
    v.add_argument("--a", type=_positive, default=1.0)
    v.add_argument("--tau", type=_positive, default=0.5)
    v.add_argument("--alpha", type=_alpha, default=0.5)
    v.add_argument("--x", type=_range, default=(-2.0, 2.0, 9))
    v.add_argument("--t", type=_range, default=(0.8, 2.4, 9))
    v.add_argument("--l1-steps", type=_count, default=8000)
    v.add_argument("--fd-step", type=_positive, default=1e-4)
    v.add_argument("--exclusion", type=_positive, default=1e-2)
    v.add_argument("--tol", type=_positive, default=1e-2)
    v = vsub.add_parser("oracle")
    v.add_argument("--ic", type=_ic, default=Gaussian())
    v.add_argument("--g", type=_profile, default=None)
    v.add_argument("--a", type=_positive, default=2.0)
    v.add_argument("--tau", type=_positive, default=0.1)
    v.add_argument("--L", type=_positive, default=40.0)
    v.add_argument("--nx", type=_count, default=2048)
    v.add_argument("--m", type=_count, default=20)
    v.add_argument("--final-time", type=_positive, default=4.0)
    v.add_argument("--window", type=_window, default=(-10.0, 30.0), metavar="MIN:MAX")
    v.add_argument("--stage-interp", choices=("hermite", "linear"), default="hermite")
    v.add_argument("--precision", choices=("longdouble", "double"), default="longdouble")
    v.add_argument("--tol", type=_positive, default=1e-3)
    v.add_argument("--out", default=None, help="also write the oracle field (x,t,u) to this CSV")

    p = sub.add_parser("compare", help="error norms between two x,t,u CSV files")
    p.add_argument("--exact", required=True)
    p.add_argument("--oracle", required=True)
    p.add_argument("--coord-tol", type=_finite, default=1e-9)
    p.add_argument("--tol", type=_positive, default=None)
    return parser


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline=""), True


def write_xtu(stream, x, t, u) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["x", "t", "u"])
    for xi, ti, ui in zip(x, t, u):
        writer.writerow([_fmt(xi), _fmt(ti), _fmt(ui)])


def read_xtu(path: str):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["x", "t", "u"]:
        raise GridError(f"{path}: expected header x,t,u")
    data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=np.float64)
    if data.size == 0:
        raise GridError(f"{path}: no data rows")
    return data[:, 0], data[:, 1], data[:, 2]


def _cmd_dexp(args, out) -> int:
    v = dexp_scaled(args.lam, args.t, args.tau)
    if isinstance(v, complex):
        print(f"{_fmt(v.real)},{_fmt(v.imag)}", file=out)
    else:
        print(_fmt(v), file=out)
    return EXIT_OK


def _cmd_delay_ml(args, out) -> int:
    print(_fmt(delay_ml(args.alpha, args.t, args.tau)), file=out)
    return EXIT_OK


def _cmd_solve(args, out) -> int:
    p = DelayParams(args.a, args.tau, args.alpha)
    grid = _grid(args.x, args.t)
    u = eval_grid(make_evaluator(args.ic, p, args.g, method=args.method), grid)
    T, X = np.meshgrid(grid.t, grid.x, indexing="ij")
    stream, close = (out, False) if args.out == "-" else _open_out(args.out)
    try:
        write_xtu(stream, X.ravel(), T.ravel(), u.ravel())
    finally:
        if close:
            stream.close()
    return EXIT_OK


def figure_table(name: str):
    """(header, columns) for a figure dataset; the first column is the free variable."""
    cfg = FIGURES[name]
    a = cfg["a"]
    if cfg["kind"] == "cosh":
        x = cfg["x"]
        t = np.linspace(*cfg["t"])
        cols = [t]
        for tau in cfg["taus"]:
            cols.append(np.cosh(x - a * t) if tau == 0 else
                        np.asarray(eval_cosh_closed(DelayParams(a, tau), x, t)))
        header = ["t"]
    else:
        t = cfg["t"]
        x = np.linspace(*cfg["x"])
        cols = [x]
        for tau in cfg["taus"]:
            cols.append(np.exp(-(x - a * t) ** 2) if tau == 0 else
                        np.asarray(eval_gaussian_hermite(DelayParams(a, tau), x, t)))
        header = ["x"]
    header += [f"u_tau={tau:g}" for tau in cfg["taus"]]
    return header, cols


def _cmd_figure(args, out) -> int:
    header, cols = figure_table(args.name)
    path = Path(args.out) / f"{args.name}.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in zip(*cols):
            writer.writerow([_fmt(v) for v in row])
    print(path, file=out)
    return EXIT_OK


def _verdict(out, text: str, value: float, tol: float) -> int:
    ok = value <= tol
    print(text, file=out)
    print(format_report([("tolerance", float(tol)), ("within_tolerance", str(ok).lower())]), file=out)
    return EXIT_OK if ok else EXIT_TOL


def _cmd_verify(args, out) -> int:
    if args.check == "residual-integer":
        p = DelayParams(args.a, args.tau)
        rep = residual_integer(make_evaluator(args.ic, p), p, _grid(args.x, args.t),
                               fd_step=args.fd_step, exclusion=args.exclusion)
        return _verdict(out, rep.to_text(), rep.max_abs_residual, args.tol)
    if args.check == "residual-fractional":
        if args.alpha == 1:
            raise UsageError("residual-fractional needs --alpha < 1")
        p = DelayParams(args.a, args.tau, args.alpha)
        rep = residual_fractional(make_evaluator(args.ic, p), p, _grid(args.x, args.t),
                                  l1_steps=args.l1_steps, exclusion=args.exclusion,
                                  fd_step=args.fd_step)
        return _verdict(out, rep.to_text(), rep.max_abs_residual, args.tol)
    p = DelayParams(args.a, args.tau)
    cfg = OracleConfig(args.L, args.nx, args.m, args.final_time, args.ic, profile=args.g,
                       stage_interp=args.stage_interp, precision=args.precision)
    field = oracle_solve(cfg, p)
    xs, u = field.restrict(*args.window, args.final_time)
    exact = np.asarray(make_evaluator(args.ic, p, args.g)(xs, np.full(xs.size, args.final_time)))
    sup, l2 = compare(u, exact)
    if args.out:
        stream, _ = _open_out(args.out)
        with stream:
            write_xtu(stream, xs, np.full(xs.size, args.final_time), u)
    text = format_report([("points_checked", xs.size), ("final_time", float(args.final_time))])
    return _verdict(out, text + "\n" + comparison_text(sup, l2), sup, args.tol)


def _cmd_compare(args, out) -> int:
    xa, ta, ua = read_xtu(args.exact)
    xb, tb, ub = read_xtu(args.oracle)
    if xa.shape != xb.shape:
        raise GridError(f"files have {xa.size} and {xb.size} rows")
    if np.max(np.abs(xa - xb)) > args.coord_tol or np.max(np.abs(ta - tb)) > args.coord_tol:
        raise GridError("x/t coordinates of the two files differ")
    sup, l2 = compare(ua, ub)
    if args.tol is None:
        print(comparison_text(sup, l2), file=out)
        return EXIT_OK
    return _verdict(out, comparison_text(sup, l2), sup, args.tol)


_COMMANDS = {
    "dexp": _cmd_dexp,
    "delay-ml": _cmd_delay_ml,
    "solve": _cmd_solve,
    "figure": _cmd_figure,
    "verify": _cmd_verify,
    "compare": _cmd_compare,
}

_NEG_VALUE = re.compile(r"^-[\d.]")


def _join_negative_values(argv):
    # "--x -2:2:50" would otherwise be read as an unknown option
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEG_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, out)
    except SeriesOverflowError as exc:
        where = f" (term index {exc.index})" if exc.index is not None else ""
        print(f"delayadvect: overflow{where}: {exc}", file=err)
        return EXIT_OVERFLOW
    except (DelayAdvectError, UsageError, ValueError) as exc:
        print(f"delayadvect: error: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
