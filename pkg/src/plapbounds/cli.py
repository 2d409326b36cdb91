"""Command-line interface: ``plap <command> ...``.

Every command emits ``{"config", "results", "version"}`` as JSON (plus a
timestamp unless ``--reproducible``), or the ``results`` rows as CSV or a
fixed-width table. Exit codes: 0 ok, 1 verify failure, 2 bad input,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone

from . import __version__, bounds, eigenvalue, nonexistence, oracle, pointwise, verify
from .errors import ConvergenceError, DomainError, PlapError, SpecError
from .geometry import Ball, parse_geometry
from .nonlinearity import Nonlinearity, PSetting, parse_nonlinearity
from .report import BoundEntry, BoundKind, BoundReport, rows_to_csv, rows_to_table

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_INPUT, EXIT_CONVERGENCE = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# output


def render(config: dict, results: list[dict], fmt: str, reproducible: bool = False) -> str:
    if fmt == "json":
        doc = {"config": config, "results": results, "version": __version__}
        if not reproducible:
            doc["timestamp"] = datetime.now(timezone.utc).isoformat()
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        return rows_to_csv(results)
    if fmt == "table":
        return rows_to_table(results)
    raise SpecError(f"unknown format {fmt!r}; expected json, csv or table")


def output_path(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get("PLAP_OUTPUT_DIR")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def report_from_json(text: str) -> BoundReport:
    """Re-read the JSON of ``bounds`` or ``eigen`` into a :class:`BoundReport`."""
    doc = json.loads(text)
    rows = [r for r in doc["results"] if r.get("kind") in (k.value for k in BoundKind)]
    cfg = doc.get("config", {})
    problem = {k: cfg[k] for k in ("nonlinearity", "p", "N", "geometry") if k in cfg}
    return BoundReport(problem, [BoundEntry.from_dict(r) for r in rows])


# ---------------------------------------------------------------------------
# value lists for sweeps


def parse_values(text: str, cast=float) -> list:
    """``"2"``, ``"1.5,2,3"`` or an inclusive integer-step range ``"1..15"``."""
    out = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                a, b = part.split("..")
                lo, hi = cast(a), cast(b)
                n = int(math.floor(hi - lo + 1e-9)) + 1
                out.extend(cast(lo + i) for i in range(n))
            elif part:
                out.append(cast(part))
    except ValueError:
        raise SpecError(f"bad value list {text!r}; use e.g. '2', '1.5,2,3' or '1..15'") from None
    if not out:
        raise SpecError(f"empty value list {text!r}")
    return out


# ---------------------------------------------------------------------------
# commands


def _ps(args) -> PSetting:
    return PSetting(args.p, args.dim)


def cmd_bounds(args) -> list[dict]:
    nl, ps, geom = parse_nonlinearity(args.f), _ps(args), parse_geometry(args.geom)
    lam1, certified = args.lambda1, args.lambda1 is not None
    if lam1 is None and args.with_oracle:
        if not isinstance(geom, Ball):
            raise DomainError("--with-oracle needs a ball geometry")
        lam1, certified = oracle.lambda1_numeric(ps, geom.R), False
    rep = bounds.bound_report(nl, ps, geom, lam1, certified)
    rows = [e.to_dict() for e in rep.entries]
    if args.with_oracle and isinstance(geom, Ball):
        curve = oracle.lambda_star_numeric(ps, nl, geom.R, args.tol)
        rows.append({"name": "lambda_star_numeric", "kind": "numeric",
                     "value": curve.lambda_star_numeric, "source": "radial shooting",
                     "certified": False})
    return rows


def cmd_eigen(args) -> list[dict]:
    ps, geom = _ps(args), parse_geometry(args.geom)
    rep = eigenvalue.best_lower(geom, ps)
    best = rep.best
    rows = [dict(e.to_dict(), best=e is best) for e in rep.entries]
    if args.with_oracle:
        if not isinstance(geom, Ball):
            raise DomainError("--with-oracle needs a ball geometry")
        rows.append({"name": "lambda1_numeric", "kind": "numeric",
                     "value": oracle.lambda1_numeric(ps, geom.R), "source": "radial shooting",
                     "certified": False, "best": False})
    return rows


def cmd_pointwise(args) -> list[dict]:
    nl, ps = parse_nonlinearity(args.f), _ps(args)
    w = pointwise.parse_weight(args.weight, Ball(args.radius))
    n = args.points
    radii = [args.radius * i / (n - 1) for i in range(n)] if n > 1 else [0.0]
    return pointwise.pointwise_table(nl, ps, w, args.lam, radii)


def cmd_nonexist(args) -> list[dict]:
    nl, ps = parse_nonlinearity(args.f), _ps(args)
    w = pointwise.parse_weight(args.weight, Ball(args.radius))
    rows = []
    t = nonexistence.threshold_general(nl, ps, w)
    rows.append({"name": "general", "lambda_bar": t.lambda_bar, "source": t.source,
                 "meaning": t.meaning})
    if w.kind is pointwise.WeightKind.RADIAL_POWER:
        t = nonexistence.threshold_radial_weight(nl, ps, w.value, args.radius)
        rows.append({"name": "radial_weight", "lambda_bar": t.lambda_bar, "source": t.source,
                     "meaning": t.meaning})
    return rows


def cmd_mems(args) -> list[dict]:
    s = nonexistence.mems_sandwich(args.alpha, args.dim, args.radius)
    row = {"alpha": args.alpha, "N": args.dim, "R": args.radius, "lower": s.lower,
           "upper": s.upper, "lower_source": s.lower_source}
    if args.with_oracle:
        curve = oracle.lambda_star_numeric(PSetting(2.0, args.dim), Nonlinearity.mems(2.0),
                                           args.radius, args.tol, args.alpha)
        row["oracle"] = curve.lambda_star_numeric
        row["inside"] = s.contains(curve.lambda_star_numeric, args.tol)
    return [row]


def cmd_oracle(args) -> list[dict]:
    ps = _ps(args)
    what = args.what
    if what == "lambda1":
        return [{"p": ps.p, "N": ps.N, "R": args.radius,
                 "lambda1_numeric": oracle.lambda1_numeric(ps, args.radius, args.tol)}]
    if what == "torsion":
        r, psi = oracle.torsion_numeric(ps, args.radius, args.alpha_w, args.points)
        return [{"r": float(a), "psi": float(b)} for a, b in zip(r, psi)]
    nl = parse_nonlinearity(args.f)
    curve = oracle.lambda_star_numeric(ps, nl, args.radius, args.tol, args.alpha_w)
    if what == "curve":
        return [{"u0": u, "lambda": lam} for u, lam in curve.points]
    return [{"f": nl.spec, "p": ps.p, "N": ps.N, "R": args.radius, "alpha_w": args.alpha_w,
             "lambda_star_numeric": curve.lambda_star_numeric, "turning_u0": curve.turning_u0,
             "at_grid_end": curve.at_grid_end, "unbounded": curve.unbounded}]


def sweep_row(point: dict) -> dict:
    """One sweep cell; failures are recorded in the row, never raised."""
    row = dict(point)
    try:
        nl = parse_nonlinearity(point["f"])
        ps = PSetting(point["p"], point["N"])
        if point.get("q") is not None:
            (pt,) = bounds.q_limit_study(nl, ps, [point["q"]])
            row.update(lower=pt.lower, upper=pt.upper, gap=pt.gap,
                       limit=bounds.q_limit_target(ps))
            return row
        try:
            cf = bounds.closed_form(nl, ps)
            row.update(closed_form_lower=cf.lower, branch=cf.branch)
        except DomainError:
            row.update(closed_form_lower=math.nan, branch=0)
        row.update(ball_lower=bounds.lower_ball(nl, ps),
                   torsion_upper=bounds.upper_torsion(nl, ps))
        if point.get("oracle"):
            row["oracle"] = oracle.lambda_star_numeric(ps, nl).lambda_star_numeric
    except PlapError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def sweep_points(args) -> list[dict]:
    fams = []
    if args.m is not None and args.f != "exp":
        fams = [f"{args.f}:m={m:g}" for m in parse_values(args.m)]
    else:
        fams = [args.f]
    qs = parse_values(args.q) if args.q else [None]
    pts = []
    for f in fams:
        for p in parse_values(args.p):
            for N in parse_values(args.dim):
                for q in qs:
                    pt = {"f": f, "p": p, "N": N}
                    if q is not None:
                        pt["q"] = q
                    elif args.with_oracle:
                        pt["oracle"] = True
                    pts.append(pt)
    return sorted(pts, key=lambda d: (d["f"], d["p"], d["N"], d.get("q") or 0.0))


def cmd_sweep(args) -> list[dict]:
    pts = sweep_points(args)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(sweep_row, pts))
    else:
        rows = [sweep_row(p) for p in pts]
    for r in rows:
        if r.get("oracle") is True:
            r.pop("oracle")
    return rows


def cmd_verify(args) -> list[dict]:
    return verify.run_suite(args.suite, args.grid)


# ---------------------------------------------------------------------------
# parser


def _common(sp, default_format="json"):
    sp.add_argument("--format", choices=("json", "csv", "table"), default=default_format)
    sp.add_argument("--output", "-o", help="write here (relative paths go under PLAP_OUTPUT_DIR)")
    sp.add_argument("--reproducible", action="store_true", help="omit the JSON timestamp")


def _problem(sp, f=True, geom=False):
    if f:
        sp.add_argument("--f", default="exp", help='"exp", "gelfand:m=<m>" or "mems:m=<m>"')
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--dim", type=float, default=2.0, help="space dimension N")
    if geom:
        sp.add_argument("--geom", default="ball:R=1",
                        help='"ball:R=<r>" or "measured:diam=,cheb=,vol=,per="')


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plap", description="Bounds for p-Laplacian extremal parameters")
    ap.add_argument("--version", action="version", version=f"plap {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("bounds", help="upper/lower bounds for lambda*")
    _problem(sp, geom=True)
    sp.add_argument("--lambda1", type=float, help="known first eigenvalue (certified)")
    sp.add_argument("--with-oracle", action="store_true")
    sp.add_argument("--tol", type=float, default=1e-4)
    _common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("eigen", help="lower bounds for lambda_1")
    _problem(sp, f=False, geom=True)
    sp.add_argument("--with-oracle", action="store_true")
    _common(sp)
    sp.set_defaults(func=cmd_eigen)

    sp = sub.add_parser("pointwise", help="pointwise lower bounds for solutions")
    _problem(sp)
    sp.add_argument("--lam", type=float, required=True)
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--weight", default="const:c=1", help='"const:c=<c>" or "power:alpha=<a>"')
    sp.add_argument("--points", type=int, default=11)
    _common(sp, "csv")
    sp.set_defaults(func=cmd_pointwise)

    sp = sub.add_parser("nonexist", help="nonexistence thresholds")
    _problem(sp)
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--weight", default="const:c=1")
    _common(sp)
    sp.set_defaults(func=cmd_nonexist)

    sp = sub.add_parser("mems", help="pull-in voltage sandwich")
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--dim", type=float, default=2.0)
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--with-oracle", action="store_true")
    sp.add_argument("--tol", type=float, default=1e-4)
    _common(sp, "table")
    sp.set_defaults(func=cmd_mems)

    sp = sub.add_parser("oracle", help="radial shooting oracle")
    sp.add_argument("what", choices=("lambda-star", "lambda1", "torsion", "curve"))
    _problem(sp)
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--alpha-w", type=float, default=0.0)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--points", type=int, default=101)
    _common(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("sweep", help="bounds over a parameter grid")
    sp.add_argument("--f", default="exp", help='family: "exp", "gelfand", "mems" or a full spec')
    sp.add_argument("--p", default="2")
    sp.add_argument("--dim", default="1..15")
    sp.add_argument("--m", default=None, help="exponent list for gelfand/mems")
    sp.add_argument("--q", default=None, help="q list for the f(u^q) study")
    sp.add_argument("--with-oracle", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    _common(sp, "csv")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="check bounds against the oracle")
    sp.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    sp.add_argument("--grid", choices=tuple(verify.GRIDS), default="default")
    _common(sp, "table")
    sp.set_defaults(func=cmd_verify)
    return ap


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "output", "format", "reproducible")}
    if args.command in ("bounds",):
        cfg["nonlinearity"] = parse_nonlinearity(args.f).spec
        cfg["geometry"] = parse_geometry(args.geom).spec
        cfg["N"] = args.dim
    return cfg


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command == "oracle" and args.tol is None:
        args.tol = 1e-8 if args.what == "lambda1" else 1e-4
    try:
        results = args.func(args)
        text = render(_config(args), results, args.format, args.reproducible)
    except ConvergenceError as exc:
        print(f"plap: numerical failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (DomainError, ValueError) as exc:
        print(f"plap: {exc}", file=sys.stderr)
        return EXIT_INPUT
    path = output_path(args.output)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if args.command == "verify" and not all(r["passed"] for r in results):
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def main() -> None:
    sys.exit(run())
