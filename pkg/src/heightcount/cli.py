"""Command line interface.

One executable, one subcommand per computation.  Single structured results
are emitted as JSON on stdout; grids are emitted as CSV (stdout or --csv
PATH) with a `# schema:` comment line before the header.  Numbers are
printed with 12 significant digits.  Exit codes: 0 success, 1 domain error
(including malformed flags), 2 budget error.  Budget defaults come from the
HEIGHTCOUNT_MAX_* environment variables documented in heightcount.errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import adelic, archimedean, building, counting, dirichlet
from .errors import BudgetError, DomainError, HeightCountError
from .verify import format_report, run_checks

_FMT = "%.12g"


def _f12(value: float) -> float:
    """Round-trip through 12 significant digits so JSON prints exactly that."""
    return float(_FMT % value)


def _emit_json(name: str, payload: dict, stream) -> None:
    body = {"schema": f"heightcount/{name}/v1"}
    body.update(payload)
    json.dump(body, stream, indent=2)
    stream.write("\n")


def _emit_csv(name: str, header: list[str], rows, stream) -> None:
    stream.write(f"# schema: heightcount/{name}/v1\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_FMT % v if isinstance(v, float) else v for v in row])


def _parse_matrix(text: str):
    try:
        rows = [[int(v) for v in row.split(",")] for row in text.split(";")]
    except ValueError as exc:
        raise DomainError(f"could not parse matrix {text!r}; use 'a,b;c,d'") from exc
    if not rows or any(len(r) != len(rows) for r in rows):
        raise DomainError(f"matrix {text!r} is not square")
    return rows


def _parse_eps(text: str) -> tuple[float, ...]:
    try:
        eps = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise DomainError(f"could not parse eps list {text!r}") from exc
    return eps


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 on malformed flags (2 is reserved for budgets)."""

    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# subcommand bodies; each returns the payload it printed


def _cmd_sphere(args, out):
    params = building.BuildingParams(args.d, args.p)
    _emit_json(
        "sphere",
        {"d": args.d, "p": args.p, "k": args.k, "sphere": building.sphere_size(params, args.k)},
        out,
    )


def _cmd_ball(args, out):
    params = building.BuildingParams(args.d, args.p)
    _emit_json(
        "ball",
        {"d": args.d, "p": args.p, "k": args.k, "ball": building.ball_size(params, args.k)},
        out,
    )


def _cmd_classes(args, out):
    params = building.BuildingParams(args.d, args.p)
    rows = []
    for record in building.class_records(params, args.kmax, max_classes=args.max_classes):
        hnf = "; ".join(" ".join(str(v) for v in row) for row in record["hnf"])
        exps = " ".join(str(v) for v in record["divisor_exponents"])
        rows.append([record["distance"], hnf, exps])
    _emit_csv("classes", ["distance", "hnf", "divisor_exponents"], rows, out)


def _cmd_dcoeff(args, out):
    table = dirichlet.coeff_sieve(args.d, args.xmax, max_sieve=args.max_sieve)
    rows = [[m, table[m]] for m in range(1, args.xmax + 1)]
    _emit_csv("dcoeff", ["m", "D"], rows, out)


def _cmd_lseries(args, out):
    if args.variant == "sl2":
        if args.d != 2:
            raise DomainError("the sl2 variant is defined for d = 2 only")
        result = dirichlet.L_euler_sl2(complex(args.s), prime_cutoff=args.cutoff)
    else:
        result = dirichlet.L_euler(args.d, complex(args.s), prime_cutoff=args.cutoff)
    _emit_json(
        "lseries",
        {
            "d": args.d,
            "variant": args.variant,
            "s": _f12(args.s),
            "value_re": _f12(result.value.real),
            "value_im": _f12(result.value.imag),
            "truncation_bound": _f12(result.truncation_bound),
        },
        out,
    )


def _cmd_poles_table(args, out):
    rows = []
    for d in range(2, args.dmax + 1):
        table = dict(dirichlet.pole_abscissas(d, p_max=3).entries)
        rows.append([d, "%.10f" % table[2], "%.10f" % table[3]])
    _emit_csv("poles-table", ["n", "s_2", "s_3"], rows, out)


def _cmd_residue(args, out):
    report = dirichlet.residue_estimate(args.variant)
    _emit_json(
        "residue",
        {
            "variant": report.variant,
            "pole": _f12(report.pole),
            "direct": _f12(report.direct),
            "extrapolated": _f12(report.extrapolated),
            "difference": _f12(report.difference),
            "note": report.note,
        },
        out,
    )


def _cmd_ball_volume(args, out):
    volume = archimedean.ball_volume_numeric(args.d, args.B, args.R)
    _emit_json(
        "ball-volume",
        {"d": args.d, "B": _f12(args.B), "R": _f12(args.R), "volume": _f12(volume)},
        out,
    )


def _cmd_ball_adelic(args, out):
    if not (args.step > 0 and args.Tmax >= args.step):
        raise DomainError(f"need 0 < step <= Tmax, got step={args.step}, Tmax={args.Tmax}")
    grid = np.arange(args.step, args.Tmax + args.step / 2, args.step)
    series = adelic.adelic_ball_series(
        args.d, args.B, grid, max_sieve=args.max_sieve, workers=args.workers
    )
    rows = list(zip((float(t) for t in series.T_grid), series.values))
    _emit_csv("ball-adelic", ["T", "b"], rows, out)


def _cmd_height(args, out):
    profile = adelic.global_height(_parse_matrix(args.matrix), args.B)
    _emit_json(
        "height",
        {
            "finite_exponents": [[p, e] for p, e in profile.finite_exponents],
            "h_fin": profile.h_fin,
            "h_inf": _f12(profile.h_inf),
            "h": _f12(profile.h),
        },
        out,
    )


def _cmd_predict(args, out):
    report = adelic.prediction_N(args.d, args.B, args.T, covolume=args.covolume)
    _emit_json(
        "predict",
        {
            "d": report.d,
            "B": _f12(report.B),
            "T": _f12(report.T),
            "covolume": _f12(report.covolume),
            "simplex_factor": _f12(report.simplex_factor),
            "series_constant": _f12(report.series_constant),
            "rank": report.rank,
            "measured_exponent": _f12(report.measured_exponent),
            "value_measured_exponent": _f12(report.value_measured),
            "value_exponent_B": _f12(report.value_exponent_B),
            "value_exponent_2B": _f12(report.value_exponent_2B),
        },
        out,
    )


def _cmd_count(args, out):
    x_grid = [float(x) for x in range(1, int(math.floor(args.xmax)) + 1)]
    if not x_grid:
        raise DomainError(f"need xmax >= 1, got {args.xmax}")
    report = counting.compare_report(
        x_grid,
        args.B,
        covolume=args.covolume,
        workers=args.workers,
        max_cells=args.max_cells,
        max_sieve=args.max_sieve,
    )
    rows = [
        [x, pi, lo, hi, sl, su]
        for x, pi, lo, hi, sl, su in zip(
            report.x_grid,
            report.pi_values,
            report.predicted_low_exponent,
            report.predicted_high_exponent,
            report.lower_sandwich,
            report.upper_sandwich,
        )
    ]
    _emit_csv(
        "count",
        ["x", "pi", "predicted_convA", "predicted_convB", "lower_sandwich", "upper_sandwich"],
        rows,
        out,
    )


def _cmd_regularity(args, out):
    b = adelic.adelic_volume_callable(
        args.d, args.B, args.Tmax + max(args.eps) + 0.01, max_sieve=args.max_sieve
    )
    report = adelic.regularity_report(b, args.eps, np.linspace(args.Tmin, args.Tmax, args.points))
    _emit_json(
        "regularity",
        {
            "d": args.d,
            "B": _f12(args.B),
            "eps": [_f12(e) for e in report.eps_list],
            "lower_ratios": [_f12(v) for v in report.lower_ratios],
            "upper_ratios": [_f12(v) for v in report.upper_ratios],
            "lower_trend": _f12(report.lower_trend),
            "upper_trend": _f12(report.upper_trend),
            "gap": _f12(report.gap),
            "verdict": report.verdict,
        },
        out,
    )


def _cmd_persistence(args, out):
    pair = adelic.pgl2_measure_pair(T_max=args.Tmax, B=args.B, max_sieve=args.max_sieve)
    d_T, ratio = adelic.persistence_check(pair, args.T)
    _emit_json(
        "persistence",
        {
            "B": _f12(args.B),
            "T": _f12(args.T),
            "C": _f12(pair.C),
            "alpha": _f12(pair.alpha),
            "beta": _f12(pair.beta),
            "d_T": _f12(d_T),
            "ratio": _f12(ratio),
        },
        out,
    )


def _cmd_verify(args, out):
    results = run_checks(quick=not args.full, workers=args.workers)
    out.write(format_report(results))
    if not all(r.passed for r in results):
        raise SystemExit(1)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="heightcount", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **flags):
        p = sub.add_parser(name)
        for flag, spec in flags.items():
            p.add_argument(f"--{flag}", **spec)
        p.set_defaults(func=fn)
        return p

    int_req = {"type": int, "required": True}
    float_req = {"type": float, "required": True}

    add("sphere", _cmd_sphere, d=int_req, p=int_req, k=int_req)
    add("ball", _cmd_ball, d=int_req, p=int_req, k=int_req)
    add(
        "classes",
        _cmd_classes,
        d=int_req,
        p=int_req,
        kmax=int_req,
        **{"max-classes": {"type": int, "default": None, "dest": "max_classes"}},
    )
    add(
        "dcoeff",
        _cmd_dcoeff,
        d=int_req,
        xmax=int_req,
        **{"max-sieve": {"type": int, "default": None, "dest": "max_sieve"}},
    )
    add(
        "lseries",
        _cmd_lseries,
        d=int_req,
        s=float_req,
        cutoff={"type": int, "default": 10**5},
        variant={"choices": ["pgld", "sl2"], "default": "pgld"},
    )
    add("poles-table", _cmd_poles_table, dmax={"type": int, "default": 6})
    add("residue", _cmd_residue, variant={"choices": ["pgl2", "sl2"], "required": True})
    add("ball-volume", _cmd_ball_volume, d=int_req, B=float_req, R=float_req)
    add(
        "ball-adelic",
        _cmd_ball_adelic,
        d=int_req,
        B=float_req,
        Tmax=float_req,
        step={"type": float, "default": 0.25},
        workers={"type": int, "default": 1},
        **{"max-sieve": {"type": int, "default": None, "dest": "max_sieve"}},
    )
    add("height", _cmd_height, matrix={"type": str, "required": True}, B=float_req)
    add(
        "predict",
        _cmd_predict,
        d=int_req,
        B=float_req,
        T=float_req,
        covolume={"type": float, "default": 1.0},
    )
    add(
        "count",
        _cmd_count,
        xmax=float_req,
        B=float_req,
        covolume={"type": float, "default": 1.0},
        workers={"type": int, "default": 1},
        **{
            "max-cells": {"type": int, "default": None, "dest": "max_cells"},
            "max-sieve": {"type": int, "default": None, "dest": "max_sieve"},
        },
    )
    add(
        "regularity",
        _cmd_regularity,
        d=int_req,
        B=float_req,
        Tmin=float_req,
        Tmax=float_req,
        points={"type": int, "default": 25},
        eps={"type": _parse_eps, "default": (0.02, 0.01, 0.005)},
        **{"max-sieve": {"type": int, "default": None, "dest": "max_sieve"}},
    )
    add(
        "persistence",
        _cmd_persistence,
        T=float_req,
        Tmax={"type": float, "default": 12.0},
        B={"type": float, "default": 1.0},
        **{"max-sieve": {"type": int, "default": None, "dest": "max_sieve"}},
    )
    verify_p = sub.add_parser("verify")
    tier = verify_p.add_mutually_exclusive_group()
    tier.add_argument("--quick", action="store_true", default=True)
    tier.add_argument("--full", action="store_true", default=False)
    verify_p.add_argument("--workers", type=int, default=1)
    verify_p.set_defaults(func=_cmd_verify)
    for name, p in sub.choices.items():
        if name not in ("verify",):
            p.add_argument("--csv", type=str, default=None, help="write CSV/JSON to this path")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    target = getattr(args, "csv", None)
    try:
        if target:
            with open(target, "w", encoding="utf-8", newline="") as handle:
                args.func(args, handle)
        else:
            args.func(args, sys.stdout)
    except BudgetError as exc:
        print(f"heightcount: budget error: {exc}", file=sys.stderr)
        return 2
    except HeightCountError as exc:
        print(f"heightcount: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


if __name__ == "__main__":
    sys.exit(main())
