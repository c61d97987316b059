#!/usr/bin/env python3
"""Classify growth functions as regular or not via two-sided eps-ratios.

Runs the three reference models (smooth, floor-step, tree ball) and then
the measured adelic volume for d = 2.  The adelic case needs a sieve out
to e^{Tmax}, so large --Tmax calls for --max-sieve above the default
budget of 10^6.

Usage:
    python scripts/regularity_scan.py --Tmax 13 --max-sieve 600000
"""

import argparse
import math

from heightcount import adelic_volume_callable, regularity_report, tree_ball


def _grid(lo: float, hi: float, n: int) -> list[float]:
    return [lo + i * (hi - lo) / (n - 1) for i in range(n)]


def _show(name: str, rep) -> None:
    print(f"{name:28} verdict={rep.verdict:12} "
          f"liminf~{rep.lower_trend:.4f} limsup~{rep.upper_trend:.4f} "
          f"gap={rep.gap:.4f}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--Tmin", type=float, default=8.0)
    ap.add_argument("--Tmax", type=float, default=13.0)
    ap.add_argument("--points", type=int, default=25)
    ap.add_argument("--eps", default="0.1,0.05,0.01,0.005")
    ap.add_argument("--max-sieve", type=int, default=None, dest="max_sieve")
    ap.add_argument("--skip-adelic", action="store_true")
    args = ap.parse_args()

    eps = [float(tok) for tok in args.eps.split(",")]
    T = _grid(args.Tmin, args.Tmax, args.points)

    _show("x * e^(2x)", regularity_report(lambda x: x * math.exp(2 * x), eps, T))
    _show("e^(floor(x))", regularity_report(lambda x: math.exp(math.floor(x)), eps, T))
    _show("tree ball q=2", regularity_report(lambda x: float(tree_ball(2, x)), eps, T))

    if not args.skip_adelic:
        b = adelic_volume_callable(
            2, 1.0, args.Tmax + max(eps), max_sieve=args.max_sieve
        )
        _show("adelic volume d=2 B=1", regularity_report(b, eps, T))


if __name__ == "__main__":
    main()
