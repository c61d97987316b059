#!/usr/bin/env python3
"""Exhaustive pi(x) for PGL_2(Q) against the adelic volume predictions.

Prints the exact counts next to the two exponent conventions and the
sandwich bracket from the global ball volume.  Runtime grows like the
fourth power of the entry bound, so keep --xmax modest (<= 12 or so).

Usage:
    python scripts/count_vs_prediction.py --xmax 8 --B 1.0 --workers 4
"""

import argparse

from heightcount import compare_report


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--xmax", type=float, default=8.0)
    ap.add_argument("--B", type=float, default=1.0)
    ap.add_argument("--step", type=float, default=1.0)
    ap.add_argument("--covolume", type=float, default=1.0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    grid = []
    x = 1.0
    while x <= args.xmax + 1e-9:
        grid.append(round(x, 6))
        x += args.step
    rep = compare_report(
        grid, args.B, covolume=args.covolume, workers=args.workers
    )

    print(f"# B={args.B} covolume={args.covolume} entry_bound={rep.entry_bound_used}")
    print(
        f"{'x':>6} {'pi(x)':>8} {'ties':>5} {'conv B':>12} {'conv 2B':>12} "
        f"{'lower':>12} {'upper':>12}"
    )
    for i, x in enumerate(rep.x_grid):
        print(
            f"{x:6.2f} {rep.pi_values[i]:8d} {rep.tie_counts[i]:5d} "
            f"{rep.predicted_low_exponent[i]:12.4g} "
            f"{rep.predicted_high_exponent[i]:12.4g} "
            f"{rep.lower_sandwich[i]:12.4g} {rep.upper_sandwich[i]:12.4g}"
        )
    print()
    print(f"slack (count / lower sandwich, worst case): {rep.slack:.4g}")


if __name__ == "__main__":
    main()
