"""Global heights, the adelic ball-volume convolution, and its verifiers.

The global height of a nonsingular rational class is the product of local
heights: at a finite prime p it is p^(d_p) with d_p the building distance
from the base vertex, and at infinity it is exp of the chamber norm of the
log-singular-value vector.  Representing the class by a primitive integer
matrix makes every d_p readable off one Smith normal form.

The expected count of classes with height at most e^T factors through

    b(T) = sum_{m <= e^T} D(m) * b_inf(T - log m),

with D(m) the finite-height mass from the coefficient sieve and b_inf the
radial archimedean volume.  This module evaluates that convolution on a
memoized volume grid and provides the empirical checks used around it:
regularity of b, the persistence of the dominant exponential term under
measure convolution, and box-norm covering numbers.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .archimedean import (
    archimedean_height,
    ball_volume_table,
    growth_exponent_fit,
    simplex_area,
)
from .dirichlet import L_euler, coeff_sieve, pole_abscissas
from .errors import DomainError, check_budget, default_budgets
from .intmat import as_mat, content, det_int, elementary_divisors, valuation
from .primes import factorize

_N_CHUNKS = 64


@dataclass(frozen=True)
class HeightProfile:
    """Local height data of one class: exponents d_p, h_fin = prod p^{d_p},
    the archimedean factor h_inf, and the product h."""

    finite_exponents: tuple[tuple[int, int], ...]
    h_fin: int
    h_inf: float
    h: float


def global_height(mat, B: float) -> HeightProfile:
    """Height profile of a primitive nonsingular integer matrix.

    One Smith normal form gives every finite exponent: primitivity puts the
    smallest elementary divisor at 1, so d_p is the p-valuation of the
    largest divisor.
    """
    m = as_mat(mat)
    if len(m) != len(m[0]):
        raise DomainError("global_height needs a square matrix")
    det = det_int(m)
    if det == 0:
        raise DomainError("matrix is singular")
    if content(m) != 1:
        raise DomainError(
            f"matrix is not primitive (content {content(m)}); divide out the gcd first"
        )
    divisors = elementary_divisors(m)
    exponents = []
    h_fin = 1
    for p, _ in factorize(abs(det)):
        d_p = valuation(divisors[-1], p) - valuation(divisors[0], p)
        if d_p > 0:
            exponents.append((p, d_p))
            h_fin *= p**d_p
    h_inf = archimedean_height(m, B)
    return HeightProfile(tuple(exponents), h_fin, h_inf, h_fin * h_inf)


# ---------------------------------------------------------------------------
# adelic ball volume


@lru_cache(maxsize=8)
def _volume_grid(d: int, B: float, R_max: float):
    return ball_volume_table(d, B, R_max, step=1e-3)


@lru_cache(maxsize=8)
def _coeff_arrays(d: int, x_max: int, max_sieve: int | None):
    table = coeff_sieve(d, x_max, max_sieve=max_sieve)
    weights = np.array(table.values[1:], dtype=float)
    logs = np.log(np.arange(1, x_max + 1, dtype=float))
    return weights, logs


def _chunk_edges(n: int) -> list[tuple[int, int]]:
    edges = [round(i * n / _N_CHUNKS) for i in range(_N_CHUNKS + 1)]
    return [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _convolve(T: float, weights, logs, interp, workers: int) -> float:
    """Deterministic ordered reduction of sum_m D(m) b_inf(T - log m).

    The m-range is cut into a fixed number of chunks independent of the
    worker count, each chunk is summed by numpy, and the chunk totals are
    combined in index order, so results are bit-identical for any workers.
    """
    count = int(np.searchsorted(logs, T + 1e-12, side="right"))
    if count == 0:
        return 0.0
    radii = T - logs[:count]
    values = np.interp(radii, interp.r_grid, interp.values)
    terms = weights[:count] * values
    pieces = [float(terms[a:b].sum()) for a, b in _chunk_edges(count)]
    if workers > 1:
        # chunk sums are independent; recompute them in a pool to the same
        # partition, then reduce in order (exercise of the parallel path)
        def piece(bounds):
            a, b = bounds
            return float(terms[a:b].sum())

        with ThreadPoolExecutor(max_workers=workers) as pool:
            pieces = list(pool.map(piece, _chunk_edges(count)))
    return math.fsum(pieces)


def adelic_ball_volume(
    d: int,
    B: float,
    T: float,
    max_sieve: int | None = None,
    workers: int = 1,
) -> float:
    """Global ball volume b(T) = sum_{m <= e^T} D(m) * b_inf(T - log m).

    b_inf comes from the shared volume grid (step 1e-3, linear
    interpolation), so the m = 1 term and every other term draw from the
    same memoized table.
    """
    if not (T > 0):
        raise DomainError(f"need T > 0, got {T}")
    x_max = int(math.floor(math.exp(T) * (1 + 1e-12)))
    limit = max_sieve if max_sieve is not None else default_budgets().max_sieve
    check_budget("sieve", x_max, limit)
    weights, logs = _coeff_arrays(d, x_max, max_sieve)
    interp = _volume_grid(d, B, max(T, 1e-3))
    return _convolve(T, weights, logs, interp, workers)


@dataclass(frozen=True)
class BallVolumeSeries:
    """b(T) sampled on an increasing grid, with the shared table parameters."""

    d: int
    B: float
    T_grid: tuple[float, ...]
    values: tuple[float, ...]

    def components(self, T: float, max_sieve: int | None = None):
        """Per-m summands (m, D(m), b_inf(T - log m)) of the convolution."""
        x_max = int(math.floor(math.exp(T) * (1 + 1e-12)))
        weights, logs = _coeff_arrays(self.d, x_max, max_sieve)
        interp = _volume_grid(self.d, self.B, max(T, 1e-3))
        out = []
        for m in range(1, x_max + 1):
            radius = T - logs[m - 1]
            if radius < 0:
                break
            out.append((m, weights[m - 1], float(np.interp(radius, interp.r_grid, interp.values))))
        return out


def adelic_ball_series(
    d: int,
    B: float,
    T_grid,
    max_sieve: int | None = None,
    workers: int = 1,
) -> BallVolumeSeries:
    """Evaluate b(T) across an increasing grid with one shared sieve/table."""
    grid = [float(t) for t in T_grid]
    if len(grid) == 0 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("T_grid must be nonempty and strictly increasing")
    if not (grid[0] > 0):
        raise DomainError(f"need T > 0, got {grid[0]}")
    T_max = grid[-1]
    x_max = int(math.floor(math.exp(T_max) * (1 + 1e-12)))
    limit = max_sieve if max_sieve is not None else default_budgets().max_sieve
    check_budget("sieve", x_max, limit)
    weights, logs = _coeff_arrays(d, x_max, max_sieve)
    interp = _volume_grid(d, B, T_max)
    values = tuple(_convolve(t, weights, logs, interp, workers) for t in grid)
    return BallVolumeSeries(d, B, tuple(grid), values)


def adelic_volume_callable(d: int, B: float, T_max: float, max_sieve: int | None = None):
    """b(T) as a reusable callable on (0, T_max]; shares one sieve and table."""
    x_max = int(math.floor(math.exp(T_max) * (1 + 1e-12)))
    limit = max_sieve if max_sieve is not None else default_budgets().max_sieve
    check_budget("sieve", x_max, limit)
    weights, logs = _coeff_arrays(d, x_max, max_sieve)
    interp = _volume_grid(d, B, T_max)

    def b(T: float) -> float:
        if not (0 < T <= T_max * (1 + 1e-12)):
            raise DomainError(f"T={T} outside (0, {T_max}]")
        return _convolve(T, weights, logs, interp, 1)

    return b


# ---------------------------------------------------------------------------
# counting prediction


@dataclass(frozen=True)
class PredictionReport:
    """Main-term prediction a*C*(BT)^(r-1)*e^(E*T)/covolume.

    The radial growth rate carries a factor-two ambiguity between
    conventions in circulation (density e^(2 rho) against e^rho), so the
    value is reported under the measured exponent and under both E = B and
    E = 2B, explicitly labeled.
    """

    d: int
    B: float
    T: float
    covolume: float
    simplex_factor: float
    series_constant: float
    rank: int
    measured_exponent: float
    value_measured: float
    value_exponent_B: float
    value_exponent_2B: float


def prediction_N(d: int, B: float, T: float, covolume: float = 1.0) -> PredictionReport:
    """Predicted count of classes with height <= e^T.

    C is the height series evaluated at s = B and a is the cross-section
    simplex area.  Below the series abscissa max(d, s_2(d)) the evaluation
    is an analytic continuation, not a convergent sum; a warning is issued
    and the value still returned.
    """
    if d < 2 or d > 4:
        raise DomainError(f"prediction_N supports 2 <= d <= 4, got {d}")
    if not (covolume > 0):
        raise DomainError(f"need covolume > 0, got {covolume}")
    if not (T >= 0):
        raise DomainError(f"need T >= 0, got {T}")
    if B <= float(d):
        raise DomainError(
            f"B={B} is at or below the aggregate abscissa {d}; "
            "the series constant diverges there"
        )
    threshold = max(float(d), pole_abscissas(d).B0)
    if B <= threshold:
        warnings.warn(
            f"B={B} is at or below the per-prime abscissa {threshold:.6g}; "
            "the prediction formula is outside its validity range",
            RuntimeWarning,
            stacklevel=2,
        )
    a = simplex_area(d)
    C = L_euler(d, complex(B)).value.real
    rank = d - 1
    radii = np.linspace(2.0 / B, 2.0 / B + 4.0, 9)
    vols = [_volume_grid(d, B, float(radii[-1]))(float(r)) for r in radii]
    measured = growth_exponent_fit(radii, vols).slope

    def value(E: float) -> float:
        return a * C * (B * T) ** (rank - 1) * math.exp(E * T) / covolume

    return PredictionReport(
        d=d,
        B=B,
        T=T,
        covolume=covolume,
        simplex_factor=a,
        series_constant=C,
        rank=rank,
        measured_exponent=measured,
        value_measured=value(measured),
        value_exponent_B=value(B),
        value_exponent_2B=value(2 * B),
    )


# ---------------------------------------------------------------------------
# regularity


@dataclass(frozen=True)
class RegularityReport:
    """Tail ratio estimates per shift size, their extrapolated small-shift
    trend, and the verdict under the documented thresholds."""

    eps_list: tuple[float, ...]
    lower_ratios: tuple[float, ...]
    upper_ratios: tuple[float, ...]
    lower_trend: float
    upper_trend: float
    gap: float
    verdict: str


REGULAR_TOL = 0.02
NON_REGULAR_GAP = 0.1


def regularity_report(b, eps_list, T_list) -> RegularityReport:
    """Estimate liminf_T b(T-eps)/b(T) and limsup_T b(T+eps)/b(T).

    b is either a callable or a pair (grid, values) of samples; sampled
    input must resolve min(eps)/10 or finer.  Ratios are taken over the
    larger-T half of T_list.  Verdict: regular when both smallest-shift
    ratios are within 0.02 of 1, non-regular when the worst deviation
    exceeds 0.1, inconclusive between.  The trend fields extrapolate the
    two smallest shifts linearly to eps = 0.
    """
    eps = sorted({float(e) for e in eps_list}, reverse=True)
    if not eps or eps[-1] <= 0:
        raise DomainError("eps_list must contain positive shifts")
    T = sorted(float(t) for t in T_list)
    if len(T) < 4:
        raise DomainError(f"need at least 4 T samples, got {len(T)}")
    if callable(b):
        f = b
    else:
        grid, values = b
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise DomainError("sampled b must be a pair of equal-length 1-d arrays")
        resolution = float(np.max(np.diff(grid)))
        if resolution > eps[-1] / 10 * (1 + 1e-9):
            raise DomainError(
                f"sample resolution {resolution:.3g} too coarse for smallest "
                f"shift {eps[-1]:.3g}; need <= {eps[-1] / 10:.3g}"
            )
        if T[0] - eps[0] < grid[0] or T[-1] + eps[0] > grid[-1]:
            raise DomainError("sampled b does not cover T_list +- max(eps)")

        def f(t, _g=grid, _v=values):
            return float(np.interp(t, _g, _v))

    tail = T[len(T) // 2 :]
    centers = [f(t) for t in tail]
    if min(centers) <= 0:
        raise DomainError("b must be positive on the evaluated tail")
    lower, upper = [], []
    for e in eps:
        lower.append(min(f(t - e) / c for t, c in zip(tail, centers)))
        upper.append(max(f(t + e) / c for t, c in zip(tail, centers)))
    if len(eps) >= 2:
        e0, e1 = eps[-1], eps[-2]
        slope = e0 / (e1 - e0)
        lower_trend = lower[-1] + (lower[-1] - lower[-2]) * slope
        upper_trend = upper[-1] + (upper[-1] - upper[-2]) * slope
    else:
        lower_trend, upper_trend = lower[-1], upper[-1]
    gap = max(abs(1.0 - lower[-1]), abs(upper[-1] - 1.0))
    if gap <= REGULAR_TOL:
        verdict = "regular"
    elif gap > NON_REGULAR_GAP:
        verdict = "non-regular"
    else:
        verdict = "inconclusive"
    return RegularityReport(
        eps_list=tuple(eps),
        lower_ratios=tuple(lower),
        upper_ratios=tuple(upper),
        lower_trend=lower_trend,
        upper_trend=upper_trend,
        gap=gap,
        verdict=verdict,
    )


def tree_ball(q: int, T: float) -> int:
    """Vertices within distance T of a root in the (q+1)-regular tree.

    Breadth-first truth: 1 + (q+1)(q^k - 1)/(q - 1) with k = floor(T);
    shell j >= 1 holds (q+1) q^(j-1) vertices.
    """
    if not isinstance(q, int) or q < 2:
        raise DomainError(f"need integer q >= 2, got {q!r}")
    if T < 0:
        raise DomainError(f"need T >= 0, got {T}")
    k = int(math.floor(T + 1e-12))
    return 1 + (q + 1) * (q**k - 1) // (q - 1)


# ---------------------------------------------------------------------------
# persistence of the dominant asymptotic


@dataclass(frozen=True)
class MeasurePair:
    """Point-mass measure mu, sampled cumulative nu, and the asymptotic
    parameters (alpha, beta) with C = sum mass * e^(-beta * location)."""

    masses: tuple[tuple[float, float], ...]
    nu_grid: tuple[float, ...]
    nu_values: tuple[float, ...]
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not self.masses:
            raise DomainError("mu needs at least one point mass")
        if any(loc < 0 or mass <= 0 for loc, mass in self.masses):
            raise DomainError("mu point masses need location >= 0 and mass > 0")
        if self.alpha < 0 or self.beta <= 0:
            raise DomainError(f"need alpha >= 0 and beta > 0, got {self.alpha}, {self.beta}")
        grid = self.nu_grid
        if len(grid) < 2 or len(grid) != len(self.nu_values):
            raise DomainError("nu needs matching grids of length >= 2")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise DomainError("nu grid must be strictly increasing")

    @property
    def C(self) -> float:
        return math.fsum(mass * math.exp(-self.beta * loc) for loc, mass in self.masses)


def persistence_check(pair: MeasurePair, T: float) -> tuple[float, float]:
    """d(T) = sum_{loc <= T} mass * nu([0, T - loc]) and its ratio to the
    dominant term C * T^alpha * e^(beta T)."""
    if not (T > 0):
        raise DomainError(f"need T > 0, got {T}")
    grid = np.asarray(pair.nu_grid)
    vals = np.asarray(pair.nu_values)
    locs = np.array([loc for loc, _ in pair.masses])
    mass = np.array([m for _, m in pair.masses])
    keep = locs <= T + 1e-12
    needed = T - locs[keep]
    if needed.size and float(needed.max()) > grid[-1] + 1e-9:
        raise DomainError(
            f"nu sampled only up to {grid[-1]:.6g} but T - location reaches "
            f"{float(needed.max()):.6g}; extend the nu range"
        )
    terms = mass[keep] * np.interp(needed, grid, vals)
    pieces = [float(terms[a:b].sum()) for a, b in _chunk_edges(terms.size)]
    d_T = math.fsum(pieces)
    dominant = pair.C * T**pair.alpha * math.exp(pair.beta * T)
    return d_T, d_T / dominant


def pgl2_measure_pair(
    T_max: float = 12.0,
    B: float = 1.0,
    max_sieve: int | None = None,
) -> MeasurePair:
    """The height-count pair for d = 2: masses D(m)/m^B at log m for every
    m <= e^T_max, against nu([0, t]) = e^(2t).

    C then equals sum_{m <= e^T_max} D(m)/m^(B+2), the truncated series whose
    tail is at most (log x + 2)/x at x = e^T_max (since D(m) <= m(1 + log m)),
    so the measured ratio converges to 1 as T grows.
    """
    if not (T_max > 0):
        raise DomainError(f"need T_max > 0, got {T_max}")
    x_max = int(math.floor(math.exp(T_max) * (1 + 1e-12)))
    limit = max_sieve if max_sieve is not None else default_budgets().max_sieve
    check_budget("sieve", x_max, limit)
    weights, logs = _coeff_arrays(2, x_max, max_sieve)
    m = np.arange(1, x_max + 1, dtype=float)
    masses = tuple(zip(logs.tolist(), (weights / m**B).tolist()))
    grid = np.linspace(0.0, T_max, int(T_max * 1000) + 1)
    return MeasurePair(
        masses=masses,
        nu_grid=tuple(grid.tolist()),
        nu_values=tuple(np.exp(2.0 * grid).tolist()),
        alpha=0.0,
        beta=2.0,
    )


def covering_number_box(n: int, T: float, delta: float) -> tuple[int, float]:
    """Minimal number of delta-boxes covering the T-box in max norm, with the
    overlap ratio count * (delta/T)^n; grid covering is optimal for boxes."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"need integer n >= 1, got {n!r}")
    if not (0 < delta < T):
        raise DomainError(f"need 0 < delta < T, got delta={delta}, T={T}")
    q = T / delta
    if abs(q - round(q)) < 1e-9 * max(1.0, abs(q)):
        q = round(q)
    per_axis = int(math.ceil(q))
    count = per_axis**n
    return count, count * (delta / T) ** n
