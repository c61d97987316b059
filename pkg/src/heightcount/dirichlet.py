"""The shell Dirichlet series L(s) = sum D(m) m^(-s) and its analytic data.

D is multiplicative with D(p^k) = D(p) c(p)^(k-1) (the closed shell form
from `building`).  The Euler factor at p is

    (1 - [c(p) - D(p)] p^(-s)) / (1 - c(p) p^(-s)),

so L extends meromorphically to Re(s) > d with simple poles on the lines
Re(s) = s_p = log c(p)/log p, and for d = 2 collapses to the closed form
zeta(s) zeta(s-1)/zeta(2s).  The determinant-one (even-shell) variant at
d = 2 has closed form zeta(2s-2) zeta(2s-1)/zeta(4s-2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .building import BuildingParams, shell_count, shell_ratio, sphere_size
from .errors import BudgetError, DomainError, default_budgets
from .primes import factorize, is_prime, primes_up_to, smallest_factor_sieve

_MARGIN = 1e-6

# Bernoulli numbers B_2, B_4, ..., B_16 for the Euler-Maclaurin tail.
_BERNOULLI = (
    1 / 6,
    -1 / 30,
    1 / 42,
    -1 / 30,
    5 / 66,
    -691 / 2730,
    7 / 6,
    -3617 / 510,
)


@dataclass(frozen=True)
class EulerFactorParams:
    """Shell constants entering the Euler factor at p."""

    d: int
    p: int

    def __post_init__(self) -> None:
        BuildingParams(self.d, self.p)  # validation only

    @property
    def c_p(self) -> int:
        return shell_ratio(self.d, self.p)

    @property
    def D_p(self) -> int:
        return shell_count(self.d, self.p)


@dataclass(frozen=True)
class CoeffTable:
    """Sieved multiplicative coefficients D(1..x_max)."""

    d: int
    x_max: int
    values: tuple[int, ...]  # index m; values[0] unused

    def __getitem__(self, m: int) -> int:
        if not 1 <= m <= self.x_max:
            raise DomainError(f"m={m} outside sieved range 1..{self.x_max}")
        return self.values[m]


@dataclass(frozen=True)
class LSeriesValue:
    s: complex
    value: complex
    truncation_bound: float


def coeff_D(d: int, m: int) -> int:
    """D(m) by factorization; multiplicative over prime powers."""
    if d < 2:
        raise DomainError(f"need d >= 2, got {d}")
    if m < 1:
        raise DomainError(f"need m >= 1, got {m}")
    out = 1
    for p, k in factorize(m):
        out *= sphere_size(BuildingParams(d, p), k)
    return out


def coeff_sieve(d: int, x_max: int, max_sieve: int | None = None) -> CoeffTable:
    """All of D(1..x_max) in one smallest-prime-factor sweep."""
    if d < 2:
        raise DomainError(f"need d >= 2, got {d}")
    if x_max < 1:
        raise DomainError(f"need x_max >= 1, got {x_max}")
    limit = max_sieve if max_sieve is not None else default_budgets().max_sieve
    if x_max > limit:
        raise BudgetError(f"sieve length {x_max} exceeds budget {limit}")
    spf = smallest_factor_sieve(x_max)
    consts: dict[int, tuple[int, int]] = {}
    values = [0] * (x_max + 1)
    values[1] = 1
    for m in range(2, x_max + 1):
        p = spf[m]
        if p not in consts:
            consts[p] = (shell_count(d, p), shell_ratio(d, p))
        dp, cp = consts[p]
        rest = m
        k = 0
        while rest % p == 0:
            rest //= p
            k += 1
        values[m] = values[rest] * dp * cp ** (k - 1)
    return CoeffTable(d, x_max, tuple(values))


def zeta_em(s: complex) -> complex:
    """Riemann zeta by Euler-Maclaurin, for Re(s) > 1.

    Truncation point N = max(20, |s|) and eight Bernoulli correction
    terms give ~1e-13 absolute accuracy on the region this package uses
    (Re(s) >= 1 + 1e-6, |Im s| modest); cross-checked against mpmath in
    the test suite.
    """
    s = complex(s)
    if s.real <= 1 + _MARGIN:
        raise DomainError(f"zeta_em needs Re(s) > 1 + {_MARGIN}, got {s}")
    n_cut = max(20, int(abs(s)) + 1)
    total = 0.0 + 0.0j
    for n in range(n_cut - 1, 0, -1):  # small terms first
        total += n ** (-s) if s.imag else n ** (-s.real)
    total += n_cut ** (1 - s) / (s - 1) + 0.5 * n_cut ** (-s)
    # sum_j B_2j/(2j)! * s(s+1)...(s+2j-2) * N^(-s-2j+1)
    rising = s
    fact = 2.0
    for j, b in enumerate(_BERNOULLI, start=1):
        total += b / fact * rising * n_cut ** (-s - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
    return total


def _euler_factor(params: EulerFactorParams, s: complex) -> complex:
    p = params.p
    ps = cmath.exp(-s * math.log(p))
    denom = 1 - params.c_p * ps
    if abs(denom) < 1e-12:
        raise DomainError(
            f"s={s} is within 1e-12 of the pole line of the factor at p={p}"
        )
    return (1 - (params.c_p - params.D_p) * ps) / denom


def _tail_log_bound(d: int, sigma: float, cutoff: int) -> float:
    """Rigorous bound on |log of the omitted Euler factors| past the cutoff.

    Every omitted factor is the k >= 2 remainder of log(factor_p) +
    (d-1) sum_j log(1 - p^(j-s)); with u = 2(d-1) p^(d-1-sigma) <= 1/2
    both remainders are bounded by a constant times p^(2(d-1-sigma)),
    and the sum over p > cutoff by the corresponding integral.
    """
    q = cutoff + 1
    u = 2 * (d - 1) * q ** (d - 1 - sigma)
    if u > 0.5:
        raise DomainError(
            f"cutoff {cutoff} too small for a tail bound at Re(s)={sigma}"
        )
    const = 16 * (d - 1) ** 2 + 2 * d * (d - 1)
    decay = 2 * (sigma - d + 1) - 1  # integral exponent, > 0 for sigma > d - 1/2
    # sum over integers n > cutoff of n^(-decay-1)-type terms <= integral from cutoff
    return const * cutoff ** (-decay) / decay


def L_euler(d: int, s: complex, prime_cutoff: int = 10**5) -> LSeriesValue:
    """L(s) by zeta-accelerated Euler product over p <= prime_cutoff.

    The first-order parts of every factor are resummed exactly into
    prod_{j<d} zeta(s-j)^(d-1) (D(p) = (d-1) sum_{j<d} p^j), so the
    truncation error carries only k >= 2 prime-power tails.  The reported
    truncation_bound covers that tail rigorously plus an allowance for
    double rounding across the O(pi(cutoff)) factor multiplications (the
    mathematical tail alone can sit far below float noise).
    """
    if d < 2:
        raise DomainError(f"need d >= 2, got {d}")
    s = complex(s)
    if s.real <= d + _MARGIN:
        raise DomainError(f"L_euler needs Re(s) > {d} + {_MARGIN}, got {s}")
    if prime_cutoff < 2:
        raise DomainError(f"need prime_cutoff >= 2, got {prime_cutoff}")
    value = 1.0 + 0.0j
    for j in range(d):
        value *= zeta_em(s - j) ** (d - 1)
    primes = primes_up_to(prime_cutoff)
    for p in primes:
        factor = _euler_factor(EulerFactorParams(d, p), s)
        ps = cmath.exp(-s * math.log(p))
        for j in range(d):
            factor *= (1 - ps * p**j) ** (d - 1)
        value *= factor
    log_tail = _tail_log_bound(d, s.real, prime_cutoff)
    rounding = 64 * 2.220446049250313e-16 * (len(primes) + 2) * d
    return LSeriesValue(s, value, abs(value) * (math.expm1(log_tail) + rounding))


def L_euler_sl2(s: complex, prime_cutoff: int = 10**5) -> LSeriesValue:
    """Even-shell (determinant-one, d=2) series by accelerated Euler product.

    The factor at p resums the even-shell counts 1 + sum_j (p+1) p^(2j-1)
    p^(-2js) = (1 + p^(1-2s)) / (1 - p^(2-2s)); first-order parts are
    pulled into zeta(2s-2) zeta(2s-1), leaving factors 1 - p^(2-4s) whose
    omitted tail decays like p^(2-4 Re s).
    """
    s = complex(s)
    if s.real <= 1.5 + _MARGIN:
        raise DomainError(f"L_euler_sl2 needs Re(s) > 1.5 + {_MARGIN}, got {s}")
    if prime_cutoff < 2:
        raise DomainError(f"need prime_cutoff >= 2, got {prime_cutoff}")
    value = zeta_em(2 * s - 2) * zeta_em(2 * s - 1)
    primes = primes_up_to(prime_cutoff)
    for p in primes:
        value *= 1 - p ** (2 - 4 * s)
    a = 4 * s.real - 2  # tail terms are p^(-a), a > 4 on our domain
    tail = prime_cutoff ** (1 - a) / (a - 1)
    rounding = 64 * 2.220446049250313e-16 * (len(primes) + 2)
    return LSeriesValue(s, value, abs(value) * (math.expm1(2 * tail) + rounding))


def L_closed_pgl2(s: complex) -> complex:
    """zeta(s) zeta(s-1) / zeta(2s) for Re(s) > 2."""
    s = complex(s)
    if s.real <= 2 + _MARGIN:
        raise DomainError(f"closed form needs Re(s) > 2 + {_MARGIN}, got {s}")
    return zeta_em(s) * zeta_em(s - 1) / zeta_em(2 * s)


def L_closed_sl2(s: complex) -> complex:
    """zeta(2s-2) zeta(2s-1) / zeta(4s-2) for Re(s) > 3/2 (even shells, d=2)."""
    s = complex(s)
    if s.real <= 1.5 + _MARGIN:
        raise DomainError(f"closed form needs Re(s) > 1.5 + {_MARGIN}, got {s}")
    return zeta_em(2 * s - 2) * zeta_em(2 * s - 1) / zeta_em(4 * s - 2)


@dataclass(frozen=True)
class AbscissaTable:
    """Real parts s_p = log c(p)/log p of the candidate pole lines."""

    d: int
    entries: tuple[tuple[int, float], ...]  # (p, s_p), s_p decreasing
    B0: float  # s_2, the largest
    count_above_d: int


def pole_abscissas(d: int, p_max: int = 100) -> AbscissaTable:
    """s_p for all p <= p_max, sorted by decreasing s_p (i.e. increasing p)."""
    if d < 2:
        raise DomainError(f"need d >= 2, got {d}")
    if p_max < 2:
        raise DomainError(f"need p_max >= 2, got {p_max}")
    entries = tuple(
        (p, math.log(shell_ratio(d, p)) / math.log(p)) for p in primes_up_to(p_max)
    )
    return AbscissaTable(
        d=d,
        entries=entries,
        B0=entries[0][1],
        count_above_d=sum(1 for _, sp in entries if sp > d),
    )


def partial_sum(d: int, B: float, x: float, max_sieve: int | None = None) -> float:
    """sum_{m <= x} D(m) / m^B (compensated; exact integer sum for B = 0)."""
    if x < 1:
        raise DomainError(f"need x >= 1, got {x}")
    if B < 0:
        raise DomainError(f"need B >= 0, got {B}")
    table = coeff_sieve(d, int(x), max_sieve)
    if B == 0:
        return float(sum(table.values))
    return math.fsum(
        table.values[m] * m ** (-B) for m in range(1, table.x_max + 1)
    )


@dataclass(frozen=True)
class ResidueReport:
    variant: str
    pole: float
    direct: float  # from the closed zeta form of the residue
    extrapolated: float  # Richardson limit of (s - pole) L(s)
    difference: float
    note: str


def _richardson(f, pole: float, h0: float = 1e-2) -> float:
    """Limit of f at 0+ from nodes h0, h0/10, h0/100 (kills h and h^2)."""
    f0, f1, f2 = f(h0), f(h0 / 10), f(h0 / 100)
    r1 = (10 * f1 - f0) / 9
    r2 = (10 * f2 - f1) / 9
    return (100 * r2 - r1) / 99


def residue_estimate(variant: str) -> ResidueReport:
    """Residue of the d=2 series at its rightmost pole, two ways.

    `direct` evaluates the closed residue formula; `extrapolated`
    Richardson-extrapolates (s - pole) L(s) from the closed-form L.  For
    the determinant-one variant the note records that the frequently
    quoted shorthand 1/2 is only the bare pole factor of zeta(2s-2) and
    omits zeta(2)/zeta(4).
    """
    if variant == "pgl2":
        pole = 2.0
        direct = (zeta_em(2) / zeta_em(4)).real
        extrapolated = _richardson(lambda h: h * L_closed_pgl2(pole + h).real, pole)
        note = "residue = zeta(2)/zeta(4) = 15/pi^2"
    elif variant == "sl2":
        pole = 1.5
        direct = (zeta_em(2) / (2 * zeta_em(4))).real
        extrapolated = _richardson(lambda h: h * L_closed_sl2(pole + h).real, pole)
        note = (
            "residue = zeta(2)/(2 zeta(4)) = 15/(2 pi^2) ~ 0.7599089; the "
            "shorthand value 1/2 (bare pole factor of zeta(2s-2)) omits "
            "zeta(2)/zeta(4)"
        )
    else:
        raise DomainError(f"unknown variant {variant!r}; use 'pgl2' or 'sl2'")
    return ResidueReport(
        variant=variant,
        pole=pole,
        direct=direct,
        extrapolated=extrapolated,
        difference=extrapolated - direct,
        note=note,
    )
