"""Self-check suite behind the `verify` CLI subcommand.

Each check returns (name, passed, detail).  Output is deterministic: fixed
check order, no timestamps, all numbers through one %.12g formatter, and
every computation reduced independently of the worker count, so two runs
(or runs with different --workers) produce byte-identical reports.

The quick tier is the sub-minute CI gate.  The full tier additionally runs
the breadth-first enumerations, the large sieves, and the empirical
regularity/persistence studies; it deliberately includes the rank >= 2
closed-form vertex-count comparison, which fails by a documented margin
(the closed form counts boundary edge incidences, not vertices, once
geodesics stop being unique; see the building module docstring).  The
report shows that failure honestly rather than hiding the check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import adelic, archimedean, building, counting, dirichlet
from .primes import factorize

_FMT = "%.12g"


def _f(x: float) -> str:
    return _FMT % x


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _close(got: float, want: float, rtol: float = 0.0, atol: float = 0.0) -> bool:
    return abs(got - want) <= rtol * abs(want) + atol


# ---------------------------------------------------------------------------
# quick-tier checks


def _check_sphere_closed_form_d2() -> CheckResult:
    rows = []
    ok = True
    for p in (2, 3):
        params = building.BuildingParams(2, p)
        classes = building.enumerate_classes(params, 3)
        counts = [0, 0, 0, 0]
        for _, dist in classes:
            counts[dist] += 1
        formula = [building.sphere_size(params, k) for k in range(4)]
        ok &= counts == formula
        rows.append(f"p={p} bfs={counts} formula={formula}")
    return CheckResult("building/sphere-closed-form-d2", ok, "; ".join(rows))


def _check_d3_first_shell() -> CheckResult:
    params = building.BuildingParams(3, 2)
    classes = building.enumerate_classes(params, 1)
    got = sum(1 for _, dist in classes if dist == 1)
    want = building.sphere_size(params, 1)
    return CheckResult(
        "building/d3-first-shell",
        got == want == 14,
        f"bfs={got} formula={want}",
    )


def _check_coeff_tables() -> CheckResult:
    t2 = dirichlet.coeff_sieve(2, 10).values[1:]
    want2 = (1, 3, 4, 6, 6, 12, 8, 12, 12, 18)
    d3 = (dirichlet.coeff_D(3, 2), dirichlet.coeff_D(3, 4), dirichlet.coeff_D(3, 6))
    want3 = (14, 140, 364)
    ok = t2 == want2 and d3 == want3
    return CheckResult("dirichlet/coefficient-tables", ok, f"D2(1..10)={t2} D3(2,4,6)={d3}")


def _check_zeta() -> CheckResult:
    pairs = [
        (dirichlet.zeta_em(2.0).real, math.pi**2 / 6),
        (dirichlet.zeta_em(4.0).real, math.pi**4 / 90),
    ]
    worst = max(abs(g - w) / w for g, w in pairs)
    return CheckResult("dirichlet/zeta-special-values", worst <= 1e-13, f"worst rel={_f(worst)}")


_POLE_TABLE = {
    2: (1.0, 1.0),
    3: (3.3219280949, 2.7712437492),
    4: (4.9068905956, 4.1257498573),
    5: (6.2854022189, 5.3653166773),
    6: (7.5698556083, 6.5507064185),
}


def _check_pole_table() -> CheckResult:
    worst = 0.0
    for d, (s2, s3) in _POLE_TABLE.items():
        table = dirichlet.pole_abscissas(d, p_max=3)
        got = dict(table.entries)
        worst = max(worst, abs(got[2] - s2), abs(got[3] - s3))
    return CheckResult("dirichlet/pole-table", worst <= 1e-9, f"worst abs={_f(worst)}")


def _check_b0_identity() -> CheckResult:
    worst = 0.0
    for d in range(3, 7):
        lhs = math.log(d * 2 ** (d - 1) - 2) / math.log(2)
        worst = max(worst, abs(lhs - dirichlet.pole_abscissas(d).B0))
    return CheckResult("dirichlet/b0-identity", worst <= 1e-12, f"worst abs={_f(worst)}")


def _check_euler_vs_closed() -> CheckResult:
    rows = []
    ok = True
    for s in (2.5, 3.0, 4.0):
        r = dirichlet.L_euler(2, complex(s))
        c = dirichlet.L_closed_pgl2(s)
        rel = abs(r.value - c) / abs(c)
        ok &= rel <= 1e-10 and abs(r.value - c) <= r.truncation_bound
        rows.append(f"pgl2 s={_f(s)} rel={_f(rel)}")
    for s in (2.0, 2.5):
        r = dirichlet.L_euler_sl2(s)
        c = dirichlet.L_closed_sl2(s)
        rel = abs(r.value - c) / abs(c)
        ok &= rel <= 1e-10 and abs(r.value - c) <= r.truncation_bound
        rows.append(f"sl2 s={_f(s)} rel={_f(rel)}")
    return CheckResult("dirichlet/euler-vs-closed", ok, "; ".join(rows))


def _check_residues() -> CheckResult:
    pgl2 = dirichlet.residue_estimate("pgl2")
    sl2 = dirichlet.residue_estimate("sl2")
    want_pgl2 = 15.0 / math.pi**2
    want_sl2 = 15.0 / (2.0 * math.pi**2)
    ok = (
        _close(pgl2.direct, want_pgl2, atol=1e-10)
        and _close(pgl2.extrapolated, pgl2.direct, atol=1e-6)
        and _close(sl2.direct, want_sl2, atol=1e-10)
    )
    return CheckResult(
        "dirichlet/residues",
        ok,
        f"pgl2 direct={_f(pgl2.direct)} want={_f(want_pgl2)}; "
        f"sl2 direct={_f(sl2.direct)} want={_f(want_sl2)}",
    )


def _check_ball_volume_d2() -> CheckResult:
    worst = 0.0
    for R in (0.5, 1.0, 3.0):
        got = archimedean.ball_volume_numeric(2, 1.0, R)
        want = (math.cosh(2 * R) - 1) / 2
        worst = max(worst, abs(got - want) / want)
    return CheckResult("archimedean/d2-closed-form", worst <= 1e-9, f"worst rel={_f(worst)}")


def _check_simplex_area() -> CheckResult:
    a2 = archimedean.simplex_area(2)
    a3 = archimedean.simplex_area(3)
    ok = a2 == 1.0 and _close(a3, 2 / math.sqrt(3), atol=1e-12)
    return CheckResult("archimedean/simplex-area", ok, f"a2={_f(a2)} a3={_f(a3)}")


def _check_height_examples() -> CheckResult:
    prof = adelic.global_height([[1, 0], [0, 2]], 1.0)
    swap = adelic.global_height([[0, 1], [1, 0]], 1.0)
    ok = (
        prof.h_fin == 2
        and _close(prof.h, 2 * math.sqrt(2), atol=1e-12)
        and swap.h == 1.0
    )
    return CheckResult(
        "adelic/height-examples", ok, f"diag(1,2) h={_f(prof.h)}; antidiag h={_f(swap.h)}"
    )


def _check_tree_and_covering() -> CheckResult:
    trees = (adelic.tree_ball(2, 0.5), adelic.tree_ball(2, 1.0), adelic.tree_ball(2, 3.0))
    cover = (
        adelic.covering_number_box(1, 1.0, 0.1),
        adelic.covering_number_box(2, 1.0, 0.25),
        adelic.covering_number_box(2, 1.0, 0.3),
    )
    ok = trees == (1, 4, 22) and cover[0][0] == 10 and cover[1][0] == 16 and cover[2][0] == 16
    ok = ok and _close(cover[2][1], 1.44, atol=1e-12)
    return CheckResult("adelic/tree-and-covering", ok, f"trees={trees} cover3 ratio={_f(cover[2][1])}")


def _check_persistence_two_mass() -> CheckResult:
    grid = tuple(np.linspace(0.0, 10.0, 10001).tolist())
    pair = adelic.MeasurePair(
        masses=((0.0, 1.0), (math.log(2.0), 1.0)),
        nu_grid=grid,
        nu_values=tuple(np.exp(2.0 * np.asarray(grid)).tolist()),
        alpha=0.0,
        beta=2.0,
    )
    _, ratio = adelic.persistence_check(pair, 8.0)
    ok = _close(pair.C, 1.25, atol=1e-12) and _close(ratio, 1.0, atol=1e-5)
    return CheckResult("adelic/persistence-two-mass", ok, f"C={_f(pair.C)} ratio={_f(ratio)}")


def _check_regularity_models() -> CheckResult:
    eps = (0.02, 0.01, 0.005)
    t_list = np.linspace(6.0, 12.0, 1501)
    smooth = adelic.regularity_report(lambda x: x * math.exp(2 * x), eps, t_list)
    step = adelic.regularity_report(lambda x: math.exp(math.floor(x)), eps, t_list)
    ok = (
        smooth.verdict == "regular"
        and step.verdict == "non-regular"
        and _close(step.lower_ratios[-1], math.exp(-1), atol=0.05)
    )
    return CheckResult(
        "adelic/regularity-models",
        ok,
        f"smooth={smooth.verdict} step={step.verdict} step liminf={_f(step.lower_ratios[-1])}",
    )


def _check_entry_bound() -> CheckResult:
    got = (counting.entry_bound(4, 1.0), counting.entry_bound(1, 1.0), counting.entry_bound(4, 0.5))
    return CheckResult("counting/entry-bound", got == (4, 1, 2), f"got={got}")


def _check_pi_examples(workers: int) -> CheckResult:
    zero = counting.pi_count(0.5, 1.0)
    four = counting.pi_count(1.0, 1.0)
    serial = counting.pi_count(6.0, 1.0, workers=1)
    pooled = counting.pi_count(6.0, 1.0, workers=max(2, workers))
    ok = zero == 0 and four == 4 and serial == pooled == 440
    return CheckResult(
        "counting/pi-examples",
        ok,
        f"pi(0.5)={zero} pi(1)={four} pi(6) serial={serial} pooled={pooled}",
    )


def _check_adelic_worker_determinism(workers: int) -> CheckResult:
    T = math.log(4.0)
    one = adelic.adelic_ball_volume(2, 1.0, T, workers=1)
    many = adelic.adelic_ball_volume(2, 1.0, T, workers=max(2, workers))
    return CheckResult(
        "adelic/worker-determinism",
        one == many,
        f"b(log4)={_f(one)} identical={one == many}",
    )


# ---------------------------------------------------------------------------
# full-tier checks


def _check_bfs_deep_d2() -> CheckResult:
    rows = []
    ok = True
    for p in (2, 3, 5):
        params = building.BuildingParams(2, p)
        classes = building.enumerate_classes(params, 6)
        counts = [0] * 7
        for _, dist in classes:
            counts[dist] += 1
        formula = [building.sphere_size(params, k) for k in range(7)]
        ok &= counts == formula
        rows.append(f"p={p} match={counts == formula}")
    return CheckResult("building/bfs-deep-d2", ok, "; ".join(rows))


def _d3_census(p: int) -> tuple[list[int], int]:
    params = building.BuildingParams(3, p)
    classes = building.enumerate_classes(params, 2)
    counts = [0, 0, 0]
    for _, dist in classes:
        counts[dist] += 1
    by_dist: dict[int, list] = {0: [], 1: [], 2: []}
    for cls, dist in classes:
        by_dist[dist].append(cls)
    shell1 = set(by_dist[1])
    incidences = 0
    for cls in by_dist[2]:
        incidences += sum(1 for nb in building.neighbors(cls, 3) if nb in shell1)
    return counts, incidences


def _check_d3_vertex_count() -> CheckResult:
    rows = []
    ok = True
    for p, want in ((2, 98), (3, 390)):
        counts, _ = _d3_census(p)
        formula = building.sphere_size(building.BuildingParams(3, p), 2)
        agree = counts[2] == formula
        ok &= agree
        rows.append(f"p={p} bfs={counts[2]} closed-form={formula}")
    return CheckResult(
        "building/d3-closed-form-vertex-count",
        ok,
        "; ".join(rows) + " (closed form counts edge incidences in rank 2; see module docs)",
    )


def _check_d3_incidence_identity() -> CheckResult:
    rows = []
    ok = True
    for p in (2, 3):
        counts, incidences = _d3_census(p)
        formula = building.sphere_size(building.BuildingParams(3, p), 2)
        ok &= incidences == formula
        rows.append(f"p={p} back-edges={incidences} formula={formula}")
    return CheckResult("building/d3-incidence-identity", ok, "; ".join(rows))


def _check_partial_sum_asymptotic() -> CheckResult:
    x = 1e6
    total = dirichlet.partial_sum(2, 0.0, x, max_sieve=10**6)
    ratio = total / x**2
    want = 15.0 / (2.0 * math.pi**2)
    rel = abs(ratio - want) / want
    return CheckResult(
        "dirichlet/partial-sum-asymptotic",
        rel <= 0.05,
        f"sum/x^2={_f(ratio)} limit={_f(want)} rel={_f(rel)}",
    )


def _check_frozen_volumes() -> CheckResult:
    v3 = archimedean.ball_volume_numeric(3, 1.0, 2.0)
    v4 = archimedean.ball_volume_numeric(4, 1.0, 1.5)
    ok = _close(v3, 2.552117668702, rtol=1e-8) and _close(v4, 1.090533867611e-3, rtol=1e-6)
    return CheckResult("archimedean/frozen-volumes", ok, f"d3={_f(v3)} d4={_f(v4)}")


def _check_adelic_regularity(workers: int) -> CheckResult:
    b = adelic.adelic_volume_callable(2, 1.0, 13.1, max_sieve=600000)
    rep = adelic.regularity_report(
        b, (0.02, 0.01, 0.005), np.linspace(8.0, 13.0, 26)
    )
    return CheckResult(
        "adelic/regularity-of-global-volume",
        rep.verdict == "regular",
        f"verdict={rep.verdict} gap={_f(rep.gap)}",
    )


def _check_pgl2_persistence() -> CheckResult:
    pair = adelic.pgl2_measure_pair(T_max=12.0, max_sieve=200000)
    c_ref = dirichlet.partial_sum(2, 3.0, math.exp(12.0), max_sieve=200000)
    _, ratio = adelic.persistence_check(pair, 12.0)
    ok = _close(pair.C, c_ref, atol=1e-12) and _close(ratio, 1.0, atol=0.03)
    return CheckResult(
        "adelic/pgl2-persistence", ok, f"C={_f(pair.C)} ratio={_f(ratio)}"
    )


def _check_pi_saturation(workers: int) -> CheckResult:
    x = 4.0
    base = counting.pi_count_detail(x, 1.0, workers=workers)
    bigger = counting._count_chunk(
        counting._axis_values(base.entry_bound_used + 2),
        base.entry_bound_used + 2,
        x,
        1.0,
    )[0]
    return CheckResult(
        "counting/box-saturation",
        base.count == bigger == 160,
        f"N={base.entry_bound_used} count={base.count} N+2 count={bigger}",
    )


def _check_snf_vs_bfs() -> CheckResult:
    checked = 0
    ok = True
    for g in counting.enumerate_elements(2):
        det = abs(g.det)
        factors = {p for p, _ in factorize(det)}
        if not factors <= {2, 3, 5}:
            continue
        prof = adelic.global_height([g.entries[:2], g.entries[2:]], 1.0)
        for p, d_p in prof.finite_exponents:
            cls = building.LatticeClass.from_matrix([g.entries[:2], g.entries[2:]], p)
            dist_map = {c: dist for c, dist in building.enumerate_classes(building.BuildingParams(2, p), d_p + 1)}
            ok &= dist_map.get(cls) == d_p
        checked += 1
        if checked >= 60:
            break
    return CheckResult("counting/snf-vs-bfs-distance", ok, f"checked={checked} classes")


def run_checks(quick: bool = True, workers: int = 1) -> list[CheckResult]:
    checks = [
        _check_sphere_closed_form_d2(),
        _check_d3_first_shell(),
        _check_coeff_tables(),
        _check_zeta(),
        _check_pole_table(),
        _check_b0_identity(),
        _check_euler_vs_closed(),
        _check_residues(),
        _check_ball_volume_d2(),
        _check_simplex_area(),
        _check_height_examples(),
        _check_tree_and_covering(),
        _check_persistence_two_mass(),
        _check_regularity_models(),
        _check_entry_bound(),
        _check_pi_examples(workers),
        _check_adelic_worker_determinism(workers),
    ]
    if not quick:
        checks += [
            _check_bfs_deep_d2(),
            _check_d3_vertex_count(),
            _check_d3_incidence_identity(),
            _check_partial_sum_asymptotic(),
            _check_frozen_volumes(),
            _check_adelic_regularity(workers),
            _check_pgl2_persistence(),
            _check_pi_saturation(workers),
            _check_snf_vs_bfs(),
        ]
    return checks


def format_report(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
    passed = sum(1 for r in results if r.passed)
    lines.append(f"passed {passed}/{len(results)} checks")
    return "\n".join(lines) + "\n"
