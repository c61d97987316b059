"""Tests for exact height counting in PGL_2(Q).

The small-x counts were frozen from the exhaustive search itself after
cross-validation against an independent generator-based enumeration, so
regressions in either the box bound or the dedup logic show up here.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heightcount import (
    BudgetError,
    CountReport,
    DomainError,
    GroupElementQ,
    building_distance,
    compare_report,
    entry_bound,
    enumerate_elements,
    global_height,
    pi_count,
    pi_count_detail,
)


# ---------------------------------------------------------------------------
# normal form


def test_from_matrix_normalizes_content_and_sign():
    g = GroupElementQ.from_matrix([[2, 0], [0, 4]])
    assert g.entries == (1, 0, 0, 2)
    g = GroupElementQ.from_matrix([[-1, 0], [0, -2]])
    assert g.entries == (1, 0, 0, 2)
    g = GroupElementQ.from_matrix([[0, -3], [3, 0]])
    assert g.entries == (0, 1, -1, 0)


def test_from_matrix_rejects_singular():
    with pytest.raises(DomainError):
        GroupElementQ.from_matrix([[1, 2], [2, 4]])


def test_height_examples():
    assert GroupElementQ.from_matrix([[1, 0], [0, 1]]).height(1.0) == pytest.approx(1.0)
    assert GroupElementQ.from_matrix([[1, 0], [0, 2]]).height(1.0) == pytest.approx(
        2 * math.sqrt(2)
    )
    # heights agree with the adelic profile
    for mat in ([[1, 1], [0, 1]], [[2, 1], [1, 1]], [[0, 1], [-3, 2]]):
        g = GroupElementQ.from_matrix(mat)
        assert g.height(1.0) == pytest.approx(global_height(mat, 1.0).h, rel=1e-12)


@given(st.integers(-15, 15), st.integers(-15, 15), st.integers(-15, 15), st.integers(-15, 15))
def test_height_at_least_one(a, b, c, d):
    if a * d - b * c == 0:
        return
    g = GroupElementQ.from_matrix([[a, b], [c, d]])
    assert g.height(1.0) >= 1.0 - 1e-12


# ---------------------------------------------------------------------------
# search box


def test_entry_bound_examples():
    assert entry_bound(1.0, 1.0) == 1
    assert entry_bound(2.0, 1.0) == 2
    assert entry_bound(8.0, 1.0) == 8
    assert entry_bound(2.0, 0.5) == 1


def test_entry_bound_monotone():
    prev = 0
    for x in (1.0, 1.5, 2.0, 3.0, 5.0, 8.0, 13.0):
        b = entry_bound(x, 1.0)
        assert b >= prev
        prev = b


@settings(max_examples=120)
@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6), st.floats(1.0, 8.0))
def test_entry_bound_is_sound(a, b, c, d, x):
    # every class of height <= x has its canonical entries inside the box
    if a * d - b * c == 0:
        return
    g = GroupElementQ.from_matrix([[a, b], [c, d]])
    if g.height(1.0) <= x:
        assert max(abs(e) for e in g.entries) <= entry_bound(x, 1.0)


def test_exactly_four_classes_of_height_one():
    ones = [
        g
        for g in enumerate_elements(1)
        if abs(g.height(1.0) - 1.0) <= 1e-9
    ]
    assert len(ones) == 4
    mats = {g.entries for g in ones}
    assert mats == {(1, 0, 0, 1), (0, 1, -1, 0), (0, 1, 1, 0), (1, 0, 0, -1)}


def test_enumerate_elements_is_duplicate_free():
    seen = list(enumerate_elements(3))
    assert len(seen) == len({g.entries for g in seen})
    for g in seen:
        assert math.gcd(*g.entries) == 1
        first = next(e for e in g.entries if e != 0)
        assert first > 0


def test_enumerate_budget():
    with pytest.raises(BudgetError):
        list(enumerate_elements(500, max_cells=10_000))


# ---------------------------------------------------------------------------
# pi counts


def test_pi_count_small_values():
    assert pi_count(0.5, 1.0) == 0
    assert pi_count(1.0, 1.0) == 4
    assert pi_count(2.0, 1.0) == 24


def test_pi_count_frozen_grid():
    grid = [1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0]
    want = [4, 4, 24, 64, 160, 440, 952]
    assert [pi_count(x, 1.0) for x in grid] == want


def test_pi_count_boundary_ties():
    det = pi_count_detail(2.0, 1.0)
    assert det.count == 24
    assert det.tie_count == 4
    det = pi_count_detail(8.0, 1.0)
    assert det.tie_count == 24
    det = pi_count_detail(1.7, 1.0)
    assert det.tie_count == 0


def test_pi_count_agrees_with_generator_enumeration():
    for x in (1.0, 2.0, 3.0):
        bound = entry_bound(x, 1.0)
        slow = sum(
            1
            for g in enumerate_elements(bound)
            if g.height(1.0) <= x * (1 + 1e-12) + 1e-12
        )
        assert pi_count(x, 1.0) == slow


def test_pi_count_workers_agree():
    assert pi_count(4.0, 1.0, workers=4) == pi_count(4.0, 1.0, workers=1)


def test_pi_count_box_saturation():
    # recount with the search box padded by 2 in every direction; any
    # missed class would show up as a larger count
    for x in (2.0, 4.0):
        base = pi_count_detail(x, 1.0)
        padded = _count_with_bound(x, 1.0, base.entry_bound_used + 2)
        assert base.count == padded


def _count_with_bound(x, B, bound):
    return sum(
        1
        for g in enumerate_elements(bound)
        if g.height(B) <= x * (1 + 1e-12) + 1e-12
    )


def test_pi_count_other_B():
    # B = 2 shrinks heights toward 1, so balls hold more classes
    assert pi_count(2.0, 2.0) >= pi_count(2.0, 1.0)
    with pytest.raises(DomainError):
        pi_count(2.0, 0.0)
    with pytest.raises(DomainError):
        pi_count(-1.0, 1.0)


# ---------------------------------------------------------------------------
# finite height against the building


def test_finite_height_matches_building_distances():
    # for dets supported on {2, 3, 5}, log_p h_fin is the tree distance
    for g in enumerate_elements(4):
        det = abs(g.det)
        if det == 0:
            continue
        supported = det
        for p in (2, 3, 5):
            while supported % p == 0:
                supported //= p
        if supported != 1:
            continue
        mat = [[g.entries[0], g.entries[1]], [g.entries[2], g.entries[3]]]
        prof = global_height(mat, 1.0)
        exps = dict(prof.finite_exponents)
        for p in (2, 3, 5):
            assert exps.get(p, 0) == building_distance(mat, p)


# ---------------------------------------------------------------------------
# comparison report


def test_compare_report_fields_and_monotonicity():
    rep = compare_report([1.0, 2.0, 4.0], 1.0)
    assert isinstance(rep, CountReport)
    assert rep.pi_values == (4, 24, 160)
    assert rep.tie_counts == (4, 4, 0)
    assert list(rep.pi_values) == sorted(rep.pi_values)
    assert rep.sandwich_eps == 0.1
    assert rep.slack > 0


def test_compare_report_lower_prediction_closed_form():
    # B = 1: integral of e^{-2t} dV(t) = 1/12, coefficient 30/pi^2
    rep = compare_report([1.0, 4.0], 1.0)
    c = 30 / math.pi**2 / 12
    assert rep.predicted_low_exponent[0] == pytest.approx(c, rel=1e-6)
    assert rep.predicted_low_exponent[1] == pytest.approx(c * 16, rel=1e-6)
    # at B = 1 the 2B-exponent main term diverges and is reported as inf
    assert all(math.isinf(v) for v in rep.predicted_high_exponent)


def test_compare_report_finite_high_prediction():
    rep = compare_report([2.0], 0.8)
    assert all(math.isfinite(v) for v in rep.predicted_high_exponent)
    assert rep.predicted_high_exponent[0] > 0


def test_compare_report_sandwich_brackets():
    rep = compare_report([2.0, 4.0, 6.0], 1.0)
    for lo, hi in zip(rep.lower_sandwich, rep.upper_sandwich):
        assert lo <= hi


def test_compare_report_validation():
    with pytest.raises(DomainError):
        compare_report([2.0], 2.5)  # B must satisfy 0 < B < 2
    with pytest.raises(DomainError):
        compare_report([], 1.0)
