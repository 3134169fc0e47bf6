import math

import pytest

from epsteinzeta import (
    DomainError,
    ScaleVector,
    classify_critical_point,
    decide_sign,
    find_positive_interval,
    hat_xi,
    hat_xi_second_derivative,
    large_scale_positivity,
    critical_sign_certificates,
    verify_negative_range,
    xi,
)

REFERENCE_INTERVALS = {
    10: (1.0899, 3.9101),
    21: (0.0034, 10.4966),
}


@pytest.mark.parametrize("n", [10, 21])
def test_positive_interval_endpoints(n):
    interval = find_positive_interval(n)
    lo, hi = REFERENCE_INTERVALS[n]
    assert interval.gamma == pytest.approx(lo, abs=5e-4)
    assert interval.mirror == pytest.approx(hi, abs=5e-4)
    assert interval.bracket_width <= 1e-5
    assert interval.mirror == n / 2.0 - interval.gamma


def test_positive_interval_empty_for_nine():
    assert find_positive_interval(9) is None


def test_interval_endpoint_brackets_a_sign_change():
    interval = find_positive_interval(10)
    w = interval.bracket_width
    left, lv = decide_sign(10, interval.gamma - w, ScaleVector.unit(10))
    right, rv = decide_sign(10, interval.gamma + w, ScaleVector.unit(10))
    assert left < 0 < right
    assert lv.excludes_zero() and rv.excludes_zero()


def test_interval_symmetry_of_signs():
    interval = find_positive_interval(10)
    unit = ScaleVector.unit(10)
    for delta in (0.05, 0.3, 1.0):
        s1, _ = decide_sign(10, interval.gamma + delta, unit)
        s2, _ = decide_sign(10, 5.0 - interval.gamma - delta, unit)
        assert s1 == s2


def test_interval_nesting():
    i10 = find_positive_interval(10)
    i11 = find_positive_interval(11)
    assert i11.gamma < i10.gamma
    assert i11.mirror - 0.5 > i10.mirror - 0.5  # both grow with n/2


def test_certificate_constants():
    reports = {r.quantity: r for r in critical_sign_certificates()}
    assert reports["first_shell_9"].bound_value == pytest.approx(0.3540, abs=1e-3)
    assert reports["tail_9"].bound_value == pytest.approx(0.0769, abs=1e-3)
    combined = reports["kernel_sum_9"]
    assert combined.bound_value == pytest.approx(0.4309, abs=1e-3)
    assert combined.threshold == pytest.approx(4.0 / 9.0)
    assert combined.holds()
    lower = reports["xi10_first_shell"]
    assert lower.bound_value == pytest.approx(0.04808, abs=1e-4)
    assert lower.holds()


def test_bound_reports_rederivable():
    for report in critical_sign_certificates() + verify_negative_range(9):
        if report.threshold is None:
            continue
        if report.direction == "upper":
            assert report.holds() == (report.bound_value < report.threshold)
        else:
            assert report.holds() == (report.bound_value > report.threshold)


def test_staircase_constants():
    reports = {r.quantity: r.bound_value for r in verify_negative_range(9)}
    assert reports["kernel_upper(0.0)"] == pytest.approx(1.2926, abs=1e-3)
    assert reports["pole_part(0.95)"] == pytest.approx(-1.3343, abs=1e-4)
    assert reports["kernel_upper(0.95)"] == pytest.approx(0.9728, abs=1e-3)
    assert reports["pole_part(1.55)"] == pytest.approx(-0.9841, abs=1e-4)
    assert reports["kernel_upper(1.55)"] == pytest.approx(0.8943, abs=1e-3)
    assert reports["pole_part(2.0)"] == pytest.approx(-0.9, abs=1e-9)
    assert reports["kernel_upper(2.0)"] == pytest.approx(0.8649, abs=1e-3)
    assert reports["pole_part(2.25)"] == pytest.approx(-0.8889, abs=1e-4)
    assert reports["stair(0.0,0.95]"] == pytest.approx(-0.0417, abs=1e-3)
    assert reports["stair(0.95,1.55]"] == pytest.approx(-0.0113, abs=1e-3)
    assert reports["stair(1.55,2.0]"] == pytest.approx(-0.0057, abs=1e-3)
    assert reports["stair(2.0,2.25]"] == pytest.approx(-0.0240, abs=1e-3)


@pytest.mark.parametrize("n", [1, 4, 8])
def test_negative_range_small_dimensions(n):
    reports = verify_negative_range(n)
    grid = next(r for r in reports if r.quantity.startswith("grid_negativity"))
    assert grid.holds()
    majorant = next(r for r in reports if r.quantity.startswith("dim9_majorant"))
    assert majorant.holds()


def test_negative_range_domain():
    with pytest.raises(DomainError):
        verify_negative_range(10)


REFERENCE_XI_DD = {10: -0.101080515709, 11: 0.009568954836}


@pytest.mark.parametrize("n", [10, 11])
def test_second_derivative_values(n):
    d2 = hat_xi_second_derivative(n, 0.5)
    unhatted = d2.value / (n / 2.0) ** 2
    assert unhatted == pytest.approx(REFERENCE_XI_DD[n], abs=1e-6)
    assert d2.err / (n / 2.0) ** 2 < 1e-6


def test_first_derivative_vanishes_at_center():
    h = 0.01
    plus = hat_xi(7, 0.5 + h)
    minus = hat_xi(7, 0.5 - h)
    fd = (plus.value - minus.value) / (2.0 * h)
    assert abs(fd) <= 1e-6 + (plus.err + minus.err) / (2.0 * h)


@pytest.mark.parametrize("n,expected", [(2, "local_max"), (10, "local_max"), (11, "local_min")])
def test_classification(n, expected):
    assert classify_critical_point(n) == expected


def test_large_scale_positivity_exists():
    threshold = large_scale_positivity(2, 0.5, 1)
    assert math.isfinite(threshold) and threshold >= 2.0


def test_large_scale_positivity_dimension_nine():
    # at unit scales Xi_9(9/4) < 0; with a_1 = 2^10 it is positive
    unit = xi(9, 9.0 / 4.0, ScaleVector.unit(9))
    assert unit.value < 0
    big = xi(9, 9.0 / 4.0, ScaleVector([2.0**10] + [1.0] * 8))
    assert big.value > 0
    threshold = large_scale_positivity(9, 9.0 / 4.0, 1)
    assert threshold <= 2.0**10


def test_large_scale_threshold_axis_symmetric():
    t1 = large_scale_positivity(3, 0.7, 1)
    t2 = large_scale_positivity(3, 0.7, 2)
    assert t1 == t2


def test_large_scale_domain():
    with pytest.raises(DomainError):
        large_scale_positivity(3, 2.0, 1)
    with pytest.raises(DomainError):
        large_scale_positivity(3, 0.7, 4)
