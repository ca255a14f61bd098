"""Tests for the Gaussian kernel closed forms and tail bounds."""

import math
import sys

import pytest

from lehmancert.errors import DomainError, QuadratureError
from lehmancert.kernel_math import (
    KernelParam,
    checked_quad,
    conservative_exp,
    gaussian_kernel,
    gaussian_tail_with_weight,
    kernel_first_moment,
    kernel_fourier,
    log_gaussian_kernel,
    oscillatory_tail_bound,
    truncated_fourier,
)


def test_kernel_at_origin_is_normal_density():
    assert gaussian_kernel(1.0, 0.0) == pytest.approx(0.3989423, rel=1e-7)


def test_fourier_transform_value():
    assert kernel_fourier(2.0, 2.0) == pytest.approx(math.exp(-1.0))
    assert kernel_fourier(5.0, 0.0) == 1.0


def test_kernel_integrates_to_one():
    value, _ = checked_quad(lambda x: gaussian_kernel(3.0, x), -math.inf, math.inf)
    assert value == pytest.approx(1.0, rel=1e-9)


def test_first_moment_matches_quadrature():
    alpha, eta = 50.0, 0.3
    direct, _ = checked_quad(lambda x: x * gaussian_kernel(alpha, x), 0.0, eta)
    assert kernel_first_moment(alpha, eta) == pytest.approx(direct, rel=1e-9)


def test_weighted_tail_bound_dominates_integral():
    bound = gaussian_tail_with_weight(1.0, 1.0, 1.0)
    assert bound == pytest.approx(0.6065, rel=1e-3)
    direct, _ = checked_quad(lambda x: math.exp(-0.5 * x * x), 1.0, math.inf)
    assert bound >= direct


def test_weighted_tail_bound_with_decreasing_weight():
    alpha, c = 4.0, 2.0
    bound = gaussian_tail_with_weight(alpha, c, 1.0 / c)
    direct, _ = checked_quad(lambda x: math.exp(-x * x / (2.0 * alpha)) / x, c, math.inf)
    assert bound >= direct


def test_oscillatory_tail_bound_dominates_integral():
    alpha, eta, c = 1.0, 1.0, 3.0
    real, _ = checked_quad(lambda x: gaussian_kernel(alpha, x), eta, eta + 40.0, weight="cos", wvar=c)
    imag, _ = checked_quad(lambda x: gaussian_kernel(alpha, x), eta, eta + 40.0, weight="sin", wvar=c)
    assert math.hypot(real, imag) <= oscillatory_tail_bound(alpha, eta, c)


def test_truncated_fourier_matches_direct_quadrature():
    alpha, eta, c = 1.0, 1.0, 2.0
    direct, _ = checked_quad(lambda x: gaussian_kernel(alpha, x) * math.cos(c * x), -eta, eta)
    assert truncated_fourier(alpha, eta, c) == pytest.approx(direct, abs=1e-10)


def test_truncated_fourier_at_zero_frequency():
    alpha, eta = 2.0, 0.5
    direct, _ = checked_quad(lambda x: gaussian_kernel(alpha, x), -eta, eta)
    assert truncated_fourier(alpha, eta, 0.0) == pytest.approx(direct, abs=1e-10)


def test_truncated_fourier_far_tail_is_full_transform():
    assert truncated_fourier(1e12, 1.0, 5.0) == kernel_fourier(1e12, 5.0)


def test_conservative_exp_never_returns_zero():
    assert conservative_exp(-50000.0) == sys.float_info.min
    assert conservative_exp(1000.0) == math.inf
    assert conservative_exp(0.0) == 1.0


def test_log_kernel_survives_underflow():
    assert gaussian_kernel(1e12, 1.0) == 0.0
    assert log_gaussian_kernel(1e12, 1.0) == pytest.approx(0.5 * math.log(1e12 / (2 * math.pi)) - 5e11)


def test_quadrature_failure_raises():
    with pytest.raises(QuadratureError):
        checked_quad(lambda x: math.sin(50.0 * x), 0.0, 100.0, limit=1)


@pytest.mark.parametrize(
    "call",
    [
        lambda: gaussian_kernel(0.0, 1.0),
        lambda: kernel_fourier(-1.0, 1.0),
        lambda: kernel_first_moment(1.0, 0.0),
        lambda: gaussian_tail_with_weight(1.0, 0.0, 1.0),
        lambda: oscillatory_tail_bound(1.0, 1.0, 0.0),
        lambda: truncated_fourier(1.0, 1.0, -1.0),
        lambda: KernelParam(0.0),
    ],
)
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()


def test_kernel_param_delegates():
    k = KernelParam(2.0)
    assert k.kernel(0.5) == gaussian_kernel(2.0, 0.5)
    assert k.log_kernel(0.5) == log_gaussian_kernel(2.0, 0.5)
    assert k.fourier(1.0) == kernel_fourier(2.0, 1.0)
    assert k.first_moment(0.1) == kernel_first_moment(2.0, 0.1)
    assert k.oscillatory_tail(0.5, 3.0) == oscillatory_tail_bound(2.0, 0.5, 3.0)
