"""Tests for the damped zero sums and their accuracy bounds."""

import math

import mpmath
import numpy as np
import pytest

from lehmancert import progress
from lehmancert.error_budget import CertParams
from lehmancert.errors import CatalogExhaustedError, DomainError
from lehmancert.zero_catalog import ZeroCatalog, inverse_power_sum
from lehmancert.zero_sum import (
    delta_s1_bound,
    delta_s2_bound,
    evaluate_sums,
    s_derivative_coefficient,
    s_term,
    sum_s,
    sum_t,
    t_derivative_coefficient,
    t_term,
)

CHAO_PLYMEN = CertParams(alpha=1.34e11, omega=727.952018, eta=1.6e-4, A=1.022e7, T=1131944.4718)
SAOUTER_DEMICHEL = CertParams(alpha=6e12, omega=727.95134, eta=2.28333e-5, A=6.85e7, T=10379599.7274)
SMALL = CertParams(alpha=1e4, omega=50.0, eta=0.1, A=1000.0, T=100.0)


def _reference_s(alpha, omega_text, gamma):
    with mpmath.workdps(40):
        g = mpmath.mpf(gamma)
        x = mpmath.mpf(omega_text) * g
        damping = mpmath.exp(-g * g / (2 * mpmath.mpf(alpha)))
        return (mpmath.cos(x) + 2 * g * mpmath.sin(x)) / (mpmath.mpf(1) / 4 + g * g) * damping


def _reference_t(alpha, omega_text, gamma):
    with mpmath.workdps(40):
        g = mpmath.mpf(gamma)
        w = mpmath.mpf(omega_text)
        x = w * g
        damping = mpmath.exp(-g * g / (2 * mpmath.mpf(alpha)))
        numerator = (mpmath.mpf(1) / 2 - 2 * g * g) * mpmath.cos(x) + 2 * g * mpmath.sin(x)
        return numerator / (w * (mpmath.mpf(1) / 4 + g * g) ** 2) * damping


def test_single_summands_match_high_precision():
    for gamma in (14.134725142, 49.773832478, 101.317851006):
        assert s_term(1e4, 50.0, gamma) == pytest.approx(float(_reference_s(1e4, "50", gamma)), abs=1e-15)
        assert t_term(1e4, 50.0, gamma) == pytest.approx(float(_reference_t(1e4, "50", gamma)), abs=1e-16)


def test_sums_match_high_precision(first30):
    T = first30.last
    with mpmath.workdps(40):
        s_ref = mpmath.fsum(_reference_s(1e4, "727.952018", g) for g in first30.ordinates.tolist())
        t_ref = mpmath.fsum(_reference_t(1e4, "727.952018", g) for g in first30.ordinates.tolist())
    assert sum_s(first30, 1e4, 727.952018, T, threads=1) == pytest.approx(float(s_ref), abs=1e-14)
    assert sum_t(first30, 1e4, 727.952018, T, threads=1) == pytest.approx(float(t_ref), abs=1e-15)


def test_threaded_sum_is_bit_identical(first30):
    T = first30.last
    inline = sum_s(first30, 1e4, 727.952018, T, chunk_size=7, threads=1)
    pooled = sum_s(first30, 1e4, 727.952018, T, chunk_size=7, threads=4)
    assert inline == pooled
    params = CertParams(alpha=1e4, omega=727.952018, eta=0.1, A=1000.0, T=T)
    assert evaluate_sums(first30, params, chunk_size=7, threads=1) == evaluate_sums(
        first30, params, chunk_size=7, threads=4
    )


def test_summand_bounds(first30):
    gammas = first30.ordinates.tolist()
    for omega in (0.0, 20.0, 727.952018):
        for gamma in gammas:
            assert abs(s_term(math.inf, omega, gamma)) <= 2.0 / gamma
    for omega in (20.0, 300.0, 727.952018):
        assert omega * abs(sum_t(first30, math.inf, omega, first30.last, threads=1)) <= 1.0 / 21.0


def test_undamped_sum_at_zero_frequency(first30):
    value = sum_s(first30, math.inf, 0.0, first30.last, threads=1)
    direct = math.fsum(1.0 / (0.25 + g * g) for g in first30.ordinates.tolist())
    assert value == pytest.approx(direct, rel=1e-14)


def test_t_summand_needs_nonzero_frequency(first30):
    with pytest.raises(DomainError):
        t_term(1e4, 0.0, 14.134725142)
    with pytest.raises(DomainError):
        sum_t(first30, 1e4, 0.0, 50.0)
    with pytest.raises(DomainError):
        s_term(0.0, 10.0, 14.134725142)


def test_exhausted_catalog(first30):
    with pytest.raises(CatalogExhaustedError):
        sum_s(first30, 1e4, 50.0, 200.0)
    with pytest.raises(CatalogExhaustedError):
        evaluate_sums(first30, CertParams(alpha=1e4, omega=50.0, eta=0.1, A=1000.0, T=200.0))


def test_evaluate_sums_combines_both_sums(first30):
    result = evaluate_sums(first30, SMALL, threads=1)
    assert result.zeros_used == 29
    assert result.T_effective == 98.831194218
    assert result.s1 == pytest.approx(sum_s(first30, SMALL.alpha, SMALL.omega, SMALL.T, threads=1), rel=1e-13)
    assert result.s2 == pytest.approx(sum_t(first30, SMALL.alpha, SMALL.omega, SMALL.T, threads=1), rel=1e-13)
    assert result.s_star == pytest.approx(result.s1 + result.s2, abs=1e-15)
    assert result.delta_s1 == delta_s1_bound(first30, SMALL)
    assert result.delta_s2 == delta_s2_bound(SMALL, first30.effective_accuracy, first30)


def test_evaluate_sums_reports_progress(first30):
    evaluate_sums(first30, SMALL, chunk_size=10, threads=1)
    state = progress.get_progress()
    assert state["name"] == "evaluate_sums"
    assert state["done"] == state["total"] == 3
    assert state["finished"]


def test_printed_accuracy_bounds():
    ds1 = delta_s1_bound(CHAO_PLYMEN.T, CHAO_PLYMEN, epsilon=1e-9, printed_bounds=True)
    assert ds1 == pytest.approx(1.89855e-5, rel=5e-3)
    assert ds1 <= 1.89855e-5
    assert delta_s2_bound(CHAO_PLYMEN, 1e-9, printed_bounds=True) == pytest.approx(4.9599e-11, rel=5e-3)
    ds1 = delta_s1_bound(SAOUTER_DEMICHEL.T, SAOUTER_DEMICHEL, epsilon=1e-9, printed_bounds=True)
    assert ds1 == pytest.approx(2.6011e-5, rel=5e-3)


def test_derivative_coefficients():
    assert s_derivative_coefficient(727.952018, 1.34e11, 14.0, 1131944.4718) == pytest.approx(1508.2, rel=1e-4)
    assert t_derivative_coefficient(727.952018, 1.34e11, 14.0, 1131944.4718) == pytest.approx(2.14625, rel=1e-5)


def test_bounds_need_epsilon_or_catalog():
    with pytest.raises(DomainError):
        delta_s1_bound(CHAO_PLYMEN.T, CHAO_PLYMEN)
    assert delta_s1_bound(CHAO_PLYMEN.T, CHAO_PLYMEN, epsilon=0.0) == 0.0
    assert delta_s2_bound(CHAO_PLYMEN, 0.0) == 0.0
    with pytest.raises(DomainError):
        delta_s1_bound(CHAO_PLYMEN.T, CHAO_PLYMEN, epsilon=-1e-9)


def test_coarse_epsilon_floors_gamma_min(first30):
    eps = 0.5
    kappa = (14.0 + eps) / 14.0
    expected = (
        eps
        * s_derivative_coefficient(SMALL.omega, SMALL.alpha, 14.0, SMALL.T + eps)
        * kappa
        * inverse_power_sum(first30, 1, SMALL.T)
    )
    assert delta_s1_bound(first30, SMALL, epsilon=eps) == pytest.approx(expected, rel=1e-14)
    expected_t = (
        eps
        * t_derivative_coefficient(SMALL.omega, SMALL.alpha, 14.0, SMALL.T + eps)
        * kappa**2
        * inverse_power_sum(first30, 2, SMALL.T)
    )
    assert delta_s2_bound(SMALL, eps, first30) == pytest.approx(expected_t, rel=1e-14)
    assert math.isfinite(delta_s1_bound(first30, SMALL, epsilon=5.0))


def test_catalog_bound_uses_direct_reciprocal_sum(first30):
    eps = 1e-6
    expected = (
        eps
        * s_derivative_coefficient(SMALL.omega, SMALL.alpha, first30.first - eps, SMALL.T + eps)
        * first30.first
        / (first30.first - eps)
        * inverse_power_sum(first30, 1, SMALL.T)
    )
    assert delta_s1_bound(first30, SMALL, epsilon=eps) == pytest.approx(expected, rel=1e-14)


def test_accuracy_bounds_cover_perturbed_catalogs():
    rng = np.random.default_rng(7)
    base = ZeroCatalog(14.5 + np.cumsum(rng.uniform(0.2, 1.0, 1000)))
    T = 0.5 * (float(base.ordinates[-2]) + base.last)
    params = CertParams(alpha=1e5, omega=50.0, eta=0.1, A=1e4, T=T)
    eps = 1e-6
    base_s = sum_s(base, params.alpha, params.omega, T, threads=1, job=None)
    base_t = sum_t(base, params.alpha, params.omega, T, threads=1, job=None)
    bound_s = delta_s1_bound(base, params, epsilon=eps)
    bound_t = delta_s2_bound(params, eps, base)
    for _ in range(1000):
        perturbed = ZeroCatalog(base.ordinates + rng.uniform(-eps, eps, len(base)), accuracy=eps)
        s = sum_s(perturbed, params.alpha, params.omega, T, threads=1, job=None)
        t = sum_t(perturbed, params.alpha, params.omega, T, threads=1, job=None)
        assert abs(s - base_s) <= bound_s
        assert abs(t - base_t) <= bound_t


@pytest.mark.slow
def test_published_sum_for_first_region(catalog_2m):
    if catalog_2m.last < CHAO_PLYMEN.T:
        pytest.skip("catalog does not reach T")
    result = evaluate_sums(catalog_2m, CHAO_PLYMEN)
    assert result.s_star == pytest.approx(-1.006553478788955, abs=5e-5)


@pytest.mark.slow
def test_large_catalog_threads_agree(large_catalog):
    T = float(large_catalog.ordinates[99_999])
    inline = sum_s(large_catalog, 1.34e11, 727.952018, T, chunk_size=4096, threads=1)
    pooled = sum_s(large_catalog, 1.34e11, 727.952018, T, chunk_size=4096, threads=4)
    assert inline == pooled


def _reference_s_plus_t(omega_text, gammas):
    with mpmath.workdps(50):
        w = mpmath.mpf(omega_text)
        quarter = mpmath.mpf(1) / 4
        total = mpmath.mpf(0)
        for gamma in gammas:
            g = mpmath.mpf(gamma)
            x = w * g
            c, s = mpmath.cos(x), mpmath.sin(x)
            denom = quarter + g * g
            damping = mpmath.exp(-g * g / (2 * mpmath.mpf("1.34e11")))
            total += (c + 2 * g * s) / denom * damping
            total += ((mpmath.mpf(1) / 2 - 2 * g * g) * c + 2 * g * s) / (w * denom * denom) * damping
        return total


@pytest.mark.slow
def test_large_catalog_matches_multiprecision_resummation(large_catalog):
    T = float(large_catalog.ordinates[99_999])
    params = CertParams(alpha=1.34e11, omega=727.952018, eta=1.6e-4, A=1.022e7, T=T)
    result = evaluate_sums(large_catalog, params)
    reference = _reference_s_plus_t("727.952018", large_catalog.ordinates[:100_000].tolist())
    assert abs(result.s_star - float(reference)) <= result.delta_s1 + result.delta_s2


@pytest.mark.slow
def test_large_catalog_t_sum_bound(large_catalog):
    T = float(large_catalog.ordinates[99_999])
    assert abs(sum_t(large_catalog, 1.34e11, 727.952018, T)) <= 1.0 / (21.0 * 727.952018)
