"""Damped zero sums S1*, S2* and their zero-accuracy error bounds.

For an ordinate gamma (rho = 1/2 + i gamma) the summands are

    s(alpha, omega, gamma) = (cos wg + 2 gamma sin wg) / (1/4 + gamma^2) * e^{-gamma^2/2alpha}
    t(alpha, omega, gamma) = ((1/2 - 2 gamma^2) cos wg + 2 gamma sin wg)
                             / (omega (1/4 + gamma^2)^2) * e^{-gamma^2/2alpha}

i.e. 2 Re(e^{i omega gamma}/rho) and 2 Re(e^{i omega gamma}/rho^2)/omega, damped.
alpha = math.inf disables the damping (used by the region scanner).

Summation is deterministic: the index range is cut into fixed chunks, each
chunk is summed with `math.fsum`, and chunk results are combined with
`math.fsum` in index order. Running the chunks on a thread pool therefore
gives the same bits as running them inline.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from . import progress
from .config import get
from .double_word import DoubleWord, as_double_word, reduce_phase
from .error_budget import CertParams
from .errors import DomainError
from .zero_catalog import (
    INVERSE_SQUARE_SUM_BOUND,
    ZeroCatalog,
    count_below,
    inverse_power_sum,
    ordinates_up_to,
    reciprocal_sum_bracket,
)

logger = logging.getLogger(__name__)

Omega = Union[float, DoubleWord]

DEFAULT_CHUNK_SIZE = 1 << 16
GAMMA_FLOOR = 14.0
PRINTED_INFLATION = 1.0001


@dataclass(frozen=True)
class SumResult:
    """Zero sums of one (alpha, omega, T) evaluation.

    s_star is the compensated sum of every s and t summand, so it equals
    s1 + s2 up to the final rounding of each.
    """

    s1: float
    s2: float
    s_star: float
    delta_s1: float
    delta_s2: float
    zeros_used: int
    T_effective: float


def _s_values(alpha: float, omega: Omega, gammas: np.ndarray) -> np.ndarray:
    phase = reduce_phase(omega, gammas)
    g2 = gammas * gammas
    damping = np.exp(-g2 / (2.0 * alpha))
    return (np.cos(phase) + 2.0 * gammas * np.sin(phase)) / (0.25 + g2) * damping


def _t_values(alpha: float, omega: Omega, gammas: np.ndarray) -> np.ndarray:
    phase = reduce_phase(omega, gammas)
    g2 = gammas * gammas
    damping = np.exp(-g2 / (2.0 * alpha))
    w = float(omega)
    numerator = (0.5 - 2.0 * g2) * np.cos(phase) + 2.0 * gammas * np.sin(phase)
    return numerator / (w * (0.25 + g2) ** 2) * damping


def _both_values(alpha: float, omega: Omega, gammas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    phase = reduce_phase(omega, gammas)
    cos, sin = np.cos(phase), np.sin(phase)
    g2 = gammas * gammas
    damping = np.exp(-g2 / (2.0 * alpha))
    denom = 0.25 + g2
    two_g_sin = 2.0 * gammas * sin
    s = (cos + two_g_sin) / denom * damping
    t = ((0.5 - 2.0 * g2) * cos + two_g_sin) / (float(omega) * denom * denom) * damping
    return s, t


def _check_alpha(alpha: float) -> None:
    if not alpha > 0.0:
        raise DomainError(f"alpha must be positive (math.inf disables damping), got {alpha!r}")


def _check_omega(omega: Omega) -> None:
    if float(omega) == 0.0:
        raise DomainError("t summand is undefined for omega = 0")


def s_term(alpha: float, omega: Omega, gamma: float) -> float:
    """Single summand s(alpha, omega, gamma) with double-word phase reduction."""
    _check_alpha(alpha)
    return float(_s_values(alpha, as_double_word(omega), np.array([gamma], dtype=np.float64))[0])


def t_term(alpha: float, omega: Omega, gamma: float) -> float:
    """Single summand t(alpha, omega, gamma) with double-word phase reduction."""
    _check_alpha(alpha)
    _check_omega(omega)
    return float(_t_values(alpha, as_double_word(omega), np.array([gamma], dtype=np.float64))[0])


def _resolve_workers(chunk_size: Optional[int], threads: Optional[int]) -> Tuple[int, int]:
    if chunk_size is None:
        chunk_size = int(get("zero_sum.chunk_size", DEFAULT_CHUNK_SIZE))
    if threads is None:
        threads = int(get("zero_sum.threads", 0))
    if chunk_size < 1:
        raise DomainError(f"chunk_size must be >= 1, got {chunk_size}")
    if threads <= 0:
        threads = os.cpu_count() or 1
    return chunk_size, threads


def _chunked(
    gammas: np.ndarray,
    kernel,
    chunk_size: Optional[int],
    threads: Optional[int],
    job: Optional[str],
) -> list:
    """Apply `kernel` to consecutive chunks and return the results in index order."""
    chunk_size, threads = _resolve_workers(chunk_size, threads)
    bounds = [(i, min(i + chunk_size, gammas.shape[0])) for i in range(0, gammas.shape[0], chunk_size)]
    if job is not None:
        progress.start_job(job, len(bounds))

    def run(bound: Tuple[int, int]):
        result = kernel(gammas[bound[0] : bound[1]])
        if job is not None:
            progress.advance(1)
        return result

    if threads == 1 or len(bounds) <= 1:
        results = [run(b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads, thread_name_prefix="zero-sum") as pool:
            results = list(pool.map(run, bounds))
    if job is not None:
        progress.finish_job()
    return results


def sum_s(
    catalog: ZeroCatalog,
    alpha: float,
    omega: Omega,
    T: float,
    chunk_size: Optional[int] = None,
    threads: Optional[int] = None,
    job: Optional[str] = "sum_s",
) -> float:
    """S1*(alpha, omega, T): compensated sum of s over the catalog ordinates <= T."""
    _check_alpha(alpha)
    omega_dw = as_double_word(omega)
    gammas = ordinates_up_to(catalog, T)
    parts = _chunked(
        gammas,
        lambda g: math.fsum(_s_values(alpha, omega_dw, g).tolist()),
        chunk_size,
        threads,
        job,
    )
    return math.fsum(parts)


def sum_t(
    catalog: ZeroCatalog,
    alpha: float,
    omega: Omega,
    T: float,
    chunk_size: Optional[int] = None,
    threads: Optional[int] = None,
    job: Optional[str] = "sum_t",
) -> float:
    """S2*(alpha, omega, T): compensated sum of t over the catalog ordinates <= T."""
    _check_alpha(alpha)
    _check_omega(omega)
    omega_dw = as_double_word(omega)
    gammas = ordinates_up_to(catalog, T)
    parts = _chunked(
        gammas,
        lambda g: math.fsum(_t_values(alpha, omega_dw, g).tolist()),
        chunk_size,
        threads,
        job,
    )
    return math.fsum(parts)


def s_derivative_coefficient(omega: float, alpha: float, gamma_min: float, gamma_max: float) -> float:
    """C with |ds/dx| <= C/x for gamma_min <= x <= gamma_max."""
    return (
        2.0 * omega
        + omega / gamma_min
        + 2.0 * gamma_max / alpha
        + 2.0 / gamma_min**2
        + 4.0 / gamma_min
    )


def t_derivative_coefficient(omega: float, alpha: float, gamma_min: float, gamma_max: float) -> float:
    """D with |dt/dx| <= D/x^2 for gamma_min <= x <= gamma_max."""
    return (
        2.0 / gamma_min
        + 2.0 * gamma_max / (alpha * omega)
        + 1.0 / (2.0 * gamma_min**2)
        + 2.0
        + 8.0 / (omega * gamma_min)
        + 8.0 / (omega * gamma_min**2)
    )


def _gamma_window(
    first: float, T: float, epsilon: float, printed_bounds: bool
) -> Tuple[float, float, float]:
    """(gamma_min, gamma_max, kappa) for the mean-value bounds."""
    if epsilon < 0.0:
        raise DomainError(f"epsilon must be >= 0, got {epsilon!r}")
    gamma_max = T + epsilon
    if printed_bounds:
        return GAMMA_FLOOR, gamma_max, PRINTED_INFLATION
    gamma_min = first - epsilon
    if gamma_min > GAMMA_FLOOR:
        return gamma_min, gamma_max, first / gamma_min
    # true ordinates exceed 14, so gamma/gamma* peaks at gamma = 14 + epsilon
    return GAMMA_FLOOR, gamma_max, (GAMMA_FLOOR + epsilon) / GAMMA_FLOOR


def delta_s1_bound(
    catalog_or_T: Union[ZeroCatalog, float],
    params: CertParams,
    epsilon: Optional[float] = None,
    printed_bounds: bool = False,
) -> float:
    """Bound on |S1* - S1| caused by ordinates known only to within epsilon.

    epsilon * C * kappa * sum_{gamma <= T} 1/gamma, with C from
    `s_derivative_coefficient` and kappa = gamma_1/(gamma_1 - epsilon). The
    reciprocal sum is taken directly from the catalog when one is given and
    from the upper end of `reciprocal_sum_bracket` otherwise.

    With printed_bounds, gamma_min = 14, kappa = 1.0001 and the bracket are used
    regardless of the catalog.
    """
    T = params.T
    if isinstance(catalog_or_T, ZeroCatalog):
        catalog: Optional[ZeroCatalog] = catalog_or_T
        first = catalog_or_T.first
        if epsilon is None:
            epsilon = catalog_or_T.accuracy if printed_bounds else catalog_or_T.effective_accuracy
    else:
        catalog = None
        T = float(catalog_or_T)
        first = 14.1
        if epsilon is None:
            raise DomainError("epsilon is required when no catalog is given")
    if epsilon == 0.0:
        return 0.0
    gamma_min, gamma_max, kappa = _gamma_window(first, T, epsilon, printed_bounds)
    coefficient = s_derivative_coefficient(params.omega, params.alpha, gamma_min, gamma_max)
    if catalog is not None and not printed_bounds:
        reciprocal = inverse_power_sum(catalog, 1, T)
    else:
        reciprocal = reciprocal_sum_bracket(T)[1]
    return epsilon * coefficient * kappa * reciprocal


def delta_s2_bound(
    params: CertParams,
    epsilon: float,
    catalog: Optional[ZeroCatalog] = None,
    printed_bounds: bool = False,
) -> float:
    """Bound on |S2* - S2|: epsilon * D * kappa^2 * sum 1/gamma^2.

    The inverse-square sum is the direct catalog sum up to T when a catalog is
    given (and printed_bounds is off), otherwise the constant 2.31050e-2.
    """
    if epsilon == 0.0:
        return 0.0
    first = catalog.first if catalog is not None else 14.1
    gamma_min, gamma_max, kappa = _gamma_window(first, params.T, epsilon, printed_bounds)
    coefficient = t_derivative_coefficient(params.omega, params.alpha, gamma_min, gamma_max)
    if catalog is not None and not printed_bounds:
        inverse_square = inverse_power_sum(catalog, 2, params.T)
    else:
        inverse_square = INVERSE_SQUARE_SUM_BOUND
    return epsilon * coefficient * kappa * kappa * inverse_square


def evaluate_sums(
    catalog: ZeroCatalog,
    params: CertParams,
    epsilon: Optional[float] = None,
    printed_bounds: bool = False,
    chunk_size: Optional[int] = None,
    threads: Optional[int] = None,
) -> SumResult:
    """S1*, S2*, S* and both accuracy bounds in a single pass over the catalog.

    epsilon defaults to the catalog's effective accuracy (declared accuracy plus
    one ulp of the last ordinate); with printed_bounds the declared accuracy is used.
    """
    if epsilon is None:
        epsilon = catalog.accuracy if printed_bounds else catalog.effective_accuracy
    omega_dw = as_double_word(params.omega)
    alpha = params.alpha
    gammas = ordinates_up_to(catalog, params.T)

    def kernel(g: np.ndarray) -> Tuple[float, float, float]:
        s, t = _both_values(alpha, omega_dw, g)
        s_list, t_list = s.tolist(), t.tolist()
        return math.fsum(s_list), math.fsum(t_list), math.fsum(s_list + t_list)

    parts = _chunked(gammas, kernel, chunk_size, threads, "evaluate_sums")
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    s_star = math.fsum(p[2] for p in parts)
    zeros_used = count_below(catalog, params.T)
    result = SumResult(
        s1=s1,
        s2=s2,
        s_star=s_star,
        delta_s1=delta_s1_bound(catalog, params, epsilon, printed_bounds),
        delta_s2=delta_s2_bound(params, epsilon, catalog, printed_bounds),
        zeros_used=zeros_used,
        T_effective=float(gammas[-1]) if zeros_used else 0.0,
    )
    logger.info(
        f"Zero sums over {zeros_used} zeros: S*={result.s_star!r} "
        f"dS1={result.delta_s1:.6g} dS2={result.delta_s2:.6g}"
    )
    return result
