"""Gaussian kernel identities and tail bounds.

K(x) = sqrt(alpha/2pi) * exp(-alpha x^2 / 2) is the weight of the integrated
explicit formula. The closed forms below are what the error budget evaluates;
quadrature (`checked_quad`) is only used by `truncated_fourier` and by the
lemma checks that compare the closed forms against numerical integration.

Every bound that is *added* to an error budget goes through
`conservative_exp`, which never returns 0 for an underflowing exponential.
"""

import math
import sys
import warnings
from dataclasses import dataclass
from typing import Any, Callable, Tuple

from scipy import integrate

from .errors import DomainError, QuadratureError

QUAD_RELTOL = 1e-10
_LOG_FLOAT_MAX = math.log(sys.float_info.max)


def checked_quad(
    f: Callable[[float], float], a: float, b: float, **kwargs: Any
) -> Tuple[float, float]:
    """Run `scipy.integrate.quad`, escalating IntegrationWarning to QuadratureError.

    Defaults to epsrel=1e-10, epsabs=0 and a 500-interval limit; keyword
    arguments are passed through (e.g. weight='cos', wvar=c).
    """
    options: dict[str, Any] = {"epsrel": QUAD_RELTOL, "epsabs": 0.0, "limit": 500}
    options.update(kwargs)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, abserr = integrate.quad(f, a, b, **options)[:2]
        except integrate.IntegrationWarning as e:
            raise QuadratureError(f"quadrature on [{a}, {b}] did not converge: {e}")
    return float(value), float(abserr)


def conservative_exp(x: float) -> float:
    """exp(x) for upper bounds: underflow gives the smallest normal float, overflow gives inf."""
    if x > _LOG_FLOAT_MAX:
        return math.inf
    value = math.exp(x)
    if value < sys.float_info.min:
        return sys.float_info.min
    return value


def _require_alpha(alpha: float) -> None:
    if not alpha > 0.0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0.0:
            raise DomainError(f"{name} must be positive, got {value!r}")


def gaussian_kernel(alpha: float, x: float) -> float:
    """K(x) = sqrt(alpha/2pi) exp(-alpha x^2/2)."""
    _require_alpha(alpha)
    return math.sqrt(alpha / (2.0 * math.pi)) * math.exp(-0.5 * alpha * x * x)


def log_gaussian_kernel(alpha: float, x: float) -> float:
    """log K(x), finite even where K(x) underflows."""
    _require_alpha(alpha)
    return 0.5 * math.log(alpha / (2.0 * math.pi)) - 0.5 * alpha * x * x


def kernel_fourier(alpha: float, c: float) -> float:
    """Integral of K(x) e^{icx} over the real line: exp(-c^2/(2 alpha))."""
    _require_alpha(alpha)
    return math.exp(-c * c / (2.0 * alpha))


def kernel_first_moment(alpha: float, eta: float) -> float:
    """Integral of x K(x) over [0, eta]: (1 - exp(-alpha eta^2/2)) / sqrt(2 pi alpha)."""
    _require_alpha(alpha)
    _require_positive(eta=eta)
    return -math.expm1(-0.5 * alpha * eta * eta) / math.sqrt(2.0 * math.pi * alpha)


def gaussian_tail_with_weight(alpha: float, c: float, h_at_c: float) -> float:
    """Bound (alpha/c) h(c) exp(-c^2/(2 alpha)) on the weighted Gaussian tail beyond c.

    Valid for any positive monotone decreasing weight h; only h(c) enters.
    """
    _require_alpha(alpha)
    _require_positive(c=c, h_at_c=h_at_c)
    return (alpha / c) * h_at_c * conservative_exp(-c * c / (2.0 * alpha))


def oscillatory_tail_bound(alpha: float, eta: float, c: float) -> float:
    """Bound K(eta) min(2/c, 1/(alpha eta)) on |integral of K(x) e^{icx} over [eta, inf)|."""
    _require_alpha(alpha)
    _require_positive(eta=eta, c=c)
    k_eta = conservative_exp(log_gaussian_kernel(alpha, eta))
    return k_eta * min(2.0 / c, 1.0 / (alpha * eta))


def truncated_fourier(alpha: float, eta: float, c: float) -> float:
    """Integral of K(x) e^{icx} over [-eta, eta], via the full transform minus twice the tail.

    The tail is integrated numerically in the scaled variable y = x sqrt(alpha).
    """
    _require_alpha(alpha)
    _require_positive(eta=eta)
    if c < 0.0:
        raise DomainError(f"c must be non-negative, got {c!r}")
    root = math.sqrt(alpha)
    lower = eta * root
    if lower > 40.0:
        return kernel_fourier(alpha, c)
    density = lambda y: math.exp(-0.5 * y * y) / math.sqrt(2.0 * math.pi)  # noqa: E731
    upper = lower + 40.0
    if c == 0.0:
        tail, _ = checked_quad(density, lower, upper, epsabs=1e-15)
    else:
        tail, _ = checked_quad(density, lower, upper, weight="cos", wvar=c / root, epsabs=1e-15)
    return kernel_fourier(alpha, c) - 2.0 * tail


@dataclass(frozen=True)
class KernelParam:
    """Gaussian sharpness alpha with the kernel closed forms bound to it."""

    alpha: float

    def __post_init__(self) -> None:
        _require_alpha(self.alpha)

    def kernel(self, x: float) -> float:
        return gaussian_kernel(self.alpha, x)

    def log_kernel(self, x: float) -> float:
        return log_gaussian_kernel(self.alpha, x)

    def fourier(self, c: float) -> float:
        return kernel_fourier(self.alpha, c)

    def first_moment(self, eta: float) -> float:
        return kernel_first_moment(self.alpha, eta)

    def oscillatory_tail(self, eta: float, c: float) -> float:
        return oscillatory_tail_bound(self.alpha, eta, c)
