"""Double-word (two-float) arithmetic for reducing omega*gamma modulo 2pi.

A product omega*gamma near 1e10 carries about 1e-6 of absolute phase error in
plain binary64. Here omega is held as an unevaluated sum hi + lo of two
floats, the product with each (exact) float ordinate is formed with the
error-free transformations two_prod / two_sum, and 2pi is subtracted as a
double-word constant. The reduced phase is then accurate to a few units of
1e-16 absolute for products up to 1e12.

The transformations are vectorised over numpy arrays (Dekker splitting, since
numpy has no fused multiply-add).
"""

from typing import NamedTuple, Tuple, Union

import mpmath
import numpy as np

_SPLITTER = 134217729.0  # 2^27 + 1
_WORK_PREC = 160


class DoubleWord(NamedTuple):
    """Unevaluated sum hi + lo with |lo| <= ulp(hi)/2."""

    hi: float
    lo: float

    def __float__(self) -> float:
        return self.hi + self.lo


def _from_mpf(value: mpmath.mpf) -> DoubleWord:
    hi = float(value)
    lo = float(value - mpmath.mpf(hi))
    return DoubleWord(hi, lo)


def from_decimal(text: str) -> DoubleWord:
    """Round a decimal string to the nearest double-word value."""
    with mpmath.workprec(_WORK_PREC):
        return _from_mpf(mpmath.mpf(text))


def from_value(x: float) -> DoubleWord:
    """Double-word value of the shortest decimal that round-trips to `x`.

    `727.952018` therefore means the decimal 727.952018, not the nearest binary64.
    """
    return from_decimal(repr(float(x)))


def as_double_word(x: Union[float, DoubleWord]) -> DoubleWord:
    if isinstance(x, DoubleWord):
        return x
    return from_value(x)


def log10_to_natural(exponent: float) -> DoubleWord:
    """exponent * ln(10) in double-word precision (base-10 exponent to natural log scale)."""
    with mpmath.workprec(_WORK_PREC):
        return _from_mpf(mpmath.mpf(repr(float(exponent))) * mpmath.log(10))


with mpmath.workprec(_WORK_PREC):
    TWO_PI = _from_mpf(2 * mpmath.pi)


def two_sum(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """s + err == a + b exactly."""
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def split(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Dekker split into two halves of at most 26 significant bits each."""
    c = _SPLITTER * a
    big = c - a
    hi = c - big
    return hi, a - hi


def two_prod(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """p + err == a * b exactly."""
    p = a * b
    a_hi, a_lo = split(a)
    b_hi, b_lo = split(b)
    err = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, err


def multiply(omega: DoubleWord, gammas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Double-word product omega * gamma for every float gamma."""
    hi, err = two_prod(np.full_like(gammas, omega.hi), gammas)
    lo = err + omega.lo * gammas
    return two_sum(hi, lo)


def reduce_phase(omega: Union[float, DoubleWord], gammas: np.ndarray) -> np.ndarray:
    """omega * gamma reduced to [-pi, pi], elementwise.

    Args:
        omega: Frequency; floats are read as their shortest decimal (see `from_value`).
        gammas: float64 array of ordinates.
    """
    omega_dw = as_double_word(omega)
    gammas = np.asarray(gammas, dtype=np.float64)
    p_hi, p_lo = multiply(omega_dw, gammas)
    k = np.rint(p_hi / TWO_PI.hi)
    q_hi, q_lo = two_prod(k, np.full_like(k, TWO_PI.hi))
    # p_hi and q_hi agree in their leading bits, so this difference is exact
    head = p_hi - q_hi
    tail = (p_lo - q_lo) - k * TWO_PI.lo
    r = head + tail
    # rint on p_hi alone can be off by one near the half-period boundary
    r = np.where(r > np.pi, r - float(TWO_PI), r)
    r = np.where(r < -np.pi, r + float(TWO_PI), r)
    return r
