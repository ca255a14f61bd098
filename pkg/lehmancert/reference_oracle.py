"""Desk-scale ground truth: prime counts, logarithmic integrals and explicit-formula checks.

Everything here is exact or carries an explicit error bound, and is only
meant for arguments a workstation can handle (prime counts up to 1e8).
"""

import cmath
import logging
import math
import threading
from typing import Optional, Tuple

import numpy as np
from scipy import special

from .errors import CatalogError, DomainError
from .kernel_math import checked_quad
from .zero_catalog import ZeroCatalog

logger = logging.getLogger(__name__)

SIEVE_LIMIT = 100_000_000
LI_SINGULARITY_GUARD = 1e-12
DUSART_MIN_X = 4e9
MAX_ASYMPTOTIC_TERMS = 60
_MIN_TABLE = 1 << 20
_EPS = 2.0**-52
_LOG2 = math.log(2.0)

_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


class PrimeTable:
    """Odd-only Eratosthenes bitset with per-byte prefix counts.

    Bit i of the packed array stands for the odd number 2i + 1.
    """

    def __init__(self, limit: int) -> None:
        if limit < 2:
            raise DomainError(f"sieve limit must be >= 2, got {limit}")
        if limit > SIEVE_LIMIT:
            raise DomainError(f"sieve limit {limit} exceeds {SIEVE_LIMIT}")
        self.limit = int(limit)
        flags = np.ones((self.limit + 1) // 2, dtype=bool)
        flags[0] = False  # 1 is not prime
        for p in range(3, math.isqrt(self.limit) + 1, 2):
            if flags[p >> 1]:
                flags[(p * p) >> 1 :: p] = False
        self._bits = np.packbits(flags)
        self._prefix = np.cumsum(_POPCOUNT[self._bits])
        logger.debug(f"Sieved primes up to {self.limit}")

    def _check(self, n: int) -> None:
        if n > self.limit:
            raise DomainError(f"{n} beyond sieve limit {self.limit}")

    def pi(self, x: int) -> int:
        """Number of primes <= x."""
        self._check(x)
        if x < 2:
            return 0
        m = (x + 1) // 2  # odd numbers 1, 3, ..., <= x
        full, rest = divmod(m, 8)
        count = int(self._prefix[full - 1]) if full else 0
        if rest:
            count += int(_POPCOUNT[int(self._bits[full]) >> (8 - rest)])
        return count + 1  # the prime 2

    def is_prime(self, n: int) -> bool:
        self._check(n)
        if n == 2:
            return True
        if n < 2 or n % 2 == 0:
            return False
        i = n >> 1
        return bool((int(self._bits[i >> 3]) >> (7 - (i & 7))) & 1)


_table: Optional[PrimeTable] = None
_table_lock = threading.Lock()


def _table_for(n: int) -> PrimeTable:
    """Shared sieve covering n, grown on demand."""
    global _table
    if n > SIEVE_LIMIT:
        raise DomainError(f"{n} exceeds the sieve limit {SIEVE_LIMIT}")
    with _table_lock:
        if _table is None or _table.limit < n:
            current = _table.limit if _table is not None else 0
            _table = PrimeTable(min(SIEVE_LIMIT, max(n, 2 * current, _MIN_TABLE)))
        return _table


def sieve_pi(x: int) -> int:
    """Exact pi(x) for x <= 1e8."""
    x = int(x)
    if x < 2:
        return 0
    return _table_for(x).pi(x)


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    return _table_for(n).is_prime(n)


def li_real(x: float) -> float:
    """Principal-value logarithmic integral li(x) = Ei(log x), x > 1."""
    if not x > 1.0 + LI_SINGULARITY_GUARD:
        raise DomainError(f"li_real needs x > 1 + {LI_SINGULARITY_GUARD:g}, got {x!r}")
    return float(special.expi(math.log1p(x - 1.0)))


def pi0(x: float) -> float:
    """pi(x), less 1/2 when x is itself prime."""
    n = math.floor(x)
    count = float(sieve_pi(n))
    if x == n and is_prime(n):
        count -= 0.5
    return count


def _iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for positive integers."""
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def big_pi0(x: float) -> float:
    """Pi_0(x) = sum over k of pi_0(x^(1/k))/k, the prime-power counting function."""
    if x < 2.0:
        return 0.0
    terms = []
    for k in range(1, math.floor(math.log2(x)) + 1):
        if float(x).is_integer():
            n = int(x)
            r = _iroot(n, k)
            value = pi0(r) if r**k == n else float(sieve_pi(r))
        else:
            value = float(sieve_pi(math.floor(x ** (1.0 / k))))
        terms.append(value / k)
    return math.fsum(terms)


def higher_power_tail(x: float) -> float:
    """sum_{k >= 3} pi_0(x^(1/k))/k."""
    if x < 8.0:
        return 0.0
    terms = []
    for k in range(3, math.floor(math.log2(x)) + 1):
        root = x ** (1.0 / k)
        if float(x).is_integer():
            r = _iroot(int(x), k)
            root = float(r) if r**k == int(x) else r + 0.5
        terms.append(pi0(root) / k)
    return math.fsum(terms)


def higher_power_tail_bound(x: float) -> float:
    """(1/3) pi_0(x^(1/3)) log x / log 2, which dominates `higher_power_tail`."""
    if x < 2.0:
        return 0.0
    root = x ** (1.0 / 3.0)
    if float(x).is_integer():
        r = _iroot(int(x), 3)
        root = float(r) if r**3 == int(x) else r + 0.5
    return pi0(root) / 3.0 * math.log(x) / _LOG2


def li_complex(z: complex, n_terms: Optional[int] = None) -> Tuple[complex, float]:
    """li(e^z) by its asymptotic expansion, with a rigorous error bound.

    li(e^z) = e^z * sum_{k=1}^{n} (k-1)!/z^k + R_n, where the integral along
    the horizontal path from -inf + i Im z gives
    |R_n| <= n! e^{Re z} / d^{n+1}, d = |Im z| if Re z >= 0 else |z|.
    The returned bound adds a floating-point rounding allowance.

    Args:
        z: Argument with nonzero imaginary part.
        n_terms: Terms to keep; by default about d, capped at 60.

    Raises:
        DomainError: Im z == 0, Re z too large for binary64, or n_terms > d
            (the remainder bound would no longer decrease).
    """
    z = complex(z)
    if z.imag == 0.0:
        raise DomainError("li_complex needs Im z != 0")
    if z.real > 700.0:
        raise DomainError(f"Re z = {z.real} too large")
    d = abs(z.imag) if z.real >= 0.0 else abs(z)
    if n_terms is None:
        n_terms = max(1, min(int(d), MAX_ASYMPTOTIC_TERMS))
    if n_terms < 1:
        raise DomainError(f"n_terms must be >= 1, got {n_terms}")
    if n_terms > d:
        raise DomainError(f"n_terms={n_terms} exceeds d={d:.6g}; the remainder bound no longer decreases")

    term = 1.0 / z
    series = [term]
    for k in range(2, n_terms + 1):
        term = term * (k - 1) / z
        series.append(term)
    partial = complex(math.fsum(t.real for t in series), math.fsum(t.imag for t in series))
    scale = cmath.exp(z)
    value = scale * partial

    log_remainder = math.lgamma(n_terms + 1) + z.real - (n_terms + 1) * math.log(d)
    remainder = math.exp(log_remainder)
    magnitude = abs(scale) * math.fsum(abs(t) for t in series)
    rounding = 4.0 * (n_terms + 4) * _EPS * magnitude
    return value, remainder + rounding


def mangoldt_rhs(x: float, K: int, catalog: Optional[ZeroCatalog] = None) -> Tuple[float, float]:
    """Riemann-von Mangoldt right-hand side with the zero sum cut after K pairs.

    li(x) - sum_{k <= K} 2 Re li(x^{rho_k}) + int_x^inf du/((u^2-1) u log u) - log 2.

    Returns:
        (value, error) where error bounds the asymptotic remainders of the
        complex logarithmic integrals and the quadrature error; the effect of
        the omitted zeros is not included.

    Raises:
        CatalogError: K exceeds the catalog size.
    """
    if not x > 1.0:
        raise DomainError(f"mangoldt_rhs needs x > 1, got {x!r}")
    if K < 0:
        raise DomainError(f"K must be >= 0, got {K}")
    if K > 0 and (catalog is None or K > len(catalog)):
        available = 0 if catalog is None else len(catalog)
        raise CatalogError(f"requested {K} zeros but the catalog holds {available}")

    log_x = math.log(x)
    contributions = []
    error = 0.0
    gammas = catalog.ordinates[:K].tolist() if catalog is not None else []
    for gamma in gammas:
        value, bound = li_complex(complex(0.5, gamma) * log_x)
        contributions.append(-2.0 * value.real)
        error += 2.0 * bound
    tail, tail_err = checked_quad(lambda u: 1.0 / ((u * u - 1.0) * u * math.log(u)), x, math.inf)
    total = math.fsum([li_real(x), *contributions, tail, -_LOG2])
    return total, error + tail_err


def dusart_upper(x: float) -> Tuple[float, float]:
    """Upper bounds for pi(x), x >= 4e9: (as printed with 2/log x, with 2/log^2 x)."""
    if x < DUSART_MIN_X:
        raise DomainError(f"Dusart's bound needs x >= {DUSART_MIN_X:g}, got {x!r}")
    L = math.log(x)
    head = x / L
    printed = head * (1.0 + 1.0 / L + 2.0 / L + 7.32 / L**3)
    corrected = head * (1.0 + 1.0 / L + 2.0 / L**2 + 7.32 / L**3)
    return printed, corrected


def classic_upper(x: float) -> float:
    """pi(x) <= 2x/log x for x > 1."""
    if not x > 1.0:
        raise DomainError(f"classic bound needs x > 1, got {x!r}")
    return 2.0 * x / math.log(x)


def prime_gap_lower_bound(u: float) -> float:
    """Lower bound, without the zero sum, for u e^{-u/2}(pi(e^u) - li(e^u)) after the prime-power step.

    -1 - 2/u - 8/u^2 - 58.56/u^3 - log2 u e^{-u/2} - 2u e^{-u/6}/log2
    """
    if not u > 0.0:
        raise DomainError(f"u must be positive, got {u!r}")
    return math.fsum(
        [
            -1.0,
            -2.0 / u,
            -8.0 / u**2,
            -58.56 / u**3,
            -_LOG2 * u * math.exp(-u / 2.0),
            -2.0 * u * math.exp(-u / 6.0) / _LOG2,
        ]
    )
