"""Self-check suites behind the `verify-lemmas` and `oracle-check` subcommands.

Each check returns a `CheckResult`; a suite passes when every result does.
Kernel identities are compared against scipy quadrature in the scaled
variable y = x sqrt(alpha), so the grid can span many orders of magnitude in
alpha without the integrand collapsing to a spike.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath
import numpy as np

from .config import get
from .kernel_math import (
    checked_quad,
    gaussian_kernel,
    gaussian_tail_with_weight,
    kernel_first_moment,
    kernel_fourier,
    oscillatory_tail_bound,
    truncated_fourier,
)
from .reference_oracle import (
    big_pi0,
    classic_upper,
    higher_power_tail,
    higher_power_tail_bound,
    is_prime,
    li_complex,
    li_real,
    mangoldt_rhs,
    sieve_pi,
)
from .zero_catalog import (
    INVERSE_CUBE_SUM_BOUND,
    INVERSE_SQUARE_SUM_BOUND,
    TWO_PI_E,
    ZeroCatalog,
    count_below,
    inverse_power_sum,
    reciprocal_sum_bracket,
    tail_power_bound,
    zero_density_bracket,
)

logger = logging.getLogger(__name__)

IDENTITY_RTOL = 1e-9
IDENTITY_ATOL = 1e-13
_SCALED_SPAN = 40.0
KNOWN_PRIME_COUNTS = {10: 4, 100: 25, 1000: 168, 10_000: 1229, 1_000_000: 78498, 10_000_000: 664579}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def all_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results)


def _phi(y: float) -> float:
    return math.exp(-0.5 * y * y) / math.sqrt(2.0 * math.pi)


def _close(value: float, expected: float) -> bool:
    return abs(value - expected) <= IDENTITY_RTOL * abs(expected) + IDENTITY_ATOL


def _sampled(
    name: str, samples: int, rng: np.random.Generator, one: Callable[[np.random.Generator], tuple]
) -> CheckResult:
    """Run `one` on `samples` random draws; it returns (ok, description)."""
    failures = []
    for _ in range(samples):
        ok, description = one(rng)
        if not ok:
            failures.append(description)
    if failures:
        return CheckResult(name, False, f"{len(failures)}/{samples} failed, first: {failures[0]}")
    return CheckResult(name, True, f"{samples} samples")


def _log_alpha(rng: np.random.Generator) -> float:
    return float(10.0 ** rng.uniform(0.0, 10.0))


def _fourier_case(rng: np.random.Generator) -> tuple:
    alpha = _log_alpha(rng)
    w = float(rng.uniform(0.1, 4.0))
    c = w * math.sqrt(alpha)
    half, _ = checked_quad(_phi, 0.0, _SCALED_SPAN, weight="cos", wvar=w, epsabs=1e-15)
    closed = kernel_fourier(alpha, c)
    return _close(2.0 * half, closed), f"alpha={alpha:.3g} c={c:.3g}: {2.0 * half!r} vs {closed!r}"


def _first_moment_case(rng: np.random.Generator) -> tuple:
    alpha = _log_alpha(rng)
    Y = float(rng.uniform(0.1, 6.0))
    eta = Y / math.sqrt(alpha)
    scaled, _ = checked_quad(lambda y: y * _phi(y), 0.0, Y, epsabs=1e-15)
    closed = math.sqrt(alpha) * kernel_first_moment(alpha, eta)
    return _close(scaled, closed), f"alpha={alpha:.3g} eta={eta:.3g}: {scaled!r} vs {closed!r}"


def _weighted_tail_case(rng: np.random.Generator) -> tuple:
    # h(x) = 1/x; in the scaled variable the tail is the integral of e^{-y^2/2}/y beyond u
    alpha = _log_alpha(rng)
    u = float(rng.uniform(0.5, 6.0))
    c = u * math.sqrt(alpha)
    tail, err = checked_quad(lambda y: math.exp(-0.5 * y * y) / y, u, u + _SCALED_SPAN, epsabs=1e-15)
    bound = gaussian_tail_with_weight(alpha, c, 1.0 / c)
    return tail + err <= bound * (1.0 + IDENTITY_RTOL), f"u={u:.3g}: {tail!r} > {bound!r}"


def _oscillatory_tail_case(rng: np.random.Generator) -> tuple:
    alpha = _log_alpha(rng)
    Y = float(rng.uniform(0.2, 5.0))
    w = float(rng.uniform(0.5, 20.0))
    eta, c = Y / math.sqrt(alpha), w * math.sqrt(alpha)
    re, re_err = checked_quad(_phi, Y, Y + _SCALED_SPAN, weight="cos", wvar=w, epsabs=1e-15)
    im, im_err = checked_quad(_phi, Y, Y + _SCALED_SPAN, weight="sin", wvar=w, epsabs=1e-15)
    value = math.hypot(re, im) + re_err + im_err
    # bound in the scaled variable: K(eta) min(2/c, 1/(alpha eta)) = phi(Y) min(2/w, 1/Y)
    bound = oscillatory_tail_bound(alpha, eta, c)
    return value <= bound * (1.0 + IDENTITY_RTOL), f"Y={Y:.3g} w={w:.3g}: {value!r} > {bound!r}"


def _truncated_fourier_case(rng: np.random.Generator) -> tuple:
    alpha = _log_alpha(rng)
    Y = float(rng.uniform(0.1, 6.0))
    w = float(rng.uniform(0.0, 4.0))
    eta, c = Y / math.sqrt(alpha), w * math.sqrt(alpha)
    if w == 0.0:
        half, _ = checked_quad(_phi, 0.0, Y, epsabs=1e-15)
    else:
        half, _ = checked_quad(_phi, 0.0, Y, weight="cos", wvar=w, epsabs=1e-15)
    closed = truncated_fourier(alpha, eta, c)
    return _close(2.0 * half, closed), f"alpha={alpha:.3g} eta={eta:.3g} c={c:.3g}: {2.0 * half!r} vs {closed!r}"


def kernel_identity_checks(samples: int = 100, seed: int = 0) -> list[CheckResult]:
    """Closed-form kernel identities and tail bounds against quadrature."""
    rng = np.random.default_rng(seed)
    mass, _ = checked_quad(lambda x: gaussian_kernel(1.0, x), -_SCALED_SPAN, _SCALED_SPAN)
    return [
        CheckResult("kernel normalisation", _close(mass, 1.0), f"integral {mass!r}"),
        _sampled("kernel fourier transform", samples, rng, _fourier_case),
        _sampled("kernel first moment", samples, rng, _first_moment_case),
        _sampled("weighted gaussian tail bound", samples, rng, _weighted_tail_case),
        _sampled("oscillatory tail bound", samples, rng, _oscillatory_tail_case),
        _sampled("truncated fourier identity", samples, rng, _truncated_fourier_case),
    ]


def catalog_checks(catalog: ZeroCatalog) -> list[CheckResult]:
    """Zero-sum lemmas evaluated over the ordinates of `catalog`."""
    results = []
    square = inverse_power_sum(catalog, 2)
    results.append(
        CheckResult(
            "sum 1/gamma^2 bound",
            square < INVERSE_SQUARE_SUM_BOUND,
            f"{square!r} < {INVERSE_SQUARE_SUM_BOUND}",
        )
    )
    cube = inverse_power_sum(catalog, 3)
    results.append(
        CheckResult("sum 1/gamma^3 bound", cube < INVERSE_CUBE_SUM_BOUND, f"{cube!r} < {INVERSE_CUBE_SUM_BOUND}")
    )

    T = catalog.last
    if T >= TWO_PI_E:
        reciprocal = inverse_power_sum(catalog, 1, T)
        lo, hi = reciprocal_sum_bracket(T)
        results.append(
            CheckResult(
                "sum 1/gamma bracket",
                lo <= reciprocal <= hi,
                f"{reciprocal!r} in [{lo:.6f}, {hi:.6f}] at T={T!r}",
            )
        )

        middle = catalog.ordinates[len(catalog) // 2]
        T_mid = max(float(middle), TWO_PI_E)
        if T_mid < T:
            beyond = catalog.ordinates[count_below(catalog, T_mid) :]
            tail = math.fsum((1.0 / beyond**2).tolist())
            bound = tail_power_bound(2, T_mid)
            results.append(
                CheckResult("inverse-square tail bound", tail <= bound, f"{tail!r} <= {bound!r} beyond T={T_mid!r}")
            )
            window = catalog.ordinates[count_below(catalog, T_mid - 1e-12) :]
            direct = math.fsum((1.0 / window**2).tolist())
            lo, hi = zero_density_bracket(lambda x: 1.0 / (x * x), T_mid, T)
            results.append(
                CheckResult(
                    "zero density bracket",
                    lo <= direct <= hi,
                    f"{direct!r} in [{lo:.6g}, {hi:.6g}] on [{T_mid!r}, {T!r}]",
                )
            )
    return results


def verify_lemmas(
    catalog: Optional[ZeroCatalog], samples: int = 100, seed: Optional[int] = None
) -> list[CheckResult]:
    """Run the kernel identity checks and, given a catalog, the zero-sum lemmas."""
    if seed is None:
        seed = int(get("oracle.seed", 20240601))
    results = kernel_identity_checks(samples, seed)
    if catalog is not None:
        results += catalog_checks(catalog)
    for r in results:
        (logger.info if r.passed else logger.error)(str(r))
    return results


def _direct_big_pi0(n: int) -> float:
    """Prime-power count with half weight at a jump, by enumeration."""
    terms = []
    for q in range(2, n + 1):
        if not is_prime(q):
            continue
        power, j = q, 1
        while power <= n:
            terms.append(1.0 / (2 * j) if power == n else 1.0 / j)
            power *= q
            j += 1
    return math.fsum(terms)


def _li_complex_case(rng: np.random.Generator, gammas: np.ndarray) -> tuple:
    gamma = float(rng.choice(gammas))
    x = float(10.0 ** rng.uniform(1.0, 6.0))
    z = complex(0.5, gamma) * math.log(x)
    value, bound = li_complex(z)
    with mpmath.workdps(50):
        reference = -mpmath.e1(-mpmath.mpc(z.real, z.imag))
        diff = float(abs(mpmath.mpc(value.real, value.imag) - reference))
    return diff <= bound, f"z={z!r}: |diff|={diff:.3g} > {bound:.3g}"


def oracle_suite(
    max_x: Optional[int] = None,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    catalog: Optional[ZeroCatalog] = None,
) -> list[CheckResult]:
    """Prime-counting ground truth checks; the explicit formula runs only with >= 1000 zeros."""
    max_x = int(max_x if max_x is not None else get("oracle.max_x", 10_000_000))
    samples = int(samples if samples is not None else get("oracle.samples", 10_000))
    seed = int(seed if seed is not None else get("oracle.seed", 20240601))
    rng = np.random.default_rng(seed)
    results = []

    wrong = [(x, n, sieve_pi(x)) for x, n in KNOWN_PRIME_COUNTS.items() if x <= max_x and sieve_pi(x) != n]
    results.append(CheckResult("known prime counts", not wrong, f"mismatches {wrong}" if wrong else "ok"))

    xs = rng.integers(2, max_x + 1, size=samples).tolist()
    below_li = [x for x in xs if not sieve_pi(x) < li_real(x)]
    results.append(
        CheckResult(
            "pi(x) < li(x)",
            not below_li,
            f"{samples} samples up to {max_x}" if not below_li else f"fails at {below_li[:5]}",
        )
    )
    above_classic = [x for x in xs if sieve_pi(x) > classic_upper(x)]
    results.append(
        CheckResult("pi(x) <= 2x/log x", not above_classic, f"fails at {above_classic[:5]}" if above_classic else "ok")
    )

    powers = sorted({p**k for p in (2, 3, 5, 7, 11, 13) for k in range(1, 14) if p**k <= 10_000})
    mismatched = [n for n in powers if abs(big_pi0(n) - _direct_big_pi0(n)) > 1e-9]
    results.append(
        CheckResult(
            "prime-power count at jumps",
            not mismatched,
            f"{len(powers)} prime powers" if not mismatched else f"fails at {mismatched[:5]}",
        )
    )

    tail_xs = rng.integers(8, min(max_x, 1_000_000) + 1, size=min(samples, 1000)).tolist()
    loose = [x for x in tail_xs if higher_power_tail(x) > higher_power_tail_bound(x)]
    results.append(
        CheckResult("higher prime-power tail bound", not loose, f"fails at {loose[:5]}" if loose else "ok")
    )

    gammas = catalog.ordinates[:1000] if catalog is not None else rng.uniform(14.0, 100.0, size=100)
    results.append(_sampled("li_complex remainder bound", 100, rng, lambda r: _li_complex_case(r, gammas)))

    if catalog is not None and len(catalog) >= 1000:
        target = big_pi0(1000)
        gaps = [abs(mangoldt_rhs(1000.0, K, catalog)[0] - target) for K in (10, 100, 1000)]
        ok = gaps[0] > gaps[1] > gaps[2] and gaps[2] < 0.05
        results.append(CheckResult("explicit formula convergence at x=1000", ok, f"gaps {gaps}"))
    else:
        logger.info("Explicit formula convergence skipped: needs a catalog of at least 1000 zeros")

    for r in results:
        (logger.info if r.passed else logger.error)(str(r))
    return results
