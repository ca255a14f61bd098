"""Error-term families of the integrated explicit formula and their side conditions.

Four published variants are supported:

    lehman1966            S1..S6
    saouter_demichel2010  S1', S2..S6
    refined               R1..R6 (double summation over 1/rho and 1/(omega rho^2))
    std2015               R1..R5 of the weighted-kernel variant

All terms are magnitudes; a certificate subtracts their total. Terms carrying
the factor e^{(omega+eta)/2} are evaluated in log space and exponentiated once
through `conservative_exp`, so an unusable parameter set produces +inf rather
than an overflow.
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Tuple, Union

from .errors import ConditionViolationError, DomainError
from .kernel_math import conservative_exp, log_gaussian_kernel

TWO_PI_E = 2.0 * math.pi * math.e
LOG2 = math.log(2.0)

# rounded-up constants of the R6 / std R5 terms
R6_FIRST = 8.283
R6_SECOND = 7.152
STD_R5_FIRST = 13.840
STD_R5_SECOND = 11.951
STD_CONTOUR_FACTOR = 1.671


class Variant(str, Enum):
    LEHMAN = "lehman1966"
    SAOUTER_DEMICHEL = "saouter_demichel2010"
    REFINED = "refined"
    STD = "std2015"

    @classmethod
    def _missing_(cls, value: object) -> Optional["Variant"]:
        if isinstance(value, str):
            return VARIANT_ALIASES.get(value.lower())
        return None


# alternative names accepted by Variant(...) and --variant
VARIANT_ALIASES: dict[str, Variant] = {"revers": Variant.REFINED}


@dataclass(frozen=True)
class CertParams:
    """Free parameters of a certification run.

    Attributes:
        alpha: Gaussian sharpness.
        omega: Log-scale centre of the interval.
        eta: Half-width of the interval.
        A: Height up to which the Riemann hypothesis is verified.
        T: Truncation height of the zero sum (2pi e < T).
        variant: Error-term family.
        rh_mode: Assume the Riemann hypothesis globally.
    """

    alpha: float
    omega: float
    eta: float
    A: float
    T: float
    variant: Variant = Variant.REFINED
    rh_mode: bool = False

    def __post_init__(self) -> None:
        for name in ("alpha", "omega", "eta", "A", "T"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
        if self.T <= TWO_PI_E:
            raise DomainError(f"T must exceed 2*pi*e, got {self.T!r}")
        object.__setattr__(self, "variant", Variant(self.variant))

    def with_eta(self, eta: float) -> "CertParams":
        return replace(self, eta=eta)


@dataclass(frozen=True)
class Violation:
    """A side condition that does not hold, with both sides evaluated."""

    condition: str
    lhs: float
    rhs: float

    def __str__(self) -> str:
        return f"{self.condition} (lhs={self.lhs:.6g}, rhs={self.rhs:.6g})"


@dataclass(frozen=True)
class ErrorBudget:
    """Ordered (name, value) error terms and their compensated total."""

    terms: Tuple[Tuple[str, float], ...]
    total: float = field(init=False)

    def __post_init__(self) -> None:
        terms = tuple((str(name), float(value)) for name, value in self.terms)
        for name, value in terms:
            if math.isnan(value) or value < 0.0:
                raise DomainError(f"error term {name} must be non-negative, got {value!r}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "total", math.fsum(value for _, value in terms))

    def __getitem__(self, name: str) -> float:
        for term, value in self.terms:
            if term == name:
                return value
        raise KeyError(name)

    def names(self) -> list[str]:
        return [name for name, _ in self.terms]

    def as_dict(self) -> dict[str, float]:
        return dict(self.terms)


def _exp_sum(*log_terms: float) -> float:
    return math.fsum(conservative_exp(t) for t in log_terms)


def validate_conditions(
    params: CertParams, variant: Optional[Union[Variant, str]] = None
) -> list[Violation]:
    """Return every side condition of the variant that `params` violates.

    In rh_mode the alpha and eta conditions are skipped; the conditions on
    omega - eta (or omega) and T <= A always apply.
    """
    variant = Variant(variant) if variant is not None else params.variant
    alpha, omega, eta, A = params.alpha, params.omega, params.eta, params.A
    violations: list[Violation] = []

    def need(ok: bool, condition: str, lhs: float, rhs: float) -> None:
        if not ok:
            violations.append(Violation(condition, lhs, rhs))

    need(params.T <= A, "T <= A", params.T, A)
    gap = omega - eta

    if variant is Variant.LEHMAN or variant is Variant.SAOUTER_DEMICHEL:
        if variant is Variant.LEHMAN:
            need(gap > 1.0, "omega - eta > 1", gap, 1.0)
        else:
            need(gap > 25.57, "omega - eta > 25.57", gap, 25.57)
        if not params.rh_mode:
            need(4.0 * A / omega <= alpha, "4A/omega <= alpha", 4.0 * A / omega, alpha)
            need(alpha <= A * A, "alpha <= A^2", alpha, A * A)
            need(2.0 * A / alpha <= eta, "2A/alpha <= eta", 2.0 * A / alpha, eta)
            need(eta < omega / 2.0, "eta < omega/2", eta, omega / 2.0)
    else:
        if variant is Variant.REFINED:
            need(gap >= 44.22, "omega - eta >= 44.22", gap, 44.22)
        else:
            need(omega > 73.69, "omega > 73.69", omega, 73.69)
        if not params.rh_mode:
            lower = 5.0 * A / (4.0 * omega)
            need(lower <= alpha, "5A/(4 omega) <= alpha", lower, alpha)
            need(alpha <= A * A, "alpha <= A^2", alpha, A * A)
            need(eta < omega / 100.0, "eta < omega/100", eta, omega / 100.0)
    return violations


def _require_valid(params: CertParams, variant: Variant) -> None:
    violations = validate_conditions(params, variant)
    if violations:
        raise ConditionViolationError(violations)


def truncation_term(params: CertParams) -> float:
    """Shared truncation-at-T term (R4 of the refined and std2015 families)."""
    alpha, omega, T = params.alpha, params.omega, params.T
    bracket = (
        alpha / (math.pi * T * T) * math.log(T / (2.0 * math.pi))
        + 8.0 * math.log(T) / T
        + 4.0 * alpha / T**3
    )
    return conservative_exp(-T * T / (2.0 * alpha)) * bracket * (1.0 + 1.0 / (omega * T))


def refined_terms(params: CertParams) -> ErrorBudget:
    """R1..R6 of the refined bound; R6 is 0 in rh_mode."""
    _require_valid(params, Variant.REFINED)
    alpha, omega, eta, A = params.alpha, params.omega, params.eta, params.A
    gap, span = omega - eta, omega + eta
    damping = 0.5 * alpha * eta * eta

    r1 = (
        2.0 / gap
        + 8.0 / gap**2
        + 58.56 / gap**3
        + LOG2 * span * conservative_exp(-gap / 2.0)
        + 2.0 * span * conservative_exp(-gap / 6.0) / LOG2
    )
    r2 = (0.037 / (omega * math.sqrt(alpha))) * (
        min(0.082 * alpha, 1.0 / eta) * conservative_exp(-damping)
        + (-math.expm1(-damping)) / gap
    )
    r3 = conservative_exp(math.log(0.074) + 0.5 * math.log(alpha) - damping)
    r4 = truncation_term(params)
    r5 = 0.003 / gap**2
    if params.rh_mode:
        r6 = 0.0
    else:
        log_head = math.log1p(22.0 / (A * omega)) + math.log(A * math.log(A))
        r6 = _exp_sum(
            log_head + math.log(R6_FIRST / A) - alpha * eta * eta / 4.0 + span / 2.0,
            log_head + math.log(R6_SECOND * eta) - A * A / (2.0 * alpha) + span / 2.0,
        )
    return ErrorBudget((("R1", r1), ("R2", r2), ("R3", r3), ("R4", r4), ("R5", r5), ("R6", r6)))


def _lehman_s2_to_s6(params: CertParams) -> list[Tuple[str, float]]:
    alpha, omega, eta, A, T = params.alpha, params.omega, params.eta, params.A, params.T
    gap, span = omega - eta, omega + eta
    damping = 0.5 * alpha * eta * eta
    s2 = conservative_exp(math.log(2.0 / (eta * math.sqrt(2.0 * math.pi * alpha))) - damping)
    s3 = conservative_exp(math.log(0.08) + 0.5 * math.log(alpha) - damping)
    s4 = conservative_exp(-T * T / (2.0 * alpha)) * (
        alpha / (math.pi * T * T) * math.log(T / (2.0 * math.pi))
        + 8.0 * math.log(T) / T
        + 4.0 * alpha / T**3
    )
    s5 = 0.05 / gap
    if params.rh_mode:
        s6 = 0.0
    else:
        s6 = conservative_exp(
            math.log(A * math.log(A))
            - A * A / (2.0 * alpha)
            + span / 2.0
            + math.log(4.0 / math.sqrt(alpha) + 15.0 * eta)
        )
    return [("S2", s2), ("S3", s3), ("S4", s4), ("S5", s5), ("S6", s6)]


def lehman_terms(params: CertParams) -> ErrorBudget:
    """S1..S6 of the 1966 bound; S6 is 0 in rh_mode."""
    _require_valid(params, Variant.LEHMAN)
    gap, span = params.omega - params.eta, params.omega + params.eta
    s1 = 3.0 / gap + 4.0 * span * conservative_exp(-gap / 6.0)
    return ErrorBudget(tuple([("S1", s1)] + _lehman_s2_to_s6(params)))


def saouter_demichel_s1(params: CertParams) -> float:
    """S1' = 2/(w-e) + 10.04/(w-e)^2 + log2 (w+e) e^{-(w-e)/2} + (2/log2)(w+e) e^{-(w-e)/6}."""
    gap, span = params.omega - params.eta, params.omega + params.eta
    if not gap > 25.57:
        raise ConditionViolationError([Violation("omega - eta > 25.57", gap, 25.57)])
    return (
        2.0 / gap
        + 10.04 / gap**2
        + LOG2 * span * conservative_exp(-gap / 2.0)
        + 2.0 * span * conservative_exp(-gap / 6.0) / LOG2
    )


def saouter_demichel_terms(params: CertParams) -> ErrorBudget:
    """S1', S2..S6: Lehman's family with the sharper leading term."""
    _require_valid(params, Variant.SAOUTER_DEMICHEL)
    return ErrorBudget(tuple([("S1'", saouter_demichel_s1(params))] + _lehman_s2_to_s6(params)))


def std_terms(params: CertParams) -> ErrorBudget:
    """R1..R5 of the weighted-kernel variant.

    Stated as "+R1 - R2 - R3 - R4 - R5"; all five are returned as
    magnitudes and subtracted by the certificate, which is the one-sided reading.
    In rh_mode the factor e^{(omega+eta)/2} of R5 is replaced by 1.
    """
    _require_valid(params, Variant.STD)
    alpha, omega, eta, A = params.alpha, params.omega, params.eta, params.A
    gap, span = omega - eta, omega + eta
    log_k_eta = log_gaussian_kernel(alpha, eta)

    r1 = conservative_exp(math.log(2.0) - 0.5 * math.log(alpha) + log_k_eta)
    r2 = span * (LOG2 * conservative_exp(-gap / 2.0) + 3.0 * conservative_exp(-gap / 6.0))
    r3 = (
        conservative_exp(math.log(0.19) + log_k_eta)
        + 0.35 / (omega * omega * math.sqrt(alpha)) * (math.log(A / (2.0 * math.pi)) ** 2 + 11.81)
        + 0.00292 / gap**2
    )
    r4 = truncation_term(params)
    shift = 0.0 if params.rh_mode else span / 2.0
    log_head = shift + math.log1p(22.0 / (A * omega)) + math.log(A * math.log(A))
    r5 = _exp_sum(
        log_head + math.log(STD_R5_FIRST / A) - alpha * eta * eta / 4.0,
        log_head + math.log(STD_R5_SECOND * eta) - A * A / (2.0 * alpha),
    )
    return ErrorBudget((("R1", r1), ("R2", r2), ("R3", r3), ("R4", r4), ("R5", r5)))


def budget_for(params: CertParams) -> ErrorBudget:
    """Evaluate the error-term family selected by `params.variant`."""
    if params.variant is Variant.LEHMAN:
        return lehman_terms(params)
    if params.variant is Variant.SAOUTER_DEMICHEL:
        return saouter_demichel_terms(params)
    if params.variant is Variant.STD:
        return std_terms(params)
    return refined_terms(params)


def lehman_s6_at_minimal_eta(params: CertParams) -> float:
    """Lehman's S6 with the smallest admissible eta = 2A/alpha inserted.

    Comparison figure for the refined R6 term, which needs no lower bound on eta.
    """
    alpha, omega, A = params.alpha, params.omega, params.A
    eta = 2.0 * A / alpha
    return conservative_exp(
        math.log(A * math.log(A))
        - A * A / (2.0 * alpha)
        + (omega + eta) / 2.0
        + math.log(4.0 / math.sqrt(alpha) + 15.0 * eta)
    )


def r6_constants() -> Tuple[float, float]:
    """Exact values that R6's 8.283 and 7.152 round up."""
    lead = 4.0 / math.sqrt(2.0 * math.pi)
    e = math.e
    return lead * (1.0 + e / (math.sqrt(e) - 1.0)), lead * e * math.sqrt(e)


def std_r5_constants() -> Tuple[float, float]:
    """Exact values that the weighted-kernel R5's 13.840 and 11.951 round up."""
    first, second = r6_constants()
    return STD_CONTOUR_FACTOR * first, STD_CONTOUR_FACTOR * second
