"""Certified lower bounds for the Gaussian-weighted prime-counting integral.

A certificate combines the zero sum S* = S1* + S2*, the accuracy bounds
dS1, dS2 and the error budget of the selected variant into

    lower_bound = -1 - S* - dS1 - dS2 - budget.total

A positive lower bound proves pi(x) > li(x) somewhere in
[e^{omega-eta}, e^{omega+eta}]; the run-length figure converts it into a
count of consecutive integers with that property.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Optional, Sequence, Tuple

from .config import get
from .error_budget import CertParams, ErrorBudget, Variant, budget_for
from .errors import DomainError
from .zero_catalog import ZeroCatalog, require_covered
from .zero_sum import SumResult, delta_s1_bound, delta_s2_bound, evaluate_sums

logger = logging.getLogger(__name__)

LN10 = math.log(10.0)
REFINE_DIGITS = 4

# eta grids published with the resize experiments of two regions (descending)
PUBLISHED_ETA_GRIDS: dict[str, Tuple[float, ...]] = {
    "chao_plymen2010": (1.6e-4, 1.4e-4, 1.2e-4, 1.063e-4, 1.061e-4, 1.060e-4, 1.050e-4),
    "saouter_demichel2010": (2.28333e-5, 2e-5, 1.8e-5, 1.6e-5, 1.59e-5, 1.58e-5, 1.56e-5),
}


class Verdict(str, Enum):
    POSITIVE = "positive"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PublishedRegion:
    """Parameter set of a published crossover computation."""

    name: str
    omega: float
    eta: float
    alpha: float
    A: float
    zeros: int
    T: Optional[float] = None
    variant: Variant = Variant.LEHMAN

    def params(self, T: Optional[float] = None, rh_mode: bool = False) -> CertParams:
        """CertParams for this region; `T` is required when none was published."""
        height = T if T is not None else self.T
        if height is None:
            raise DomainError(f"region {self.name!r} has no published T; supply one")
        return CertParams(
            alpha=self.alpha,
            omega=self.omega,
            eta=self.eta,
            A=self.A,
            T=height,
            variant=self.variant,
            rh_mode=rh_mode,
        )


PUBLISHED_REGIONS: dict[str, PublishedRegion] = {
    "lehman1966": PublishedRegion("Lehman 1966", 2682.9768, 0.034, 1e7, 170000.0, 12500),
    "te_riele1987": PublishedRegion("te Riele 1987", 853.852286, 0.0045, 2e8, 450000.0, 50000),
    "bays_hudson1999": PublishedRegion("Bays-Hudson 1999", 727.952088813, 0.002, 1e10, 1e7, 1000000),
    "chao_plymen2010": PublishedRegion(
        "Chao-Plymen 2010",
        727.952018,
        1.6e-4,
        1.34e11,
        1.022e7,
        2000000,
        T=1131944.4718,
        variant=Variant.REFINED,
    ),
    "saouter_demichel2010": PublishedRegion(
        "Saouter-Demichel 2010",
        727.95134,
        2.28333e-5,
        6e12,
        6.85e7,
        22000000,
        T=10379599.7274,
        variant=Variant.REFINED,
    ),
    "std2015": PublishedRegion(
        "Saouter-Trudgian-Demichel 2015",
        727.951335426,
        1.41e-6,
        1.6e15,
        1.13e9,
        525000000,
        variant=Variant.STD,
    ),
}


@dataclass(frozen=True)
class Certificate:
    """Outcome of one certification run.

    verdict is POSITIVE exactly when lower_bound > 0; run_length_log10 is 0
    for an inconclusive certificate.
    """

    params: CertParams
    sum: SumResult
    budget: ErrorBudget
    lower_bound: float
    run_length_log10: float
    verdict: Verdict
    notes: Tuple[str, ...] = ()

    @property
    def positive(self) -> bool:
        return self.verdict is Verdict.POSITIVE


@dataclass(frozen=True)
class ResizeRow:
    eta: float
    budget_total: float
    lower_bound: float
    verdict: Verdict


@dataclass(frozen=True)
class ResizeTable:
    """Rows of an eta resize; the zero-sum inputs are shared by every row."""

    sums: SumResult
    rows: Tuple[ResizeRow, ...]
    best_eta: Optional[float]
    refined_eta: Optional[float] = None
    notes: Tuple[str, ...] = field(default=())


def _sum_inputs(
    catalog: Optional[ZeroCatalog],
    params: CertParams,
    s_star_override: Optional[float],
    delta_overrides: Optional[Tuple[Optional[float], Optional[float]]],
    printed_bounds: bool,
    epsilon: Optional[float],
    chunk_size: Optional[int],
    threads: Optional[int],
) -> Tuple[SumResult, list[str]]:
    """S*, dS1, dS2 for `params`, honouring the overrides."""
    notes: list[str] = []
    ds1_override, ds2_override = delta_overrides or (None, None)

    if s_star_override is None:
        if catalog is None:
            raise DomainError("a zero catalog or an S* override is required")
        sums = evaluate_sums(
            catalog,
            params,
            epsilon=epsilon,
            printed_bounds=printed_bounds,
            chunk_size=chunk_size,
            threads=threads,
        )
    else:
        notes.append("S* supplied by override; zero sums not evaluated")
        if catalog is not None:
            require_covered(catalog, params.T)
            if epsilon is None:
                epsilon = catalog.accuracy if printed_bounds else catalog.effective_accuracy
            ds1 = delta_s1_bound(catalog, params, epsilon, printed_bounds)
            ds2 = delta_s2_bound(params, epsilon, catalog, printed_bounds)
        else:
            if epsilon is None:
                epsilon = float(get("catalog.accuracy", 1e-9))
            ds1 = delta_s1_bound(params.T, params, epsilon, printed_bounds)
            ds2 = delta_s2_bound(params, epsilon, None, printed_bounds)
        sums = SumResult(
            s1=math.nan,
            s2=math.nan,
            s_star=float(s_star_override),
            delta_s1=ds1,
            delta_s2=ds2,
            zeros_used=0,
            T_effective=params.T,
        )

    if ds1_override is not None or ds2_override is not None:
        notes.append("accuracy bounds supplied by override")
        sums = SumResult(
            s1=sums.s1,
            s2=sums.s2,
            s_star=sums.s_star,
            delta_s1=sums.delta_s1 if ds1_override is None else float(ds1_override),
            delta_s2=sums.delta_s2 if ds2_override is None else float(ds2_override),
            zeros_used=sums.zeros_used,
            T_effective=sums.T_effective,
        )
    if printed_bounds:
        notes.append("printed accuracy bounds (gamma_min = 14, kappa = 1.0001)")
    return sums, notes


def _lower_bound(sums: SumResult, budget_total: float) -> float:
    return math.fsum([-1.0, -sums.s_star, -sums.delta_s1, -sums.delta_s2, -budget_total])


def _verdict(lower_bound: float) -> Verdict:
    return Verdict.POSITIVE if lower_bound > 0.0 else Verdict.INCONCLUSIVE


def certify(
    catalog: Optional[ZeroCatalog],
    params: CertParams,
    s_star_override: Optional[float] = None,
    delta_overrides: Optional[Tuple[Optional[float], Optional[float]]] = None,
    printed_bounds: bool = False,
    epsilon: Optional[float] = None,
    chunk_size: Optional[int] = None,
    threads: Optional[int] = None,
) -> Certificate:
    """Certified lower bound for the weighted integral at `params`.

    Args:
        catalog: Zero table; may be None when `s_star_override` is given, in
            which case the accuracy bounds use the closed forms in T.
        params: Certification parameters; their variant selects the error terms.
        s_star_override: Replay a published S* instead of summing the catalog.
        delta_overrides: (dS1, dS2); either entry may be None to keep the computed bound.
        printed_bounds: Reproduce the printed accuracy bounds.
        epsilon: Per-ordinate accuracy; defaults to the catalog's.

    Raises:
        ConditionViolationError: The variant's side conditions fail.
        CatalogExhaustedError: T lies beyond the last catalog ordinate.
    """
    budget = budget_for(params)
    sums, notes = _sum_inputs(
        catalog, params, s_star_override, delta_overrides, printed_bounds, epsilon, chunk_size, threads
    )
    lower = _lower_bound(sums, budget.total)
    verdict = _verdict(lower)
    run_log10 = run_length(lower, params.omega, params.eta) if verdict is Verdict.POSITIVE else 0.0
    if params.rh_mode:
        notes.append("assuming the Riemann hypothesis")
    logger.info(f"Certificate ({params.variant.value}): lower bound {lower!r}, {verdict.value}")
    return Certificate(
        params=params,
        sum=sums,
        budget=budget,
        lower_bound=lower,
        run_length_log10=run_log10,
        verdict=verdict,
        notes=tuple(notes),
    )


def _check_grid(eta_grid: Sequence[float]) -> list[float]:
    grid = [float(e) for e in eta_grid]
    if not grid:
        raise DomainError("eta grid must not be empty")
    if any(not (e > 0.0 and math.isfinite(e)) for e in grid):
        raise DomainError("eta grid values must be positive and finite")
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise DomainError("eta grid must be strictly descending")
    return grid


def ceil_significant(x: float, digits: int = REFINE_DIGITS) -> float:
    """Smallest decimal with `digits` significant digits that is >= x."""
    exponent = math.floor(math.log10(x)) - digits + 1
    scaled = round(x / 10.0**exponent, 6)
    return float(f"{math.ceil(scaled)}e{exponent}")


def _refine(
    sums: SumResult, params: CertParams, positive_eta: float, negative_eta: float
) -> Optional[float]:
    """Bisect between a positive and a smaller inconclusive eta."""

    def lower_at(eta: float) -> float:
        return _lower_bound(sums, budget_for(params.with_eta(eta)).total)

    hi, lo = positive_eta, negative_eta
    tolerance = 10.0 ** (math.floor(math.log10(lo)) - REFINE_DIGITS)
    for _ in range(200):
        if hi - lo <= tolerance:
            break
        mid = 0.5 * (hi + lo)
        if lower_at(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    candidate = ceil_significant(hi)
    if candidate <= positive_eta and lower_at(candidate) > 0.0:
        return candidate
    return hi


def resize_eta(
    catalog: Optional[ZeroCatalog],
    params: CertParams,
    eta_grid: Iterable[float],
    s_star_override: Optional[float] = None,
    delta_overrides: Optional[Tuple[Optional[float], Optional[float]]] = None,
    printed_bounds: bool = False,
    epsilon: Optional[float] = None,
    refine: bool = False,
    chunk_size: Optional[int] = None,
    threads: Optional[int] = None,
) -> ResizeTable:
    """Evaluate the certificate along a descending eta grid.

    S*, dS1 and dS2 do not depend on eta and are computed once. best_eta is
    the smallest grid eta with a positive lower bound. With `refine`, the gap
    between the last positive row and the next row is bisected and the
    result rounded up to four significant digits.

    Raises:
        DomainError: Empty, non-positive or non-descending grid.
    """
    grid = _check_grid(list(eta_grid))
    sums, notes = _sum_inputs(
        catalog, params, s_star_override, delta_overrides, printed_bounds, epsilon, chunk_size, threads
    )
    rows = []
    for eta in grid:
        total = budget_for(params.with_eta(eta)).total
        lower = _lower_bound(sums, total)
        rows.append(ResizeRow(eta=eta, budget_total=total, lower_bound=lower, verdict=_verdict(lower)))
        logger.debug(f"eta={eta:g}: total={total:.6e} lower={lower:.9g}")

    positive = [i for i, row in enumerate(rows) if row.verdict is Verdict.POSITIVE]
    best_eta = rows[positive[-1]].eta if positive else None
    refined_eta = None
    if refine and positive and positive[-1] + 1 < len(rows):
        i = positive[-1]
        refined_eta = _refine(sums, params, rows[i].eta, rows[i + 1].eta)
    return ResizeTable(
        sums=sums, rows=tuple(rows), best_eta=best_eta, refined_eta=refined_eta, notes=tuple(notes)
    )


def run_length(delta: float, omega: float, eta: float) -> float:
    """log10 of delta * e^{(omega-eta)/2}, the length of the guaranteed run of integers."""
    if not delta > 0.0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    if omega < eta:
        raise DomainError(f"need omega >= eta, got omega={omega!r}, eta={eta!r}")
    return math.log10(delta) + (omega - eta) / (2.0 * LN10)


def excess_log10(delta: float, omega: float, eta: float) -> float:
    """log10 of delta * e^{(omega-eta)/2} / (omega-eta), the margin of pi over li per integer."""
    if not omega > eta:
        raise DomainError(f"need omega > eta, got omega={omega!r}, eta={eta!r}")
    return run_length(delta, omega, eta) - math.log10(omega - eta)


def render_magnitude(log10_value: float) -> str:
    """Render 10**log10_value as 'd.dddd x 10^k'."""
    k = math.floor(log10_value)
    mantissa = round(10.0 ** (log10_value - k), 4)
    if mantissa >= 10.0:
        mantissa /= 10.0
        k += 1
    return f"{mantissa:.4f} x 10^{k}"


def _fmt(value: float) -> str:
    return "n/a" if math.isnan(value) else repr(value)


def render_certificate(cert: Certificate) -> str:
    """Fixed-layout text report, one `key = value` per line."""
    p, s = cert.params, cert.sum
    lines = [
        f"variant = {p.variant.value}",
        f"rh_mode = {str(p.rh_mode).lower()}",
        f"alpha = {p.alpha!r}",
        f"omega = {p.omega!r}",
        f"eta = {p.eta!r}",
        f"A = {p.A!r}",
        f"T = {p.T!r}",
        f"zeros_used = {s.zeros_used}",
        f"S1* = {_fmt(s.s1)}",
        f"S2* = {_fmt(s.s2)}",
        f"S* = {_fmt(s.s_star)}",
        f"delta_S1 = {s.delta_s1:.6e}",
        f"delta_S2 = {s.delta_s2:.6e}",
    ]
    lines += [f"{name} = {value:.6e}" for name, value in cert.budget.terms]
    lines += [
        f"budget_total = {cert.budget.total:.6e}",
        f"lower_bound = {cert.lower_bound:.9g}",
    ]
    if cert.positive:
        lines += [
            f"run_length = {render_magnitude(cert.run_length_log10)}",
            f"run_length_log10 = {cert.run_length_log10:.8f}",
        ]
        if p.omega > p.eta:
            excess = excess_log10(cert.lower_bound, p.omega, p.eta)
            lines.append(f"excess = {render_magnitude(excess)}")
    lines += [f"note = {note}" for note in cert.notes]
    lines.append(f"VERDICT: {cert.verdict.value}")
    return "\n".join(lines) + "\n"


def render_resize_table(table: ResizeTable) -> str:
    """Text table of a resize run followed by the best eta."""
    lines = [
        f"S* = {_fmt(table.sums.s_star)}",
        f"delta_S1 = {table.sums.delta_s1:.6e}",
        f"delta_S2 = {table.sums.delta_s2:.6e}",
        f"{'eta':>12}  {'R':>14}  {'lower':>16}  verdict",
    ]
    for row in table.rows:
        lines.append(
            f"{row.eta:>12.6g}  {row.budget_total:>14.6e}  {row.lower_bound:>16.9g}  {row.verdict.value}"
        )
    lines.append(f"best_eta = {'none' if table.best_eta is None else repr(table.best_eta)}")
    if table.refined_eta is not None:
        lines.append(f"refined_eta = {table.refined_eta!r}")
    return "\n".join(lines) + "\n"


def _json_float(value: float) -> Optional[float]:
    return None if math.isnan(value) or math.isinf(value) else value


def certificate_to_dict(cert: Certificate) -> dict[str, Any]:
    """Machine-readable form of a certificate (JSON-safe)."""
    p, s = cert.params, cert.sum
    return {
        "params": {
            "variant": p.variant.value,
            "rh_mode": p.rh_mode,
            "alpha": p.alpha,
            "omega": p.omega,
            "eta": p.eta,
            "A": p.A,
            "T": p.T,
        },
        "s1": _json_float(s.s1),
        "s2": _json_float(s.s2),
        "s_star": _json_float(s.s_star),
        "delta_s1": s.delta_s1,
        "delta_s2": s.delta_s2,
        "zeros_used": s.zeros_used,
        "T_effective": s.T_effective,
        "terms": {name: _json_float(value) for name, value in cert.budget.terms},
        "budget_total": _json_float(cert.budget.total),
        "lower_bound": _json_float(cert.lower_bound),
        "run_length_log10": cert.run_length_log10,
        "verdict": cert.verdict.value,
        "notes": list(cert.notes),
    }


def resize_table_to_dict(table: ResizeTable) -> dict[str, Any]:
    return {
        "s_star": _json_float(table.sums.s_star),
        "delta_s1": table.sums.delta_s1,
        "delta_s2": table.sums.delta_s2,
        "rows": [
            {
                "eta": row.eta,
                "budget_total": _json_float(row.budget_total),
                "lower_bound": _json_float(row.lower_bound),
                "verdict": row.verdict.value,
            }
            for row in table.rows
        ],
        "best_eta": table.best_eta,
        "refined_eta": table.refined_eta,
        "notes": list(table.notes),
    }
