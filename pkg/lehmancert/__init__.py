"""lehmancert: certified sign changes of pi(x) - li(x).

Zero-table ingestion, Gaussian-kernel error budgets, deterministic zero sums,
certificate assembly, region scanning and desk-scale prime-counting oracles.
"""

from .certifier import Certificate, Verdict, certify, render_certificate, resize_eta, run_length
from .config import get, load_config
from .error_budget import CertParams, ErrorBudget, Variant, budget_for, validate_conditions
from .errors import (
    CatalogError,
    CatalogExhaustedError,
    ConditionViolationError,
    DomainError,
    LehmanCertError,
    QuadratureError,
)
from .logging_config import configure_logging
from .zero_catalog import ZeroCatalog, load_catalog
from .zero_sum import SumResult, evaluate_sums

__all__ = [
    "configure_logging",
    "load_config",
    "get",
    "ZeroCatalog",
    "load_catalog",
    "CertParams",
    "ErrorBudget",
    "Variant",
    "budget_for",
    "validate_conditions",
    "SumResult",
    "evaluate_sums",
    "Certificate",
    "Verdict",
    "certify",
    "resize_eta",
    "run_length",
    "render_certificate",
    "LehmanCertError",
    "CatalogError",
    "CatalogExhaustedError",
    "ConditionViolationError",
    "DomainError",
    "QuadratureError",
]
