"""Tables of zeta zero ordinates: ingestion, persistence, indexing and zero-sum lemmas.

A `ZeroCatalog` is an immutable, strictly increasing array of positive
ordinates gamma_n of nontrivial zeros on the critical line, together with a
per-entry accuracy bound epsilon and a provenance string. Besides loading and
saving (text: one decimal per line; binary: "ZZC1" little-endian records), the
module provides the closed-form sum estimates over zeros that the error
analysis relies on: the tail bound for sum 1/gamma^n, the bracket for
sum 1/gamma, and the Backlund-type bracket for sums of decreasing functions.
"""

import logging
import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Tuple, Union

import numpy as np

from .errors import CatalogError, CatalogExhaustedError, DomainError
from .kernel_math import QUAD_RELTOL, checked_quad

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

MAGIC = b"ZZC1"
_HEADER = struct.Struct("<4sQd")
DEFAULT_ACCURACY = 1e-9
FIRST_ORDINATE_FLOOR = 14.1
TWO_PI_E = 2.0 * math.pi * math.e
RECIPROCAL_SUM_SLACK = 0.9321
INVERSE_SQUARE_SUM_BOUND = 2.31050e-2
INVERSE_CUBE_SUM_BOUND = 7.29549e-4


@dataclass(frozen=True)
class ZeroCatalog:
    """Immutable sorted table of zero ordinates with an accuracy bound.

    Attributes:
        ordinates: Read-only float64 array, strictly increasing, first entry > 14.1.
        accuracy: Declared bound on |gamma* - gamma| for every entry.
        source: Free-text provenance; not part of equality.
    """

    ordinates: np.ndarray
    accuracy: float = DEFAULT_ACCURACY
    source: str = ""

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(self.ordinates, dtype=np.float64)
        _validate_ordinates(arr)
        if not (self.accuracy >= 0.0 and math.isfinite(self.accuracy)):
            raise CatalogError(f"accuracy must be finite and >= 0, got {self.accuracy!r}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "ordinates", arr)

    def __len__(self) -> int:
        return int(self.ordinates.shape[0])

    @property
    def first(self) -> float:
        return float(self.ordinates[0])

    @property
    def last(self) -> float:
        return float(self.ordinates[-1])

    @property
    def effective_accuracy(self) -> float:
        """Declared accuracy plus one ulp of the largest ordinate (binary64 rounding)."""
        return self.accuracy + math.ulp(self.last)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZeroCatalog):
            return NotImplemented
        return self.accuracy == other.accuracy and np.array_equal(self.ordinates, other.ordinates)

    def __hash__(self) -> int:
        return hash((len(self), self.first, self.last, self.accuracy))


def _validate_ordinates(arr: np.ndarray) -> None:
    if arr.ndim != 1:
        raise CatalogError("ordinates must be a one-dimensional sequence")
    if arr.shape[0] == 0:
        raise CatalogError("catalog must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise CatalogError("ordinates must be finite")
    if arr[0] <= FIRST_ORDINATE_FLOOR:
        raise CatalogError(f"first ordinate {arr[0]!r} must exceed {FIRST_ORDINATE_FLOOR}")
    steps = np.diff(arr)
    if steps.size and not np.all(steps > 0.0):
        bad = int(np.argmax(steps <= 0.0))
        raise CatalogError(
            f"ordinates not strictly increasing at index {bad + 1}: "
            f"{arr[bad]!r} followed by {arr[bad + 1]!r}"
        )


def load_text(path: PathLike, source: Optional[str] = None) -> ZeroCatalog:
    """Parse a text table with one decimal ordinate per line.

    Lines starting with '#' are comments; a header comment `# accuracy: <value>`
    overrides the default accuracy of 1e-9 and `# source: <text>` sets the
    provenance unless `source` is given. Blank lines are ignored.

    Raises:
        CatalogError: On a parse failure (line number reported), non-monotone
            data or a first ordinate <= 14.1.
    """
    accuracy = DEFAULT_ACCURACY
    header_source: Optional[str] = None
    values: list[float] = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.lower().startswith("accuracy:"):
                    text = body.split(":", 1)[1].strip()
                    try:
                        accuracy = float(text)
                    except ValueError:
                        raise CatalogError(f"{path}:{lineno}: invalid accuracy header {text!r}")
                elif body.lower().startswith("source:"):
                    header_source = body.split(":", 1)[1].strip()
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise CatalogError(f"{path}:{lineno}: cannot parse ordinate {line!r}")
    catalog = ZeroCatalog(
        np.asarray(values, dtype=np.float64), accuracy=accuracy, source=source or header_source or str(path)
    )
    logger.info(f"Loaded {len(catalog)} zeros from {path} (accuracy {accuracy:g})")
    return catalog


def save_text(catalog: ZeroCatalog, path: PathLike) -> None:
    """Write the catalog in the text format, shortest round-trip decimals."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# accuracy: {catalog.accuracy!r}\n")
        if catalog.source:
            f.write(f"# source: {catalog.source}\n")
        for g in catalog.ordinates.tolist():
            f.write(f"{g!r}\n")


def save_binary(catalog: ZeroCatalog, path: PathLike) -> None:
    """Write magic, u64 count, f64 accuracy and the ordinates, all little-endian."""
    with open(path, "wb") as f:
        f.write(_HEADER.pack(MAGIC, len(catalog), float(catalog.accuracy)))
        f.write(catalog.ordinates.astype("<f8").tobytes())
    logger.debug(f"Wrote {len(catalog)} zeros to {path}")


def load_binary(path: PathLike) -> ZeroCatalog:
    """Read a catalog written by `save_binary`; bit-exact round trip.

    Raises:
        CatalogError: Bad magic, truncated file, empty or non-monotone payload.
    """
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise CatalogError(f"{path}: truncated header")
    magic, count, accuracy = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise CatalogError(f"{path}: bad magic {magic!r}")
    if count == 0:
        raise CatalogError(f"{path}: catalog must be non-empty")
    expected = _HEADER.size + 8 * count
    if len(data) < expected:
        raise CatalogError(f"{path}: truncated payload ({len(data)} of {expected} bytes)")
    ordinates = np.frombuffer(data, dtype="<f8", count=count, offset=_HEADER.size)
    return ZeroCatalog(ordinates.astype(np.float64), accuracy=accuracy, source=str(path))


def load_catalog(path: PathLike) -> ZeroCatalog:
    """Load either format, sniffing the binary magic."""
    with open(path, "rb") as f:
        head = f.read(4)
    if head == MAGIC:
        return load_binary(path)
    return load_text(path)


def count_below(catalog: ZeroCatalog, T: float) -> int:
    """Number of ordinates <= T (binary search)."""
    return int(np.searchsorted(catalog.ordinates, T, side="right"))


def ordinates_up_to(catalog: ZeroCatalog, T: float) -> np.ndarray:
    """Read-only view of the ordinates <= T, after checking T is covered by the catalog."""
    require_covered(catalog, T)
    return catalog.ordinates[: count_below(catalog, T)]


def require_covered(catalog: ZeroCatalog, T: float) -> None:
    if T > catalog.last:
        raise CatalogExhaustedError(T, catalog.last)


def inverse_power_sum(catalog: ZeroCatalog, n: int, T: Optional[float] = None) -> float:
    """Compensated sum of 1/gamma**n over 0 < gamma <= T (whole catalog if T is None)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    gammas = catalog.ordinates if T is None else ordinates_up_to(catalog, T)
    return math.fsum((1.0 / gammas**n).tolist())


def tail_power_bound(n: int, T: float) -> float:
    """Upper bound T**(1-n) * log T for the tail sum over gamma > T of 1/gamma**n."""
    if n < 2:
        raise DomainError(f"tail bound needs n >= 2, got {n}")
    if T < TWO_PI_E:
        raise DomainError(f"tail bound needs T >= 2*pi*e, got {T}")
    return T ** (1 - n) * math.log(T)


def reciprocal_sum_bracket(T: float) -> Tuple[float, float]:
    """Interval containing the sum of 1/gamma over 0 < gamma <= T."""
    if T < TWO_PI_E:
        raise DomainError(f"reciprocal sum bracket needs T >= 2*pi*e, got {T}")
    center = math.log(T / (2.0 * math.pi)) ** 2 / (4.0 * math.pi)
    return center - RECIPROCAL_SUM_SLACK, center + RECIPROCAL_SUM_SLACK


def zero_density_bracket(
    f: Callable[[float], float], T1: float, T2: float
) -> Tuple[float, float]:
    """Interval containing the sum of f(gamma) over T1 <= gamma <= T2.

    Main term (1/2pi) * integral of f(x) log(x/2pi), slack
    4 f(T1) log T1 + 2 * integral of f(x)/x. The quadrature error estimates and
    the relative tolerance are added to the slack so the interval stays valid.

    Raises:
        DomainError: Unless 2*pi*e <= T1 < T2 and f is positive and decreasing at the ends.
        QuadratureError: If scipy's adaptive quadrature does not converge.
    """
    if not (TWO_PI_E <= T1 < T2):
        raise DomainError(f"need 2*pi*e <= T1 < T2, got T1={T1}, T2={T2}")
    f1, f2 = f(T1), f(T2)
    if not (f1 > 0.0 and f2 > 0.0 and f2 <= f1):
        raise DomainError("f must be positive and monotone decreasing on [T1, T2]")

    density, err_main = checked_quad(lambda x: f(x) * math.log(x / (2.0 * math.pi)), T1, T2)
    weighted, err_slack = checked_quad(lambda x: f(x) / x, T1, T2)
    main = density / (2.0 * math.pi)
    slack = 4.0 * f1 * math.log(T1) + 2.0 * weighted
    slack += err_main / (2.0 * math.pi) + 2.0 * err_slack + QUAD_RELTOL * (abs(main) + slack)
    return main - slack, main + slack
