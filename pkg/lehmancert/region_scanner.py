"""Detection sums for locating candidate crossover regions.

f_T(w) = -1 - sum_{0 < gamma <= T} 2 Re(e^{i w gamma}/rho) is the undamped
zero sum; F_T(w) = f_T(w ln 10) takes a base-10 exponent. Regions where F_T
climbs above the zero line are candidates for a sign change of pi(x) - li(x)
near x = 10^w. A high value is only a hint: aliasing at coarse resolution
and the truncation at T both distort the picture, so scan output carries its
grid spacing.
"""

import logging
import math
import os
import xml.etree.ElementTree as ET
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from . import progress
from .config import get
from .double_word import DoubleWord, log10_to_natural
from .errors import DomainError
from .zero_catalog import ZeroCatalog, count_below, require_covered
from .zero_sum import sum_s

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CANDIDATE_MATCH_WIDTH = 0.05
_SVG_NS = "http://www.w3.org/2000/svg"
_SVG_WIDTH = 800
_SVG_HEIGHT = 400
_SVG_MARGIN = 50


@dataclass(frozen=True)
class ScanSeries:
    """F_T sampled on an ascending grid of base-10 exponents."""

    omegas: Tuple[float, ...]
    values: Tuple[float, ...]
    T: float
    zeros_used: int

    def __post_init__(self) -> None:
        if len(self.omegas) != len(self.values):
            raise DomainError("omegas and values must have equal length")
        if not self.omegas:
            raise DomainError("scan series must not be empty")
        if any(b <= a for a, b in zip(self.omegas, self.omegas[1:])):
            raise DomainError("omegas must be strictly ascending")

    def __len__(self) -> int:
        return len(self.omegas)

    @property
    def spacing(self) -> float:
        if len(self.omegas) < 2:
            return 0.0
        return (self.omegas[-1] - self.omegas[0]) / (len(self.omegas) - 1)


@dataclass(frozen=True)
class Candidate:
    omega: float
    value: float
    comment: Optional[str] = None


_BH = "Detected by Bays-Hudson"

KNOWN_CANDIDATES: Tuple[Candidate, ...] = (
    Candidate(41.6522, -0.0659),
    Candidate(84.7316, -0.0597),
    Candidate(136.0262, -0.1127),
    Candidate(154.9746, -0.1389),
    Candidate(157.8305, -0.1502),
    Candidate(175.9619, -0.0859, _BH),
    Candidate(179.0999, -0.0366, _BH),
    Candidate(190.1264, -0.0313, _BH),
    Candidate(214.2382, -0.1174),
    Candidate(259.9694, -0.0626, _BH),
    Candidate(275.7852, -0.1478),
    Candidate(298.0048, -0.0993, _BH),
    Candidate(314.0808, -0.1176),
    Candidate(316.1456, 0.0195, "Bays-Hudson region, 2000"),
    Candidate(370.8233, 0.0453, "te Riele region, 1987"),
    Candidate(1165.2019, 0.0489, "Lehman region, 1966"),
)


def f_t(
    catalog: ZeroCatalog,
    omega: Union[float, DoubleWord],
    T: float,
    chunk_size: Optional[int] = None,
    threads: Optional[int] = None,
) -> float:
    """-1 minus the undamped conjugate-pair sum at natural-log centre `omega`."""
    return -1.0 - sum_s(catalog, math.inf, omega, T, chunk_size=chunk_size, threads=threads, job=None)


def big_f_t(
    catalog: ZeroCatalog,
    omega_log10: float,
    T: float,
    chunk_size: Optional[int] = None,
    threads: Optional[int] = None,
) -> float:
    """f_T at omega_log10 * ln 10 (the product taken in double-word precision)."""
    return f_t(catalog, log10_to_natural(omega_log10), T, chunk_size=chunk_size, threads=threads)


def scan(
    catalog: ZeroCatalog,
    omega_lo: float,
    omega_hi: float,
    points: Optional[int] = None,
    T: Optional[float] = None,
    threads: Optional[int] = None,
) -> ScanSeries:
    """F_T on `points` equally spaced exponents in [omega_lo, omega_hi].

    Grid points run on a thread pool (each evaluation summed inline), results
    are collected in grid order. T defaults to the last catalog ordinate.
    """
    if points is None:
        points = int(get("scan.points", 500))
    if not omega_lo < omega_hi:
        raise DomainError(f"need omega_lo < omega_hi, got [{omega_lo}, {omega_hi}]")
    if points < 2:
        raise DomainError(f"need at least 2 scan points, got {points}")
    height = catalog.last if T is None else T
    require_covered(catalog, height)
    if threads is None:
        threads = int(get("zero_sum.threads", 0))
    if threads <= 0:
        threads = os.cpu_count() or 1

    grid = np.linspace(omega_lo, omega_hi, points).tolist()
    progress.start_job("scan", points)

    def evaluate(w: float) -> float:
        value = big_f_t(catalog, w, height, threads=1)
        progress.advance(1)
        return value

    if threads == 1:
        values = [evaluate(w) for w in grid]
    else:
        with ThreadPoolExecutor(max_workers=threads, thread_name_prefix="scan") as pool:
            values = list(pool.map(evaluate, grid))
    progress.finish_job()
    series = ScanSeries(tuple(grid), tuple(values), height, count_below(catalog, height))
    logger.info(
        f"Scanned [{omega_lo}, {omega_hi}] at {points} points over {series.zeros_used} zeros; "
        f"max F_T {max(values):.4f}"
    )
    return series


def scan_panels(
    catalog: ZeroCatalog,
    omega_lo: float,
    omega_hi: float,
    width: Optional[float] = None,
    points: Optional[int] = None,
    T: Optional[float] = None,
    threads: Optional[int] = None,
) -> list[ScanSeries]:
    """Split [omega_lo, omega_hi] into consecutive panels of `width` and scan each."""
    if width is None:
        width = float(get("scan.panel_width", 20.0))
    if not width > 0.0:
        raise DomainError(f"panel width must be positive, got {width}")
    if not omega_lo < omega_hi:
        raise DomainError(f"need omega_lo < omega_hi, got [{omega_lo}, {omega_hi}]")
    count = max(1, math.ceil((omega_hi - omega_lo) / width - 1e-9))
    panels = []
    for i in range(count):
        lo = omega_lo + i * width
        hi = min(omega_lo + (i + 1) * width, omega_hi)
        panels.append(scan(catalog, lo, hi, points=points, T=T, threads=threads))
    return panels


def _annotation(omega: float) -> Optional[str]:
    for known in KNOWN_CANDIDATES:
        if abs(known.omega - omega) <= CANDIDATE_MATCH_WIDTH:
            return known.comment or f"near {known.omega}"
    return None


def find_candidates(series: ScanSeries, threshold: Optional[float] = None) -> list[Candidate]:
    """Strict interior local maxima of the series with value >= threshold, ascending in omega."""
    if threshold is None:
        threshold = float(get("scan.threshold", -0.16))
    w, v = series.omegas, series.values
    found = []
    for i in range(1, len(v) - 1):
        if v[i] > v[i - 1] and v[i] > v[i + 1] and v[i] >= threshold:
            found.append(Candidate(w[i], v[i], _annotation(w[i])))
    return found


def emit_csv(series: ScanSeries, path: PathLike) -> None:
    """Write "omega,f_value" rows with 15 significant digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("omega,f_value\n")
        for w, v in zip(series.omegas, series.values):
            f.write(f"{w:.15g},{v:.15g}\n")
    logger.debug(f"Wrote {len(series)} rows to {path}")


def read_csv(path: PathLike) -> Tuple[list[float], list[float]]:
    """Parse a file written by `emit_csv`."""
    omegas, values = [], []
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip()
        if header != "omega,f_value":
            raise ValueError(f"{path}: unexpected header {header!r}")
        for line in f:
            if line.strip():
                w, v = line.split(",")
                omegas.append(float(w))
                values.append(float(v))
    return omegas, values


def emit_svg(series: ScanSeries, path: PathLike, title: Optional[str] = None) -> None:
    """Line plot of the series: one polyline, axis labels and the zero line."""
    ET.register_namespace("", _SVG_NS)
    lo_w, hi_w = series.omegas[0], series.omegas[-1]
    lo_v, hi_v = min(min(series.values), 0.0), max(max(series.values), 0.0)
    span_w = (hi_w - lo_w) or 1.0
    span_v = (hi_v - lo_v) or 1.0
    inner_w = _SVG_WIDTH - 2 * _SVG_MARGIN
    inner_h = _SVG_HEIGHT - 2 * _SVG_MARGIN

    def x_of(w: float) -> float:
        return _SVG_MARGIN + (w - lo_w) / span_w * inner_w

    def y_of(v: float) -> float:
        return _SVG_MARGIN + (hi_v - v) / span_v * inner_h

    svg = ET.Element(
        f"{{{_SVG_NS}}}svg",
        {
            "width": str(_SVG_WIDTH),
            "height": str(_SVG_HEIGHT),
            "viewBox": f"0 0 {_SVG_WIDTH} {_SVG_HEIGHT}",
        },
    )
    if title:
        heading = ET.SubElement(svg, f"{{{_SVG_NS}}}text", {"x": str(_SVG_MARGIN), "y": "25"})
        heading.text = title
    bottom = _SVG_HEIGHT - _SVG_MARGIN
    ET.SubElement(
        svg,
        f"{{{_SVG_NS}}}line",
        {"x1": str(_SVG_MARGIN), "y1": str(bottom), "x2": str(_SVG_WIDTH - _SVG_MARGIN), "y2": str(bottom), "stroke": "black"},
    )
    ET.SubElement(
        svg,
        f"{{{_SVG_NS}}}line",
        {"x1": str(_SVG_MARGIN), "y1": str(_SVG_MARGIN), "x2": str(_SVG_MARGIN), "y2": str(bottom), "stroke": "black"},
    )
    zero = f"{y_of(0.0):.3f}"
    ET.SubElement(
        svg,
        f"{{{_SVG_NS}}}line",
        {
            "x1": str(_SVG_MARGIN),
            "y1": zero,
            "x2": str(_SVG_WIDTH - _SVG_MARGIN),
            "y2": zero,
            "stroke": "gray",
            "stroke-dasharray": "4 2",
            "class": "zero-line",
        },
    )
    points = " ".join(f"{x_of(w):.3f},{y_of(v):.3f}" for w, v in zip(series.omegas, series.values))
    ET.SubElement(
        svg,
        f"{{{_SVG_NS}}}polyline",
        {"points": points, "fill": "none", "stroke": "red", "stroke-width": "1"},
    )
    x_label = ET.SubElement(
        svg, f"{{{_SVG_NS}}}text", {"x": str(_SVG_WIDTH // 2), "y": str(_SVG_HEIGHT - 10), "text-anchor": "middle"}
    )
    x_label.text = f"log10 x  [{lo_w:g}, {hi_w:g}]"
    y_label = ET.SubElement(
        svg,
        f"{{{_SVG_NS}}}text",
        {"x": "15", "y": str(_SVG_HEIGHT // 2), "transform": f"rotate(-90 15 {_SVG_HEIGHT // 2})", "text-anchor": "middle"},
    )
    y_label.text = "F_T"
    ET.ElementTree(svg).write(path, encoding="utf-8", xml_declaration=True)
    logger.debug(f"Wrote SVG plot to {path}")


def plot_panels(panels: Sequence[ScanSeries], path: PathLike, dpi: int = 150) -> None:
    """Raster overview of scan panels, one subplot each, via matplotlib."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if not panels:
        raise DomainError("no panels to plot")
    fig, axes = plt.subplots(len(panels), 1, figsize=(10, 2.5 * len(panels)), squeeze=False)
    for ax, series in zip(axes[:, 0], panels):
        ax.plot(series.omegas, series.values, color="red", lw=0.8)
        ax.axhline(0, color="black", lw=0.7)
        ax.set_xlim(series.omegas[0], series.omegas[-1])
        ax.set_ylabel("F_T")
    axes[-1, 0].set_xlabel("log10 x")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    logger.info(f"Wrote {len(panels)} panel plot to {path}")
