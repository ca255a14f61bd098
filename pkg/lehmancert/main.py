"""Command-line entry point for lehmancert.

Subcommands:

    verify-lemmas   kernel identities and zero-sum lemmas against a catalog
    certify         certified lower bound for one parameter set
    resize-eta      certificate along a descending eta grid
    scan            F_T detection sums over a range of base-10 exponents
    zeros-convert   convert a zero table between text and binary formats
    oracle-check    prime-counting ground truth checks

Exit codes: 0 success, 1 failed check, 2 usage error, 3 I/O error.
"""

import argparse
import json
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from . import progress
from .certificate_store import store_certificate
from .certifier import (
    PUBLISHED_ETA_GRIDS,
    PUBLISHED_REGIONS,
    certificate_to_dict,
    certify,
    render_certificate,
    render_resize_table,
    resize_eta,
    resize_table_to_dict,
)
from .checks import CheckResult, all_passed, oracle_suite, verify_lemmas
from .config import get, load_config, set_config
from .error_budget import VARIANT_ALIASES, CertParams, Variant
from .errors import LehmanCertError
from .logging_config import configure_logging
from .reference_oracle import SIEVE_LIMIT, big_pi0, mangoldt_rhs
from .region_scanner import ScanSeries, emit_csv, emit_svg, find_candidates, plot_panels, scan, scan_panels
from .zero_catalog import MAGIC, ZeroCatalog, load_catalog, save_binary, save_text

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(LehmanCertError, ValueError):
    """Flags are missing or inconsistent."""


def _print_header(args: argparse.Namespace, title: str) -> None:
    if args.json:
        return
    print(f"# lehmancert {title}")
    if not args.no_timestamp:
        print(f"# generated {datetime.now().isoformat(timespec='seconds')}")


def _print_json(payload: Any) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _catalog_path(args: argparse.Namespace, required: bool = True) -> Optional[str]:
    path = getattr(args, "zeros", None) or get("catalog.path")
    if required and not path:
        raise UsageError("a zero catalog is required (--zeros or catalog.path / LEHMANCERT_ZEROS_FILE)")
    return path


def _load(path: Optional[str]) -> Optional[ZeroCatalog]:
    if not path:
        return None
    return load_catalog(path)


def _build_params(args: argparse.Namespace) -> CertParams:
    """Parameters from config defaults, then a preset, then explicit flags."""
    values: dict[str, Any] = {
        key: get(f"certify.{key}") for key in ("alpha", "omega", "eta", "A", "T", "variant", "rh_mode")
    }
    if args.preset:
        region = PUBLISHED_REGIONS[args.preset]
        values.update(
            alpha=region.alpha,
            omega=region.omega,
            eta=region.eta,
            A=region.A,
            T=region.T,
            variant=region.variant.value,
        )
    for key in ("alpha", "omega", "eta", "A", "T", "variant"):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if args.rh_mode:
        values["rh_mode"] = True
    if values["T"] is None:
        raise UsageError("no truncation height: pass --T")
    return CertParams(
        alpha=float(values["alpha"]),
        omega=float(values["omega"]),
        eta=float(values["eta"]),
        A=float(values["A"]),
        T=float(values["T"]),
        variant=Variant(values["variant"]),
        rh_mode=bool(values["rh_mode"]),
    )


def _printed_bounds(args: argparse.Namespace) -> bool:
    return bool(args.printed_bounds or get("certify.printed_bounds", False))


def _delta_overrides(args: argparse.Namespace) -> Optional[tuple]:
    if args.delta_s1_override is None and args.delta_s2_override is None:
        return None
    return (args.delta_s1_override, args.delta_s2_override)


def _report_checks(args: argparse.Namespace, title: str, results: list[CheckResult]) -> int:
    passed = all_passed(results)
    if args.json:
        _print_json(
            {
                "passed": passed,
                "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
            }
        )
    else:
        _print_header(args, title)
        for r in results:
            print(r)
        print(f"RESULT: {'all checks passed' if passed else 'checks failed'}")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_verify_lemmas(args: argparse.Namespace) -> int:
    catalog = load_catalog(_catalog_path(args))
    results = verify_lemmas(catalog, samples=args.samples, seed=args.seed)
    return _report_checks(args, "verify-lemmas", results)


def cmd_certify(args: argparse.Namespace) -> int:
    params = _build_params(args)
    path = _catalog_path(args, required=args.s_star_override is None)
    cert = certify(
        _load(path),
        params,
        s_star_override=args.s_star_override,
        delta_overrides=_delta_overrides(args),
        printed_bounds=_printed_bounds(args),
        epsilon=args.epsilon,
        chunk_size=args.chunk_size,
        threads=args.threads,
    )
    if args.store:
        store_certificate(cert)
    if args.json:
        _print_json(certificate_to_dict(cert))
    else:
        _print_header(args, "certificate")
        print(render_certificate(cert), end="")
    return EXIT_OK


def _eta_grid(args: argparse.Namespace) -> list[float]:
    if args.grid:
        try:
            return [float(v) for v in args.grid.split(",") if v.strip()]
        except ValueError:
            raise UsageError(f"invalid --grid {args.grid!r}")
    if args.published_grid:
        if args.preset not in PUBLISHED_ETA_GRIDS:
            raise UsageError(f"no published eta grid for preset {args.preset!r}")
        return list(PUBLISHED_ETA_GRIDS[args.preset])
    raise UsageError("resize-eta needs --grid or --published-grid")


def cmd_resize_eta(args: argparse.Namespace) -> int:
    params = _build_params(args)
    grid = _eta_grid(args)
    path = _catalog_path(args, required=args.s_star_override is None)
    table = resize_eta(
        _load(path),
        params,
        grid,
        s_star_override=args.s_star_override,
        delta_overrides=_delta_overrides(args),
        printed_bounds=_printed_bounds(args),
        epsilon=args.epsilon,
        refine=args.refine,
        chunk_size=args.chunk_size,
        threads=args.threads,
    )
    if args.json:
        _print_json(resize_table_to_dict(table))
    else:
        _print_header(args, "resize-eta")
        print(render_resize_table(table), end="")
    return EXIT_OK


def _numbered(path: str, index: int, count: int) -> str:
    if count == 1:
        return path
    p = Path(path)
    return str(p.with_name(f"{p.stem}_{index:02d}{p.suffix}"))


def cmd_scan(args: argparse.Namespace) -> int:
    catalog = load_catalog(_catalog_path(args))
    panels: list[ScanSeries]
    if args.panel_width is not None:
        panels = scan_panels(catalog, args.lo, args.hi, args.panel_width, args.points, args.T, args.threads)
    else:
        panels = [scan(catalog, args.lo, args.hi, args.points, args.T, args.threads)]

    for i, series in enumerate(panels):
        if args.csv:
            emit_csv(series, _numbered(args.csv, i, len(panels)))
        if args.svg:
            title = f"F_T on [{series.omegas[0]:g}, {series.omegas[-1]:g}], {series.zeros_used} zeros"
            emit_svg(series, _numbered(args.svg, i, len(panels)), title=title)
    if args.png:
        plot_panels(panels, args.png)

    candidates = [c for series in panels for c in find_candidates(series, args.threshold)]
    if args.json:
        _print_json(
            {
                "panels": [
                    {
                        "omegas": list(s.omegas),
                        "values": list(s.values),
                        "T": s.T,
                        "zeros_used": s.zeros_used,
                        "spacing": s.spacing,
                    }
                    for s in panels
                ],
                "candidates": [{"omega": c.omega, "value": c.value, "comment": c.comment} for c in candidates],
            }
        )
        return EXIT_OK

    _print_header(args, "scan")
    for series in panels:
        peak = max(series.values)
        print(
            f"panel [{series.omegas[0]:g}, {series.omegas[-1]:g}] points = {len(series)} "
            f"spacing = {series.spacing:.6g} zeros_used = {series.zeros_used} max = {peak:.4f}"
        )
    if not args.csv:
        print("omega,f_value")
        for series in panels:
            for w, v in zip(series.omegas, series.values):
                print(f"{w:.15g},{v:.15g}")
    for c in candidates:
        print(f"candidate omega = {c.omega:.4f} value = {c.value:+.4f}" + (f" ({c.comment})" if c.comment else ""))
    return EXIT_OK


def cmd_zeros_convert(args: argparse.Namespace) -> int:
    with open(args.input, "rb") as f:
        is_binary = f.read(4) == MAGIC
    target = args.to or ("text" if is_binary else "binary")
    catalog = load_catalog(args.input)
    if target == "binary":
        save_binary(catalog, args.output)
    else:
        save_text(catalog, args.output)
    logging.info(f"Converted {len(catalog)} zeros to {target} at {args.output}")
    if args.json:
        _print_json({"zeros": len(catalog), "accuracy": catalog.accuracy, "format": target, "output": args.output})
    else:
        print(f"zeros = {len(catalog)}")
        print(f"accuracy = {catalog.accuracy!r}")
        print(f"format = {target}")
    return EXIT_OK


def cmd_oracle_check(args: argparse.Namespace) -> int:
    max_x = args.max_x if args.max_x is not None else int(get("oracle.max_x", 10_000_000))
    if max_x > SIEVE_LIMIT:
        raise UsageError(f"--max-x {max_x} exceeds the sieve limit {SIEVE_LIMIT}")
    if max_x < 100:
        raise UsageError("--max-x must be at least 100")
    catalog = _load(_catalog_path(args, required=False))
    results = oracle_suite(max_x=max_x, samples=args.samples, seed=args.seed, catalog=catalog)
    status = _report_checks(args, "oracle-check", results)
    if catalog is not None and not args.json:
        target = big_pi0(1000)
        print(f"Pi_0(1000) = {target!r}")
        print(f"{'K':>6}  {'rhs':>20}  {'|rhs - Pi_0|':>14}")
        for K in (0, 10, 100, 1000):
            if K > len(catalog):
                break
            value, _ = mangoldt_rhs(1000.0, K, catalog)
            print(f"{K:>6}  {value:>20.12f}  {abs(value - target):>14.6e}")
    return status


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--zeros", help="zero table (text or binary)")
    p.add_argument("--preset", choices=sorted(PUBLISHED_REGIONS), help="published parameter set")
    p.add_argument("--variant", choices=[v.value for v in Variant] + sorted(VARIANT_ALIASES), help="error-term family")
    p.add_argument("--alpha", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--A", type=float, dest="A", help="height of verified Riemann hypothesis")
    p.add_argument("--T", type=float, dest="T", help="truncation height of the zero sum")
    p.add_argument("--rh-mode", action="store_true", help="assume the Riemann hypothesis")
    p.add_argument("--printed-bounds", action="store_true", help="reproduce the printed accuracy bounds")
    p.add_argument("--epsilon", type=float, help="per-ordinate accuracy (default: catalog's)")
    p.add_argument("--s-star-override", type=float, help="use this S* instead of summing zeros")
    p.add_argument("--delta-s1-override", type=float)
    p.add_argument("--delta-s2-override", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lehmancert", description="Crossover certificates for pi(x) - li(x)")
    parser.add_argument("--config", help="YAML configuration file")
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    parser.add_argument("--verbose", action="store_true", help="Enable info logging")
    parser.add_argument("--log-file", help="Also write log records to this file")
    parser.add_argument("--threads", type=int, help="worker threads (0 = all cores)")
    parser.add_argument("--chunk-size", type=int, help="ordinates per summation chunk")
    parser.add_argument("--no-timestamp", action="store_true", help="omit the generated-at line")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-lemmas", help="check kernel identities and zero-sum lemmas")
    p.add_argument("--zeros", help="zero table (text or binary)")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_verify_lemmas)

    p = sub.add_parser("certify", help="certified lower bound for one parameter set")
    _add_param_flags(p)
    p.add_argument("--store", action="store_true", help="archive the certificate in the SQLite store")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("resize-eta", help="certificate along a descending eta grid")
    _add_param_flags(p)
    p.add_argument("--grid", help="comma-separated descending eta values")
    p.add_argument("--published-grid", action="store_true", help="use the eta grid published with --preset")
    p.add_argument("--refine", action="store_true", help="bisect to four significant digits")
    p.set_defaults(func=cmd_resize_eta)

    p = sub.add_parser("scan", help="F_T over a range of base-10 exponents")
    p.add_argument("--zeros", help="zero table (text or binary)")
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--points", type=int)
    p.add_argument("--T", type=float, dest="T", help="truncation height (default: last ordinate)")
    p.add_argument("--panel-width", type=float, help="split the range into panels of this width")
    p.add_argument("--threshold", type=float, help="report local maxima at or above this value")
    p.add_argument("--csv", help="CSV output path")
    p.add_argument("--svg", help="SVG output path")
    p.add_argument("--png", help="raster overview of all panels (matplotlib)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("zeros-convert", help="convert a zero table between text and binary")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--to", choices=("binary", "text"), help="target format (default: the other one)")
    p.set_defaults(func=cmd_zeros_convert)

    p = sub.add_parser("oracle-check", help="prime-counting ground truth checks")
    p.add_argument("--zeros", help="zero table for the explicit-formula check")
    p.add_argument("--max-x", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def _log_last_job() -> None:
    state = progress.get_progress()
    if state["name"] is None or not state["finished"]:
        return
    logging.info(f"{state['name']}: {state['done']}/{state['total']} units in {state['elapsed']:.3f}s")


def _run(func: Callable[[argparse.Namespace], int], args: argparse.Namespace) -> int:
    progress.reset_progress()
    try:
        status = func(args)
    except OSError as e:
        logging.error(f"I/O error: {e}")
        return EXIT_IO
    except (LehmanCertError, ValueError) as e:
        logging.error(str(e))
        return EXIT_USAGE
    except Exception as e:
        logging.exception(f"Unexpected error: {e}")
        return EXIT_CHECK_FAILED
    _log_last_job()
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, configure logging and configuration, dispatch the subcommand."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.debug:
        configure_logging(level=logging.DEBUG, log_file=args.log_file)
        logging.info("Debug mode is ON.")
    elif args.verbose:
        configure_logging(level=logging.INFO, log_file=args.log_file)
    else:
        configure_logging(level=logging.WARNING, log_file=args.log_file)

    try:
        config = load_config(args.config)
    except FileNotFoundError as e:
        logging.error(str(e))
        return EXIT_IO
    except ValueError as e:
        logging.error(str(e))
        return EXIT_USAGE
    if args.threads is not None:
        config["zero_sum"]["threads"] = args.threads
    if args.chunk_size is not None:
        config["zero_sum"]["chunk_size"] = args.chunk_size
    set_config(config)

    return _run(args.func, args)


if __name__ == "__main__":
    sys.exit(main())
