"""Shared progress state for chunked work.

Provides thread-safe access to the progress of the currently running job
(zero sums, scans) so worker threads can report and the CLI can log it.
"""

import logging
import threading
import time
from typing import Optional

# Shared state with thread-safe access
_state_lock = threading.Lock()

_job_name: Optional[str] = None
_total: int = 0
_done: int = 0
_started_at: Optional[float] = None
_finished_at: Optional[float] = None


def start_job(name: str, total: int) -> None:
    """Begin tracking a job.

    Args:
        name: Short label used in log lines.
        total: Number of work units (chunks, grid points) expected.
    """
    global _job_name, _total, _done, _started_at, _finished_at
    with _state_lock:
        _job_name = name
        _total = max(int(total), 0)
        _done = 0
        _started_at = time.monotonic()
        _finished_at = None
    logging.debug(f"{name}: started, {total} units")


def advance(n: int = 1) -> None:
    """Mark `n` further work units as complete."""
    global _done
    with _state_lock:
        _done += n
        name, done, total = _job_name, _done, _total
    logging.debug(f"{name}: {done}/{total}")


def finish_job() -> None:
    """Mark the current job as finished."""
    global _finished_at
    with _state_lock:
        _finished_at = time.monotonic()
        name = _job_name
        elapsed = _finished_at - _started_at if _started_at is not None else 0.0
    logging.debug(f"{name}: finished in {elapsed:.3f}s")


def get_progress() -> dict:
    """Get a snapshot of the current job.

    Returns:
        Dictionary with name, done, total, fraction, finished and elapsed
        (seconds since start, None before the first job) keys.
    """
    with _state_lock:
        fraction = (_done / _total) if _total else 0.0
        if _started_at is None:
            elapsed = None
        else:
            elapsed = (_finished_at if _finished_at is not None else time.monotonic()) - _started_at
        return {
            "name": _job_name,
            "done": _done,
            "total": _total,
            "fraction": fraction,
            "finished": _finished_at is not None,
            "elapsed": elapsed,
        }


def reset_progress() -> None:
    """Forget the last job."""
    global _job_name, _total, _done, _started_at, _finished_at
    with _state_lock:
        _job_name = None
        _total = 0
        _done = 0
        _started_at = None
        _finished_at = None
