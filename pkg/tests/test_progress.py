"""Tests for the shared progress state."""

import threading

from lehmancert import progress


def test_job_lifecycle():
    progress.start_job("sum", 4)
    snapshot = progress.get_progress()
    elapsed = snapshot.pop("elapsed")
    assert snapshot == {"name": "sum", "done": 0, "total": 4, "fraction": 0.0, "finished": False}
    assert elapsed >= 0.0
    progress.advance()
    progress.advance(2)
    assert progress.get_progress()["fraction"] == 0.75
    progress.finish_job()
    done = progress.get_progress()
    assert done["finished"]
    assert progress.get_progress()["elapsed"] == done["elapsed"]


def test_restart_resets_counters():
    progress.start_job("first", 2)
    progress.advance(2)
    progress.finish_job()
    progress.start_job("second", 3)
    snapshot = progress.get_progress()
    assert snapshot["name"] == "second"
    assert snapshot["done"] == 0
    assert not snapshot["finished"]


def test_reset_forgets_the_last_job():
    progress.start_job("sum", 2)
    progress.finish_job()
    progress.reset_progress()
    assert progress.get_progress() == {
        "name": None,
        "done": 0,
        "total": 0,
        "fraction": 0.0,
        "finished": False,
        "elapsed": None,
    }


def test_empty_job_has_zero_fraction():
    progress.start_job("empty", 0)
    assert progress.get_progress()["fraction"] == 0.0
    progress.start_job("negative", -3)
    assert progress.get_progress()["total"] == 0


def test_concurrent_advance():
    progress.start_job("threads", 800)
    workers = [threading.Thread(target=lambda: [progress.advance() for _ in range(100)]) for _ in range(8)]
    for w in workers:
        w.start()
    for w in workers:
        w.join()
    assert progress.get_progress()["done"] == 800
