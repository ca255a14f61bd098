"""SQLite archive of issued certificates with pruning.

Certificates are stored as JSON (`certificate_to_dict`) next to a few indexed
columns, newest rows first on listing. When the table grows beyond the
configured maximum the oldest rows are removed down to 80% of it.
"""

import json
import logging
import sqlite3
import time
from typing import Any, Optional

from .certifier import Certificate, certificate_to_dict
from .config import get


def _db_path(db_path: Optional[str]) -> str:
    return db_path if db_path is not None else str(get("store.db_path", "certificates.db"))


def _init_db(conn: sqlite3.Connection) -> None:
    """Ensure the certificates table exists (idempotent)."""
    conn.execute("""
        CREATE TABLE IF NOT EXISTS certificates (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            stored_at REAL NOT NULL,
            variant TEXT NOT NULL,
            omega REAL NOT NULL,
            eta REAL NOT NULL,
            lower_bound REAL,
            verdict TEXT NOT NULL,
            certificate_json TEXT NOT NULL
        )
    """)
    conn.commit()


def store_certificate(cert: Certificate, db_path: Optional[str] = None) -> int:
    """Archive a certificate and return its row id."""
    path = _db_path(db_path)
    payload = certificate_to_dict(cert)
    conn = sqlite3.connect(path)
    try:
        _init_db(conn)
        cursor = conn.execute(
            "INSERT INTO certificates (stored_at, variant, omega, eta, lower_bound, verdict, certificate_json) "
            "VALUES (?, ?, ?, ?, ?, ?, ?)",
            (
                time.time(),
                cert.params.variant.value,
                cert.params.omega,
                cert.params.eta,
                payload["lower_bound"],
                cert.verdict.value,
                json.dumps(payload, sort_keys=True),
            ),
        )
        conn.commit()
        row_id = int(cursor.lastrowid or 0)
    finally:
        conn.close()
    logging.info(f"Stored certificate {row_id} ({cert.verdict.value}) in {path}")
    prune_certificates(path, int(get("store.max_certificates", 10_000)))
    return row_id


def list_certificates(db_path: Optional[str] = None, limit: Optional[int] = None) -> list[dict[str, Any]]:
    """Stored certificates, newest first, each with its id and storage time."""
    conn = sqlite3.connect(_db_path(db_path))
    try:
        _init_db(conn)
        query = "SELECT id, stored_at, certificate_json FROM certificates ORDER BY id DESC"
        params: tuple = ()
        if limit is not None:
            query += " LIMIT ?"
            params = (int(limit),)
        rows = conn.execute(query, params).fetchall()
    finally:
        conn.close()
    entries = []
    for row_id, stored_at, certificate_json in rows:
        try:
            entry = json.loads(certificate_json)
        except json.JSONDecodeError as e:
            logging.error(f"Malformed JSON in stored certificate {row_id}: {e}; skipping")
            continue
        entry["id"] = row_id
        entry["stored_at"] = stored_at
        entries.append(entry)
    return entries


def prune_certificates(db_path: Optional[str] = None, max_rows: Optional[int] = None) -> int:
    """Delete the oldest rows once the count exceeds `max_rows`; returns rows removed."""
    path = _db_path(db_path)
    limit = int(max_rows if max_rows is not None else get("store.max_certificates", 10_000))
    conn = sqlite3.connect(path)
    try:
        _init_db(conn)
        count = conn.execute("SELECT COUNT(*) FROM certificates").fetchone()[0]
        if count <= limit:
            return 0
        # Delete oldest rows to bring count down to 80% of max
        target = int(limit * 0.8)
        to_remove = count - target
        conn.execute(
            "DELETE FROM certificates WHERE id IN (SELECT id FROM certificates ORDER BY id ASC LIMIT ?)",
            (to_remove,),
        )
        conn.commit()
    finally:
        conn.close()
    logging.info(f"Pruned {to_remove} old certificates")
    return to_remove
