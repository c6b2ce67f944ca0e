"""Durable job store on a single sqlite file.

Jobs are content-addressed: the id is the hash of the canonical payload,
so resubmitting the same problem is a no-op that returns the existing
job.  Workers claim jobs with a lease; a claim is an atomic queued ->
running transition, so each job runs at most once while its lease is
live.  If a worker dies, the expired lease makes the job claimable
again exactly once; a second lost lease marks it failed (poison).
"""

from __future__ import annotations

import json
import sqlite3
import time
from contextlib import closing
from dataclasses import dataclass
from typing import Any, Optional

QUEUED = "queued"
RUNNING = "running"
DONE = "done"
FAILED = "failed"

MAX_ATTEMPTS = 2  # initial claim plus one retry after a lost lease

_SCHEMA = """
CREATE TABLE IF NOT EXISTS jobs (
    id TEXT PRIMARY KEY,
    kind TEXT NOT NULL,
    payload TEXT NOT NULL,
    status TEXT NOT NULL,
    result TEXT,
    error TEXT,
    attempts INTEGER NOT NULL DEFAULT 0,
    enqueued_at REAL NOT NULL,
    started_at REAL,
    finished_at REAL,
    lease_expires_at REAL
);
CREATE INDEX IF NOT EXISTS jobs_status ON jobs (status);
"""


@dataclass(frozen=True)
class JobRecord:
    id: str
    kind: str
    payload: dict
    status: str
    result: Optional[dict]
    error: Optional[str]
    attempts: int


def _record(row: sqlite3.Row) -> JobRecord:
    return JobRecord(
        id=row["id"],
        kind=row["kind"],
        payload=json.loads(row["payload"]),
        status=row["status"],
        result=json.loads(row["result"]) if row["result"] else None,
        error=row["error"],
        attempts=row["attempts"],
    )


class JobStore:
    def __init__(self, path: str):
        self.path = str(path)
        with closing(self._connect()) as conn:
            conn.executescript(_SCHEMA)
            conn.commit()

    def _connect(self) -> sqlite3.Connection:
        conn = sqlite3.connect(self.path, timeout=30.0, isolation_level=None)
        conn.row_factory = sqlite3.Row
        conn.execute("PRAGMA journal_mode=WAL")
        conn.execute("PRAGMA busy_timeout=10000")
        return conn

    def _retry(self, fn):
        """Transient sqlite contention gets a few backed-off retries."""
        delay = 0.05
        for attempt in range(5):
            try:
                return fn()
            except sqlite3.OperationalError:
                if attempt == 4:
                    raise
                time.sleep(delay)
                delay *= 2

    def submit(self, job_id: str, kind: str, payload: dict) -> tuple[JobRecord, bool]:
        """Insert if unseen; returns (record, created)."""

        def run():
            with closing(self._connect()) as conn:
                conn.execute("BEGIN IMMEDIATE")
                cur = conn.execute(
                    "INSERT OR IGNORE INTO jobs (id, kind, payload, status, enqueued_at)"
                    " VALUES (?, ?, ?, ?, ?)",
                    (job_id, kind, json.dumps(payload, sort_keys=True), QUEUED, time.time()),
                )
                created = cur.rowcount == 1
                row = conn.execute("SELECT * FROM jobs WHERE id = ?", (job_id,)).fetchone()
                conn.commit()
                return _record(row), created

        return self._retry(run)

    def get(self, job_id: str) -> Optional[JobRecord]:
        def run():
            with closing(self._connect()) as conn:
                row = conn.execute("SELECT * FROM jobs WHERE id = ?", (job_id,)).fetchone()
                return _record(row) if row else None

        return self._retry(run)

    def claim(self, lease_seconds: float) -> Optional[JobRecord]:
        """Atomically take the oldest runnable job, or None.

        Runnable means queued, or running with an expired lease (the
        worker presumably died).  A job whose lease expired after its
        retry is marked failed instead of being handed out again.
        """

        def run():
            with closing(self._connect()) as conn:
                while True:
                    now = time.time()
                    conn.execute("BEGIN IMMEDIATE")
                    row = conn.execute(
                        "SELECT * FROM jobs WHERE status = ?"
                        " OR (status = ? AND lease_expires_at < ?)"
                        " ORDER BY rowid LIMIT 1",
                        (QUEUED, RUNNING, now),
                    ).fetchone()
                    if row is None:
                        conn.commit()
                        return None
                    if row["status"] == RUNNING and row["attempts"] >= MAX_ATTEMPTS:
                        conn.execute(
                            "UPDATE jobs SET status = ?, error = ?, finished_at = ? WHERE id = ?",
                            (FAILED, "lease expired after retry", now, row["id"]),
                        )
                        conn.commit()
                        continue
                    conn.execute(
                        "UPDATE jobs SET status = ?, attempts = attempts + 1,"
                        " started_at = ?, lease_expires_at = ? WHERE id = ?",
                        (RUNNING, now, now + lease_seconds, row["id"]),
                    )
                    claimed = conn.execute(
                        "SELECT * FROM jobs WHERE id = ?", (row["id"],)
                    ).fetchone()
                    conn.commit()
                    return _record(claimed)

        return self._retry(run)

    def finish(self, job_id: str, result: dict) -> None:
        def run():
            with closing(self._connect()) as conn:
                conn.execute(
                    "UPDATE jobs SET status = ?, result = ?, finished_at = ?,"
                    " lease_expires_at = NULL WHERE id = ? AND status = ?",
                    (DONE, json.dumps(result, sort_keys=True), time.time(), job_id, RUNNING),
                )
                conn.commit()

        self._retry(run)

    def fail(self, job_id: str, error: str) -> None:
        def run():
            with closing(self._connect()) as conn:
                conn.execute(
                    "UPDATE jobs SET status = ?, error = ?, finished_at = ?,"
                    " lease_expires_at = NULL WHERE id = ? AND status = ?",
                    (FAILED, error, time.time(), job_id, RUNNING),
                )
                conn.commit()

        self._retry(run)

    def queue_position(self, job_id: str) -> Optional[int]:
        """1-based position among queued jobs, None when not queued."""

        def run():
            with closing(self._connect()) as conn:
                row = conn.execute(
                    "SELECT rowid FROM jobs WHERE id = ? AND status = ?", (job_id, QUEUED)
                ).fetchone()
                if row is None:
                    return None
                ahead = conn.execute(
                    "SELECT COUNT(*) AS n FROM jobs WHERE status = ? AND rowid <= ?",
                    (QUEUED, row["rowid"]),
                ).fetchone()
                return ahead["n"]

        return self._retry(run)

    def counts(self) -> dict[str, int]:
        def run():
            with closing(self._connect()) as conn:
                rows = conn.execute(
                    "SELECT status, COUNT(*) AS n FROM jobs GROUP BY status"
                ).fetchall()
                out = {status: 0 for status in (QUEUED, RUNNING, DONE, FAILED)}
                for row in rows:
                    out[row["status"]] = row["n"]
                return out

        return self._retry(run)
