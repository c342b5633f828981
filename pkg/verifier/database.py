# Path: verifier/database.py
"""
SQLite persistence for verification runs.

Tables
------
* runs     – one row per CLI invocation (command, params JSON, exit code)
* results  – one row per check result, in declared check order
* logs     – generic event log (RUN_START, CHECK_FAIL, …)

All tables are auto-created on first use.
"""

import json
import sqlite3
import threading
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

from shared.errors import IoError
from shared.report import ResultRow

# Timestamp format (local time)
DT_FMT = "%Y-%m-%d %H:%M:%S"


class ResultStore:
    """Thread-local SQLite wrapper."""

    _CREATE_SQL = """
        PRAGMA foreign_keys = ON;
        CREATE TABLE IF NOT EXISTS runs (
            id          INTEGER PRIMARY KEY AUTOINCREMENT,
            command     TEXT    NOT NULL,
            params      TEXT    NOT NULL,
            started_at  TEXT    NOT NULL DEFAULT (datetime('now','localtime')),
            ended_at    TEXT,
            exit_code   INTEGER
        );
        CREATE TABLE IF NOT EXISTS results (
            id            INTEGER PRIMARY KEY AUTOINCREMENT,
            run_id        INTEGER NOT NULL REFERENCES runs(id),
            position      INTEGER NOT NULL,
            name          TEXT    NOT NULL,
            status        TEXT    NOT NULL,
            value         TEXT,
            residual      TEXT,
            raw_residual  TEXT,
            scale         TEXT,
            tolerance     TEXT,
            paper_ref     TEXT,
            note          TEXT
        );
        CREATE TABLE IF NOT EXISTS logs (
            id          INTEGER PRIMARY KEY AUTOINCREMENT,
            timestamp   TEXT    NOT NULL DEFAULT (datetime('now','localtime')),
            level       TEXT    NOT NULL,
            event       TEXT    NOT NULL,
            details     TEXT,
            run_id      INTEGER REFERENCES runs(id)
        );
    """

    def __init__(self, path: str | Path = "verify.db") -> None:
        self.path = Path(path)
        self._local = threading.local()
        try:
            self._ensure_schema()
        except sqlite3.Error as exc:
            raise IoError(f"cannot open result store {self.path}: {exc}") from exc

    def _conn(self) -> sqlite3.Connection:
        conn = getattr(self._local, "conn", None)
        if conn is None:
            conn = sqlite3.connect(self.path, check_same_thread=False)
            conn.row_factory = sqlite3.Row
            self._local.conn = conn
        return conn

    @contextmanager
    def _cursor(self) -> Iterator[sqlite3.Cursor]:
        cur = self._conn().cursor()
        try:
            yield cur
            self._conn().commit()
        finally:
            cur.close()

    def _ensure_schema(self) -> None:
        with self._cursor() as cur:
            cur.executescript(self._CREATE_SQL)

    # ----------------- runs -----------------

    def open_run(self, command: str, params: Dict[str, Any]) -> int:
        ts = datetime.now().strftime(DT_FMT)
        with self._cursor() as cur:
            cur.execute(
                "INSERT INTO runs(command,params,started_at) VALUES(?,?,?)",
                (command, json.dumps(params, sort_keys=True), ts),
            )
            run_id = cur.lastrowid
        return int(run_id)

    def close_run(self, run_id: int, exit_code: int) -> None:
        ts = datetime.now().strftime(DT_FMT)
        with self._cursor() as cur:
            cur.execute(
                "UPDATE runs SET ended_at = ?, exit_code = ? WHERE id = ?",
                (ts, exit_code, run_id),
            )

    def get_run(self, run_id: int) -> Optional[Dict[str, Any]]:
        with self._cursor() as cur:
            cur.execute("SELECT * FROM runs WHERE id = ?", (run_id,))
            row = cur.fetchone()
            return dict(row) if row else None

    def list_runs(self) -> List[Dict[str, Any]]:
        with self._cursor() as cur:
            cur.execute("SELECT id, command, started_at, ended_at, exit_code FROM runs ORDER BY id")
            return [dict(row) for row in cur.fetchall()]

    # ----------------- results -----------------

    def add_result(self, run_id: int, row: ResultRow) -> None:
        with self._cursor() as cur:
            cur.execute(
                "INSERT INTO results(run_id,position,name,status,value,residual,raw_residual,"
                "scale,tolerance,paper_ref,note) VALUES(?,?,?,?,?,?,?,?,?,?,?)",
                (
                    run_id,
                    row.order,
                    row.name,
                    row.status.value,
                    row.value,
                    row.residual,
                    row.raw_residual,
                    row.scale,
                    row.tolerance,
                    row.ref,
                    row.note,
                ),
            )

    def get_results(self, run_id: int, status: Optional[str] = None) -> List[Dict[str, Any]]:
        query = "SELECT * FROM results WHERE run_id = ?"
        params: List[Any] = [run_id]
        if status:
            query += " AND status = ?"
            params.append(status)
        query += " ORDER BY position"
        with self._cursor() as cur:
            cur.execute(query, tuple(params))
            return [dict(row) for row in cur.fetchall()]

    # ----------------- generic log -----------------

    def log(
        self,
        level: str,
        event: str,
        details: Dict[str, Any] | str = "",
        run_id: Optional[int] = None,
    ) -> None:
        ts = datetime.now().strftime(DT_FMT)
        details_json = (
            json.dumps(details) if isinstance(details, dict) else str(details)
        )
        with self._cursor() as cur:
            cur.execute(
                "INSERT INTO logs(timestamp,level,event,details,run_id) VALUES(?,?,?,?,?)",
                (ts, level, event, details_json, run_id),
            )

    def get_logs(
        self,
        limit: int = 100,
        offset: int = 0,
        level_filter: Optional[str] = None,
        event_filter: Optional[str] = None,
        run_id: Optional[int] = None,
    ) -> List[Dict[str, Any]]:
        """Logs with optional filtering and pagination, newest first."""
        query = "SELECT id, timestamp, level, event, details, run_id FROM logs"
        params: List[Any] = []
        conditions = []

        if level_filter:
            conditions.append("level = ?")
            params.append(level_filter)
        if event_filter:
            conditions.append("event LIKE ?")
            params.append(f"%{event_filter}%")
        if run_id is not None:
            conditions.append("run_id = ?")
            params.append(run_id)

        if conditions:
            query += " WHERE " + " AND ".join(conditions)

        query += " ORDER BY id DESC LIMIT ? OFFSET ?"
        params.extend([limit, offset])

        with self._cursor() as cur:
            cur.execute(query, tuple(params))
            return [dict(row) for row in cur.fetchall()]
