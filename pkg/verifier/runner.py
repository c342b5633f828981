# Path: verifier/runner.py
"""verifier.runner
==================
Runs a command's checks on a pool of worker threads and assembles the report.

Each worker takes (position, check) pairs from a queue, evaluates the check on
its own thread-local mpmath context and appends the row under a lock. Rows are
emitted in declared order whatever the completion order was.
"""

from __future__ import annotations

import logging
import queue
import threading
import time
from typing import List, Optional, Tuple

from shared.errors import LabError
from shared.report import CheckStatus, Report, ResultRow, environment, fmt
from verifier.checks import Check, CheckCatalog
from verifier.config import RunConfig
from verifier.database import ResultStore
from verifier.logger import detach, get_logger

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class CheckRunner:
    """Evaluates the checks of one :class:`RunConfig`."""

    def __init__(self, config: RunConfig, store: Optional[ResultStore] = None) -> None:
        self.config = config
        self.store = store
        self.run_id: Optional[int] = None
        self.lock = threading.Lock()  # protects rows and the store cursor order
        self.rows: List[ResultRow] = []

    def run(self) -> Tuple[Report, int]:
        config = self.config
        checks = CheckCatalog(config).checks()
        report = Report(config.command, config.public_params(), environment=environment(config.digits))
        if self.store is not None:
            self.run_id = self.store.open_run(config.command, config.public_params())
            get_logger(self.store, "verifier", self.run_id)
        logger.info(f"[RUN_START] command={config.command} checks={len(checks)} workers={config.workers}")
        started = time.monotonic()

        jobs: "queue.Queue[Tuple[int, Check]]" = queue.Queue()
        for position, check in enumerate(checks):
            jobs.put((position, check))
        workers = [
            threading.Thread(target=self._work, args=(jobs,), name=f"check-worker-{i}", daemon=True)
            for i in range(min(config.workers, max(len(checks), 1)))
        ]
        for w in workers:
            w.start()
        for w in workers:
            w.join()

        report.results = sorted(self.rows, key=lambda r: r.order)
        code = EXIT_FAIL if report.failed else EXIT_OK
        logger.info(
            f"[RUN_DONE] command={config.command} rows={len(report.results)} "
            f"failed={sum(r.status is not CheckStatus.PASS and r.status is not CheckStatus.REPORT for r in report.results)} "
            f"exit={code} seconds={time.monotonic() - started:.1f}"
        )
        if self.store is not None and self.run_id is not None:
            self.store.close_run(self.run_id, code)
            detach(self.store, "verifier")
        return report, code

    def _work(self, jobs: "queue.Queue[Tuple[int, Check]]") -> None:
        while True:
            try:
                position, check = jobs.get_nowait()
            except queue.Empty:
                return
            row = self.evaluate(position, check)
            with self.lock:
                self.rows.append(row)
                if self.store is not None and self.run_id is not None:
                    self.store.add_result(self.run_id, row)

    def evaluate(self, position: int, check: Check) -> ResultRow:
        digits = self.config.digits
        tol = check.tolerance if check.tolerance is not None else self.config.tol
        try:
            outcome = check.compute()
        except LabError as exc:
            reason = f"{type(exc).__name__}: {exc.reason}"
            if not check.asserted:
                logger.info(f"[CHECK_SKIPPED] {check.name}: {reason}")
                return ResultRow(check.name, check.ref, CheckStatus.REPORT, note=f"error: {reason}", order=position)
            logger.warning(f"[CHECK_ERROR] {check.name}: {reason}")
            return ResultRow(
                check.name, check.ref, CheckStatus.ERROR, tolerance=fmt(tol, 3), note=reason, order=position
            )

        row = ResultRow(check.name, check.ref, CheckStatus.REPORT, value=fmt(outcome.value, digits), note=outcome.note, order=position)
        if outcome.gap is not None:
            row.residual = fmt(outcome.gap.relative, 6)
            row.raw_residual = fmt(outcome.gap.raw, 6)
            row.scale = fmt(outcome.gap.scale, 6)
        elif outcome.residual is not None:
            row.residual = fmt(outcome.residual, 6)
            row.raw_residual = row.residual
            row.scale = "1"
        if check.asserted:
            row.tolerance = fmt(tol, 3)
            relative = outcome.relative
            row.status = CheckStatus.PASS if relative is not None and relative <= tol else CheckStatus.FAIL
            if row.status is CheckStatus.FAIL:
                logger.warning(f"[CHECK_FAIL] {check.name}: residual={row.residual} tol={row.tolerance}")
        logger.debug(f"[CHECK_DONE] {check.name} status={row.status.value}")
        return row


def run(config: RunConfig) -> Tuple[Report, int]:
    """Run a validated configuration, with a result store when one is configured."""
    store = ResultStore(config.db_path) if config.db_path else None
    return CheckRunner(config, store).run()
