"""verifier.logger
=================
Logger that writes to console **and** to the SQLite *logs* table.
"""

from __future__ import annotations

import logging
import re
from typing import Any, Dict, Optional

from verifier.database import ResultStore

_TAG = re.compile(r"^\[([A-Z_]+)\]\s*")


class DBHandler(logging.Handler):
    """A logging.Handler that persists records via ResultStore.log()."""

    def __init__(self, store: ResultStore, run_id: Optional[int] = None) -> None:
        super().__init__()
        self.store = store
        self.run_id = run_id

    def emit(self, record: logging.LogRecord) -> None:  # noqa: D401
        try:
            message = record.getMessage()
            match = _TAG.match(message)
            event = match.group(1) if match else "MESSAGE"
            details: Dict[str, Any] = {"message": message[match.end():] if match else message}
            details.update(
                {
                    k: str(v)
                    for k, v in record.__dict__.items()
                    if k not in logging.LogRecord("", 0, "", 0, "", None, None).__dict__
                    and k not in ("message", "asctime")
                }
            )
            self.store.log(record.levelname, event, details, self.run_id)
        except Exception:
            self.handleError(record)


def get_logger(store: ResultStore, name: str = "verifier", run_id: Optional[int] = None) -> logging.Logger:
    """Return a logger bound to *store* (one DB handler per store path)."""
    logger = logging.getLogger(name)
    logger.setLevel(logging.INFO)

    for h in list(logger.handlers):
        if isinstance(h, DBHandler) and h.store.path == store.path:
            h.run_id = run_id
            return logger
    logger.addHandler(DBHandler(store, run_id))
    return logger


def detach(store: ResultStore, name: str = "verifier") -> None:
    logger = logging.getLogger(name)
    for h in list(logger.handlers):
        if isinstance(h, DBHandler) and h.store.path == store.path:
            logger.removeHandler(h)
