# Path: shared/report.py
"""shared.report
================
Result protocol between the numerical checks and the outside world.

Key Components:
-------------
1. CheckStatus enum - outcome of one result row
2. ResultRow / Report dataclasses - the report schema
3. Codecs - JSON and CSV encoders, plus a decoder for JSON reports

Report schema:
------------
{command, params, results: [{name, value|residual, tolerance, status,
paper_ref, ...}], environment: {digits, versions, timestamp}}

Big floats are written as decimal strings carrying the run's digits, so two
runs with the same configuration produce identical bytes apart from
``environment.timestamp``.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import asdict, dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional

import mpmath
from mpmath.libmp import from_float, to_str

from shared.errors import IoError

logger = logging.getLogger(__name__)

# JSON key under which each row names the identity it checks
REF_KEY = "paper_ref"
VOLATILE_FIELDS = ("timestamp",)
CSV_COLUMNS = (
    "name",
    "value",
    "residual",
    "raw_residual",
    "scale",
    "tolerance",
    "status",
    REF_KEY,
    "note",
)


class CheckStatus(str, Enum):
    PASS = "pass"  # asserted, within tolerance
    FAIL = "fail"  # asserted, outside tolerance
    REPORT = "report"  # report-only (trend tables, conjectures, printed variants)
    ERROR = "error"  # a LabError was raised while computing the row


def fmt(value: Any, digits: int) -> Optional[str]:
    """Serialise a number with ``digits`` significant digits (None passes through)."""
    if value is None:
        return None
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, int)):
        return str(value)
    if hasattr(value, "_mpf_"):
        raw = value._mpf_
    else:
        raw = from_float(float(value))
        digits = min(digits, 17)
    return to_str(raw, digits, min_fixed=-3, max_fixed=3)


@dataclass
class ResultRow:
    name: str
    ref: str
    status: CheckStatus
    value: Optional[str] = None
    residual: Optional[str] = None
    raw_residual: Optional[str] = None
    scale: Optional[str] = None
    tolerance: Optional[str] = None
    note: str = ""
    order: int = 0

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"name": self.name}
        if self.value is not None:
            out["value"] = self.value
        if self.residual is not None:
            out["residual"] = self.residual
            out["raw_residual"] = self.raw_residual
            out["scale"] = self.scale
        out["tolerance"] = self.tolerance
        out["status"] = self.status.value
        out[REF_KEY] = self.ref
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    command: str
    params: Dict[str, Any]
    results: List[ResultRow] = field(default_factory=list)
    environment: Dict[str, Any] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(r.status in (CheckStatus.FAIL, CheckStatus.ERROR) for r in self.results)

    def sorted_rows(self) -> List[ResultRow]:
        return sorted(self.results, key=lambda r: r.order)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "params": self.params,
            "results": [r.to_dict() for r in self.sorted_rows()],
            "environment": self.environment,
        }


def environment(digits: int) -> Dict[str, Any]:
    import numpy
    import scipy

    return {
        "digits": digits,
        "versions": {
            "mpmath": mpmath.__version__,
            "numpy": numpy.__version__,
            "scipy": scipy.__version__,
        },
        "timestamp": datetime.now().isoformat(timespec="seconds"),
    }


def encode_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2)


def encode_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore")
    writer.writeheader()
    for row in report.sorted_rows():
        d = asdict(row)
        d[REF_KEY] = d.pop("ref")
        d["status"] = row.status.value
        writer.writerow({k: ("" if d.get(k) is None else d[k]) for k in CSV_COLUMNS})
    return buf.getvalue()


def decode_json(text: str) -> Dict[str, Any]:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise IoError(f"invalid report JSON: {exc}") from exc


def strip_volatile(doc: Dict[str, Any]) -> Dict[str, Any]:
    """Copy of a decoded report without the fields excluded from comparisons."""
    env = {k: v for k, v in doc.get("environment", {}).items() if k not in VOLATILE_FIELDS}
    return {**doc, "environment": env}


def write_report(report: Report, output: str, out_path: Optional[str]) -> str:
    text = encode_csv(report) if output == "csv" else encode_json(report)
    if out_path:
        try:
            with open(out_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise IoError(f"cannot write {out_path}: {exc}") from exc
        logger.info(f"[REPORT_WRITTEN] {out_path} ({len(report.results)} rows)")
    return text
