# Path: verifier/config.py
"""verifier.config
==================
Run configuration.

Precedence, lowest first: built-in constants, ``settings.json`` at the project
root, ``PJL_*`` environment variables (a ``.env`` file is loaded first), a
``--config`` JSON file, explicit command-line flags.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from dotenv import load_dotenv

from shared.constants import (
    DEFAULT_DIGITS,
    DEFAULT_OUTPUT,
    DEFAULT_TOL,
    DEFAULT_WORKERS,
    ENV_DB,
    ENV_DIGITS,
    ENV_TOL,
    ENV_WORKERS,
    MIN_DIGITS,
    N_MAX_CAP,
    SETTINGS_FILE,
)
from shared.errors import IoError, UsageError

logger = logging.getLogger(__name__)

ROOT = Path(__file__).resolve().parents[1]

COMMANDS = ("moments", "recurrence", "aux", "painleve", "struct-det", "fredholm", "verify-all")
OUTPUTS = ("json", "csv")

Grid = Tuple[float, float, int]


@dataclass(frozen=True)
class RunConfig:
    command: str = "verify-all"
    alpha: str = "0.5"
    beta: str = "0.5"
    t: str = "1"
    n: int = 2
    n_max: int = 4
    digits: int = DEFAULT_DIGITS
    tol: float = DEFAULT_TOL
    grid: Optional[Grid] = None
    case: Optional[int] = None
    output: str = DEFAULT_OUTPUT
    out_path: Optional[str] = None
    db_path: Optional[str] = None
    workers: int = DEFAULT_WORKERS
    verbose: bool = False

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}", choices=",".join(COMMANDS))
        if self.digits < MIN_DIGITS:
            raise UsageError(f"--digits must be >= {MIN_DIGITS}", digits=self.digits)
        if not 1 <= self.n_max <= N_MAX_CAP:
            raise UsageError(f"--n-max must lie in 1..{N_MAX_CAP}", n_max=self.n_max)
        if not 0 <= self.n <= N_MAX_CAP:
            raise UsageError(f"--n must lie in 0..{N_MAX_CAP}", n=self.n)
        if not self.tol > 0:
            raise UsageError("--tol must be positive", tol=self.tol)
        if self.output not in OUTPUTS:
            raise UsageError("--output must be json or csv", output=self.output)
        if self.workers < 1:
            raise UsageError("--workers must be >= 1", workers=self.workers)
        if self.case is not None and self.case not in (1, 2, 3, 4):
            raise UsageError("--case must be 1..4", case=self.case)
        if self.grid is not None:
            t_min, t_max, points = self.grid
            if points < 2:
                raise UsageError("grid needs at least 2 points", points=points)
            if not t_min < t_max:
                raise UsageError("grid needs t_min < t_max", t_min=t_min, t_max=t_max)
        for name in ("alpha", "beta", "t"):
            try:
                float(getattr(self, name))
            except ValueError as exc:
                raise UsageError(f"--{name} is not a number", value=getattr(self, name)) from exc
        return self

    def public_params(self) -> Dict[str, Any]:
        """The parameters echoed into a report (no paths, no worker count)."""
        out = {
            "alpha": self.alpha,
            "beta": self.beta,
            "t": self.t,
            "n": self.n,
            "n_max": self.n_max,
            "digits": self.digits,
            "tol": self.tol,
        }
        if self.grid is not None:
            out["grid"] = list(self.grid)
        if self.case is not None:
            out["case"] = self.case
        return out


def parse_grid(text: Any) -> Optional[Grid]:
    """'t_min:t_max:points' (or a 3-element list) to a grid tuple."""
    if text is None or text == "":
        return None
    parts = text.split(":") if isinstance(text, str) else list(text)
    if len(parts) != 3:
        raise UsageError("grid must be t_min:t_max:points", grid=text)
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError("grid must be t_min:t_max:points", grid=text) from exc


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    if key in ("alpha", "beta", "t"):
        return str(value)
    if key in ("n", "n_max", "digits", "workers", "case"):
        return int(value)
    if key == "tol":
        return float(value)
    if key == "grid":
        return parse_grid(value)
    if key == "verbose":
        return bool(value)
    return value


def _read_json(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"{path} must hold a JSON object")
    return data


def load_settings(path: Optional[Path] = None) -> Dict[str, Any]:
    """Defaults from settings.json; a missing file means no overrides."""
    path = path or ROOT / SETTINGS_FILE
    if not path.exists():
        return {}
    data = _read_json(path)
    logger.debug(f"[SETTINGS_LOADED] {path} keys={sorted(data)}")
    return data


def env_overrides() -> Dict[str, Any]:
    load_dotenv()
    out: Dict[str, Any] = {}
    for key, var in (("digits", ENV_DIGITS), ("tol", ENV_TOL), ("workers", ENV_WORKERS), ("db_path", ENV_DB)):
        value = os.environ.get(var)
        if value:
            out[key] = value
    return out


def build_config(
    flags: Dict[str, Any],
    settings_path: Optional[Path] = None,
) -> RunConfig:
    """Merge every layer into a validated :class:`RunConfig`.

    ``flags`` holds only the options given explicitly on the command line
    (``None`` values are ignored), plus ``config`` for the JSON escape hatch.
    """
    known = {f.name for f in fields(RunConfig)}
    merged: Dict[str, Any] = {}
    layers = [load_settings(settings_path), env_overrides()]
    config_file = flags.get("config")
    if config_file:
        layers.append(_read_json(Path(config_file)))
    layers.append({k: v for k, v in flags.items() if k != "config"})
    for layer in layers:
        for key, value in layer.items():
            if key in known and value is not None:
                try:
                    merged[key] = _coerce(key, value)
                except (TypeError, ValueError) as exc:
                    raise UsageError(f"bad value for {key}", value=value) from exc
    return replace(RunConfig(), **merged).validate()


def describe(config: RunConfig) -> str:
    return json.dumps(asdict(config), sort_keys=True)
