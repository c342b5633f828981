# pv-jacobi-lab/Tests/conftest.py
import pathlib
import sys

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from jacobi.moments import WeightParams  # noqa: E402
from shared.precision import PrecisionContext  # noqa: E402


@pytest.fixture
def ctx() -> PrecisionContext:
    """Unit-test precision."""
    return PrecisionContext.from_digits(40)


@pytest.fixture
def ctx60() -> PrecisionContext:
    """Acceptance-level precision."""
    return PrecisionContext.from_digits(60)


@pytest.fixture
def half() -> WeightParams:
    return WeightParams(0.5, 0.5, 1.0)


@pytest.fixture
def mp(ctx60):
    """The test thread's mpmath context at acceptance precision, for reference values."""
    with ctx60.workspace() as m:
        yield m
