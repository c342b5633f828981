"""tests/test_database.py – unit tests for verifier.database and verifier.logger"""

import logging
import threading

import pytest

from shared.errors import IoError
from shared.report import CheckStatus, ResultRow
from verifier.database import ResultStore
from verifier.logger import DBHandler, detach, get_logger


@pytest.fixture
def store(tmp_path):
    return ResultStore(tmp_path / "verify.db")


def test_run_lifecycle(store):
    run_id = store.open_run("moments", {"alpha": "0.5"})
    assert store.get_run(run_id)["exit_code"] is None
    store.close_run(run_id, 1)
    run = store.get_run(run_id)
    assert run["exit_code"] == 1
    assert run["params"] == '{"alpha": "0.5"}'
    assert [r["id"] for r in store.list_runs()] == [run_id]
    assert store.get_run(run_id + 1) is None


def test_results_keep_declared_order(store):
    run_id = store.open_run("aux", {})
    store.add_result(run_id, ResultRow("b", "ref", CheckStatus.FAIL, residual="1", order=1))
    store.add_result(run_id, ResultRow("a", "ref", CheckStatus.PASS, value="2", order=0))
    rows = store.get_results(run_id)
    assert [r["name"] for r in rows] == ["a", "b"]
    assert rows[0]["paper_ref"] == "ref"
    assert [r["name"] for r in store.get_results(run_id, "fail")] == ["b"]


def test_log_filters(store):
    run_id = store.open_run("aux", {})
    store.log("INFO", "RUN_START", {"checks": 3}, run_id)
    store.log("WARNING", "CHECK_FAIL", "toda", run_id)
    store.log("INFO", "RUN_DONE")
    assert len(store.get_logs()) == 3
    assert store.get_logs()[0]["event"] == "RUN_DONE"
    assert [r["event"] for r in store.get_logs(level_filter="WARNING")] == ["CHECK_FAIL"]
    assert len(store.get_logs(event_filter="RUN")) == 2
    assert len(store.get_logs(run_id=run_id)) == 2
    assert len(store.get_logs(limit=1, offset=1)) == 1


def test_threads_get_their_own_connection(store):
    run_id = store.open_run("aux", {})

    def work(k: int) -> None:
        store.add_result(run_id, ResultRow(f"row{k}", "ref", CheckStatus.PASS, order=k))

    threads = [threading.Thread(target=work, args=(k,)) for k in range(4)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert len(store.get_results(run_id)) == 4


def test_unopenable_store(tmp_path):
    with pytest.raises(IoError):
        ResultStore(tmp_path / "missing" / "verify.db")


# ---------------------------------------------------------------------------
# DB-backed logging
# ---------------------------------------------------------------------------


def test_db_handler_parses_event_tag(store):
    logger = get_logger(store, "test_db_handler", run_id=None)
    try:
        logger.warning("[CHECK_FAIL] toda residual 1e-3")
        logger.info("plain message")
        logs = store.get_logs()
        assert logs[1]["event"] == "CHECK_FAIL"
        assert "toda residual" in logs[1]["details"]
        assert logs[0]["event"] == "MESSAGE"
    finally:
        detach(store, "test_db_handler")


def test_one_handler_per_store(store):
    get_logger(store, "test_db_single", run_id=1)
    logger = get_logger(store, "test_db_single", run_id=2)
    try:
        handlers = [h for h in logger.handlers if isinstance(h, DBHandler)]
        assert len(handlers) == 1
        assert handlers[0].run_id == 2
    finally:
        detach(store, "test_db_single")
    assert not [h for h in logging.getLogger("test_db_single").handlers if isinstance(h, DBHandler)]
