import time
from pathlib import Path

import pytest

from visassist.vocabulary import AliasTable, ClassVocabulary

from _support import CRITERIA, FIXTURES, SESSION


@pytest.fixture(scope="session")
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def vocab() -> ClassVocabulary:
    return ClassVocabulary.load()


@pytest.fixture(scope="session")
def aliases() -> AliasTable:
    return AliasTable.load()


def pytest_sessionstart(session):
    SESSION["start"] = time.monotonic()


def pytest_collection_modifyitems(session, config, items):
    SESSION["files"] = {item.path.name for item in items}
    items.sort(key=lambda item: item.get_closest_marker("run_last") is not None)


def pytest_configure(config):
    config.addinivalue_line("markers", "run_last: run after every other test")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        ok, title = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
