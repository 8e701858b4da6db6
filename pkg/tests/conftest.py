import os

import pytest

from domivar import load_instance

ACCEPTANCE: dict = {}


def record(key: str, ok: bool, detail: str = ""):
    ACCEPTANCE[key] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key}  {detail}")


@pytest.fixture(scope="session")
def ex25():
    return load_instance("example_2_5")


@pytest.fixture(scope="session")
def chain():
    return load_instance("chain")


@pytest.fixture(scope="session")
def seed():
    return int(os.environ.get("DOMIVAR_SEED", "20240531"))
