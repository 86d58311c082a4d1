import pytest

from dillonlab import catalog


@pytest.fixture(scope="session")
def corpus():
    return catalog.corpus(500, seed=2024)


@pytest.fixture
def rng():
    return catalog.rng_for(12345)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {line}")
