import pathlib

import pytest

from trivalent.classification import classify_all

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def verdicts():
    # the full sweep takes under a minute and is cached in-process afterwards
    return classify_all()


@pytest.fixture(scope="session")
def golden():
    return {name: (FIXTURES / f"{name}.txt").read_text(encoding="utf-8") for name in ("independent", "schemes", "full")}


_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def record(request):
    """Log one pass/fail line for the terminal summary."""
    lines = request.config.stash[_LINES]

    def log(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        lines.append((number, line))

    return log


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
