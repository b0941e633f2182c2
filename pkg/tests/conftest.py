import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

FIXTURES = HERE / "fixtures"

# the oracle generator needs nltk and is run by hand, not collected
collect_ignore = ["fixtures/make_porter_fixture.py"]

VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def verdict(request):
    """Record one acceptance line: ``verdict(number, text, ok)``."""
    lines = request.config.stash.setdefault(VERDICTS, [])

    def record(number, text, ok):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {text}"
        lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
