import json
from fractions import Fraction
from pathlib import Path

import pytest

GOLDEN = Path(__file__).with_name("golden.json")


@pytest.fixture(scope="session")
def golden():
    return json.loads(GOLDEN.read_text())


def F(s):
    return Fraction(s)


ACCEPTANCE_LINES = {}


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion."""
    name = request.node.name
    ACCEPTANCE_LINES[name] = f"FAIL  {name}"

    def record(detail):
        ACCEPTANCE_LINES[name] = f"PASS  {name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES.values(), key=lambda s: int(s.split("_ac")[1].split("_")[0])):
        terminalreporter.write_line(line)
