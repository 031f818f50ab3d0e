import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from helpers import DATA  # noqa: E402
from tree_arden.fta import parse_automaton, to_equation_system  # noqa: E402

# bounded enumeration makes single examples slow on a loaded machine
settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture
def worked_example_path():
    return DATA / "worked_example.fta"


@pytest.fixture
def worked_example(worked_example_path):
    return parse_automaton(worked_example_path.read_text(), source=str(worked_example_path))


@pytest.fixture
def worked_example_system(worked_example):
    return to_equation_system(worked_example)


def pytest_terminal_summary(terminalreporter):
    """Print the one-line verdict of every acceptance criterion that ran."""
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
