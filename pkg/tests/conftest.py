import os
import textwrap

import pytest

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
EXAMPLE_SCENARIO = os.path.join(REPO, "scenarios", "bend_network.yaml")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def write_scenario(tmp_path):
    def _write(text, name="scenario.yaml"):
        path = tmp_path / name
        path.write_text(textwrap.dedent(text))
        return str(path)
    return _write


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
