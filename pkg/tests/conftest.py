import json

import pytest

from helpers import triangle_with_whiskers
from woglin.graphs import graph_to_dict


@pytest.fixture
def whiskers():
    return triangle_with_whiskers()


@pytest.fixture
def whiskers_file(tmp_path):
    path = tmp_path / "whiskers.json"
    path.write_text(json.dumps(graph_to_dict(triangle_with_whiskers())))
    return path


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
