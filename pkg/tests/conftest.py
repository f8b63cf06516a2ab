from __future__ import annotations

import pytest

from acceptance_log import ACCEPTANCE_LINES
from semfilter.fixtures import fixture_path, fixture_text
from semfilter.grammar import load_grammar
from semfilter.logic import parse_theory



def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def phonebook():
    return load_grammar(fixture_text("grammar"))


@pytest.fixture(scope="session")
def theories():
    return {
        name: parse_theory(fixture_text(name), name=label)
        for name, label in (("rules", "rules"), ("defaults", "query_defaults"), ("kb", "kb"),
                            ("constraints", "constraints"))
    }


@pytest.fixture(scope="session")
def lattice_file():
    return str(fixture_path("lattice"))
