from pathlib import Path

import pytest

from reliances.parser import parse_rules

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

EXAMPLE1 = """
a(?x) -> r(?x, ?v), b(?v) .
r(?y, ?z1), r(?y, ?z2) -> t(?z1, ?z2) .
a(?t), r(?t, ?u) -> b(?u) .
"""
EXAMPLE2 = """
r(?y, ?y) -> r(?y, ?w), b(?w) .
a(?x) -> r(?x, ?v) .
"""
COLLAPSE = """
r(?x, ?y) -> s(?x, ?x, ?y) .
a(?z) -> s(?z, ?v, ?v), b(?v) .
"""
SWAP = """
b(?x, ?y) -> r(?x, ?y, ?x, ?y), q(?x, ?y) .
a(?u, ?v) -> r(?u, ?v, ?w, ?w), r(?v, ?u, ?w, ?w) .
"""
INVERSE_ROLE = """
a(?x) -> r(?x, ?v), b(?v) .
r(?x, ?y) -> s(?y, ?x) .
s(?x, ?y) -> r(?y, ?x) .
"""
TRANSITIVITY = """
a(?x) -> r(?x, ?v), b(?v) .
r(?x, ?y), r(?y, ?z) -> r(?x, ?z) .
"""


def rules(text):
    return parse_rules(text).rules


def rule(text):
    (r,) = parse_rules(text).rules
    return r


@pytest.fixture
def samples_dir():
    return SAMPLES


ACCEPTANCE_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_LINES] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
