import pytest

from gaitevo.genome import parse_genome

FIG_EXAMPLE = "D50 B0 F0 D50 F-10 D50 B10 D50 F0 B0 D50 F10 D50 B-10 E0"
ALL_DELAY = "D0 D0 D0 D0 D0 D0 D0 D0 D0 D0 D0 D0 D0 D0 E0"


def padded(text: str) -> str:
    """Pad a short program with D0 genes up to 15 tokens."""
    tokens = text.split()
    return " ".join(tokens + ["D0"] * (15 - len(tokens)))


@pytest.fixture
def fig_genome():
    return parse_genome(FIG_EXAMPLE)


@pytest.fixture
def all_delay():
    return parse_genome(ALL_DELAY)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
