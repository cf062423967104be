import pytest

from hybridsearch.domains import Hanoi4, Pancake, SlidingTile, builtin_instance
from hybridsearch.heuristics import parse_heuristic


@pytest.fixture(scope="session")
def tile8():
    return SlidingTile(3, 3)


@pytest.fixture(scope="session")
def tile8_manhattan(tile8):
    return parse_heuristic("manhattan", tile8)


@pytest.fixture(scope="session")
def figure1():
    return builtin_instance("figure1")


def names(space, states):
    return [space.format_state(s) for s in states]


@pytest.fixture(scope="session")
def small_spaces():
    return {"tile": SlidingTile(3, 3), "hanoi": Hanoi4(4), "pancake": Pancake(6)}


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda l: int(l.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
