import random

import pytest
from hypothesis import strategies as st

from kelleyscope.algebra import Family, GroundSet

ACCEPTANCE_LINES: list[str] = []


def random_family(rng: random.Random, max_ground: int, max_size: int, min_size: int = 1, p: float = 0.4) -> Family:
    n = rng.randint(1, max_ground)
    m = rng.randint(min_size, max_size)
    sets = []
    for _ in range(m):
        atoms = [x for x in range(n) if rng.random() < p]
        sets.append(atoms or [rng.randrange(n)])
    return Family.from_atom_lists(n, sets)


@st.composite
def families(draw, max_ground: int = 6, max_size: int = 6, min_size: int = 1):
    n = draw(st.integers(1, max_ground))
    masks = draw(st.lists(st.integers(1, (1 << n) - 1), min_size=min_size, max_size=max_size))
    g = GroundSet(n)
    return Family.from_atom_lists(g, [[x for x in range(n) if m >> x & 1] for m in masks])


@pytest.fixture
def acceptance_line():
    def record(number: int, ok: bool, text: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
