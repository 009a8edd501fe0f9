import random
from fractions import Fraction

import pytest

from udgclique.model import UdgGraph

ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> str:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE[criterion] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])


def perturbed(g: UdgGraph, seed: int, share=0.3) -> UdgGraph:
    """Same adjacency, some squared lengths shrunk by a random factor."""
    rng = random.Random(seed)
    table = {}
    for e, length in g.sqlen.items():
        if rng.random() < share:
            length = length * Fraction(rng.randint(1, 1000), 1000)
        table[e] = length
    return UdgGraph.from_edges(g.n, table, g.weights)


@pytest.fixture
def path3():
    return UdgGraph.from_edges(3, [(0, 1), (1, 2)])
