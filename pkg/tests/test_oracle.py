from fractions import Fraction

import pytest

from udgclique.generators import matching_cliques, random_udg
from udgclique.model import BudgetExceeded, UdgGraph, validate_partition
from udgclique.oracle import OracleBudget, enumerate_cover, exact_cover, exact_cover_weighted


def test_small_examples():
    c5 = UdgGraph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert len(exact_cover(c5)) == 3
    for t in range(2, 6):
        assert len(exact_cover(matching_cliques(t).graph)) == 2


def test_unit_weights_agree_with_unweighted():
    for seed in range(200):
        g = random_udg(4 + seed % 11, 2, seed).graph
        a = exact_cover(g)
        b = exact_cover_weighted(g, [Fraction(1)] * g.n)
        assert validate_partition(g, a).valid and validate_partition(g, b).valid
        assert len(a) == b.cost(None)


def test_against_enumeration():
    for seed in range(40):
        g = random_udg(4 + seed % 7, 2, seed, weights="random").graph
        assert len(exact_cover(g)) == len(enumerate_cover(g))
        assert exact_cover_weighted(g).cost(g.weights) == enumerate_cover(g, weighted=True).cost(g.weights)


def test_budget_is_enforced():
    g = random_udg(30, 2, 0).graph
    with pytest.raises(BudgetExceeded):
        exact_cover(g, OracleBudget(max_vertices=10))
