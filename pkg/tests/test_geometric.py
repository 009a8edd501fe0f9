from fractions import Fraction

import numpy as np
import pytest

from udgclique.generators import random_udg
from udgclique.geometric import (CellTooLarge, GridShift, epsilon_to_k, grid_baseline, potential, random_shift,
                                 run_mincp1, separable_repair, split_cells, two_clique_splits)
from udgclique.model import CliquePartition, PointSet, validate_partition
from udgclique.oracle import OracleBudget, exact_cover
from udgclique.predicates import hulls_overlap


def test_k_grows_with_precision():
    assert epsilon_to_k(Fraction(1, 2)) == 32
    assert epsilon_to_k(1) == 16
    with pytest.raises(ValueError):
        epsilon_to_k(0)


def test_cells_are_half_open():
    s = GridShift(4, Fraction(1), Fraction(0))
    assert s.cell((Fraction(1), Fraction(0))) == (0, 0)
    assert s.cell((Fraction(5), Fraction(0))) == (1, 0)
    assert s.cell((Fraction(1) - Fraction(1, 1 << 20), Fraction(0))) == (-1, 0)


def test_split_cells_partition_vertices():
    inst = random_udg(40, 10, 0)
    cells = split_cells(inst.points, random_shift(4, np.random.default_rng(0)))
    vs = sorted(v for c in cells for v in c.vertices)
    assert vs == list(range(40))


def test_cell_budget():
    inst = random_udg(30, 2, 0)
    with pytest.raises(CellTooLarge):
        run_mincp1(inst.points, 1, max_cell=10)


def test_mincp1_never_below_optimum():
    for seed in range(10):
        inst = random_udg(25, 3, seed)
        part = run_mincp1(inst.points, Fraction(1, 2), seed).partition
        assert validate_partition(inst.graph, part).valid
        assert len(part) >= len(exact_cover(inst.graph, OracleBudget(max_vertices=40)))


def test_grid_baseline_valid():
    inst = random_udg(60, 5, 1)
    assert validate_partition(inst.graph, grid_baseline(inst.points)).valid


def test_two_clique_splits_cover_union():
    pts = [(0, 0), (Fraction(1, 2), 0), (1, 0), (Fraction(3, 2), 0)]
    adjacent = lambda u, v: abs(pts[u][0] - pts[v][0]) <= 1
    splits = list(two_clique_splits([0, 1, 2, 3], adjacent))
    assert splits
    for A, B in splits:
        assert sorted(A + B) == [0, 1, 2, 3]


def test_separable_repair_uncrosses():
    # two crossing segments that are both cliques
    ps = PointSet(((0, 0), (Fraction(1, 2), Fraction(1, 2)), (0, Fraction(1, 2)), (Fraction(1, 2), 0)))
    p = CliquePartition([[0, 1], [2, 3]])
    assert hulls_overlap([ps.points[0], ps.points[1]], [ps.points[2], ps.points[3]])
    q = separable_repair(ps, p)
    blocks = list(q)
    assert len(blocks) == 2
    assert not hulls_overlap([ps.points[v] for v in blocks[0]], [ps.points[v] for v in blocks[1]])
    assert potential(ps.points, q) < potential(ps.points, p)
