from fractions import Fraction

import pytest

from udgclique import io
from udgclique.generators import gen_instance, matching_cliques, random_udg
from udgclique.model import (CliquePartition, InstanceError, PointSet, UdgGraph, ball, build_udg, components,
                             validate_partition)


def c5():
    return UdgGraph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])


def test_unit_distance_is_an_edge():
    g = build_udg(PointSet([(0, 0), (1, 0), (Fraction(201, 100), 0)]))
    assert g.has_edge(0, 1) and not g.has_edge(1, 2) and not g.has_edge(0, 2)
    assert g.length2(0, 1) == 1


def test_duplicate_points_rejected():
    with pytest.raises(InstanceError):
        build_udg(PointSet([(0, 0), (0, 0)]))


def test_validate_flags_each_problem(path3):
    assert validate_partition(path3, [[0, 1], [2]]).valid
    assert not validate_partition(path3, [[0, 2], [1]]).valid      # not a clique
    assert not validate_partition(path3, [[0, 1]]).valid           # 2 missing
    assert not validate_partition(path3, [[0, 1], [1, 2]]).valid   # overlap


def test_ball_and_components():
    g = c5()
    assert ball(g, 0, 1) == {4, 0, 1}
    assert ball(g, 0, 2) == set(range(5))
    assert ball(g, 0, 2, alive={0, 1, 2}) == {0, 1, 2}
    h = UdgGraph.from_edges(4, [(0, 1)])
    assert sorted(map(sorted, components(h))) == [[0, 1], [2], [3]]


def test_induced_relabels():
    g = c5()
    sub, old = g.induced([3, 1, 2])
    assert old == [1, 2, 3]
    assert sub.edges == [(0, 1), (1, 2)]


def test_weighted_cost():
    p = CliquePartition([[0, 1], [2]])
    assert p.cost([Fraction(1), Fraction(5), Fraction(2)]) == 7
    assert p.cost(None) == 2


def test_instance_json_roundtrip(tmp_path):
    inst = random_udg(12, 2, 3, weights="random")
    path = tmp_path / "i.json"
    io.save_instance(path, inst)
    back = io.load_instance(path)
    assert back.graph.sqlen == inst.graph.sqlen
    assert back.graph.weights == inst.graph.weights
    assert io.instance_digest(back) == io.instance_digest(inst)


def test_generators_are_seeded():
    a = gen_instance("random_udg", 4, n=15, box_side=3)
    b = gen_instance("random_udg", 4, n=15, box_side=3)
    assert a.points.points == b.points.points
    assert matching_cliques(3).n == 6
