import itertools
import random
from fractions import Fraction

import pytest

from udgclique.generators import random_udg, two_kgon
from udgclique.model import Certificate, CertificateReason, CliquePartition, UdgGraph, validate_partition
from udgclique.oracle import exact_cover_weighted
from udgclique.weighted import (GAMMA_DENOM, NotCoBipartite, co_bipartite_split, cneeo, cp_weighted, gamma_of,
                                is_co_bipartite, run_mincp_weighted, split_cost, verify_cneeo, weighted_params)

F = Fraction


def test_gamma_is_largest_dyadic():
    g = gamma_of(1)
    assert g == F(317483, 1 << 20)
    assert g * g + 3 * g <= 1
    nxt = g + F(1, GAMMA_DENOM)
    assert nxt * nxt + 3 * nxt > 1


def test_weighted_params_eps_one():
    p = weighted_params(1)
    assert p.beta == 92
    assert p.j == 1877567 and p.ell == 2014467


def k333():
    parts = [range(0, 3), range(3, 6), range(6, 9)]
    side = {v: i for i, p in enumerate(parts) for v in p}
    return UdgGraph.from_edges(9, [(u, v) for u in range(9) for v in range(u + 1, 9) if side[u] != side[v]])


def test_k333_has_no_cneeo():
    g = k333()
    # no edge can go first: each closed common neighbourhood keeps a whole
    # part of three pairwise non-adjacent vertices, a triangle in the complement
    for u, v in g.edges:
        N = (g.adj[u] & g.adj[v]) | {u, v}
        assert not is_co_bipartite(g, N)
    cert = cneeo(g)
    assert isinstance(cert, Certificate) and cert.reason is CertificateReason.NO_CNEEO
    out = run_mincp_weighted(g, eps=1).outcome
    assert isinstance(out, Certificate) and out.reason is CertificateReason.NO_CNEEO


def test_cneeo_on_random_graphs():
    for seed in range(20):
        g = random_udg(16, 2, seed).graph
        L = cneeo(g)
        assert not isinstance(L, Certificate)
        assert verify_cneeo(g, L)


def test_verify_cneeo_rejects_tampering():
    g = random_udg(12, 1, 4).graph
    L = cneeo(g)
    assert len(L.order) >= 2
    assert not verify_cneeo(g, type(L)(L.order[1:], L.nbhd[1:]))
    wrong = (L.nbhd[0] - {L.order[0][0]},) + L.nbhd[1:]
    assert not verify_cneeo(g, type(L)(L.order, wrong))


def test_co_bipartite_split_and_cost():
    # two cliques {0,1,2} and {3,4} joined by one edge
    edges = [(0, 1), (0, 2), (1, 2), (3, 4), (2, 3)]
    g = UdgGraph.from_edges(5, edges, [F(5), F(1), F(2), F(4), F(3)])
    A, B = co_bipartite_split(g, range(5))
    assert g.is_clique(A) and g.is_clique(B)
    assert 0 in A   # heaviest vertex is anchored
    assert split_cost(g, A, B) == max(g.weight(v) for v in A) + max(g.weight(v) for v in B)
    with pytest.raises(NotCoBipartite):
        co_bipartite_split(k333(), range(9))


def test_two_kgon():
    inst = two_kgon(7)
    g = inst.graph
    opt = exact_cover_weighted(g)
    assert opt.cost(g.weights) == 8
    out = run_mincp_weighted(g, eps=1).outcome
    assert validate_partition(g, out).valid and out.cost(g.weights) <= 24


def test_two_kgon_rejects_even_k():
    with pytest.raises(ValueError):
        two_kgon(6)


def test_cp_weighted_is_exact_on_small_cobipartite():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(2, 7)
        w = [F(rng.randint(1, 9)) for _ in range(n)]
        edges = [(u, v) for u, v in itertools.combinations(range(n), 2)]
        g = UdgGraph.from_edges(n, edges, w)
        res = cp_weighted(g, 100)
        assert res.cost(g.weights) == max(w)


def test_relabelling_keeps_cost():
    # heaviest-first with ties: permuting labels may change blocks but the
    # guarantee and validity must hold for every labelling
    base = random_udg(12, 2, 9, weights=[F(1)] * 12).graph
    opt = exact_cover_weighted(base).cost(base.weights)
    rng = random.Random(0)
    for _ in range(5):
        perm = list(range(12))
        rng.shuffle(perm)
        g = UdgGraph.from_edges(12, {(min(perm[u], perm[v]), max(perm[u], perm[v])): d
                                     for (u, v), d in base.sqlen.items()}, base.weights)
        out = run_mincp_weighted(g, eps=1).outcome
        assert isinstance(out, CliquePartition) and validate_partition(g, out).valid
        assert out.cost(g.weights) <= 3 * opt


def test_weighted_never_beats_oracle():
    for seed in range(10):
        g = random_udg(14, 2, seed, weights="random").graph
        out = run_mincp_weighted(g, eps=1).outcome
        assert out.cost(g.weights) >= exact_cover_weighted(g).cost(g.weights)
