from fractions import Fraction

import pytest

from conftest import perturbed
from udgclique.generators import matching_cliques, random_udg
from udgclique.metric import (BallContext, PtasParams, Side, check_run, classify_side, derive_params, grow_ball,
                              opt_cp, run_mincp2, verify_certificate)
from udgclique.model import Certificate, CertificateReason, CliquePartition, UdgGraph, validate_partition
from udgclique.oracle import exact_cover

F = Fraction


@pytest.mark.parametrize("eps,beta", [(1, 30), (F(1, 2), 56), (F(1, 4), 112), (F(1, 10), 300), (5, 30)])
def test_derived_radius(eps, beta):
    p = derive_params(eps)
    assert p.beta == beta and p.ell == (4 * beta + 2) ** 2


def test_classify_side_square():
    h = F(1, 2)
    sq = [(0, 0), (h, 0), (h, h), (0, h)]
    from udgclique.model import PointSet, build_udg
    g = build_udg(PointSet(sq + [(F(1, 4), F(1, 4))]))
    # line through 0 and 2 (the diagonal); 1 and 3 lie on opposite sides
    assert classify_side(g, 1, 1, 0, 2) is Side.POSITIVE_I
    assert classify_side(g, 3, 1, 0, 2) is Side.POSITIVE_J
    assert classify_side(g, 4, 1, 0, 2) is Side.POSITIVE_I   # on the line


def test_opt_cp_matches_oracle_on_small_balls():
    for seed in range(30):
        inst = random_udg(12, 2, seed)
        res = opt_cp(BallContext.whole(inst.graph), derive_params(1).ell)
        assert isinstance(res, CliquePartition)
        assert validate_partition(inst.graph, res).valid
        assert len(res) == len(exact_cover(inst.graph))


def test_matching_cliques_optimum_two():
    for t in range(2, 6):
        g = matching_cliques(t).graph
        run = run_mincp2(g, 1)
        assert len(exact_cover(g)) == 2
        assert isinstance(run.outcome, CliquePartition) and len(run.outcome) <= 4


def test_run_invariants_and_lower_bound():
    for seed in range(10):
        inst = random_udg(25, 3, seed)
        run = run_mincp2(inst.graph, 1)
        check_run(inst.graph, run)
        assert run.lower_bound <= len(exact_cover(inst.graph, __import__("udgclique.oracle").oracle.OracleBudget(40)))


def test_ball_too_deep_on_long_path():
    # from an end of a path the clique count doubles within two steps,
    # which outruns a radius cap of 2 at any epsilon below 1
    n = 40
    g = UdgGraph.from_edges(n, {(i, i + 1): F(1) for i in range(n - 1)})
    params = PtasParams(F(1, 10), 2, 100)
    out = run_mincp2(g, params.eps, order=[0], params=params).outcome
    assert isinstance(out, Certificate) and out.reason is CertificateReason.BALL_TOO_DEEP
    assert out.context["center"] == 0 and verify_certificate(out)
    # the default cap is far beyond anything a path reaches
    out = run_mincp2(g, 1).outcome
    assert isinstance(out, CliquePartition) and validate_partition(g, out).valid and len(out) <= 2 * 20


def test_inconsistent_lengths_give_small_certificate():
    g = perturbed(random_udg(25, 2, 100).graph, 0)
    out = run_mincp2(g, 1).outcome
    assert isinstance(out, Certificate)
    assert out.reason is CertificateReason.INCONSISTENT_QUADRILATERAL
    assert len(out.vertices) <= 4 and verify_certificate(out)


def test_unchecked_triangle_is_accepted():
    # a lone triangle never needs a side test, so impossible lengths pass
    g = UdgGraph.from_edges(3, {(0, 1): F(1, 100), (1, 2): F(1, 100), (0, 2): F(1)})
    assert isinstance(run_mincp2(g, 1).outcome, CliquePartition)


def test_fabricated_certificates_replay():
    for seed in range(5):
        g = perturbed(random_udg(20, 2, 50 + seed).graph, seed)
        out = run_mincp2(g, 1).outcome
        if isinstance(out, Certificate):
            assert verify_certificate(out)
        else:
            assert validate_partition(g, out).valid


def test_star_is_not_flagged():
    # K_{1,6} on unit lengths: no four-point test applies, the run still succeeds
    table = {(0, i): F(1) for i in range(1, 7)}
    g = UdgGraph.from_edges(7, table)
    out = run_mincp2(g, 1).outcome
    assert isinstance(out, CliquePartition) and validate_partition(g, out).valid


def test_grow_ball_removes_center():
    g = random_udg(20, 2, 3).graph
    step, part = grow_ball(g, 0, set(range(g.n)), derive_params(1), 2_000_000)
    assert 0 in step.removed and step.center == 0
    assert sorted(v for b in part for v in b) == sorted(step.removed)
