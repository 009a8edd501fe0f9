"""Command-line front end.

Exit codes: 0 partition (or success), 1 usage / parse error, 2 verification
failed, 3 certificate, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import io
from .generators import GENERATORS, gen_instance
from .geometric import (GridShift, SeparationStuck, epsilon_to_k, grid_baseline, run_mincp1,
                        separable_repair)
from .local import distr_mcp
from .metric import derive_params, run_mincp2, verify_certificate
from .model import (BudgetExceeded, Certificate, CliquePartition, InstanceError, validate_partition)
from .oracle import OracleBudget, exact_cover, exact_cover_weighted
from .weighted import run_mincp_weighted

EXIT_OK, EXIT_USAGE, EXIT_FAILED, EXIT_CERTIFICATE, EXIT_BUDGET = 0, 1, 2, 3, 4
ALGORITHMS = ("mincp1", "mincp2", "weighted", "distributed", "oracle", "grid-baseline")
REPORT_FORMAT = "udgclique/report"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    instance: str
    algo: str
    epsilon: Fraction = Fraction(1, 2)
    seed: int = 0
    workers: int = 1
    max_cell: int = 25
    oracle_vertices: int = 25
    oracle_vertices_weighted: int = 18
    ratio: bool = True
    separable: bool = False
    timing: bool = False
    trace: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {self.algo!r}; choose from {', '.join(ALGORITHMS)}")
        if self.epsilon <= 0:
            raise UsageError("--epsilon must be positive")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _oracle_block(g, weighted: bool, cfg: RunConfig):
    budget = OracleBudget(max_vertices=cfg.oracle_vertices, max_vertices_weighted=cfg.oracle_vertices_weighted)
    try:
        if weighted:
            p = exact_cover_weighted(g, budget=budget)
        else:
            p = exact_cover(g, budget)
    except BudgetExceeded:
        return None
    return p


def run(cfg: RunConfig) -> tuple[dict, int]:
    """Solve one instance; returns the report and the exit code."""
    inst = io.load_instance(cfg.instance)
    g = inst.graph
    weighted = g.weights is not None
    report: dict = {
        "format": REPORT_FORMAT,
        "version": io.SCHEMA_VERSION,
        "instance_digest": io.instance_digest(inst),
        "algorithm": cfg.algo,
        "seed": cfg.seed,
        "n": g.n,
    }
    started = time.perf_counter()
    outcome = None
    try:
        if cfg.algo == "mincp1":
            if inst.points is None:
                raise UsageError("mincp1 needs point coordinates")
            res = run_mincp1(inst.points, cfg.epsilon, cfg.seed, max_cell=cfg.max_cell, workers=cfg.workers)
            outcome = res.partition
            if cfg.separable:
                outcome = separable_repair(inst.points, outcome)
            report["params"] = {"epsilon": cfg.epsilon, "k": res.k}
            report["trials"] = [{"shift": [t.shift.a, t.shift.b], "cells": t.cells,
                                 "cut_edges": t.cut_edges, "size": t.size} for t in res.trials]
            report["best_trial"] = res.best_trial
        elif cfg.algo == "mincp2":
            r = run_mincp2(g, cfg.epsilon)
            outcome = r.outcome
            report["params"] = r.params.as_dict()
            report["balls"] = [{"center": s.center, "radius": s.radius, "ball_opt": s.ball_opt,
                                "committed": s.committed} for s in r.steps]
            report["ball_lower_bound"] = r.lower_bound
        elif cfg.algo == "weighted":
            r = run_mincp_weighted(g, None, cfg.epsilon)
            outcome = r.outcome
            report["params"] = r.params.as_dict()
            report["balls"] = [{"center": s.center, "radius": s.radius, "ball_cost": s.ball_cost,
                                "committed": s.committed} for s in r.steps]
            report["cp"] = {"states": r.cp_stats.states, "cneeos": r.cp_stats.cneeos,
                            "sequences": r.cp_stats.sequences}
        elif cfg.algo == "distributed":
            trace = open(cfg.trace, "w") if cfg.trace else None
            try:
                r = distr_mcp(g, cfg.epsilon, cfg.seed, trace=trace)
            finally:
                if trace is not None:
                    trace.close()
            outcome = r.outcome
            report["params"] = r.params.as_dict()
            report["rounds"] = r.stats.as_dict()
            report["center_order"] = r.center_order
        elif cfg.algo == "oracle":
            budget = OracleBudget(max_vertices=cfg.oracle_vertices,
                                  max_vertices_weighted=cfg.oracle_vertices_weighted)
            outcome = exact_cover_weighted(g, budget=budget) if weighted else exact_cover(g, budget)
        elif cfg.algo == "grid-baseline":
            if inst.points is None:
                raise UsageError("grid-baseline needs point coordinates")
            outcome = grid_baseline(inst.points)
    except (BudgetExceeded, SeparationStuck) as e:
        report["outcome"] = "budget_exceeded"
        report["error"] = str(e)
        return report, EXIT_BUDGET
    if cfg.timing:
        report["wall_time"] = round(time.perf_counter() - started, 6)

    if isinstance(outcome, Certificate):
        report["outcome"] = "certificate"
        report["certificate"] = io.certificate_to_json(outcome)
        return report, EXIT_CERTIFICATE

    v = validate_partition(g, outcome)
    report["outcome"] = "partition"
    report["partition"] = outcome.as_lists()
    report["size"] = v.size
    report["valid"] = v.valid
    if v.violations:
        report["violations"] = list(v.violations)
    if weighted:
        report["weighted_cost"] = v.weighted_cost
    if cfg.ratio:
        opt = outcome if cfg.algo == "oracle" else _oracle_block(g, weighted, cfg)
        if opt is not None:
            o = opt.cost(g.weights) if weighted else Fraction(len(opt))
            mine = outcome.cost(g.weights) if weighted else Fraction(len(outcome))
            report["oracle"] = {"value": o, "ratio": mine / o if o else Fraction(1)}
    if not v.valid:
        raise AssertionError(f"{cfg.algo} returned an invalid partition: {v.violations}")
    return report, EXIT_OK


# ---------------------------------------------------------------------------
# commands


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_generate(a) -> int:
    params = {}
    if a.spec == "random_udg":
        params = {"n": a.n, "box_side": a.box_side}
        if a.height is not None:
            params["height"] = a.height
        if a.weights:
            params["weights"] = "random"
    elif a.spec == "two_kgon":
        params = {"k": a.k}
    elif a.spec == "matching_cliques":
        params = {"t": a.t}
    elif a.spec == "single_cell":
        params = {"n": a.n, "k": a.k}
    inst = gen_instance(a.spec, a.seed, **params)
    _emit(io.dumps(io.instance_to_json(inst)), a.output)
    return EXIT_OK


def _config(a) -> RunConfig:
    return RunConfig(instance=a.instance, algo=a.algo, epsilon=a.epsilon, seed=a.seed, workers=a.workers,
                     max_cell=a.max_cell, oracle_vertices=a.oracle_vertices,
                     oracle_vertices_weighted=a.oracle_vertices_weighted, ratio=not a.no_ratio,
                     separable=a.separable, timing=a.timing, trace=a.trace)


def cmd_solve(a) -> int:
    report, code = run(_config(a))
    if a.certificate and "certificate" in report:
        Path(a.certificate).write_text(io.dumps(report["certificate"]))
    _emit(io.dumps(report), a.output)
    return code


def cmd_verify(a) -> int:
    inst = io.load_instance(a.instance)
    data = io.load_json(a.partition)
    if isinstance(data, dict) and "partition" not in data:
        raise InstanceError("report carries no partition")
    p = io.partition_from_json(data)
    v = validate_partition(inst.graph, p)
    out = {"valid": v.valid, "violations": list(v.violations), "size": v.size}
    if v.weighted_cost is not None:
        out["weighted_cost"] = v.weighted_cost
    _emit(io.dumps(out), a.output)
    return EXIT_OK if v.valid else EXIT_FAILED


def cmd_verify_certificate(a) -> int:
    data = io.load_json(a.certificate)
    if data.get("format") == REPORT_FORMAT:
        data = data.get("certificate") or {}
    cert = io.certificate_from_json(data)
    ok = verify_certificate(cert)
    _emit(io.dumps({"reason": cert.reason.value, "vertices": list(cert.vertices), "reproduced": ok}), a.output)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_compare(a) -> int:
    algos = [s.strip() for s in a.algos.split(",") if s.strip()]
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["instance", "algorithm", "outcome", "size", "weighted_cost", "oracle", "ratio"])
    worst = EXIT_OK
    for path in a.instances:
        for algo in algos:
            cfg = RunConfig(instance=path, algo=algo, epsilon=a.epsilon, seed=a.seed, workers=a.workers,
                            max_cell=a.max_cell, oracle_vertices=a.oracle_vertices)
            report, code = run(cfg)
            worst = max(worst, code)
            orc = report.get("oracle", {})
            w.writerow([path, algo, report["outcome"], report.get("size", ""),
                        _fmt(report.get("weighted_cost")), _fmt(orc.get("value")), _fmt(orc.get("ratio"))])
    _emit(buf.getvalue(), a.output)
    return EXIT_OK


def _fmt(x) -> str:
    if x is None:
        return ""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cmd_plot(a) -> int:
    from .plot import render_svg
    inst = io.load_instance(a.instance)
    if inst.points is None:
        raise UsageError("plot needs point coordinates")
    part, grid = None, None
    if a.partition:
        data = io.load_json(a.partition)
        part = io.partition_from_json(data)
        if isinstance(data, dict) and data.get("trials"):
            best = data["trials"][data.get("best_trial", 0)]
            k = data["params"]["k"]
            grid = (k, io.unrat(best["shift"][0]), io.unrat(best["shift"][1]))
    _emit(render_svg(inst.points, part, grid=grid), a.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="udgclique", description="Clique partitions of unit disk graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a seeded instance")
    g.add_argument("--spec", required=True, choices=sorted(GENERATORS))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=20)
    g.add_argument("--box-side", type=parse_rational, default=Fraction(3))
    g.add_argument("--height", type=parse_rational)
    g.add_argument("--weights", action="store_true", help="random integer weights 1..10 (random_udg)")
    g.add_argument("--k", type=int, default=7)
    g.add_argument("--t", type=int, default=3)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    def budgets(sp):
        sp.add_argument("--epsilon", type=parse_rational, default=Fraction(1, 2))
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--max-cell", type=int, default=25)
        sp.add_argument("--oracle-vertices", type=int, default=25)
        sp.add_argument("--oracle-vertices-weighted", type=int, default=18)

    s = sub.add_parser("solve", help="run one algorithm and print a JSON report")
    s.add_argument("instance")
    s.add_argument("--algo", required=True, choices=ALGORITHMS)
    budgets(s)
    s.add_argument("--no-ratio", action="store_true", help="skip the oracle comparison")
    s.add_argument("--separable", action="store_true", help="mincp1: repair to a separable partition")
    s.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identity)")
    s.add_argument("--trace", help="distributed: per-round JSONL trace")
    s.add_argument("--certificate", help="also write any certificate to this file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="validate a partition (or report) against an instance")
    v.add_argument("instance")
    v.add_argument("partition")
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("verify-certificate", help="replay a certificate on its subgraph")
    c.add_argument("certificate")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_verify_certificate)

    m = sub.add_parser("compare", help="CSV table of sizes and oracle ratios")
    m.add_argument("instances", nargs="+")
    m.add_argument("--algos", default="mincp1,mincp2,grid-baseline")
    budgets(m)
    m.add_argument("-o", "--output")
    m.set_defaults(func=cmd_compare)

    pl = sub.add_parser("plot", help="SVG of points, block hulls and the chosen grid")
    pl.add_argument("instance")
    pl.add_argument("--partition", help="partition list or solve report")
    pl.add_argument("-o", "--output")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, InstanceError, json.JSONDecodeError, FileNotFoundError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
