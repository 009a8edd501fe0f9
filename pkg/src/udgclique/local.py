"""Synchronous LOCAL-model simulator and the distributed ball-growing PTAS.

Nodes only ever see their own state and the messages their neighbours sent
in the previous round.  All global coordination (phase boundaries, the
colour loop) is by fixed round counts every node knows in advance.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, TextIO

from .metric import BallFailure, BallStep, PtasParams, derive_params, grow_ball, minimize_certificate
from .model import Certificate, CliquePartition, UdgGraph

MAX_CLUSTER_DEGREE = 256


@dataclass
class RoundStats:
    rounds: int = 0
    messages: int = 0
    phases: dict[str, int] = field(default_factory=dict)
    beta: int = 0
    leaders: int = 0
    colors: int = 0
    cluster_degree: int = 0
    mis_iterations: int = 0
    coloring_iterations: int = 0

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["phases"] = dict(sorted(self.phases.items()))
        d["rounds_per_beta"] = Fraction(self.rounds, self.beta) if self.beta else None
        return d


class SimEngine:
    """Lockstep message passing on ``g``.

    ``run_round(outbox)`` takes each node's broadcast payload (or None) and
    returns each node's inbox as a list of ``(sender, payload)``; payloads
    are delivered only along edges.
    """

    def __init__(self, g: UdgGraph, trace: TextIO | None = None):
        self.g = g
        self.stats = RoundStats()
        self.trace = trace
        self._phase = "idle"

    def phase(self, name: str) -> "SimEngine":
        self._phase = name
        self.stats.phases.setdefault(name, 0)
        return self

    def run_round(self, outbox: dict[int, Any], states: dict[int, Any] | None = None) -> dict[int, list]:
        inbox: dict[int, list] = {v: [] for v in range(self.g.n)}
        sent = 0
        for v in sorted(outbox):
            msg = outbox[v]
            if msg is None:
                continue
            for u in sorted(self.g.adj[v]):
                inbox[u].append((v, msg))
                sent += 1
        self.stats.rounds += 1
        self.stats.messages += sent
        self.stats.phases[self._phase] = self.stats.phases.get(self._phase, 0) + 1
        if self.trace is not None:
            for v in range(self.g.n):
                state = states.get(v) if states else None
                self.trace.write(json.dumps({
                    "round": self.stats.rounds, "phase": self._phase, "node": v,
                    "state": _digest(state), "messages": len(inbox[v])}, sort_keys=True) + "\n")
        return inbox

    def flood(self, items: dict[int, dict], radius: int) -> dict[int, dict]:
        """Every node learns every item originating within ``radius`` hops.

        Returns ``{node: {origin: (hops, payload)}}``.  Only newly learned
        items are forwarded, one hop per round.
        """
        known = {v: {o: (0, p) for o, p in items.get(v, {}).items()} for v in range(self.g.n)}
        fresh = {v: dict(known[v]) for v in range(self.g.n)}
        for t in range(1, radius + 1):
            out = {v: {o: p for o, (_, p) in fresh[v].items()} or None for v in range(self.g.n)}
            inbox = self.run_round(out, known)
            fresh = {v: {} for v in range(self.g.n)}
            for v, msgs in inbox.items():
                for _, bundle in msgs:
                    for o, p in bundle.items():
                        if o not in known[v]:
                            known[v][o] = (t, p)
                            fresh[v][o] = (t, p)
        return known


def _digest(state) -> str:
    return hashlib.sha256(repr(state).encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# leaders


@dataclass
class LeaderStructure:
    leaders: list[int]
    cluster_edges: set[tuple[int, int]]
    color: dict[int, int]
    leader_of: dict[int, int]
    dist_to_leader: dict[int, int]

    @property
    def cluster_degree(self) -> int:
        deg = {l: 0 for l in self.leaders}
        for a, b in self.cluster_edges:
            deg[a] += 1
            deg[b] += 1
        return max(deg.values(), default=0)


def luby_mis_power(engine: SimEngine, beta: int, seed: int) -> list[int]:
    """Maximal independent set of G^beta, Luby style.

    Each iteration: undecided nodes draw a value and flood it beta hops; a
    node whose value is the smallest among undecided nodes in reach joins;
    joiners flood their status beta hops and everyone they reach drops out.
    """
    n = engine.g.n
    rngs = {v: random.Random(f"{seed}:{v}") for v in range(n)}
    status = {v: None for v in range(n)}  # None undecided, True in, False out
    while any(s is None for s in status.values()):
        engine.stats.mis_iterations += 1
        draws = {v: {v: (rngs[v].random(), v)} for v in range(n) if status[v] is None}
        seen = engine.phase("mis").flood(draws, beta)
        joins = {}
        for v in range(n):
            if status[v] is None:
                mine = (seen[v][v][1][0], v)
                if all(p >= mine for _, p in seen[v].values()):
                    joins[v] = {v: True}
        reach = engine.flood(joins, beta)
        for v in range(n):
            if v in joins:
                status[v] = True
            elif status[v] is None and reach[v]:
                status[v] = False
    return sorted(v for v in range(n) if status[v])


def build_leaders(g: UdgGraph, beta: int, seed: int = 0, engine: SimEngine | None = None) -> tuple[LeaderStructure, RoundStats]:
    engine = engine or SimEngine(g)
    engine.stats.beta = beta
    leaders = luby_mis_power(engine, beta, seed)
    lset = set(leaders)

    # cluster graph: leaders within 4 beta hops
    heard = engine.phase("cluster_graph").flood({l: {l: l} for l in leaders}, 4 * beta)
    cluster_edges = {(min(l, o), max(l, o)) for l in leaders for o in heard[l] if o != l and o in lset}
    nbrs = {l: sorted({o for e in cluster_edges for o in e if l in e} - {l}) for l in leaders}
    if any(len(v) > MAX_CLUSTER_DEGREE for v in nbrs.values()):
        raise AssertionError("cluster graph degree exceeds 256")

    # greedy colouring: a leader picks once all lower-id cluster neighbours have
    color: dict[int, int] = {}
    engine.phase("coloring")
    while len(color) < len(leaders):
        engine.stats.coloring_iterations += 1
        known = engine.flood({l: {l: color.get(l)} for l in leaders}, 4 * beta)
        picks = {}
        for l in leaders:
            if l in color:
                continue
            lower = [o for o in nbrs[l] if o < l]
            if all(known[l][o][1] is not None for o in lower):
                used = {known[l][o][1] for o in nbrs[l] if known[l][o][1] is not None}
                c = 0
                while c in used:
                    c += 1
                picks[l] = c
        color.update(picks)

    # nearest leader, ties to the lowest id
    reach = engine.phase("assignment").flood({l: {l: l} for l in leaders}, beta)
    leader_of, dist = {}, {}
    for v in range(g.n):
        best = min(((h, o) for o, (h, _) in reach[v].items() if o in lset), default=None)
        if best is None:
            raise AssertionError(f"vertex {v} has no leader within {beta} hops")
        dist[v], leader_of[v] = best
    ls = LeaderStructure(leaders, cluster_edges, color, leader_of, dist)
    engine.stats.leaders = len(leaders)
    engine.stats.colors = len(set(color.values()))
    engine.stats.cluster_degree = ls.cluster_degree
    return ls, engine.stats


# ---------------------------------------------------------------------------
# distributed PTAS


@dataclass
class DistributedRun:
    outcome: CliquePartition | Certificate
    stats: RoundStats
    leaders: LeaderStructure | None
    params: PtasParams
    steps: list[BallStep] = field(default_factory=list)
    rounds_log: list[list[tuple[int, tuple[int, ...]]]] = field(default_factory=list)

    @property
    def center_order(self) -> list[int]:
        return [s.center for s in self.steps]


def distr_mcp(g: UdgGraph, eps, seed: int = 0, *, params: PtasParams | None = None,
              budget: int | None = None, trace: TextIO | None = None,
              on_color: Callable | None = None) -> DistributedRun:
    """Distributed ball growing, one colour class of clusters at a time.

    For each colour every leader gathers its (2 beta + 4)-hop neighbourhood
    (adjacency, lengths and marks), runs the sequential ball growing on its
    own unmarked vertices, and sends marks back to the vertices it covered.
    Balls grown concurrently within a colour are checked to be disjoint.
    """
    from .metric import DEFAULT_BALL_BUDGET
    budget = DEFAULT_BALL_BUDGET if budget is None else budget
    params = params or derive_params(eps)
    beta = params.beta
    engine = SimEngine(g, trace)
    if g.n == 0:
        return DistributedRun(CliquePartition([]), engine.stats, None, params)
    ls, _ = build_leaders(g, beta, seed, engine)
    marked: set[int] = set()
    blocks = []
    run = DistributedRun(CliquePartition([]), engine.stats, ls, params)
    reach = 2 * beta + 4
    for c in sorted(set(ls.color.values())):
        group = [l for l in ls.leaders if ls.color[l] == c]
        items = {v: {v: (v in marked, ls.leader_of[v],
                         tuple(sorted((u, g.sqlen[(min(u, v), max(u, v))]) for u in g.adj[v])))}
                 for v in range(g.n)}
        view = engine.phase("ball_growing").flood(items, reach)
        round_balls: list[tuple[int, tuple[int, ...]]] = []
        notify: dict[int, dict] = {}
        for l in group:
            local = view[l]
            known = _local_graph(g.n, local)
            alive = {u for u, (_, (m, _, _)) in local.items() if not m}
            mine = sorted(u for u in alive if local[u][1][1] == l)
            while mine:
                v = mine[0]
                try:
                    step, part = grow_ball(known, v, alive, params, budget)
                except BallFailure as stop:
                    run.outcome = minimize_certificate(stop.cert, budget)
                    return run
                if not set(step.removed) <= set(local):
                    raise AssertionError("ball left the gathered neighbourhood")
                blocks.extend(part.blocks)
                run.steps.append(step)
                round_balls.append((l, step.removed))
                alive.difference_update(step.removed)
                mine = [u for u in mine if u in alive]
                for u in step.removed:
                    notify.setdefault(l, {})[u] = True
        owners: dict[int, int] = {}
        for l, removed in round_balls:
            for u in removed:
                if u in owners and owners[u] != l:
                    raise AssertionError(f"clusters {owners[u]} and {l} grew overlapping balls")
                owners[u] = l
        # marks travel back from each leader to the vertices it covered
        told = engine.flood({l: {("mark", l): tuple(sorted(us))} for l, us in notify.items()}, reach)
        for u in owners:
            if not any(k[0] == "mark" and u in p for k, (_, p) in told[u].items()):
                raise AssertionError(f"vertex {u} never heard it was covered")
        marked |= set(owners)
        run.rounds_log.append(round_balls)
        if on_color is not None:
            on_color(c, round_balls)
    if len(marked) != g.n:
        raise AssertionError("some vertex was never covered")
    run.outcome = CliquePartition(blocks)
    return run


def _local_graph(n: int, local: dict) -> UdgGraph:
    """The graph as one leader sees it: only edges between gathered vertices."""
    table = {}
    for v, (_, (_, _, nbrs)) in local.items():
        for u, d in nbrs:
            if u in local:
                table[(min(u, v), max(u, v))] = d
    return UdgGraph.from_edges(n, table)


def replay_sequential(g: UdgGraph, run: DistributedRun):
    """Sequential ball growing driven by the distributed centre order."""
    from .metric import run_mincp2
    return run_mincp2(g, run.params.eps, order=run.center_order, params=run.params, minimize=False)
