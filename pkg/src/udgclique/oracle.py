"""Exact brute-force clique partition solvers used as ground truth.

Two unrelated routes are provided for the unweighted problem: branch and
bound on the chromatic number of the complement graph, and plain
enumeration of set partitions (small n only).  Neither shares code with the
cover search used by the approximation algorithms.

Budgets are applied per connected component, since a clique never spans two.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .model import BudgetExceeded, CliquePartition, UdgGraph, components


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 25
    max_vertices_weighted: int = 18
    time_limit: float | None = None
    max_nodes: int = 5_000_000


class _Clock:
    def __init__(self, budget: OracleBudget):
        self.budget = budget
        self.start = time.monotonic()
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise BudgetExceeded(f"oracle exceeded {self.budget.max_nodes} nodes")
        if self.budget.time_limit is not None and self.nodes % 1024 == 0:
            if time.monotonic() - self.start > self.budget.time_limit:
                raise BudgetExceeded(f"oracle exceeded {self.budget.time_limit}s")


def _complement(g: UdgGraph, verts: list[int]) -> dict[int, set[int]]:
    vs = set(verts)
    return {v: vs - g.adj[v] - {v} for v in verts}


def _dsatur_order_color(h: dict[int, set[int]]) -> dict[int, int]:
    color: dict[int, int] = {}
    sat: dict[int, set[int]] = {v: set() for v in h}
    while len(color) < len(h):
        v = max((u for u in h if u not in color), key=lambda u: (len(sat[u]), len(h[u]), -u))
        c = 0
        while c in sat[v]:
            c += 1
        color[v] = c
        for u in h[v]:
            sat[u].add(c)
    return color


def _clique_in(h: dict[int, set[int]]) -> list[int]:
    """Greedy clique of the complement, i.e. an independent set of g."""
    best: list[int] = []
    for start in sorted(h, key=lambda u: (-len(h[u]), u)):
        clique = [start]
        cand = set(h[start])
        while cand:
            u = max(cand, key=lambda x: (len(h[x] & cand), -x))
            clique.append(u)
            cand &= h[u]
        if len(clique) > len(best):
            best = clique
    return best


def _color_component(g: UdgGraph, verts: list[int], clock: _Clock) -> list[list[int]]:
    h = _complement(g, verts)
    greedy = _dsatur_order_color(h)
    best_k = max(greedy.values()) + 1
    best = dict(greedy)
    seed = _clique_in(h)
    if len(seed) == best_k:
        return _classes(best)
    color = {v: i for i, v in enumerate(seed)}
    lower = len(seed)

    def rec(k: int):
        nonlocal best_k, best
        clock.tick()
        if len(color) == len(h):
            if k < best_k:
                best_k, best = k, dict(color)
            return
        v, vsat = None, None
        for u in h:
            if u in color:
                continue
            s = {color[w] for w in h[u] if w in color}
            key = (len(s), sum(1 for w in h[u] if w not in color), -u)
            if vsat is None or key > vsat[0]:
                v, vsat = u, (key, s)
        used = vsat[1]
        for c in range(k):
            if c not in used:
                color[v] = c
                rec(k)
                del color[v]
                if best_k == lower:
                    return
        if k + 1 < best_k:
            color[v] = k
            rec(k + 1)
            del color[v]

    rec(len(seed))
    return _classes(best)


def _classes(color: dict[int, int]) -> list[list[int]]:
    out: dict[int, list[int]] = {}
    for v, c in color.items():
        out.setdefault(c, []).append(v)
    return [sorted(b) for b in out.values()]


def exact_cover(g: UdgGraph, budget: OracleBudget = OracleBudget()) -> CliquePartition:
    """Minimum-size clique partition (minimum colouring of the complement)."""
    clock = _Clock(budget)
    blocks: list[list[int]] = []
    for comp in components(g):
        if len(comp) > budget.max_vertices:
            raise BudgetExceeded(f"component of {len(comp)} vertices exceeds oracle budget {budget.max_vertices}")
        blocks.extend(_color_component(g, comp, clock))
    return CliquePartition(blocks)


def _weighted_component(g: UdgGraph, verts: list[int], clock: _Clock) -> tuple[Fraction, list[list[int]]]:
    order = sorted(verts, key=lambda v: (-g.weight(v), v))
    w = {v: g.weight(v) for v in verts}
    # greedy incumbent: first-fit in weight order
    blocks: list[list[int]] = []
    for v in order:
        for b in blocks:
            if all(u in g.adj[v] for u in b):
                b.append(v)
                break
        else:
            blocks.append([v])
    best_cost = sum(w[b[0]] for b in blocks)
    best = [list(b) for b in blocks]

    members: list[list[int]] = []
    cands: list[set[int]] = []

    def lower(i: int) -> Fraction:
        taken: set[int] = set()
        lb = Fraction(0)
        for v in order[i:]:
            if v in taken or any(v in c for c in cands):
                continue
            lb += w[v]
            taken |= g.adj[v]
        return lb

    def rec(i: int, cost: Fraction):
        nonlocal best_cost, best
        clock.tick()
        if i == len(order):
            if cost < best_cost:
                best_cost, best = cost, [list(b) for b in members]
            return
        if cost + lower(i) >= best_cost:
            return
        v = order[i]
        for j in range(len(members)):
            if v in cands[j]:
                members[j].append(v)
                old = cands[j]
                cands[j] = old & g.adj[v]
                rec(i + 1, cost)
                cands[j] = old
                members[j].pop()
        members.append([v])
        cands.append(set(g.adj[v]))
        rec(i + 1, cost + w[v])
        members.pop()
        cands.pop()

    rec(0, Fraction(0))
    return best_cost, best


def exact_cover_weighted(g: UdgGraph, weights=None, budget: OracleBudget = OracleBudget()) -> CliquePartition:
    """Minimum total weight, a block costing its heaviest vertex.

    Vertices are placed heaviest first, so joining a block never changes its
    cost and opening one costs exactly the new vertex's weight.
    """
    if weights is not None:
        g = g.with_weights(weights)
    clock = _Clock(budget)
    blocks: list[list[int]] = []
    for comp in components(g):
        if len(comp) > budget.max_vertices_weighted:
            raise BudgetExceeded(
                f"component of {len(comp)} vertices exceeds weighted oracle budget {budget.max_vertices_weighted}")
        blocks.extend(_weighted_component(g, comp, clock)[1])
    return CliquePartition(blocks)


def enumerate_partitions(g: UdgGraph, limit: int = 10):
    """Every clique partition of a small graph (generator of block lists)."""
    if g.n > limit:
        raise BudgetExceeded(f"set-partition enumeration limited to {limit} vertices")
    blocks: list[list[int]] = []

    def rec(v: int):
        if v == g.n:
            yield [list(b) for b in blocks]
            return
        for b in blocks:
            if all(u in g.adj[v] for u in b):
                b.append(v)
                yield from rec(v + 1)
                b.pop()
        blocks.append([v])
        yield from rec(v + 1)
        blocks.pop()

    yield from rec(0)


def enumerate_cover(g: UdgGraph, weighted: bool = False, limit: int = 10) -> CliquePartition:
    """Second, independent oracle: scan all set partitions."""
    best, best_key = None, None
    for blocks in enumerate_partitions(g, limit):
        p = CliquePartition(blocks)
        key = p.cost(g.weights) if weighted else len(p)
        if best_key is None or key < best_key:
            best, best_key = p, key
    return best if best is not None else CliquePartition([])
