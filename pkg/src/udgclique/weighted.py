"""Weighted clique partition from adjacency alone.

A block costs its heaviest vertex.  Balls are grown around the heaviest
remaining vertex; each ball is covered by repeatedly peeling off the common
neighbourhood of an edge in a co-bipartite edge elimination ordering
(CNEEO) and splitting that neighbourhood into two cliques.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .metric import _smallest_even_radius, packing_bound
from .model import (BudgetExceeded, Certificate, CertificateReason, CliquePartition, InstanceError,
                    UdgGraph, ball)

GAMMA_DENOM = 1 << 20


def _gamma_ok(g: Fraction, eps: Fraction) -> bool:
    # g <= (sqrt(9 + 4 eps) - 3) / 2  <=>  g^2 + 3g <= eps  (g >= 0)
    return g * g + 3 * g <= eps


def gamma_of(eps) -> Fraction:
    """Largest dyadic gamma (denominator 2^20, refined if needed) below the bound."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    den = GAMMA_DENOM
    while True:
        bound = (math.isqrt(int((9 + 4 * eps) * den * den)) - 3 * den) // 2
        m = max(bound, 0)
        while m > 0 and not _gamma_ok(Fraction(m, den), eps):
            m -= 1
        while _gamma_ok(Fraction(m + 1, den), eps):
            m += 1
        if m > 0:
            gamma = Fraction(m, den)
            if (2 + gamma) * (1 + gamma) > 2 + eps:
                raise AssertionError("gamma bound violated")
            return gamma
        den <<= 10


def _j_of(gamma: Fraction, x: int) -> int:
    """Smallest j with (x-1) * ((x-1)/x)^(j-2) < gamma/2.

    j is in the millions for moderate gamma, so it is located with 60-digit
    logarithms and confirmed at j and j-1 with interval arithmetic.
    """
    iv = mpmath.iv
    iv.dps = 60
    lhs = lambda j: iv.log(x - 1) + (j - 2) * (iv.log(x - 1) - iv.log(x))  # noqa: E731
    target = iv.log(iv.mpf([gamma.numerator, gamma.numerator]) / gamma.denominator / 2)
    mpmath.mp.dps = 60
    est = (mpmath.log(x - 1) - mpmath.log(mpmath.mpf(gamma.numerator) / gamma.denominator / 2)) / \
        (mpmath.log(x) - mpmath.log(x - 1))
    j = max(2, int(mpmath.floor(est)) + 2)

    def below(j):
        v = lhs(j)
        if v.b < target.a:
            return True
        if v.a > target.b:
            return False
        raise ArithmeticError("interval too wide to decide j")

    while not below(j):
        j += 1
    while j > 2 and below(j - 1):
        j -= 1
    return j


@dataclass(frozen=True)
class WeightedParams:
    eps: Fraction
    gamma: Fraction
    beta: int
    ell: int
    j: int

    def as_dict(self) -> dict:
        return {"epsilon": self.eps, "gamma": self.gamma, "beta": self.beta, "ell": self.ell, "j": self.j}


def weighted_params(eps) -> WeightedParams:
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    eps = min(eps, Fraction(1))
    gamma = gamma_of(eps)
    beta = _smallest_even_radius(1 + gamma)
    x = packing_bound(beta)
    j = _j_of(gamma, x)
    return WeightedParams(eps, gamma, beta, j + x, j)


# ---------------------------------------------------------------------------
# co-bipartite pieces


class NotCoBipartite(ValueError):
    pass


def _complement_coloring(g: UdgGraph, S: Sequence[int]):
    """2-colour the complement of g[S]; returns (colour, component) maps or None."""
    color: dict[int, int] = {}
    comp: dict[int, int] = {}
    k = 0
    for s in S:
        if s in color:
            continue
        color[s] = 0
        comp[s] = k
        stack = [s]
        while stack:
            u = stack.pop()
            nu = g.adj[u]
            for w in S:
                if w == u or w in nu:
                    continue
                if w not in color:
                    color[w] = 1 - color[u]
                    comp[w] = k
                    stack.append(w)
                elif color[w] == color[u]:
                    return None
        k += 1
    return color, comp


def is_co_bipartite(g: UdgGraph, S: Iterable[int]) -> bool:
    return _complement_coloring(g, sorted(S)) is not None


def co_bipartite_split(g: UdgGraph, S: Iterable[int]) -> tuple[list[int], list[int]]:
    """Split ``S`` into two cliques of ``g``; the second may be empty.

    Each complement component may be flipped independently.  The heaviest
    vertex anchors the first clique and every other component sends its
    lighter side to the second, which minimises the combined cost.
    """
    S = sorted(S)
    if not S:
        return [], []
    res = _complement_coloring(g, S)
    if res is None:
        raise NotCoBipartite(f"complement of {S} is not bipartite")
    color, comp = res
    top = max(S, key=lambda v: (g.weight(v), -v))
    sides: dict[int, list[list[int]]] = {}
    for v in S:
        sides.setdefault(comp[v], [[], []])[color[v]].append(v)
    A: list[int] = []
    B: list[int] = []
    for c, (x, y) in sides.items():
        if comp[top] == c:
            first, second = (x, y) if top in x else (y, x)
        elif not y:
            first, second = x, y
        else:
            wx = max(g.weight(v) for v in x)
            wy = max(g.weight(v) for v in y)
            first, second = (x, y) if (wy, min(y)) <= (wx, min(x)) else (y, x)
        A.extend(first)
        B.extend(second)
    return sorted(A), sorted(B)


def split_cost(g: UdgGraph, A, B) -> Fraction:
    return sum((max(g.weight(v) for v in part) for part in (A, B) if part), Fraction(0))


# ---------------------------------------------------------------------------
# CNEEO


@dataclass(frozen=True)
class Cneeo:
    """Edge ordering with the closed common neighbourhood of each edge."""

    order: tuple[tuple[int, int], ...]
    nbhd: tuple[frozenset[int], ...]

    def rank(self, e) -> int:
        return self.order.index((min(e), max(e)))


def _common(rest: dict[int, set[int]], u: int, v: int) -> frozenset[int]:
    return frozenset(rest[u] & rest[v]) | {u, v}


def cneeo(g: UdgGraph, vertices: Iterable[int] | None = None) -> Cneeo | Certificate:
    """Greedy CNEEO of ``g`` (or of the subgraph on ``vertices``).

    Removing edges only shrinks common neighbourhoods and co-bipartiteness
    is hereditary, so an edge that becomes eligible stays eligible; hence
    the greedy scan fails only when no CNEEO exists at all.
    """
    vs = set(range(g.n)) if vertices is None else set(vertices)
    rest = {v: set(g.adj[v]) & vs for v in vs}
    remaining = sorted((u, v) for u in vs for v in rest[u] if u < v)
    order: list[tuple[int, int]] = []
    nbhd: list[frozenset[int]] = []
    while remaining:
        for idx, (u, v) in enumerate(remaining):
            N = _common(rest, u, v)
            if is_co_bipartite(g, N):
                break
        else:
            stuck = {x for e in remaining for x in e}
            return Certificate.on(g, sorted(vs), CertificateReason.NO_CNEEO,
                                  remaining_edges=len(remaining), stuck_vertices=len(stuck))
        order.append((u, v))
        nbhd.append(N)
        del remaining[idx]
        rest[u].discard(v)
        rest[v].discard(u)
    return Cneeo(tuple(order), tuple(nbhd))


def verify_cneeo(g: UdgGraph, L: Cneeo, vertices: Iterable[int] | None = None) -> bool:
    """Re-check every defining property of an ordering from scratch."""
    vs = set(range(g.n)) if vertices is None else set(vertices)
    edges = {(u, v) for u in vs for v in g.adj[u] & vs if u < v}
    if len(L.order) != len(edges) or set(L.order) != edges:
        return False
    for i, (u, v) in enumerate(L.order):
        suffix = L.order[i:]
        nu = {b for a, b in suffix if a == u} | {a for a, b in suffix if b == u}
        nv = {b for a, b in suffix if a == v} | {a for a, b in suffix if b == v}
        N = frozenset(nu & nv) | {u, v}
        if N != L.nbhd[i] or not is_co_bipartite(g, N):
            return False
    return True


# ---------------------------------------------------------------------------
# CP on one ball


@dataclass
class CpStats:
    states: int = 0
    cneeos: int = 0
    sequences: int = 0


class _NoCneeo(Exception):
    def __init__(self, cert):
        self.cert = cert


def _split_components(g: UdgGraph, R: frozenset[int]) -> list[frozenset[int]]:
    out, seen = [], set()
    for s in sorted(R):
        if s in seen:
            continue
        comp, stack = {s}, [s]
        while stack:
            u = stack.pop()
            for w in g.adj[u] & R:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(frozenset(comp))
    return out


def _independent_weight(g: UdgGraph, R: frozenset[int]) -> Fraction:
    """Weight of a greedy heaviest-first independent set: a lower bound on any
    clique partition of R, since no block holds two of its vertices."""
    total, blocked = Fraction(0), set()
    for v in sorted(R, key=lambda u: (-g.weight(u), u)):
        if v not in blocked:
            total += g.weight(v)
            blocked |= g.adj[v]
    return total


def cp_weighted(g: UdgGraph, ell: int, vertices: Iterable[int] | None = None, *,
                max_states: int | None = 200_000, stats: CpStats | None = None,
                memo: dict | None = None) -> CliquePartition | Certificate:
    """Cheapest cover reachable by peeling CNEEO neighbourhoods.

    Every edge sequence leads through residual vertex sets, and a step's
    cost depends only on the neighbourhood removed, so the search is a
    memoised minimisation over residual sets, split into connected
    components (a neighbourhood never spans two).  Vertices left isolated
    become singletons; all singletons is the starting incumbent.  ``memo``
    may be shared between calls on the same graph.
    """
    vs = frozenset(range(g.n) if vertices is None else vertices)
    stats = stats if stats is not None else CpStats()
    memo = {} if memo is None else memo

    def best_set(R: frozenset[int], depth: int):
        cost, blocks = Fraction(0), ()
        for comp in _split_components(g, R):
            c, b = best(comp, depth)
            cost += c
            blocks += b
        return cost, blocks

    def best(R: frozenset[int], depth: int):
        # R is connected
        hit = memo.get(R)
        if hit is not None:
            return hit
        if len(R) == 1:
            (v,) = R
            memo[R] = (g.weight(v), ((v,),))
            return memo[R]
        stats.states += 1
        if max_states is not None and stats.states > max_states:
            raise BudgetExceeded(f"weighted CP explored more than {max_states} residual graphs")
        incumbent = (sum((g.weight(v) for v in R), Fraction(0)), tuple((v,) for v in sorted(R)))
        if depth < ell:
            L = cneeo(g, R)
            stats.cneeos += 1
            if isinstance(L, Certificate):
                raise _NoCneeo(L)
            cands = {}
            for N in L.nbhd:
                if N not in cands:
                    A, B = co_bipartite_split(g, N)
                    cands[N] = (split_cost(g, A, B), A, B)
            # cheap, large neighbourhoods first so the incumbent drops early
            for N, (step, A, B) in sorted(cands.items(), key=lambda kv: (kv[1][0] / len(kv[0]), sorted(kv[0]))):
                stats.sequences += 1
                if step >= incumbent[0]:
                    continue
                rest = R - N
                if step + _independent_weight(g, rest) >= incumbent[0]:
                    continue
                sub_cost, sub_blocks = best_set(rest, depth + 1)
                total = step + sub_cost
                if total < incumbent[0]:
                    blocks = tuple(tuple(b) for b in (A, B) if b)
                    incumbent = (total, blocks + sub_blocks)
        memo[R] = incumbent
        return incumbent

    try:
        _, blocks = best_set(vs, 0)
    except _NoCneeo as e:
        return e.cert
    return CliquePartition(blocks)


# ---------------------------------------------------------------------------
# ball growing


@dataclass
class WeightedStep:
    center: int
    radius: int
    ball: tuple[int, ...]
    ball_cost: Fraction
    removed: tuple[int, ...]
    committed: Fraction


@dataclass
class WeightedRun:
    outcome: CliquePartition | Certificate
    params: WeightedParams
    steps: list[WeightedStep] = field(default_factory=list)
    cp_stats: CpStats = field(default_factory=CpStats)


class _Stop(Exception):
    def __init__(self, cert):
        self.cert = cert


def _heaviest(g: UdgGraph, alive: set[int]) -> int:
    return max(alive, key=lambda v: (g.weight(v), -v))


def run_mincp_weighted(g: UdgGraph, weights=None, eps=1, *, params: WeightedParams | None = None,
                       max_states: int | None = 200_000, order: Sequence[int] | None = None) -> WeightedRun:
    """Ball growing around the heaviest remaining vertex.

    The loop grows r while w(C_{r+2}) > (1 + gamma) w(C_r) and commits
    C_{r+2}.  ``order`` overrides the centre choice (first alive vertex).
    """
    if weights is not None:
        g = g.with_weights(weights)
    params = params or weighted_params(eps)
    gamma = params.gamma
    run = WeightedRun(CliquePartition([]), params)
    alive = set(range(g.n))
    blocks: list = []
    memo: dict = {}
    try:
        while alive:
            v = None
            if order is not None:
                v = next((u for u in order if u in alive), None)
            if v is None:
                v = _heaviest(g, alive)
            cache: dict[int, tuple[tuple[int, ...], CliquePartition, Fraction]] = {}

            def solve(r):
                if r not in cache:
                    B = tuple(sorted(ball(g, v, r, alive)))
                    res = cp_weighted(g, params.ell, B, max_states=max_states, stats=run.cp_stats,
                                      memo=memo)
                    if isinstance(res, Certificate):
                        ctx = dict(res.context, center=v, radius=r)
                        raise _Stop(Certificate(res.reason, res.vertices, res.graph, ctx))
                    cache[r] = (B, res, res.cost(g.weights))
                return cache[r][2]

            r = 0
            while solve(r + 2) > (1 + gamma) * solve(r):
                r += 1
                if r > params.beta:
                    B = sorted(ball(g, v, params.beta + 2, alive))
                    raise _Stop(Certificate.on(g, B, CertificateReason.BALL_TOO_DEEP,
                                               center=B.index(v), radius=r, gamma=gamma,
                                               beta=params.beta))
                solve(r)
            inner, outer = cache[r], cache[r + 2]
            blocks.extend(outer[1].blocks)
            run.steps.append(WeightedStep(v, r, inner[0], inner[2], outer[0], outer[2]))
            alive.difference_update(outer[0])
    except _Stop as stop:
        run.outcome = stop.cert
        return run
    run.outcome = CliquePartition(blocks)
    return run


def mincp_weighted(g: UdgGraph, weights=None, eps=1, **kw) -> CliquePartition | Certificate:
    return run_mincp_weighted(g, weights, eps, **kw).outcome


def verify_weighted_certificate(cert: Certificate) -> bool:
    if cert.reason is CertificateReason.NO_CNEEO:
        return isinstance(cneeo(cert.graph), Certificate)
    if cert.reason is CertificateReason.BALL_TOO_DEEP:
        ctx = cert.context
        gamma = Fraction(ctx["gamma"])
        params = WeightedParams(Fraction(0), gamma, int(ctx["beta"]), 1 << 62, 0)
        run = run_mincp_weighted(cert.graph, params=params, order=[int(ctx["center"])])
        out = run.outcome
        return isinstance(out, Certificate) and out.reason is cert.reason
    raise InstanceError(f"not a weighted certificate: {cert.reason.value}")
