"""Ball-growing PTAS that only looks at edge lengths.

Every ball ``B_r(v)`` of the residual graph is solved by ``opt_cp``, an
exhaustive search over clique covers with separator-line side tests from
``predicates``.  The search either returns an optimum partition of the ball
or a certificate that the ball cannot be drawn as a unit disk graph.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .cover import SearchBudget, bits, cover_lower_bound, iter_covers
from .model import (BudgetExceeded, Certificate, CertificateReason, CliquePartition, UdgGraph,
                    ball, edge_key)
from .predicates import QuadDistances, SideResult, heron16, quad_shape, same_side, ShapeKind

DEFAULT_BALL_BUDGET = 2_000_000


# ---------------------------------------------------------------------------
# parameters


def packing_bound(r: int) -> int:
    """Clique count of a radius-r ball: a (1/2)-grid covers the disk of radius r
    with (4r+2)^2 cells, each a clique."""
    return (4 * r + 2) ** 2


def _smallest_even_radius(growth: Fraction) -> int:
    """Smallest even R >= 2 with growth^(R/2 - 1) > (4R + 2)^2.

    log(growth) * (R/2 - 1) - 2 log(4R + 2) is convex in R and negative at
    R = 2, so the feasible set is a ray; bracket it and bisect with exact
    integer comparisons.
    """
    p, q = growth.numerator, growth.denominator

    def ok(R: int) -> bool:
        e = R // 2 - 1
        return p ** e > packing_bound(R) * q ** e

    hi = 2
    while not ok(hi):
        hi *= 2
    lo = hi // 2 if hi > 2 else 0  # lo is infeasible (or below range)
    while hi - lo > 2:
        mid = (lo + hi) // 2
        mid -= mid % 2
        if mid <= lo:
            mid = lo + 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class PtasParams:
    eps: Fraction
    beta: int
    ell: int

    def as_dict(self) -> dict:
        return {"epsilon": self.eps, "beta": self.beta, "ell": self.ell}


def derive_params(eps) -> PtasParams:
    """Ball radius cap and clique-count cap for a given epsilon.

    A ball that keeps growing satisfies |C_r| >= (1+eps)^(r/2 - 1) (it at
    least multiplies by 1+eps every two steps) while packing forces
    |C_r| <= (4r+2)^2, so no ball survives past the first even R where the
    exponential overtakes the square.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    eps = min(eps, Fraction(1))
    beta = _smallest_even_radius(1 + eps)
    return PtasParams(eps, beta, packing_bound(beta))


# ---------------------------------------------------------------------------
# side classification


class NotApplicable(Exception):
    """A length needed for the four-point test is missing."""


class Side(str, enum.Enum):
    POSITIVE_I = "Positive(i)"
    POSITIVE_J = "Positive(j)"
    INCONSISTENT = "Inconsistent"


def _quad(g: UdgGraph, p: int, a: int, b: int, r: int) -> QuadDistances:
    ls = []
    for x, y in ((p, a), (p, b), (p, r), (a, b), (a, r), (b, r)):
        d = g.sqlen.get(edge_key(x, y))
        if d is None:
            raise NotApplicable(f"no edge {x}-{y}")
        ls.append(d)
    return QuadDistances(*ls)


def classify_side(g: UdgGraph, p: int, ci: int, u: int, v: int, cj: int | None = None) -> Side:
    """Which side of the line through ``u``, ``v`` is ``p`` on?

    ``Positive(i)`` means the side of ``ci`` (or on the line).  ``cj`` is
    accepted for symmetry with the two adjacency cases but never needed.
    """
    if p == ci:
        return Side.POSITIVE_I
    res = same_side(_quad(g, p, u, v, ci))
    if res is SideResult.INCONSISTENT:
        return Side.INCONSISTENT
    return Side.POSITIVE_I if res is SideResult.SAME_SIDE else Side.POSITIVE_J


# ---------------------------------------------------------------------------
# OPT-CP


@dataclass(frozen=True)
class BallContext:
    center: int
    radius: int
    vertices: tuple[int, ...]
    graph: UdgGraph  # induced subgraph, local ids

    @classmethod
    def of(cls, g: UdgGraph, center: int, radius: int, alive=None) -> "BallContext":
        vs = ball(g, center, radius, alive)
        sub, old = g.induced(vs)
        return cls(center, radius, tuple(old), sub)

    @classmethod
    def whole(cls, g: UdgGraph) -> "BallContext":
        return cls(0, 0, tuple(range(g.n)), g)


class _Inconsistent(Exception):
    def __init__(self, quad):
        super().__init__(quad)
        self.quad = tuple(quad)


def _check_side(g, p, u, v, r) -> SideResult:
    res = same_side(_quad(g, p, u, v, r))
    if res is SideResult.INCONSISTENT:
        raise _Inconsistent((p, u, v, r))
    return res


def _line_separates(g: UdgGraph, u: int, v: int, own: list[int], other: list[int]) -> bool:
    """Can the line through u, v (both in ``own``) split ``own`` from ``other``?

    Off-line members of ``own`` must share a side.  Points of ``other`` that
    are adjacent to u, v and some off-line member of ``own`` must lie strictly
    on the far side.  Everything else carries no usable length information.
    """
    uv = g.sqlen[edge_key(u, v)]
    off = []
    for c in own:
        if c == u or c == v:
            continue
        h = heron16(uv, g.sqlen[edge_key(u, c)], g.sqlen[edge_key(v, c)])
        if h < 0:
            raise _Inconsistent((c, u, v, c))
        if h > 0:
            off.append(c)
    if off:
        ref = off[0]
        for c in off[1:]:
            if _check_side(g, c, u, v, ref) is SideResult.OPPOSITE_SIDE:
                return False
    nu, nv = g.adj[u], g.adj[v]
    first_far = None
    for p in other:
        if p not in nu or p not in nv:
            continue
        h = heron16(uv, g.sqlen[edge_key(u, p)], g.sqlen[edge_key(v, p)])
        if h < 0:
            raise _Inconsistent((p, u, v, p))
        if h == 0:
            continue
        if off:
            ref = next((c for c in off if c in g.adj[p]), None)
            if ref is None:
                continue
            side = classify_side(g, p, ref, u, v)
            if side is Side.INCONSISTENT:
                raise _Inconsistent((p, u, v, ref))
            if side is Side.POSITIVE_I:
                return False
        else:
            # own is collinear: the far clique just has to avoid straddling
            if first_far is None:
                first_far = p
            elif _check_side(g, p, u, v, first_far) is SideResult.OPPOSITE_SIDE:
                return False
    return True


def _separable_pair(g: UdgGraph, a: list[int], b: list[int]) -> bool:
    for own, other in ((a, b), (b, a)):
        for u, v in combinations(own, 2):
            if _line_separates(g, u, v, own, other):
                return True
    return False


def configuration_ok(g: UdgGraph, blocks: Sequence[Sequence[int]], alpha: int) -> bool:
    """Accept a cover iff every pair of large cliques has a separator guess.

    Raises ``_Inconsistent`` when a four-point test meets impossible lengths.
    """
    large = [sorted(b) for b in blocks if len(b) >= 2 * alpha - 1]
    for a, b in combinations(large, 2):
        if not _separable_pair(g, a, b):
            return False
    return True


@dataclass
class OptCpStats:
    alpha: int = 0
    covers_tried: int = 0


def opt_cp(b: BallContext, ell: int, budget: SearchBudget | int | None = DEFAULT_BALL_BUDGET,
           stats: OptCpStats | None = None) -> CliquePartition | Certificate:
    """Optimum clique partition of a ball, or a non-UDG certificate.

    Cover sizes are tried in increasing order starting from an independent
    set lower bound, so the first accepted cover is a minimum one.  The
    partition is returned in the ids of the original graph.
    """
    g = b.graph
    if not isinstance(budget, SearchBudget):
        budget = SearchBudget(budget)
    stats = stats if stats is not None else OptCpStats()
    if g.n == 0:
        return CliquePartition([])
    masks = list(g.masks)
    for alpha in range(max(1, cover_lower_bound(masks)), min(ell, g.n) + 1):
        stats.alpha = alpha
        for cover in iter_covers(masks, alpha, budget):
            stats.covers_tried += 1
            blocks = [list(bits(m)) for m in cover]
            try:
                if configuration_ok(g, blocks, alpha):
                    return CliquePartition([[b.vertices[v] for v in blk] for blk in blocks])
            except _Inconsistent as e:
                p, u, v, r = e.quad
                return Certificate(CertificateReason.INCONSISTENT_QUADRILATERAL, b.vertices, g,
                                   {"quad": [p, u, v, r], "ell": ell, "center": _local(b)})
    return Certificate(CertificateReason.NO_VALID_CONFIGURATION, b.vertices, g,
                       {"ell": ell, "center": _local(b)})


def _local(b: BallContext) -> int | None:
    try:
        return b.vertices.index(b.center)
    except ValueError:
        return None


# ---------------------------------------------------------------------------
# MinCP2


@dataclass
class BallStep:
    center: int
    radius: int                 # r* at loop exit
    ball: tuple[int, ...]       # B_{r*}(v)
    ball_opt: int               # |C_{r*}(v)|
    removed: tuple[int, ...]    # B_{r*+2}(v)
    committed: int              # |C_{r*+2}(v)|


@dataclass
class Mincp2Run:
    outcome: CliquePartition | Certificate
    params: PtasParams
    steps: list[BallStep] = field(default_factory=list)

    @property
    def lower_bound(self) -> int:
        """Sum of the ball optima; at most opt when the input is a UDG."""
        return sum(s.ball_opt for s in self.steps)


def _pick(alive: set[int], order: Iterable[int] | None, g: UdgGraph):
    if order is not None:
        for v in order:
            if v in alive:
                return v
    return min(alive)


class BallFailure(Exception):
    """Raised by ``grow_ball`` with the certificate it produced."""

    def __init__(self, cert: Certificate):
        super().__init__(cert.reason.value)
        self.cert = cert


def grow_ball(g: UdgGraph, v: int, alive: set[int], params: PtasParams,
              budget: int | None = DEFAULT_BALL_BUDGET) -> tuple[BallStep, CliquePartition]:
    """One outer iteration: grow r around ``v`` inside ``alive`` until the
    clique count stalls, returning the step record and C_{r*+2}(v)."""
    eps = params.eps
    cache: dict[int, tuple[BallContext, CliquePartition]] = {}

    def solve(r: int) -> CliquePartition:
        if r not in cache:
            b = BallContext.of(g, v, r, alive)
            res = opt_cp(b, params.ell, budget)
            if isinstance(res, Certificate):
                ctx = dict(res.context, epsilon=eps, beta=params.beta, radius=r)
                raise BallFailure(Certificate(res.reason, res.vertices, res.graph, ctx))
            cache[r] = (b, res)
        return cache[r][1]

    r = 0
    while len(solve(r + 2)) > (1 + eps) * len(solve(r)):
        r += 1
        if r > params.beta:
            # the last comparison looked at B_{beta+2}(v); ship that ball
            b = BallContext.of(g, v, params.beta + 2, alive)
            raise BallFailure(Certificate(CertificateReason.BALL_TOO_DEEP, b.vertices, b.graph,
                                          {"center": _local(b), "radius": r, "epsilon": eps,
                                           "beta": params.beta, "ell": params.ell}))
        solve(r)
    inner, outer = cache[r], cache[r + 2]
    part = outer[1]
    return BallStep(v, r, inner[0].vertices, len(inner[1]), outer[0].vertices, len(part)), part


def run_mincp2(g: UdgGraph, eps, *, order: Sequence[int] | None = None, params: PtasParams | None = None,
               budget: int | None = DEFAULT_BALL_BUDGET, minimize: bool = True,
               check: bool = True) -> Mincp2Run:
    """Grow balls around successive centres until the graph is used up.

    ``order`` fixes the centre sequence (first still-alive vertex wins); by
    default the lowest remaining id is used.
    """
    params = params or derive_params(eps)
    alive = set(range(g.n))
    run = Mincp2Run(CliquePartition([]), params)
    blocks: list[frozenset[int]] = []
    order = list(order) if order is not None else None
    try:
        while alive:
            v = _pick(alive, order, g)
            step, part = grow_ball(g, v, alive, params, budget)
            blocks.extend(part.blocks)
            run.steps.append(step)
            alive.difference_update(step.removed)
    except BallFailure as stop:
        cert = stop.cert
        if minimize:
            cert = minimize_certificate(cert, budget)
        run.outcome = cert
        return run

    run.outcome = CliquePartition(blocks)
    if check:
        check_run(g, run)
    return run


def mincp2(g: UdgGraph, eps, **kw) -> CliquePartition | Certificate:
    return run_mincp2(g, eps, **kw).outcome


def check_run(g: UdgGraph, run: Mincp2Run) -> None:
    """Runtime checks of the ball-growing invariants on a finished run."""
    seen: set[int] = set()
    for i, s in enumerate(run.steps):
        inner = set(s.ball)
        for t in run.steps[i + 1:]:
            for u in t.ball:
                if g.adj[u] & inner:
                    raise AssertionError(f"balls around {s.center} and {t.center} are adjacent")
        if seen & set(s.removed):
            raise AssertionError("a vertex was removed twice")
        seen |= set(s.removed)
    total = len(run.outcome) if isinstance(run.outcome, CliquePartition) else None
    if total is not None and total > (1 + run.params.eps) * run.lower_bound:
        raise AssertionError("stretch bound violated")


# ---------------------------------------------------------------------------
# certificates


def verify_certificate(cert: Certificate, budget: int | None = DEFAULT_BALL_BUDGET) -> bool:
    """Replay a certificate on its own subgraph; True iff the failure recurs."""
    g = cert.graph
    ctx = cert.context
    reason = cert.reason
    if reason is CertificateReason.INCONSISTENT_QUADRILATERAL:
        quad = ctx.get("quad")
        if not quad or len(quad) != 4:
            return False
        p, u, v, r = quad
        try:
            if p == r:  # a single triangle with impossible sides
                return heron16(g.sqlen[edge_key(u, v)], g.sqlen[edge_key(u, p)], g.sqlen[edge_key(v, p)]) < 0
            return quad_shape(_quad(g, p, u, v, r)).kind is ShapeKind.INCONSISTENT
        except (NotApplicable, KeyError):
            return False
    if reason is CertificateReason.NO_VALID_CONFIGURATION:
        res = opt_cp(BallContext.whole(g), int(ctx["ell"]), budget)
        return isinstance(res, Certificate) and res.reason is reason
    if reason is CertificateReason.BALL_TOO_DEEP and "gamma" in ctx:
        from .weighted import verify_weighted_certificate
        return verify_weighted_certificate(cert)
    if reason is CertificateReason.BALL_TOO_DEEP:
        params = PtasParams(Fraction(ctx["epsilon"]), int(ctx["beta"]), int(ctx["ell"]))
        center = int(ctx["center"])
        run = run_mincp2(g, params.eps, order=[center], params=params, budget=budget,
                         minimize=False, check=False)
        out = run.outcome
        return isinstance(out, Certificate) and out.reason is reason and out.context.get("center") == center
    if reason is CertificateReason.NO_CNEEO:
        from .weighted import cneeo
        return isinstance(cneeo(g), Certificate)
    return False


def minimize_certificate(cert: Certificate, budget: int | None = DEFAULT_BALL_BUDGET,
                         max_checks: int = 200) -> Certificate:
    """Greedily drop vertices while the certificate still replays."""
    if cert.reason is CertificateReason.INCONSISTENT_QUADRILATERAL:
        keep = sorted(set(cert.context["quad"]))
        sub, old = cert.graph.induced(keep)
        pos = {v: i for i, v in enumerate(old)}
        ctx = dict(cert.context, quad=[pos[v] for v in cert.context["quad"]], center=None)
        return Certificate(cert.reason, tuple(cert.vertices[v] for v in old), sub, ctx)
    if cert.reason is CertificateReason.BALL_TOO_DEEP:
        return cert  # the whole ball is what the replay grows through
    current = cert
    checks = 0
    for v in sorted(range(cert.graph.n), reverse=True):
        if checks >= max_checks or current.graph.n <= 1:
            break
        local = [i for i, ov in enumerate(current.vertices) if ov != cert.vertices[v]]
        if len(local) == current.graph.n:
            continue
        sub, old = current.graph.induced(local)
        trial = Certificate(current.reason, tuple(current.vertices[i] for i in old), sub,
                            dict(current.context, center=None))
        checks += 1
        try:
            if verify_certificate(trial, budget):
                current = trial
        except BudgetExceeded:
            break
    return current
