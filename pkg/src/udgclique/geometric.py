"""Shifted-grid PTAS for point instances.

The plane is cut into ``k x k`` cells by a randomly shifted grid, each cell
is solved exactly, and the union is kept.  The best of ``ceil(log2 n)``
independent shifts is returned.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .cover import SearchBudget, bits, min_cover
from .model import BudgetExceeded, CliquePartition, Point, PointSet, UdgGraph, build_udg
from .predicates import hulls_overlap

SHIFT_DENOM = 1 << 20


class CellTooLarge(BudgetExceeded):
    pass


class SeparationStuck(RuntimeError):
    pass


def epsilon_to_k(eps) -> int:
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    return math.ceil(16 / eps)


@dataclass(frozen=True)
class GridShift:
    k: int
    a: Fraction
    b: Fraction

    def __post_init__(self):
        if not (0 <= self.a < self.k and 0 <= self.b < self.k):
            raise ValueError("shift must lie in [0, k)^2")

    def cell(self, p: Point) -> tuple[int, int]:
        # half-open cells [a + ik, a + (i+1)k): a point on a grid line goes up/right
        return (math.floor((p[0] - self.a) / self.k), math.floor((p[1] - self.b) / self.k))


@dataclass(frozen=True)
class CellInstance:
    key: tuple[int, int]
    vertices: tuple[int, ...]
    coords: tuple[Point, ...]


def random_shift(k: int, rng: np.random.Generator) -> GridShift:
    a, b = rng.integers(0, k * SHIFT_DENOM, size=2)
    return GridShift(k, Fraction(int(a), SHIFT_DENOM), Fraction(int(b), SHIFT_DENOM))


def split_cells(ps: PointSet, shift: GridShift) -> list[CellInstance]:
    groups: dict[tuple[int, int], list[int]] = {}
    for i, p in enumerate(ps.points):
        groups.setdefault(shift.cell(p), []).append(i)
    return [CellInstance(key, tuple(vs), tuple(ps.points[v] for v in vs))
            for key, vs in sorted(groups.items())]


def _cell_masks(coords) -> list[int]:
    m = len(coords)
    masks = [0] * m
    for i in range(m):
        xi, yi = coords[i]
        for j in range(i + 1, m):
            dx, dy = xi - coords[j][0], yi - coords[j][1]
            if dx * dx + dy * dy <= 1:
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return masks


def _solve_masks(masks: list[int]) -> list[int]:
    return min_cover(masks, SearchBudget(5_000_000))


def cell_opt_partition(c: CellInstance, max_cell: int = 25) -> CliquePartition:
    """Minimum clique partition of the UDG induced by one cell's points."""
    if len(c.vertices) > max_cell:
        raise CellTooLarge(
            f"cell {c.key} holds {len(c.vertices)} points (> {max_cell}); use a larger epsilon or raise max_cell")
    cover = _solve_masks(_cell_masks(c.coords))
    return CliquePartition([[c.vertices[i] for i in bits(b)] for b in cover])


@dataclass
class Trial:
    shift: GridShift
    cells: int
    cut_edges: int
    size: int


@dataclass
class Mincp1Result:
    partition: CliquePartition
    k: int
    trials: list[Trial] = field(default_factory=list)

    @property
    def best_trial(self) -> int:
        return min(range(len(self.trials)), key=lambda i: (self.trials[i].size, i))


def shifted_grid_partition(ps: PointSet, shift: GridShift, max_cell: int = 25,
                           pool: ProcessPoolExecutor | None = None) -> tuple[CliquePartition, Trial]:
    cells = split_cells(ps, shift)
    for c in cells:
        if len(c.vertices) > max_cell:
            raise CellTooLarge(
                f"cell {c.key} holds {len(c.vertices)} points (> {max_cell}); use a larger epsilon or raise max_cell")
    masks = [_cell_masks(c.coords) for c in cells]
    covers = list(pool.map(_solve_masks, masks)) if pool is not None else [_solve_masks(m) for m in masks]
    blocks = []
    for c, cover in zip(cells, covers):
        blocks.extend([c.vertices[i] for i in bits(b)] for b in cover)
    owner = {v: c.key for c in cells for v in c.vertices}
    g = build_udg(ps)
    cut = sum(1 for u, v in g.edges if owner[u] != owner[v])
    part = CliquePartition(blocks)
    return part, Trial(shift, len(cells), cut, len(part))


def trial_count(n: int) -> int:
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


def run_mincp1(ps: PointSet, eps, seed: int = 0, *, max_cell: int = 25, workers: int = 1) -> Mincp1Result:
    k = epsilon_to_k(eps)
    rng = np.random.default_rng(seed)
    shifts = [random_shift(k, rng) for _ in range(trial_count(len(ps)))]
    result = Mincp1Result(CliquePartition([]), k)
    best = None
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for shift in shifts:
            part, trial = shifted_grid_partition(ps, shift, max_cell, pool)
            result.trials.append(trial)
            if best is None or len(part) < len(best):
                best = part
    finally:
        if pool is not None:
            pool.shutdown()
    result.partition = best if best is not None else CliquePartition([])
    return result


def mincp1(ps: PointSet, eps, seed: int = 0, *, max_cell: int = 25, workers: int = 1) -> CliquePartition:
    return run_mincp1(ps, eps, seed, max_cell=max_cell, workers=workers).partition


def grid_baseline(ps: PointSet) -> CliquePartition:
    """Cover by a fixed grid of 1/2 x 1/2 cells; each cell is a clique."""
    groups: dict[tuple[int, int], list[int]] = {}
    for i, (x, y) in enumerate(ps.points):
        groups.setdefault((math.floor(2 * x), math.floor(2 * y)), []).append(i)
    return CliquePartition(groups.values())


# ---------------------------------------------------------------------------
# separable repair


class _Scaled:
    """Integer coordinates on a common denominator, for fast potentials."""

    def __init__(self, points):
        den = 1
        for x, y in points:
            den = math.lcm(den, x.denominator, y.denominator)
        self.den = den
        self.xy = [(int(x * den), int(y * den)) for x, y in points]
        self.one = den * den

    def sq(self, i, j):
        (x1, y1), (x2, y2) = self.xy[i], self.xy[j]
        return (x1 - x2) ** 2 + (y1 - y2) ** 2

    def phi(self, block) -> int:
        # sum over pairs |u - v|^2 = |B| * sum |u|^2 - |sum u|^2
        sx = sy = ss = 0
        for v in block:
            x, y = self.xy[v]
            sx += x
            sy += y
            ss += x * x + y * y
        return len(block) * ss - sx * sx - sy * sy


def potential(points, partition) -> Fraction:
    s = _Scaled(points)
    return Fraction(sum(s.phi(b) for b in partition), s.one)


def two_clique_splits(union: list[int], adjacent, limit: int = 1 << 16):
    """All splits of ``union`` into (A, B), both cliques, A holding min(union).

    The complement of the union must be bipartite; each complement component
    can be oriented two ways.
    """
    comp_of: dict[int, int] = {}
    side: dict[int, int] = {}
    comps: list[list[int]] = []
    for s in union:
        if s in side:
            continue
        side[s] = 0
        comp_of[s] = len(comps)
        stack, comp = [s], [s]
        while stack:
            u = stack.pop()
            for w in union:
                if w != u and not adjacent(u, w):
                    if w not in side:
                        side[w] = 1 - side[u]
                        comp_of[w] = len(comps)
                        comp.append(w)
                        stack.append(w)
                    elif side[w] == side[u]:
                        return
        comps.append(comp)
    if 1 << (len(comps) - 1) > limit:
        raise SeparationStuck(f"{len(comps)} independent components; too many splits to enumerate")
    for mask in range(1 << (len(comps) - 1)):
        A, B = [], []
        for v in union:
            c = comp_of[v]
            flip = (mask >> (c - 1)) & 1 if c > 0 else 0
            (A if side[v] ^ flip == 0 else B).append(v)
        yield sorted(A), sorted(B)


def separable_repair(points, p: CliquePartition, max_rounds: int | None = None) -> CliquePartition:
    """Rework a clique partition until no two block hulls overlap.

    An overlapping pair is replaced by the two-clique split of its union with
    least potential (sum of squared intra-block distances).  If no split
    lowers the potential, the least-potential split with disjoint hulls is
    used instead, never revisiting a partition.  Block count never changes.
    """
    if isinstance(points, PointSet):
        points = points.points
    pts = list(points)
    s = _Scaled(pts)

    def adjacent(u, v):
        return s.sq(u, v) <= s.one

    blocks = [sorted(b) for b in p]
    seen = {frozenset(frozenset(b) for b in blocks)}
    rounds = 0
    limit = max_rounds if max_rounds is not None else 50 * max(1, len(blocks)) ** 2
    while True:
        blocks.sort()
        pair = next(((i, j) for i, j in combinations(range(len(blocks)), 2)
                     if hulls_overlap([pts[v] for v in blocks[i]], [pts[v] for v in blocks[j]])), None)
        if pair is None:
            return CliquePartition(blocks)
        rounds += 1
        if rounds > limit:
            raise SeparationStuck(f"no separable partition after {limit} exchanges")
        i, j = pair
        union = sorted(blocks[i] + blocks[j])
        current = s.phi(blocks[i]) + s.phi(blocks[j])
        splits = [(A, B) for A, B in two_clique_splits(union, adjacent) if B]
        rest = [b for t, b in enumerate(blocks) if t not in (i, j)]
        ranked = sorted(splits, key=lambda ab: (s.phi(ab[0]) + s.phi(ab[1]), ab))
        choice = None
        if ranked and s.phi(ranked[0][0]) + s.phi(ranked[0][1]) < current:
            choice = ranked[0]
        else:
            for A, B in ranked:
                cand = frozenset(frozenset(b) for b in rest + [A, B])
                if cand in seen:
                    continue
                if not hulls_overlap([pts[v] for v in A], [pts[v] for v in B]):
                    choice = (A, B)
                    break
        if choice is None:
            raise SeparationStuck(f"blocks {blocks[i]} and {blocks[j]} admit no improving or separable split")
        blocks = rest + [choice[0], choice[1]]
        seen.add(frozenset(frozenset(b) for b in blocks))
