"""Seeded instance generators.

Every generator is a pure function of its parameters and seed.  Random
coordinates live on the dyadic grid ``2**-20`` so squared distances stay
exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .model import InstanceError, PointSet, UdgGraph, build_udg

GRID_BITS = 20
GRID = 1 << GRID_BITS


@dataclass(frozen=True)
class Instance:
    """A point set (coordinate instance) or a bare metric graph."""

    points: PointSet | None = None
    graph: UdgGraph | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.points is None and self.graph is None:
            raise InstanceError("instance needs points or a graph")
        if self.graph is None:
            object.__setattr__(self, "graph", build_udg(self.points))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def weights(self):
        return self.graph.weights


def _grid_coord(u: int) -> Fraction:
    return Fraction(int(u), GRID)


def _rational(x: float) -> Fraction:
    return Fraction(round(x * GRID), GRID)


def random_points(n: int, width, height=None, seed: int = 0, distinct: bool = True) -> list[tuple[Fraction, Fraction]]:
    width = Fraction(width)
    height = width if height is None else Fraction(height)
    rng = np.random.default_rng(seed)
    wx = int(width * GRID)
    wy = int(height * GRID)
    if wx <= 0 or wy <= 0:
        raise InstanceError("box sides must be positive")
    seen = set()
    out = []
    while len(out) < n:
        x, y = rng.integers(0, wx), rng.integers(0, wy)
        if distinct and (x, y) in seen:
            continue
        seen.add((x, y))
        out.append((_grid_coord(x), _grid_coord(y)))
    return out


def random_udg(n: int, box_side, seed: int = 0, *, height=None, weights=None) -> Instance:
    """``n`` uniform points in ``[0, box_side) x [0, height)``.

    ``weights`` may be ``None`` (unweighted), ``"random"`` (integers 1..10)
    or an explicit sequence.
    """
    if n < 0:
        raise InstanceError("n must be non-negative")
    pts = random_points(n, box_side, height, seed)
    w = None
    if isinstance(weights, str):
        if weights != "random":
            raise InstanceError(f"unknown weight mode {weights!r}")
        rng = np.random.default_rng([seed, 1])
        w = [Fraction(int(x)) for x in rng.integers(1, 11, size=n)]
    elif weights is not None:
        w = list(weights)
    return Instance(PointSet(tuple(pts), None if w is None else tuple(w)),
                    meta={"spec": "random_udg", "n": n, "box_side": str(Fraction(box_side)),
                          "height": None if height is None else str(Fraction(height)), "seed": seed})


def _polygon(k: int, radius: float, phase: float) -> list[tuple[Fraction, Fraction]]:
    return [(_rational(radius * math.cos(phase + 2 * math.pi * i / k)),
             _rational(radius * math.sin(phase + 2 * math.pi * i / k))) for i in range(k)]


def two_kgon(k: int, seed: int = 0) -> Instance:
    """Two concentric k-gons; ``b_i`` sits diametrically opposite ``a_i``.

    Vertices ``0..k-1`` are the A-gon (weight k), ``k..2k-1`` the B-gon
    (weight 1).  ``a_i`` and ``b_i`` are non-adjacent; every other pair is
    adjacent.  The optimum weighted partition is ``{A}, {B}`` of weight k+1.
    Only odd ``k >= 3`` can be realised this way.
    """
    if k < 3 or k % 2 == 0:
        raise InstanceError("two_kgon needs odd k >= 3 (even k forces a_i, b_i too close)")
    # a_i, b_i are at distance 2R > 1; the widest other pairs subtend
    # pi - 2pi/k (cross) and 2pi*floor(k/2)/k (within a gon).
    widest = max(math.sin(math.pi * (k // 2) / k), math.cos(math.pi / k))
    hi = 1 / (2 * widest)
    if hi <= 0.5 + 2.0 ** -16:
        raise InstanceError(f"two_kgon({k}) has no feasible radius")
    radius = (0.5 + hi) / 2
    A = _polygon(k, radius, 0.0)
    B = _polygon(k, radius, math.pi)
    pts = tuple(A + B)
    weights = tuple([Fraction(k)] * k + [Fraction(1)] * k)
    inst = Instance(PointSet(pts, weights), meta={"spec": "two_kgon", "k": k, "seed": seed})
    g = inst.graph
    for i in range(2 * k):
        for j in range(i + 1, 2 * k):
            want = not (j == i + k)
            if g.has_edge(i, j) != want:
                raise InstanceError(f"two_kgon({k}) rounding broke pair {(i, j)}")
    return inst


def matching_cliques(t: int, seed: int = 0, spacing=None) -> Instance:
    """Two t-cliques joined by a perfect matching (a_i ~ b_i only)."""
    if t < 1:
        raise InstanceError("t must be positive")
    step = Fraction(1, 2 * t) if spacing is None else Fraction(spacing)
    if (t - 1) * step > 1:
        raise InstanceError("cliques too wide")
    A = [(i * step, Fraction(0)) for i in range(t)]
    B = [(i * step, Fraction(1)) for i in range(t)]
    return Instance(PointSet(tuple(A + B)), meta={"spec": "matching_cliques", "t": t, "seed": seed})


def single_cell(n: int, k, seed: int = 0) -> Instance:
    """``n`` random points inside one ``k x k`` square ``[0, k)^2``."""
    inst = random_udg(n, k, seed)
    inst.meta.update(spec="single_cell", k=str(Fraction(k)))
    return inst


GENERATORS = {
    "random_udg": random_udg,
    "two_kgon": two_kgon,
    "matching_cliques": matching_cliques,
    "single_cell": single_cell,
}


def gen_instance(spec: str, seed: int = 0, **params) -> Instance:
    try:
        fn = GENERATORS[spec]
    except KeyError:
        raise InstanceError(f"unknown generator {spec!r}; choose from {sorted(GENERATORS)}") from None
    return fn(seed=seed, **params)
