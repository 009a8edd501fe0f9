"""Instance and graph data model.

Everything geometric is carried as :class:`fractions.Fraction`; no float ever
reaches a decision.  Vertex ids are ``0..n-1``.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Point = tuple[Fraction, Fraction]
Edge = tuple[int, int]


class InstanceError(ValueError):
    """Raised for malformed or degenerate input."""


class BudgetExceeded(RuntimeError):
    """An exact search hit its configured budget; no silent approximation."""


def frac(x) -> Fraction:
    """Coerce ints, Fractions, ``(num, den)`` pairs and decimal strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (tuple, list)):
        num, den = x
        return Fraction(int(num), int(den))
    if isinstance(x, float):
        raise InstanceError("floats are not accepted; pass a Fraction or (num, den)")
    return Fraction(x)


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def sqdist(p: Point, q: Point) -> Fraction:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy


@dataclass(frozen=True)
class PointSet:
    points: tuple[Point, ...]
    weights: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        pts = tuple((frac(x), frac(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if self.weights is not None:
            w = tuple(frac(x) for x in self.weights)
            if len(w) != len(pts):
                raise InstanceError("weights must have one entry per point")
            if any(x <= 0 for x in w):
                raise InstanceError("weights must be positive")
            object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class UdgGraph:
    """Adjacency plus squared edge lengths.

    ``sqlen`` is keyed by ``(u, v)`` with ``u < v`` and defined for exactly the
    edge set.  Metric algorithms never see coordinates.
    """

    n: int
    adj: tuple[frozenset[int], ...]
    sqlen: Mapping[Edge, Fraction]
    weights: tuple[Fraction, ...] | None = None
    _masks: tuple[int, ...] = field(default=(), repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, sqlen: Mapping[Edge, Fraction] | Iterable[Edge],
                   weights: Sequence | None = None) -> "UdgGraph":
        if not isinstance(sqlen, Mapping):
            sqlen = {edge_key(u, v): Fraction(1) for u, v in sqlen}
        nbrs: list[set[int]] = [set() for _ in range(n)]
        table: dict[Edge, Fraction] = {}
        for (u, v), length in sqlen.items():
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise InstanceError(f"bad edge {(u, v)}")
            length = frac(length)
            if length <= 0:
                raise InstanceError(f"edge {(u, v)} has non-positive squared length")
            nbrs[u].add(v)
            nbrs[v].add(u)
            table[edge_key(u, v)] = length
        w = None if weights is None else tuple(frac(x) for x in weights)
        if w is not None and (len(w) != n or any(x <= 0 for x in w)):
            raise InstanceError("weights must be n positive rationals")
        return cls(n, tuple(frozenset(s) for s in nbrs), table, w)

    @property
    def edges(self) -> list[Edge]:
        return sorted(self.sqlen)

    @property
    def masks(self) -> tuple[int, ...]:
        if not self._masks:
            masks = []
            for s in self.adj:
                m = 0
                for v in s:
                    m |= 1 << v
                masks.append(m)
            object.__setattr__(self, "_masks", tuple(masks))
        return self._masks

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def length2(self, u: int, v: int) -> Fraction | None:
        return self.sqlen.get(edge_key(u, v))

    def weight(self, v: int) -> Fraction:
        return Fraction(1) if self.weights is None else self.weights[v]

    def is_clique(self, block: Iterable[int]) -> bool:
        block = list(block)
        for i, u in enumerate(block):
            nu = self.adj[u]
            for v in block[i + 1:]:
                if v not in nu:
                    return False
        return True

    def induced(self, vertices: Iterable[int]) -> tuple["UdgGraph", list[int]]:
        """Relabelled induced subgraph and the new-id -> old-id map."""
        old = sorted(set(vertices))
        new = {v: i for i, v in enumerate(old)}
        table = {}
        for v in old:
            for u in self.adj[v]:
                if u in new and v < u:
                    table[(new[v], new[u])] = self.sqlen[(v, u)]
        w = None if self.weights is None else [self.weights[v] for v in old]
        return UdgGraph.from_edges(len(old), table, w), old

    def with_weights(self, weights: Sequence | None) -> "UdgGraph":
        return UdgGraph.from_edges(self.n, self.sqlen, weights)

    def unit_weighted(self) -> bool:
        return self.weights is None or all(w == 1 for w in self.weights)


@dataclass(frozen=True)
class CliquePartition:
    blocks: tuple[frozenset[int], ...]

    def __init__(self, blocks: Iterable[Iterable[int]]):
        canon = sorted((frozenset(b) for b in blocks), key=lambda b: (min(b) if b else -1, len(b)))
        object.__setattr__(self, "blocks", tuple(canon))

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def as_lists(self) -> list[list[int]]:
        return [sorted(b) for b in self.blocks]

    def cost(self, weights: Sequence[Fraction] | None) -> Fraction:
        """Sum over blocks of the heaviest vertex; block count when unweighted."""
        if weights is None:
            return Fraction(len(self.blocks))
        return sum((max(weights[v] for v in b) for b in self.blocks), Fraction(0))

    def relabel(self, mapping: Sequence[int]) -> "CliquePartition":
        return CliquePartition([[mapping[v] for v in b] for b in self.blocks])


class CertificateReason(str, enum.Enum):
    BALL_TOO_DEEP = "BallTooDeep"
    NO_VALID_CONFIGURATION = "NoValidConfiguration"
    INCONSISTENT_QUADRILATERAL = "InconsistentQuadrilateral"
    NO_CNEEO = "NoCneeo"


@dataclass(frozen=True)
class Certificate:
    """Evidence that the input is not a unit disk graph.

    ``graph`` is the certificate subgraph relabelled to ``0..m-1``;
    ``vertices[i]`` is the original id of new vertex ``i``.  ``context``
    carries whatever the replay needs (center, radius, epsilon, ...).
    """

    reason: CertificateReason
    vertices: tuple[int, ...]
    graph: UdgGraph
    context: Mapping = field(default_factory=dict)

    @classmethod
    def on(cls, g: UdgGraph, vertices: Iterable[int], reason: CertificateReason,
           **context) -> "Certificate":
        sub, old = g.induced(vertices)
        return cls(reason, tuple(old), sub, dict(context))


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[str, ...]
    size: int
    weighted_cost: Fraction | None = None


def build_udg(ps: PointSet) -> UdgGraph:
    pts = ps.points
    seen: dict[Point, int] = {}
    for i, p in enumerate(pts):
        if p in seen:
            raise InstanceError(f"duplicate point: vertices {seen[p]} and {i} coincide")
        seen[p] = i
    table = {}
    for i in range(len(pts)):
        pi = pts[i]
        for j in range(i + 1, len(pts)):
            d = sqdist(pi, pts[j])
            if d <= 1:
                table[(i, j)] = d
    return UdgGraph.from_edges(len(pts), table, ps.weights)


def validate_partition(g: UdgGraph, p: CliquePartition | Iterable[Iterable[int]]) -> ValidationReport:
    blocks = [list(b) for b in p]
    violations = []
    owner: dict[int, int] = {}
    for bi, b in enumerate(blocks):
        if not b:
            violations.append(f"empty block {bi}")
        for v in b:
            if not 0 <= v < g.n:
                violations.append(f"unknown vertex {v}")
            elif v in owner:
                violations.append(f"duplicate vertex {v}")
            else:
                owner[v] = bi
        for i, u in enumerate(b):
            for v in b[i + 1:]:
                if 0 <= u < g.n and 0 <= v < g.n and u != v and not g.has_edge(u, v):
                    violations.append(f"non-edge {edge_key(u, v)} in block {bi}")
    for v in range(g.n):
        if v not in owner:
            violations.append(f"missing vertex {v}")
    cost = None
    if g.weights is not None and not violations:
        cost = sum((max(g.weights[v] for v in b) for b in blocks), Fraction(0))
    return ValidationReport(not violations, tuple(violations), len(blocks), cost)


def ball(g: UdgGraph, v: int, r: int, alive: Iterable[int] | None = None) -> set[int]:
    """Vertices within ``r`` hops of ``v``, optionally inside ``alive`` only."""
    return set(bfs_levels(g, v, r, alive))


def bfs_levels(g: UdgGraph, v: int, r: int, alive: Iterable[int] | None = None) -> dict[int, int]:
    if r < 0:
        raise ValueError("radius must be non-negative")
    alive = None if alive is None else set(alive)
    if alive is not None and v not in alive:
        raise ValueError(f"center {v} is not alive")
    dist = {v: 0}
    q = deque([v])
    while q:
        u = q.popleft()
        d = dist[u]
        if d == r:
            continue
        for w in g.adj[u]:
            if w not in dist and (alive is None or w in alive):
                dist[w] = d + 1
                q.append(w)
    return dist


def components(g: UdgGraph, vertices: Iterable[int] | None = None) -> list[list[int]]:
    rest = set(range(g.n)) if vertices is None else set(vertices)
    out = []
    while rest:
        s = min(rest)
        comp = {s}
        q = deque([s])
        while q:
            u = q.popleft()
            for w in g.adj[u]:
                if w in rest and w not in comp:
                    comp.add(w)
                    q.append(w)
        rest -= comp
        out.append(sorted(comp))
    return out
