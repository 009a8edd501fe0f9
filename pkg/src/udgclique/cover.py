"""Bitmask search for clique covers with a fixed number of blocks.

Vertices are local indices ``0..m-1`` and ``masks[i]`` is the neighbourhood
of ``i``.  The search assigns the most constrained vertex next (fewest blocks
it may join), which is DSATUR on the complement graph.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from .model import BudgetExceeded, UdgGraph


class SearchBudget:
    def __init__(self, limit: int | None = 2_000_000):
        self.limit = limit
        self.used = 0

    def tick(self, what: str = "search"):
        self.used += 1
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(f"{what} exceeded {self.limit} nodes")


def local_masks(g: UdgGraph, vertices: Sequence[int]) -> list[int]:
    index = {v: i for i, v in enumerate(vertices)}
    out = []
    for v in vertices:
        m = 0
        for u in g.adj[v]:
            j = index.get(u)
            if j is not None:
                m |= 1 << j
        out.append(m)
    return out


def bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def greedy_independent(masks: Sequence[int], within: int) -> int:
    """Size of a greedy (min-degree first) independent set inside ``within``."""
    size = 0
    rest = within
    while rest:
        best, best_deg = -1, None
        for v in bits(rest):
            d = (masks[v] & rest).bit_count()
            if best_deg is None or d < best_deg:
                best, best_deg = v, d
                if d == 0:
                    break
        size += 1
        rest &= ~(masks[best] | (1 << best))
    return size


def iter_covers(masks: Sequence[int], alpha: int, budget: SearchBudget | None = None) -> Iterator[list[int]]:
    """Yield every partition of the vertices into exactly ``alpha`` cliques.

    Blocks are returned as bitmasks.  Each set partition appears once.
    """
    m = len(masks)
    full = (1 << m) - 1
    if m == 0:
        if alpha == 0:
            yield []
        return
    if alpha <= 0:
        return
    budget = budget or SearchBudget(None)
    blocks: list[int] = []
    cands: list[int] = []

    def rec(unassigned: int) -> Iterator[list[int]]:
        budget.tick("clique-cover search")
        if not unassigned:
            if len(blocks) == alpha:
                yield list(blocks)
            return
        open_new = len(blocks) < alpha
        homeless = unassigned
        for c in cands:
            homeless &= ~c
        if homeless and greedy_independent(masks, homeless) > alpha - len(blocks):
            return
        best, best_opts = -1, None
        for v in bits(unassigned):
            bit = 1 << v
            opts = sum(1 for c in cands if c & bit) + open_new
            if opts == 0:
                return
            if best_opts is None or opts < best_opts:
                best, best_opts = v, opts
                if opts == 1:
                    break
        v, bit = best, 1 << best
        rest = unassigned & ~bit
        for i in range(len(blocks)):
            if cands[i] & bit:
                old_b, old_c = blocks[i], cands[i]
                blocks[i] = old_b | bit
                cands[i] = old_c & masks[v]
                yield from rec(rest)
                blocks[i], cands[i] = old_b, old_c
        if open_new:
            blocks.append(bit)
            cands.append(masks[v] & full)
            yield from rec(rest)
            blocks.pop()
            cands.pop()

    yield from rec(full)


def cover_lower_bound(masks: Sequence[int]) -> int:
    return greedy_independent(masks, (1 << len(masks)) - 1) if masks else 0


def min_cover(masks: Sequence[int], budget: SearchBudget | None = None) -> list[int]:
    """A minimum clique cover as block bitmasks."""
    m = len(masks)
    for alpha in range(cover_lower_bound(masks), m + 1):
        for cover in iter_covers(masks, alpha, budget):
            return cover
    return []


def blocks_to_vertices(cover: Sequence[int], vertices: Sequence[int]) -> list[list[int]]:
    return [[vertices[i] for i in bits(b)] for b in cover]
