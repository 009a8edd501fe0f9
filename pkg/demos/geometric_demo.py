"""Shifted-grid partition on a random point set, compared with the exact optimum."""

from fractions import Fraction

from udgclique.generators import random_udg
from udgclique.geometric import grid_baseline, run_mincp1
from udgclique.oracle import OracleBudget, exact_cover

inst = random_udg(40, 4, seed=3)
res = run_mincp1(inst.points, Fraction(1, 2), seed=3, max_cell=40)
opt = len(exact_cover(inst.graph, OracleBudget(max_vertices=60)))
print(f"k = {res.k}, {len(res.trials)} shifts tried")
for i, t in enumerate(res.trials):
    print(f"  shift {i}: a={float(t.shift.a):.3f} b={float(t.shift.b):.3f} cells={t.cells} size={t.size}")
print(f"best {len(res.partition)}, grid baseline {len(grid_baseline(inst.points))}, optimum {opt}")
