"""Weighted partitions: the two-polygon instance and a co-bipartite-free counterexample."""

from udgclique.generators import two_kgon
from udgclique.model import UdgGraph
from udgclique.oracle import exact_cover_weighted
from udgclique.weighted import cneeo, run_mincp_weighted, weighted_params

p = weighted_params(1)
print(f"epsilon=1: gamma={float(p.gamma):.6f}, beta={p.beta}, ell={p.ell}")

inst = two_kgon(7)
g = inst.graph
run = run_mincp_weighted(g, eps=1)
print(f"two_kgon(7): optimum {exact_cover_weighted(g).cost(g.weights)}, found {run.outcome.cost(g.weights)}, "
      f"{run.cp_stats.states} residual graphs explored")

side = {v: v // 3 for v in range(9)}
k333 = UdgGraph.from_edges(9, [(u, v) for u in range(9) for v in range(u + 1, 9) if side[u] != side[v]])
print(f"K_3,3,3: {cneeo(k333).reason.value}")
