"""Ball growing on lengths only: a partition for a real instance, a certificate for a fake one."""

import random
from fractions import Fraction

from udgclique.generators import random_udg
from udgclique.metric import derive_params, run_mincp2, verify_certificate
from udgclique.model import Certificate, UdgGraph

p = derive_params(1)
print(f"epsilon=1: beta={p.beta}, ell={p.ell}")

g = random_udg(30, 3, seed=1).graph
run = run_mincp2(g, 1)
print(f"realised instance: {len(run.outcome)} blocks from {len(run.steps)} balls, lower bound {run.lower_bound}")

rng = random.Random(0)
fake = UdgGraph.from_edges(25, {e: d * Fraction(rng.randint(1, 1000), 1000) if rng.random() < 0.3 else d
                                for e, d in random_udg(25, 2, seed=100).graph.sqlen.items()})
out = run_mincp2(fake, 1).outcome
if isinstance(out, Certificate):
    print(f"fabricated lengths: {out.reason.value} on vertices {list(out.vertices)}, replays: {verify_certificate(out)}")
else:
    print(f"fabricated lengths happened to be accepted: {len(out)} blocks")
