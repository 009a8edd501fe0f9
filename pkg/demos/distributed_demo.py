"""The distributed variant on a long strip, with its sequential replay."""

from fractions import Fraction

from udgclique.generators import random_udg
from udgclique.local import distr_mcp, replay_sequential

g = random_udg(240, 40, seed=1, height=Fraction(1, 2)).graph
run = distr_mcp(g, 1, seed=1)
s = run.stats
print(f"{s.leaders} leaders, {s.colors} colours, cluster degree {s.cluster_degree}")
print(f"{s.rounds} rounds ({float(s.rounds / s.beta):.1f} x beta), {s.messages} messages")
for phase, rounds in sorted(s.phases.items()):
    print(f"  {phase:14s} {rounds}")
rep = replay_sequential(g, run)
print(f"{len(run.outcome)} blocks; sequential replay identical: {rep.outcome == run.outcome}")
