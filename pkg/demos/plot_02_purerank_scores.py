"""
PureRank on a tiny graph
========================

Scores come from one local vector per class.  Each class keeps a share of
the total proportional to its size, and the transient class hands on
whatever leaks out of it to the nodes it links to.
"""

import numpy as np

from purerank import Graph, SolverOptions, compute

# 1 <-> 2 and 1 -> 3; node 3 is dangling
g = Graph.from_edges([0, 1, 0], [1, 0, 2], labels=["1", "2", "3"])
res = compute(g, SolverOptions(tolerance=1e-14))

print("pi       ", res.pi)
print("pi * 27  ", res.pi * 27)          # (8, 6, 13)
print("theta_T  ", res.theta_T, 2 / 7)   # leakage out of T per step
print("sum      ", res.total_sum)

###############################################################################
# the local vector of T, and the per-class solver statistics
print(res.locals["T"].values)            # (4/7, 3/7)
for cid, st in res.class_stats().items():
    print(cid, st)

###############################################################################
# on a strongly connected graph PureRank is the plain stationary distribution
ring = Graph.from_edges([0, 1, 2, 2], [1, 2, 0, 1])
pi = compute(ring).pi
print(pi, np.abs(pi @ ring.P.toarray() - pi).sum())

###############################################################################
# multiplying every weight by the same constant changes nothing
print(np.abs(compute(g.scaled(3.0)).pi - res.pi).max())
