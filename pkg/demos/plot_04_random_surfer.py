"""
A random surfer that reproduces PureRank
========================================

PureRank has a random-walk reading.  A surfer in T follows out-links.
Whenever a link leads into a recurrent or dangling node, the surfer lands
on a copy of that node and then restarts uniformly in T.  Surfers that
start in a closed class stay there.  Long-run visit frequencies, with the
copies folded back onto their originals, equal PureRank.  The mean length
of a stay in T is 1 / theta_T.
"""

import numpy as np

from purerank import Graph, build_extended_chain, compute, simulate, sojourn_check

g = Graph.from_edges([0, 1, 0], [1, 0, 2])
res = compute(g)
chain = build_extended_chain(g, res.classification)
print("states:", chain.n_states, "(nodes plus copies of R and D nodes)")
print(chain.dense())

###############################################################################
# 10^6 visits in total; stratified starts remove the noise of drawing the
# starting node, so the remaining error is the walk's own
stats = simulate(chain, surfers=100, steps=10_000, seed=0, start="stratified")
print("simulated", stats.frequencies)
print("PureRank ", res.pi)
print("L1", np.abs(stats.frequencies - res.pi).sum())

###############################################################################
# sojourns in T
print(sojourn_check(stats, res.theta_T))

###############################################################################
# independent starts are the textbook version; with few surfers the share
# that begins in each class is itself random
ind = simulate(chain, surfers=100, steps=10_000, seed=0)
print("independent starts, L1", np.abs(ind.frequencies - res.pi).sum())
