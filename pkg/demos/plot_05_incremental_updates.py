"""
Recomputing after an edit
=========================

Local vectors depend only on the rows of their own class.  After an edit,
any class whose members and out-rows are unchanged keeps its cached local
vector, and only the assembly step is repeated.
"""

import numpy as np

from purerank import Graph, GraphDelta, PureRankCache, apply_delta, compute, compute_incremental

rng = np.random.default_rng(3)
blocks = [np.arange(k, k + 50) for k in range(0, 200, 50)]
src, dst = [], []
for b in blocks:  # four closed rings with chords
    src += b.tolist() + rng.choice(b, 30).tolist()
    dst += np.roll(b, -1).tolist() + rng.choice(b, 30).tolist()
feeders = np.arange(200, 300)  # transient nodes pointing into the rings
src += np.repeat(feeders, 3).tolist()
dst += rng.integers(0, 300, 300).tolist()
g = Graph.from_edges(src, dst, n_nodes=300)

res = compute(g)
cache = PureRankCache.from_result(g, res)
print("classes:", res.classification.class_ids())

###############################################################################
# reweight a chord inside the first ring
t, w = g.row(0)
delta = GraphDelta([(0, int(t[0]), float(w[0]) * 5)])
g2 = apply_delta(g, delta)
inc = compute_incremental(g2, delta, cache)
print("reused:", inc.stats["reused"])
print("solved:", inc.stats["solved"])
print("L1 vs full recompute:", np.abs(inc.pi - compute(g2).pi).sum())

###############################################################################
# the cache survives a JSON round trip
blob = cache.to_json()
print(len(blob), "bytes")
again = compute_incremental(g2, delta, PureRankCache.from_json(blob))
print(np.array_equal(again.pi, inc.pi))

###############################################################################
# undo the edit
undo = delta.inverse(g)
back = compute_incremental(apply_delta(g2, undo), undo, PureRankCache.from_result(g2, inc))
print("restored:", np.abs(back.pi - res.pi).sum())
