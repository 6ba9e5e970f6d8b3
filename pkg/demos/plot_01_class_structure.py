"""
Class structure of a directed graph
===================================

Every node falls into one of three groups: dangling nodes with no
out-links (D), closed strongly connected components that trap a walker
forever (R1, R2, ...), and everything else (T).
"""

import numpy as np

from purerank import Graph, classify, scc_decompose

# a small graph: two closed loops, a transient chain feeding them, one sink
edges = [
    (0, 1), (1, 0),          # closed pair -> R1
    (2, 3), (3, 4), (4, 2),  # closed triangle -> R2
    (5, 6), (6, 5),          # open pair: 6 also links out
    (6, 0), (5, 2), (6, 7),  # 7 has no out-links -> D
]
src, dst = zip(*edges)
g = Graph.from_edges(src, dst)
print(g.n_nodes, "nodes,", g.n_edges, "edges")

###############################################################################
# Tarjan's algorithm emits components sinks first
print(scc_decompose(g))

###############################################################################
# classify turns components into classes
c = classify(g)
for cid in c.class_ids():
    print(cid, c.members(cid).tolist())

###############################################################################
# the same counts, in the layout of a network statistics table
for key, value in c.summary(g).items():
    print(f"{key}: {value}")

# self-loops matter: a lone node with a self-loop is a closed class of size 1
print(classify(Graph.from_edges([0, 1], [0, 0])).class_of(0))
print(np.asarray(c.kind))
