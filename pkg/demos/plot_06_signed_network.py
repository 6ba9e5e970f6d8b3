"""
Signed and multi-attribute links
================================

Links of several kinds are handled by copying every node once per kind.
Each copy inherits all of the node's out-links, and a link of kind a always
lands on the target's a-copy.  Negative weights become their own kind
("trust-").  The difference between a node's positive and negative scores
is a net score.
"""

import io

import numpy as np

from purerank import build_splitting_network, load_multi_edge_list, multi_purerank, net_score

text = """\
# src dst attribute weight
alice bob   trust  1
bob   alice trust -1
carol alice trust  2
carol bob   trust -1
dave  carol trust  1
bob   dave  trust  1
"""
mg = load_multi_edge_list(io.StringIO(text))
print("attributes:", mg.attributes)

g, copy_map = build_splitting_network(mg)
print(g.n_nodes, "copies,", g.n_edges, "edges")
for s, t, w in g.edges():
    print(f"  {g.labels[s]:>14} -> {g.labels[t]:<14} {w}")

###############################################################################
res = multi_purerank(mg)
for lab, row in zip(mg.labels, res.scores):
    print(f"{lab:>6}", np.round(row, 4))
print("sum over copies:", res.scores.sum())

###############################################################################
net = net_score(res, "trust+", "trust-")
for lab, v in sorted(zip(mg.labels, net), key=lambda x: -x[1]):
    print(f"{lab:>6} {v:+.4f}")
