"""Split a graph into dangling, transient and recurrent node classes.

Dangling nodes (class D) have no out-edges at all.  The remaining nodes are
cut into strongly connected components; components with no edge leaving
them become recurrent classes ``R1..RK`` and everything else is pooled into
the transient class T.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from purerank.errors import ValidationError
from purerank.graph import Graph

DANGLING, TRANSIENT, RECURRENT = 0, 1, 2
KIND_NAMES = {DANGLING: "D", TRANSIENT: "T", RECURRENT: "R"}

FINGERPRINT_VERSION = 1


def scc_decompose(g: Graph, subset=None) -> list[list[int]]:
    """Strongly connected components of the subgraph induced by ``subset``.

    Components are returned in reverse topological order of the
    condensation: each one comes after every component it can reach.
    Iterative Tarjan, so deep graphs do not hit the recursion limit.
    """
    n = g.n_nodes
    if subset is None:
        allowed = np.ones(n, dtype=bool)
    else:
        allowed = np.zeros(n, dtype=bool)
        allowed[np.asarray(list(subset) if not isinstance(subset, np.ndarray) else subset, dtype=np.int64)] = True
    indptr = g.indptr.tolist()
    indices = g.indices.tolist()
    ok = allowed.tolist()

    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0

    for root in range(n):
        if not ok[root] or index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        # frames hold (node, next edge position)
        work = [(root, indptr[root])]
        while work:
            v, pos = work[-1]
            end = indptr[v + 1]
            descended = False
            while pos < end:
                w = indices[pos]
                pos += 1
                if not ok[w]:
                    continue
                if index[w] == -1:
                    work[-1] = (v, pos)
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, indptr[w]))
                    descended = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if descended:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                sccs.append(comp)
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
    return sccs


@dataclass(frozen=True, eq=False)
class Classification:
    """Partition of the node set into D, T and R1..RK.

    ``kind`` holds one of ``DANGLING``/``TRANSIENT``/``RECURRENT`` per node
    and ``rclass`` the 1-based recurrent class index (0 outside R).
    ``scc_id`` is diagnostic only (-1 for dangling nodes).
    """

    kind: np.ndarray
    rclass: np.ndarray
    scc_id: np.ndarray
    n_recurrent: int

    @property
    def n_nodes(self) -> int:
        return len(self.kind)

    @cached_property
    def _members(self) -> dict:
        out = {}
        order = np.argsort(self.rclass, kind="stable")
        r_sorted = self.rclass[order]
        bounds = np.searchsorted(r_sorted, np.arange(1, self.n_recurrent + 2))
        for k in range(1, self.n_recurrent + 1):
            out[f"R{k}"] = np.sort(order[bounds[k - 1] : bounds[k]])
        out["T"] = np.flatnonzero(self.kind == TRANSIENT)
        out["D"] = np.flatnonzero(self.kind == DANGLING)
        for arr in out.values():
            arr.flags.writeable = False
        return out

    def members(self, class_id: str) -> np.ndarray:
        """Sorted dense ids of a class (``"D"``, ``"T"`` or ``"R<k>"``)."""
        try:
            return self._members[class_id]
        except KeyError:
            raise ValidationError(f"unknown class id {class_id!r}") from None

    def class_ids(self, include_empty: bool = False) -> list[str]:
        ids = [f"R{k}" for k in range(1, self.n_recurrent + 1)] + ["T", "D"]
        if include_empty:
            return ids
        return [c for c in ids if len(self._members[c])]

    def class_of(self, node: int) -> str:
        k = self.kind[node]
        if k == RECURRENT:
            return f"R{self.rclass[node]}"
        return KIND_NAMES[int(k)]

    def label_of(self, node: int) -> str:
        return KIND_NAMES[int(self.kind[node])]

    @cached_property
    def local_index(self) -> np.ndarray:
        """Position of every node inside its own class's member list."""
        pos = np.empty(self.n_nodes, dtype=np.int64)
        for cid in self.class_ids():
            m = self._members[cid]
            pos[m] = np.arange(len(m))
        return pos

    def size(self, class_id: str) -> int:
        return len(self.members(class_id))

    @property
    def n_R(self) -> int:
        return int(np.count_nonzero(self.kind == RECURRENT))

    @property
    def n_T(self) -> int:
        return int(np.count_nonzero(self.kind == TRANSIENT))

    @property
    def n_D(self) -> int:
        return int(np.count_nonzero(self.kind == DANGLING))

    def recurrent_size_histogram(self) -> dict[int, int]:
        """Number of recurrent classes per class size."""
        if self.n_recurrent == 0:
            return {}
        sizes = np.bincount(self.rclass[self.rclass > 0])[1:]
        vals, counts = np.unique(sizes, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}

    def summary(self, g: Graph) -> dict:
        return {
            "Total links": g.n_edges,
            "Total nodes": g.n_nodes,
            "Nodes in Class R": self.n_R,
            "Nodes in Class T": self.n_T,
            "Nodes in Class D": self.n_D,
            "Recurrent classes": self.n_recurrent,
            "Recurrent class sizes": self.recurrent_size_histogram(),
        }


def classify(g: Graph) -> Classification:
    """Assign every node to D, T or one of the recurrent classes.

    An SCC is closed only if none of its edges leave it; an edge into a
    dangling node counts as leaving.  Recurrent classes are numbered by
    ascending smallest member id.
    """
    n = g.n_nodes
    dangling = g.out_degree == 0
    kind = np.full(n, TRANSIENT, dtype=np.int8)
    kind[dangling] = DANGLING
    rclass = np.zeros(n, dtype=np.int64)
    scc_id = np.full(n, -1, dtype=np.int64)

    sccs = scc_decompose(g, np.flatnonzero(~dangling))
    for sid, comp in enumerate(sccs):
        scc_id[comp] = sid

    n_scc = len(sccs)
    leaving = scc_id[g.sources] != scc_id[g.indices]
    open_count = np.bincount(scc_id[g.sources][leaving], minlength=n_scc) if n_scc else np.zeros(0)
    closed = [sid for sid in range(n_scc) if open_count[sid] == 0]
    closed.sort(key=lambda sid: sccs[sid][0])
    for k, sid in enumerate(closed, start=1):
        comp = sccs[sid]
        kind[comp] = RECURRENT
        rclass[comp] = k

    for arr in (kind, rclass, scc_id):
        arr.flags.writeable = False
    return Classification(kind=kind, rclass=rclass, scc_id=scc_id, n_recurrent=len(closed))


# -- fingerprints ------------------------------------------------------------


def row_digests(g: Graph) -> np.ndarray:
    """64-bit digest of every node's out-row (targets and weights)."""
    out = np.empty(g.n_nodes, dtype=np.uint64)
    indptr = g.indptr
    idx_bytes = g.indices.astype("<i8")
    w_bytes = g.weights.astype("<f8")
    for i in range(g.n_nodes):
        lo, hi = indptr[i], indptr[i + 1]
        h = hashlib.blake2b(digest_size=8)
        h.update(idx_bytes[lo:hi].tobytes())
        h.update(w_bytes[lo:hi].tobytes())
        out[i] = int.from_bytes(h.digest(), "little")
    return out


def _class_digest(kind: str, members: np.ndarray, rows: np.ndarray) -> int:
    h = hashlib.blake2b(digest_size=8, person=b"purerank-v%d" % FINGERPRINT_VERSION)
    h.update(kind.encode())
    order = np.argsort(members, kind="stable")
    h.update(np.asarray(members, dtype="<i8")[order].tobytes())
    h.update(np.asarray(rows, dtype="<u8")[order].tobytes())
    return int.from_bytes(h.digest(), "little")


def class_fingerprint(g: Graph, c: Classification, class_id: str, rows: np.ndarray | None = None) -> int:
    """Order-independent digest of a class's members and their out-edges.

    Two classes with equal member sets and equal outgoing edges (targets and
    weights) always share a digest, which is what makes cached local
    vectors reusable after a graph edit.
    """
    members = c.members(class_id)
    if rows is None:
        rows = row_digests(g)
    return _class_digest(class_id[0], members, rows[members])


def all_fingerprints(g: Graph, c: Classification) -> dict[str, int]:
    rows = row_digests(g)
    return {cid: class_fingerprint(g, c, cid, rows) for cid in c.class_ids()}
