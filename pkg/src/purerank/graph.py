"""Sparse weighted digraphs in compressed-row form.

A :class:`Graph` stores, for every source node, its outgoing targets and
strictly positive weights.  Node ids are dense (``0..N-1``); the external
labels found in the input are kept alongside so results can be written
back in the dataset's own vocabulary.
"""

from __future__ import annotations

import gzip
import io
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from purerank.errors import ParseError, ValidationError


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable weighted digraph.

    ``indptr``/``indices``/``weights`` follow the CSR convention: the
    out-edges of node ``i`` are ``indices[indptr[i]:indptr[i+1]]`` with the
    matching ``weights``.  Targets inside a row are sorted ascending and
    unique.
    """

    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    labels: tuple = field(default=())

    def __post_init__(self):
        n = len(self.indptr) - 1
        if n < 1:
            raise ValidationError("graph must have at least one node")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(n)))
        if len(self.labels) != n:
            raise ValidationError("label count does not match node count")
        for arr in (self.indptr, self.indices, self.weights):
            arr.flags.writeable = False

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        src: Sequence[int],
        dst: Sequence[int],
        weights: Sequence[float] | None = None,
        n_nodes: int | None = None,
        labels: Sequence[str] | None = None,
    ) -> "Graph":
        """Build a graph from parallel arrays of dense ids.

        Duplicate ``(src, dst)`` pairs are summed.
        """
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        if src.shape != dst.shape:
            raise ValidationError("src and dst must have equal length")
        if weights is None:
            w = np.ones(len(src), dtype=np.float64)
        else:
            w = np.asarray(weights, dtype=np.float64).ravel()
            if w.shape != src.shape:
                raise ValidationError("weights must match the edge count")
        if len(w) and not (np.all(np.isfinite(w)) and np.all(w > 0)):
            raise ValidationError("edge weights must be finite and > 0")
        if n_nodes is None:
            n_nodes = len(labels) if labels is not None else 0
            if len(src):
                n_nodes = max(n_nodes, int(max(src.max(), dst.max())) + 1)
        if len(src) and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n_nodes):
            raise ValidationError("edge endpoint out of range")
        mat = sp.coo_matrix((w, (src, dst)), shape=(n_nodes, n_nodes)).tocsr()
        mat.sum_duplicates()
        mat.sort_indices()
        return cls(
            indptr=mat.indptr.astype(np.int64),
            indices=mat.indices.astype(np.int64),
            weights=mat.data.astype(np.float64),
            labels=tuple(labels) if labels is not None else (),
        )

    # -- basic facts ------------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self.indptr) - 1

    @property
    def n_edges(self) -> int:
        return len(self.indices)

    @cached_property
    def out_weight(self) -> np.ndarray:
        """Sum of outgoing weights per node."""
        out = np.bincount(self.sources, weights=self.weights, minlength=self.n_nodes)
        out.flags.writeable = False
        return out

    @cached_property
    def out_degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def sources(self) -> np.ndarray:
        """Source node of every stored edge, aligned with ``indices``."""
        return np.repeat(np.arange(self.n_nodes), self.out_degree)

    @cached_property
    def label_index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def row(self, i: int):
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def edges(self):
        """Iterate ``(src, dst, weight)`` over dense ids."""
        for s, t, w in zip(self.sources.tolist(), self.indices.tolist(), self.weights.tolist()):
            yield s, t, w

    # -- matrix views -----------------------------------------------------

    @cached_property
    def P(self) -> sp.csr_matrix:
        """Row-normalized transition matrix; dangling rows are empty."""
        out = self.out_weight
        probs = self.weights / out[self.sources] if self.n_edges else self.weights.copy()
        return sp.csr_matrix((probs, self.indices, self.indptr), shape=(self.n_nodes, self.n_nodes))

    @cached_property
    def PT(self) -> sp.csr_matrix:
        """Transpose of :attr:`P` in CSR form, so ``PT @ x`` computes ``x P``."""
        return self.P.T.tocsr()

    def scaled(self, factor: float) -> "Graph":
        return Graph(self.indptr.copy(), self.indices.copy(), self.weights * factor, self.labels)

    def same_structure(self, other: "Graph") -> bool:
        return (
            self.n_nodes == other.n_nodes
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.weights, other.weights)
        )

    def __repr__(self):
        return f"Graph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"


# -- loading / saving ------------------------------------------------------


def _open_text(source) -> IO[str]:
    if isinstance(source, (str, os.PathLike)):
        path = os.fspath(source)
        if path.endswith(".gz"):
            return gzip.open(path, "rt", encoding="utf-8")
        return open(path, "r", encoding="utf-8")
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8"))
    if isinstance(source, io.TextIOBase):
        return source
    # binary file-like
    return io.TextIOWrapper(source, encoding="utf-8")


def _split(line: str, delimiter: str | None) -> list[str]:
    if delimiter is None:
        return line.split()
    return [tok.strip() for tok in line.split(delimiter) if tok.strip()]


def load_edge_list(source, weighted: bool | None = None, delimiter: str | None = None) -> Graph:
    """Read a SNAP-style edge list.

    ``source`` may be a path (``.gz`` is decompressed), raw bytes or an open
    file.  Lines starting with ``#`` are comments.  Data lines hold
    ``src dst`` or ``src dst weight``.  With ``weighted=None`` a third column
    is used when present; ``weighted=False`` ignores it and ``True``
    requires it.  Labels get dense ids in order of first appearance and
    duplicate edges are summed.
    """
    index: dict[str, int] = {}
    src: list[int] = []
    dst: list[int] = []
    wts: list[float] = []
    stream = _open_text(source)
    try:
        for lineno, raw in enumerate(stream, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = _split(line, delimiter)
            if len(tokens) not in (2, 3):
                raise ParseError(f"expected 2 or 3 fields, got {len(tokens)}", lineno)
            if weighted and len(tokens) != 3:
                raise ParseError("missing weight column", lineno)
            a, b = tokens[0], tokens[1]
            if len(tokens) == 3 and weighted is not False:
                try:
                    w = float(tokens[2])
                except ValueError:
                    raise ParseError(f"bad weight {tokens[2]!r}", lineno) from None
                if not math.isfinite(w) or w <= 0:
                    raise ValidationError(f"line {lineno}: weight must be finite and > 0, got {tokens[2]}")
            else:
                w = 1.0
            for lab in (a, b):
                if lab not in index:
                    index[lab] = len(index)
            src.append(index[a])
            dst.append(index[b])
            wts.append(w)
    finally:
        if isinstance(source, (str, os.PathLike)):
            stream.close()
    if not index:
        raise ValidationError("edge list contains no nodes")
    return Graph.from_edges(src, dst, wts, n_nodes=len(index), labels=list(index))


def write_edge_list(g: Graph, stream: IO[str], weighted: bool = True) -> None:
    """Write ``g`` as an edge list using its external labels.

    Isolated nodes cannot be expressed in this format and are dropped.
    """
    labels = g.labels
    for s, t, w in g.edges():
        if weighted:
            stream.write(f"{labels[s]} {labels[t]} {w!r}\n")
        else:
            stream.write(f"{labels[s]} {labels[t]}\n")


def write_label_map(g: Graph, stream: IO[str]) -> None:
    stream.write("external_id,dense_id\n")
    for i, lab in enumerate(g.labels):
        stream.write(f"{lab},{i}\n")


# -- row-level views --------------------------------------------------------


def normalized_row(g: Graph, i: int) -> list[tuple[int, float]]:
    """Out-row of ``i`` as ``(target, probability)`` pairs.

    Empty for a dangling node.
    """
    if not 0 <= i < g.n_nodes:
        raise ValidationError(f"node id {i} out of range")
    targets, weights = g.row(i)
    if len(targets) == 0:
        return []
    total = g.out_weight[i]
    return [(int(t), float(w / total)) for t, w in zip(targets, weights)]


def reverse_adjacency(g: Graph) -> list[list[tuple[int, float]]]:
    """In-edge lists ``[(source, weight), ...]`` for every node."""
    fwd = sp.csr_matrix((g.weights, g.indices, g.indptr), shape=(g.n_nodes, g.n_nodes))
    rev = fwd.T.tocsr()
    rev.sort_indices()
    out = []
    for j in range(g.n_nodes):
        lo, hi = rev.indptr[j], rev.indptr[j + 1]
        out.append([(int(s), float(w)) for s, w in zip(rev.indices[lo:hi], rev.data[lo:hi])])
    return out


def iter_labels(g: Graph, ids: Iterable[int]) -> list[str]:
    return [g.labels[i] for i in ids]
