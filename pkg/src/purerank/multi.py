"""Multi-attribute graphs via the splitting network.

Every node ``i`` is copied once per attribute.  Each copy inherits all of
``i``'s out-links, and a link of attribute ``a`` always lands on the
target's ``a`` copy, so copy ``j^(a)`` only ever receives attribute-``a``
links.  PureRank on that ordinary graph gives one score per
(node, attribute).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from purerank.core import PureRankResult, compute
from purerank.errors import ParseError, ValidationError
from purerank.graph import Graph, _open_text
from purerank.local import SolverOptions


@dataclass(frozen=True, eq=False)
class MultiGraph:
    """Edges carry an attribute index into ``attributes`` and a positive weight."""

    labels: tuple
    attributes: tuple
    src: np.ndarray
    dst: np.ndarray
    attr: np.ndarray
    weight: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @classmethod
    def from_edges(cls, edges, labels=None, attributes=None) -> "MultiGraph":
        """Build from ``(src_label, dst_label, attribute, weight)`` tuples.

        Attributes are numbered in order of first appearance, after any names
        pre-declared in ``attributes``.  An attribute with at least one
        negative weight is split into ``"<a>+"`` and ``"<a>-"``, the latter
        holding the negated weights.
        """
        index = {}
        for lab in labels or ():
            index.setdefault(str(lab), len(index))
        raw_attrs = [str(a) for a in (attributes or ())]
        rows = []
        negative = set()
        for s, t, a, w in edges:
            w = float(w)
            if not math.isfinite(w) or w == 0:
                raise ValidationError(f"edge ({s}, {t}, {a}) needs a nonzero finite weight, got {w}")
            s, t, a = str(s), str(t), str(a)
            for lab in (s, t):
                index.setdefault(lab, len(index))
            if a not in raw_attrs:
                raw_attrs.append(a)
            if w < 0:
                negative.add(a)
            rows.append((index[s], index[t], a, w))

        names = []
        for a in raw_attrs:
            names.extend([f"{a}+", f"{a}-"] if a in negative else [a])
        if not names:
            raise ValidationError("multi-attribute graph needs at least one attribute")
        pos = {name: k for k, name in enumerate(names)}

        def home(a, w):
            if a in negative:
                return pos[f"{a}+"] if w > 0 else pos[f"{a}-"]
            return pos[a]

        if not index:
            raise ValidationError("multi-attribute graph needs at least one node")
        return cls(
            labels=tuple(index),
            attributes=tuple(names),
            src=np.array([r[0] for r in rows], dtype=np.int64),
            dst=np.array([r[1] for r in rows], dtype=np.int64),
            attr=np.array([home(r[2], r[3]) for r in rows], dtype=np.int64),
            weight=np.array([abs(r[3]) for r in rows], dtype=np.float64),
        )


def load_multi_edge_list(source, delimiter: str | None = None, attributes=None) -> MultiGraph:
    """Read ``src dst attribute weight`` lines; ``#`` starts a comment."""
    edges = []
    stream = _open_text(source)
    try:
        for lineno, raw in enumerate(stream, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split(delimiter) if delimiter else line.split()
            tokens = [tok.strip() for tok in tokens if tok.strip()]
            if len(tokens) != 4:
                raise ParseError(f"expected 4 fields, got {len(tokens)}", lineno)
            try:
                w = float(tokens[3])
            except ValueError:
                raise ParseError(f"bad weight {tokens[3]!r}", lineno) from None
            if not math.isfinite(w) or w == 0:
                raise ValidationError(f"line {lineno}: weight must be nonzero and finite")
            edges.append((tokens[0], tokens[1], tokens[2], w))
    finally:
        if isinstance(source, (str, os.PathLike)):
            stream.close()
    return MultiGraph.from_edges(edges, attributes=attributes)


def build_splitting_network(mg: MultiGraph) -> tuple[Graph, np.ndarray]:
    """Splitting network plus its copy map.

    Copy ``i^(a)`` has dense id ``a * N + i``; the returned ``(m*N, 2)``
    array lists ``(original node, attribute)`` for every copy.
    """
    m, n = mg.n_attributes, mg.n_nodes
    if m == 0:
        raise ValidationError("at least one attribute is required")
    offsets = np.arange(m, dtype=np.int64)[:, None] * n
    src = (offsets + mg.src[None, :]).ravel()
    dst = np.broadcast_to(mg.attr * n + mg.dst, (m, len(mg.src))).ravel()
    w = np.broadcast_to(mg.weight, (m, len(mg.src))).ravel()
    labels = [f"{lab}:{a}" for a in mg.attributes for lab in mg.labels]
    g = Graph.from_edges(src, dst, w, n_nodes=m * n, labels=labels)
    copy_map = np.stack([np.tile(np.arange(n), m), np.repeat(np.arange(m), n)], axis=1)
    return g, copy_map


@dataclass(frozen=True, eq=False)
class SplitResult:
    graph: Graph
    copy_map: np.ndarray
    attributes: tuple
    labels: tuple
    scores: np.ndarray  # (N, m): score of copy j^(a) at [j, a]
    result: PureRankResult

    def attribute_index(self, attribute) -> int:
        if isinstance(attribute, (int, np.integer)):
            if 0 <= attribute < len(self.attributes):
                return int(attribute)
        elif attribute in self.attributes:
            return self.attributes.index(attribute)
        raise ValidationError(f"unknown attribute {attribute!r}")


def multi_purerank(mg: MultiGraph, opts: SolverOptions | None = None, workers: int = 1) -> SplitResult:
    g, copy_map = build_splitting_network(mg)
    res = compute(g, opts, workers)
    scores = res.pi.reshape(mg.n_attributes, mg.n_nodes).T.copy()
    return SplitResult(g, copy_map, mg.attributes, mg.labels, scores, res)


def net_score(result: SplitResult, positive=0, negative=1) -> np.ndarray:
    """Per-node difference between two attribute scores."""
    p = result.attribute_index(positive)
    q = result.attribute_index(negative)
    return result.scores[:, p] - result.scores[:, q]
