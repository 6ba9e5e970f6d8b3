"""Global PureRank scores from per-class local vectors.

``assemble`` scales each class's local vector by its share of the node
count and routes the transient class's outflow into the recurrent and
dangling nodes it links to.  ``compute`` runs the whole pipeline, and
``compute_incremental`` reuses local vectors of classes that a graph edit
did not touch.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from purerank.classification import (
    FINGERPRINT_VERSION,
    Classification,
    _class_digest,
    classify,
    row_digests,
)
from purerank.errors import PureRankError, ValidationError
from purerank.graph import Graph
from purerank.local import LocalVector, SolverOptions, lambda_D, lambda_R, lambda_T

CACHE_FORMAT = "purerank-cache"


@dataclass(frozen=True, eq=False)
class PureRankResult:
    pi: np.ndarray
    classification: Classification
    locals: dict
    theta_T: float | None
    subvectors: dict = field(repr=False)
    stats: dict = field(default_factory=dict)

    @property
    def total_sum(self) -> float:
        return float(self.pi.sum())

    def class_stats(self) -> dict:
        return {
            cid: {"size": len(v.values), "iterations": v.iterations, "residual": v.residual, "beta_star": v.beta_star}
            for cid, v in self.locals.items()
        }


def assemble(g: Graph, c: Classification, locals: dict, theta_T: float | None) -> PureRankResult:
    """Combine local vectors into the global score vector.

    ``locals`` maps class ids (``"D"``, ``"T"``, ``"R1"``...) to
    :class:`LocalVector`; every nonempty class must be present.
    """
    n = g.n_nodes
    if c.n_nodes != n:
        raise ValidationError("classification does not belong to this graph")
    pi = np.zeros(n)
    for cid in c.class_ids():
        vec = locals.get(cid)
        if vec is None:
            raise ValidationError(f"missing local vector for class {cid}")
        members = c.members(cid)
        if len(vec.values) != len(members):
            raise ValidationError(f"local vector for {cid} has the wrong length")
        if cid == "T":
            continue
        pi[members] = (len(members) / n) * vec.values

    n_T = c.n_T
    if n_T:
        if theta_T is None:
            raise ValidationError("theta_T is required when T is nonempty")
        t_members = c.members("T")
        pi_T = (n_T / (1.0 + theta_T) / n) * locals["T"].values
        x = np.zeros(n)
        x[t_members] = pi_T
        inflow = g.PT @ x
        # only flow that leaves T is added; T-to-T flow is already in pi_T
        inflow[t_members] = 0.0
        pi += inflow
        pi[t_members] = pi_T

    subvectors = {cid: pi[c.members(cid)] for cid in c.class_ids()}
    return PureRankResult(
        pi=pi,
        classification=c,
        locals=dict(locals),
        theta_T=theta_T if n_T else None,
        subvectors=subvectors,
    )


def _solve_class(g, c, cid, opts):
    if cid == "D":
        return cid, lambda_D(c), None
    if cid == "T":
        vec, theta = lambda_T(g, c, opts)
        return cid, vec, theta
    return cid, lambda_R(g, c, int(cid[1:]), opts), None


def _solve_classes(g, c, class_ids, opts, workers):
    if workers == 0:
        workers = int(os.environ.get("PURERANK_WORKERS", "0")) or (os.cpu_count() or 1)
    if workers > 1 and len(class_ids) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda cid: _solve_class(g, c, cid, opts), class_ids))
    else:
        results = [_solve_class(g, c, cid, opts) for cid in class_ids]
    locals_ = {}
    theta = None
    for cid, vec, th in results:
        locals_[cid] = vec
        if cid == "T":
            theta = th
    return locals_, theta


def compute(g: Graph, opts: SolverOptions | None = None, workers: int = 1) -> PureRankResult:
    """Classify, solve every class, assemble."""
    opts = opts or SolverOptions()
    t0 = time.perf_counter()
    c = classify(g)
    t1 = time.perf_counter()
    locals_, theta = _solve_classes(g, c, c.class_ids(), opts, workers)
    t2 = time.perf_counter()
    res = assemble(g, c, locals_, theta)
    res.stats.update(
        classify_seconds=t1 - t0,
        solve_seconds=t2 - t1,
        assemble_seconds=time.perf_counter() - t2,
        reused=[],
        solved=list(locals_),
    )
    return res


# -- graph edits ----------------------------------------------------------------


@dataclass(frozen=True)
class GraphDelta:
    """Edge edits over dense node ids.

    Each entry is ``(src, dst, weight)``: a positive weight inserts the edge
    or replaces its weight, ``None`` removes it.
    """

    edits: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "edits", tuple((int(s), int(t), w) for s, t, w in self.edits))
        for s, t, w in self.edits:
            if w is not None and not (np.isfinite(w) and w > 0):
                raise ValidationError(f"edit ({s}, {t}) has invalid weight {w}")

    def inverse(self, g_old: Graph) -> "GraphDelta":
        """Delta that undoes this one when applied after it to ``g_old``."""
        current = _edge_dict(g_old)
        inv = {}
        for s, t, _ in self.edits:
            if (s, t) not in inv:
                inv[(s, t)] = current.get((s, t))
        return GraphDelta(tuple((s, t, w) for (s, t), w in inv.items()))

    @property
    def sources(self) -> set:
        return {s for s, _, _ in self.edits}


def _edge_dict(g: Graph) -> dict:
    return {(s, t): w for s, t, w in g.edges()}


def apply_delta(g: Graph, delta: GraphDelta) -> Graph:
    edges = _edge_dict(g)
    for s, t, w in delta.edits:
        if not (0 <= s < g.n_nodes and 0 <= t < g.n_nodes):
            raise ValidationError(f"edit ({s}, {t}) references an unknown node")
        if w is None:
            if (s, t) not in edges:
                raise ValidationError(f"cannot remove missing edge ({s}, {t})")
            del edges[(s, t)]
        else:
            edges[(s, t)] = float(w)
    if edges:
        src, dst = zip(*edges)
        w = list(edges.values())
    else:
        src, dst, w = (), (), ()
    return Graph.from_edges(src, dst, w, n_nodes=g.n_nodes, labels=g.labels)


# -- incremental recomputation ------------------------------------------------------


@dataclass
class PureRankCache:
    """What an incremental run needs from the previous one."""

    n_nodes: int
    row_digests: np.ndarray
    fingerprints: dict  # fingerprint -> class id
    locals: dict  # class id -> LocalVector
    theta_T: float | None
    version: int = FINGERPRINT_VERSION

    @classmethod
    def from_result(cls, g: Graph, result: PureRankResult) -> "PureRankCache":
        rows = row_digests(g)
        c = result.classification
        fps = {_class_digest(cid[0], c.members(cid), rows[c.members(cid)]): cid for cid in c.class_ids()}
        return cls(g.n_nodes, rows, fps, dict(result.locals), result.theta_T)

    def to_json(self) -> str:
        return json.dumps(
            {
                "format": CACHE_FORMAT,
                "version": self.version,
                "n_nodes": self.n_nodes,
                "row_digests": [str(int(x)) for x in self.row_digests],
                "fingerprints": {str(fp): cid for fp, cid in self.fingerprints.items()},
                "locals": {cid: v.to_dict() for cid, v in self.locals.items()},
                "theta_T": self.theta_T,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "PureRankCache":
        d = json.loads(text)
        if d.get("format") != CACHE_FORMAT:
            raise ValidationError("not a PureRank cache blob")
        return cls(
            n_nodes=int(d["n_nodes"]),
            row_digests=np.array([int(x) for x in d["row_digests"]], dtype=np.uint64),
            fingerprints={int(fp): cid for fp, cid in d["fingerprints"].items()},
            locals={cid: LocalVector.from_dict(v) for cid, v in d["locals"].items()},
            theta_T=d["theta_T"],
            version=int(d["version"]),
        )


def compute_incremental(
    g_new: Graph,
    delta: GraphDelta,
    cache: PureRankCache,
    opts: SolverOptions | None = None,
    workers: int = 1,
) -> PureRankResult:
    """Recompute scores after ``delta``, re-solving only changed classes.

    A class is reused when its member set and every out-edge of its members
    are unchanged, detected by comparing class fingerprints.
    """
    opts = opts or SolverOptions()
    if cache.version != FINGERPRINT_VERSION:
        res = compute(g_new, opts, workers)
        res.stats["fallback"] = "fingerprint version mismatch"
        return res
    if cache.n_nodes != g_new.n_nodes:
        raise PureRankError("cache was built for a graph with a different node count")
    rows = row_digests(g_new)
    changed = set(np.flatnonzero(rows != cache.row_digests).tolist())
    if not changed <= delta.sources:
        raise PureRankError("graph differs from the cached one outside the delta's source rows")
    final = {(s, t): w for s, t, w in delta.edits}
    for (s, t), w in final.items():
        targets, weights = g_new.row(s)
        pos = int(np.searchsorted(targets, t))
        present = pos < len(targets) and targets[pos] == t
        if (w is None and present) or (w is not None and not (present and weights[pos] == w)):
            raise PureRankError(f"delta edit ({s}, {t}) is not reflected in the new graph")

    t0 = time.perf_counter()
    c = classify(g_new)
    t1 = time.perf_counter()
    locals_ = {}
    theta = None
    todo = []
    for cid in c.class_ids():
        m = c.members(cid)
        fp = _class_digest(cid[0], m, rows[m])
        old = cache.fingerprints.get(fp)
        if old is not None:
            vec = cache.locals[old]
            locals_[cid] = LocalVector(cid, vec.values, vec.beta_star, vec.delta, vec.iterations, vec.residual)
            if cid == "T":
                theta = cache.theta_T
        else:
            todo.append(cid)
    solved, th = _solve_classes(g_new, c, todo, opts, workers)
    locals_.update(solved)
    if "T" in solved:
        theta = th
    t2 = time.perf_counter()
    res = assemble(g_new, c, locals_, theta)
    res.stats.update(
        classify_seconds=t1 - t0,
        solve_seconds=t2 - t1,
        reused=[cid for cid in c.class_ids() if cid not in solved],
        solved=todo,
    )
    return res
