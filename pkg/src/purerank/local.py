"""Per-class local importance vectors.

Every class S gets a probability vector over its members:

* D: uniform.
* each recurrent class: the stationary distribution of its block of P,
  found by power iteration on the lazy chain ``(1-c) P + c I`` (or on P
  itself for aperiodic classes when ``always_lazy`` is off).
* T: the fixed point of ``x -> x P_T + (1 - x P_T e) mu_T``, which is the
  stationary vector of P_T with its lost mass re-injected uniformly.

Solvers stop once the L1 norm of the step between successive iterates is
below ``tolerance``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from purerank.classification import Classification
from purerank.errors import ConvergenceError, ValidationError
from purerank.graph import Graph


@dataclass(frozen=True)
class SolverOptions:
    tolerance: float = 1e-10
    max_iterations: int = 50_000
    lazy_factor: float = 0.5
    # When False, the lazy transform is only used on periodic classes.
    always_lazy: bool = True

    def __post_init__(self):
        if not (self.tolerance > 0 and math.isfinite(self.tolerance)):
            raise ValidationError("tolerance must be a positive finite number")
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if not 0 < self.lazy_factor <= 0.5:
            raise ValidationError("lazy_factor must lie in (0, 1/2]")


@dataclass(frozen=True)
class LocalVector:
    class_id: str
    values: np.ndarray
    beta_star: float
    delta: float = 0.0
    iterations: int = 0
    residual: float = 0.0

    def to_dict(self) -> dict:
        return {
            "class_id": self.class_id,
            "values": self.values.tolist(),
            "beta_star": self.beta_star,
            "delta": self.delta,
            "iterations": self.iterations,
            "residual": self.residual,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LocalVector":
        return cls(
            class_id=d["class_id"],
            values=np.asarray(d["values"], dtype=np.float64),
            beta_star=float(d["beta_star"]),
            delta=float(d.get("delta", 0.0)),
            iterations=int(d["iterations"]),
            residual=float(d["residual"]),
        )


def class_block(g: Graph, members: np.ndarray) -> sp.csr_matrix:
    """Principal submatrix of P on ``members`` (in member order)."""
    return g.P[members][:, members].tocsr()


def lambda_D(c: Classification) -> LocalVector | None:
    """Uniform vector over the dangling class, or None if D is empty."""
    n = c.n_D
    if n == 0:
        return None
    return LocalVector("D", np.full(n, 1.0 / n), beta_star=1.0 / n, iterations=0)


def period(block: sp.csr_matrix) -> int:
    """Period of an irreducible nonnegative matrix.

    gcd over edges (u, v) of ``level[u] + 1 - level[v]`` for BFS levels from
    node 0.
    """
    n = block.shape[0]
    level = np.full(n, -1, dtype=np.int64)
    level[0] = 0
    frontier = [0]
    indptr, indices = block.indptr, block.indices
    while frontier:
        nxt = []
        for u in frontier:
            for v in indices[indptr[u] : indptr[u + 1]]:
                if level[v] < 0:
                    level[v] = level[u] + 1
                    nxt.append(v)
        frontier = nxt
    src = np.repeat(np.arange(n), np.diff(indptr))
    diffs = np.abs(level[src] + 1 - level[indices])
    return int(np.gcd.reduce(diffs)) if len(diffs) else 0


def lambda_R(g: Graph, c: Classification, k: int, opts: SolverOptions | None = None) -> LocalVector:
    """Stationary distribution of the recurrent class ``R<k>``."""
    opts = opts or SolverOptions()
    cid = f"R{k}"
    members = c.members(cid)
    n = len(members)
    if n == 0:
        raise ValidationError(f"recurrent class {cid} is empty")
    if n == 1:
        return LocalVector(cid, np.ones(1), beta_star=0.0, iterations=0)

    block = class_block(g, members)
    lazy = opts.lazy_factor
    if not opts.always_lazy and period(block) == 1:
        lazy = 0.0
    # x P computed as P^T x
    bt = block.T.tocsr()
    x = np.full(n, 1.0 / n)
    residual = math.inf
    for it in range(1, opts.max_iterations + 1):
        y = bt @ x
        if lazy:
            y = (1.0 - lazy) * y + lazy * x
        y /= y.sum()
        residual = float(np.abs(y - x).sum())
        x = y
        if residual < opts.tolerance:
            return LocalVector(cid, x, beta_star=0.0, iterations=it, residual=residual)
    raise ConvergenceError(
        f"no convergence after {opts.max_iterations} iterations (residual {residual:.3e})",
        last_iterate=x,
        residual=residual,
        class_id=cid,
    )


def lambda_T(g: Graph, c: Classification, opts: SolverOptions | None = None):
    """Local vector of the transient class and its leakage ``theta_T``.

    Returns ``(None, None)`` when T is empty.
    """
    opts = opts or SolverOptions()
    members = c.members("T")
    n = len(members)
    if n == 0:
        return None, None
    bt = class_block(g, members).T.tocsr()
    mu = 1.0 / n
    x = np.full(n, mu)
    residual = math.inf
    for it in range(1, opts.max_iterations + 1):
        y = bt @ x
        y += (1.0 - y.sum()) * mu
        residual = float(np.abs(y - x).sum())
        x = y
        if residual < opts.tolerance:
            theta = float(1.0 - (bt @ x).sum())
            vec = LocalVector("T", x, beta_star=theta / n, iterations=it, residual=residual)
            return vec, theta
    raise ConvergenceError(
        f"no convergence after {opts.max_iterations} iterations (residual {residual:.3e})",
        last_iterate=x,
        residual=residual,
        class_id="T",
    )
