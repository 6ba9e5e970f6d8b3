"""Damped PageRank by power iteration, for side-by-side comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from purerank.errors import ConvergenceError, ValidationError
from purerank.graph import Graph
from purerank.local import SolverOptions


@dataclass(frozen=True)
class PageRankResult:
    gamma: np.ndarray
    damping: float
    iterations: int
    residual: float


def pagerank_step(g: Graph, x: np.ndarray, d: float) -> np.ndarray:
    """One application of the Google matrix without forming it."""
    n = g.n_nodes
    dangling_mass = x[g.out_degree == 0].sum()
    return d * (g.PT @ x + dangling_mass / n) + (1.0 - d) / n


def pagerank(g: Graph, d: float = 0.85, opts: SolverOptions | None = None) -> PageRankResult:
    """PageRank with damping ``d``, started from the uniform vector.

    Dangling nodes spread their mass uniformly.  Stops when the L1 step
    falls below ``opts.tolerance``.
    """
    if not 0 < d < 1:
        raise ValidationError(f"damping must lie in (0, 1), got {d}")
    opts = opts or SolverOptions()
    n = g.n_nodes
    x = np.full(n, 1.0 / n)
    residual = math.inf
    for it in range(1, opts.max_iterations + 1):
        y = pagerank_step(g, x, d)
        y /= y.sum()
        residual = float(np.abs(y - x).sum())
        x = y
        if residual < opts.tolerance:
            return PageRankResult(gamma=x, damping=d, iterations=it, residual=residual)
    raise ConvergenceError(
        f"PageRank did not converge in {opts.max_iterations} iterations",
        last_iterate=x,
        residual=residual,
    )
