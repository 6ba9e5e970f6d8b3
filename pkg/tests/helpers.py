"""Random graph generators and dense reference computations for the tests.

The oracles work from raw edge tuples with dense numpy linear algebra and
brute-force reachability; they never call into the package's sparse code.
"""

import numpy as np

from purerank import Graph


# -- generators ---------------------------------------------------------------------


def _weights(rng, k):
    if rng.random() < 0.5:
        return np.ones(k)
    return rng.uniform(0.1, 5.0, size=k)


def strongly_connected_edges(rng, nodes, extra=0.2):
    nodes = list(nodes)
    if len(nodes) == 1:
        return [(nodes[0], nodes[0])]
    perm = rng.permutation(nodes)
    edges = [(int(perm[i]), int(perm[(i + 1) % len(perm)])) for i in range(len(perm))]
    for a in nodes:
        for b in nodes:
            if rng.random() < extra:
                edges.append((a, b))
    return edges


def random_graph(rng, n_max=200, n_min=1, shape=None):
    """Random weighted digraph with a mixed class structure.

    ``shape`` forces a regime: ``"no_D"``, ``"no_T"``, ``"no_R"``,
    ``"only_D"``; otherwise one is chosen at random (including none).
    Returns ``(n, edges)`` with ``edges`` a list of ``(src, dst, w)``.
    """
    n = int(rng.integers(n_min, n_max + 1))
    if shape is None:
        shape = rng.choice(["mixed", "mixed", "mixed", "no_D", "no_T", "no_R", "only_D"])
    ids = rng.permutation(n)
    if shape == "only_D":
        return n, []

    pos = 0
    blocks = []
    n_closed = 0 if shape == "no_R" else int(rng.integers(1 if shape == "no_T" else 0, 5))
    for _ in range(n_closed):
        if pos >= n:
            break
        size = int(rng.integers(1, max(2, n // 4) + 1))
        blocks.append(ids[pos : pos + size].tolist())
        pos += size
    if shape == "no_T":
        if pos < n:
            blocks.append(ids[pos:].tolist())
            pos = n
        d_nodes, open_nodes = [], []
    else:
        n_d = 0 if shape == "no_D" else int(rng.integers(1 if shape == "no_R" else 0, max(1, n // 5) + 1))
        n_d = min(n_d, n - pos)
        d_nodes = ids[pos : pos + n_d].tolist()
        pos += n_d
        open_nodes = ids[pos:].tolist()
    if shape == "no_R" and not d_nodes:
        # without a sink every node set eventually closes up
        return n, []

    pairs = []
    for b in blocks:
        pairs.extend(strongly_connected_edges(rng, b, extra=float(rng.uniform(0, 0.4))))
    for v in open_nodes:
        k = int(rng.integers(1, 5))
        targets = rng.integers(0, n, size=k).tolist()
        if shape == "no_R":
            targets.append(int(rng.choice(d_nodes)))
        pairs.extend((int(v), int(t)) for t in targets)
    w = _weights(rng, len(pairs))
    return n, [(s, t, float(x)) for (s, t), x in zip(pairs, w)]


def random_strongly_connected(rng, n_max=60, n_min=1):
    n = int(rng.integers(n_min, n_max + 1))
    pairs = strongly_connected_edges(rng, range(n), extra=float(rng.uniform(0, 0.3)))
    w = _weights(rng, len(pairs))
    return n, [(s, t, float(x)) for (s, t), x in zip(pairs, w)]


def to_graph(n, edges):
    if not edges:
        return Graph.from_edges([], [], [], n_nodes=n)
    s, t, w = zip(*edges)
    return Graph.from_edges(s, t, w, n_nodes=n)


# -- dense oracles --------------------------------------------------------------------


def dense_W(n, edges):
    W = np.zeros((n, n))
    for s, t, w in edges:
        W[s, t] += w
    return W


def dense_P(W):
    out = W.sum(axis=1)
    P = np.zeros_like(W)
    nz = out > 0
    P[nz] = W[nz] / out[nz, None]
    return P


def reachability(W):
    """reach[i, j]: a path of length >= 1 leads from i to j."""
    R = W > 0
    n = len(W)
    for k in range(n):
        R = R | (R[:, k : k + 1] & R[k : k + 1, :])
    return R


def brute_classes(W):
    """Classes by exhaustive reachability: (D list, T list, [R_k lists])."""
    n = len(W)
    reach = reachability(W)
    D = [i for i in range(n) if not (W[i] > 0).any()]
    rest = [i for i in range(n) if i not in D]
    seen, R, T = set(), [], []
    for i in rest:
        if i in seen:
            continue
        comp = sorted({i} | {j for j in rest if reach[i, j] and reach[j, i]})
        seen.update(comp)
        closed = all(not reach[x, j] or j in comp for x in comp for j in range(n))
        if closed:
            R.append(comp)
        else:
            T.extend(comp)
    R.sort(key=lambda comp: comp[0])
    return sorted(D), sorted(T), R


def stationary_dense(P):
    """Stationary vector of an irreducible stochastic matrix by direct solve."""
    n = len(P)
    A = P.T - np.eye(n)
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    return np.linalg.solve(A, b)


def lambda_T_dense(PT):
    """Normalized e^T (I - P_T)^{-1} and theta_T = 1 / (mu_T (I - P_T)^{-1} e)."""
    n = len(PT)
    x = np.linalg.solve((np.eye(n) - PT).T, np.ones(n))
    theta = n / x.sum()
    return x / x.sum(), theta


def purerank_dense(n, edges):
    """PureRank by dense linear algebra and brute-force classes."""
    W = dense_W(n, edges)
    P = dense_P(W)
    D, T, R = brute_classes(W)
    pi = np.zeros(n)
    for comp in R:
        pi[comp] = len(comp) / n * stationary_dense(P[np.ix_(comp, comp)])
    if D:
        pi[D] = 1.0 / n
    theta = None
    if T:
        lam, theta = lambda_T_dense(P[np.ix_(T, T)])
        pi_T = len(T) / (1 + theta) / n * lam
        flow = pi_T @ P[T]
        others = [j for j in range(n) if j not in set(T)]
        pi[others] += flow[others]
        pi[T] = pi_T
    return pi, theta
