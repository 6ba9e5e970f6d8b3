"""Random-surfer simulation of PureRank on the extended state space.

The extended chain adds a copy ``j'`` for every recurrent and dangling
node.  A surfer in T follows its out-links, except that links into R or D
land on the copy; from a copy it restarts uniformly in T.  Surfers in a
recurrent class walk inside it and surfers in D stay put.  Long-run visit
frequencies, with each copy folded onto its original, reproduce PureRank.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from purerank.classification import DANGLING, RECURRENT, TRANSIENT, Classification
from purerank.errors import InsufficientDataError, ValidationError
from purerank.graph import Graph

_CHUNK = 2048


@dataclass(frozen=True, eq=False)
class ExtendedChain:
    """Sparse kernel over ``N + |R| + |D|`` states.

    States ``0..N-1`` are the original nodes, then the R copies and D
    copies (each in ascending dense id of the original).  Copy states have
    no explicit row: they jump uniformly onto ``t_members``, or hold in
    place when T is empty (they are unreachable then).
    """

    n_nodes: int
    n_states: int
    row_ptr: np.ndarray
    row_targets: np.ndarray
    row_probs: np.ndarray
    row_keys: np.ndarray
    is_copy: np.ndarray
    is_transient: np.ndarray
    t_members: np.ndarray
    initial: np.ndarray
    fold: np.ndarray

    def row(self, state: int) -> tuple[np.ndarray, np.ndarray]:
        """Outgoing distribution of ``state`` as ``(targets, probabilities)``."""
        if not 0 <= state < self.n_states:
            raise ValidationError(f"state {state} out of range")
        if self.is_copy[state]:
            n_t = len(self.t_members)
            if n_t == 0:
                return np.array([state]), np.ones(1)
            return self.t_members.copy(), np.full(n_t, 1.0 / n_t)
        lo, hi = self.row_ptr[state], self.row_ptr[state + 1]
        return self.row_targets[lo:hi].copy(), self.row_probs[lo:hi].copy()

    def dense(self) -> np.ndarray:
        """Full transition matrix; only sensible for small chains."""
        m = np.zeros((self.n_states, self.n_states))
        for s in range(self.n_states):
            t, p = self.row(s)
            np.add.at(m[s], t, p)
        return m


def build_extended_chain(g: Graph, c: Classification) -> ExtendedChain:
    n = g.n_nodes
    kind = np.asarray(c.kind)
    r_nodes = np.flatnonzero(kind == RECURRENT)
    d_nodes = np.flatnonzero(kind == DANGLING)
    t_members = np.flatnonzero(kind == TRANSIENT)
    n_states = n + len(r_nodes) + len(d_nodes)

    copy_of = np.arange(n)  # state reached when T links into node j
    copy_of[r_nodes] = n + np.arange(len(r_nodes))
    copy_of[d_nodes] = n + len(r_nodes) + np.arange(len(d_nodes))

    fold = np.concatenate([np.arange(n), r_nodes, d_nodes]).astype(np.int64)
    is_copy = np.zeros(n_states, dtype=bool)
    is_copy[n:] = True
    is_transient = np.zeros(n_states, dtype=bool)
    is_transient[t_members] = True

    P = g.P
    counts = np.zeros(n_states, dtype=np.int64)
    counts[:n] = np.diff(P.indptr)
    counts[d_nodes] = 1
    row_ptr = np.zeros(n_states + 1, dtype=np.int64)
    np.cumsum(counts, out=row_ptr[1:])
    targets = np.empty(row_ptr[-1], dtype=np.int64)
    probs = np.empty(row_ptr[-1])
    for i in range(n):
        lo, hi = row_ptr[i], row_ptr[i + 1]
        if kind[i] == DANGLING:
            targets[lo] = i
            probs[lo] = 1.0
            continue
        plo, phi = P.indptr[i], P.indptr[i + 1]
        tgt = P.indices[plo:phi]
        targets[lo:hi] = copy_of[tgt] if kind[i] == TRANSIENT else tgt
        probs[lo:hi] = P.data[plo:phi]

    # key s + cumulative probability; the last key of row s is exactly s + 1
    keys = np.empty_like(probs)
    for s in range(n):
        lo, hi = row_ptr[s], row_ptr[s + 1]
        cum = np.cumsum(probs[lo:hi])
        cum[-1] = 1.0
        keys[lo:hi] = s + cum

    initial = np.zeros(n_states)
    initial[:n] = 1.0 / n
    return ExtendedChain(
        n_nodes=n,
        n_states=n_states,
        row_ptr=row_ptr,
        row_targets=targets,
        row_probs=probs,
        row_keys=keys,
        is_copy=is_copy,
        is_transient=is_transient,
        t_members=t_members,
        initial=initial,
        fold=fold,
    )


@dataclass(frozen=True, eq=False)
class SurferStats:
    surfers: int
    steps: int
    seed: int
    start: str
    counts: np.ndarray  # raw folded visit counts per node
    frequencies: np.ndarray  # folded visit frequencies, start-weighted
    sojourns: np.ndarray  # completed T-sojourn lengths
    state_counts: np.ndarray  # unfolded counts over the extended states

    def to_dict(self) -> dict:
        return {
            "surfers": self.surfers,
            "steps": self.steps,
            "seed": self.seed,
            "start": self.start,
            "frequencies": self.frequencies.tolist(),
            "episodes": int(len(self.sojourns)),
        }


def _advance(chain: ExtendedChain, state: np.ndarray, u: np.ndarray) -> np.ndarray:
    nxt = np.empty_like(state)
    copy = chain.is_copy[state]
    if copy.any():
        n_t = len(chain.t_members)
        pick = np.minimum((u[copy] * n_t).astype(np.int64), n_t - 1)
        nxt[copy] = chain.t_members[pick]
    plain = ~copy
    s = state[plain]
    pos = np.searchsorted(chain.row_keys, s + u[plain], side="right")
    pos = np.minimum(pos, chain.row_ptr[s + 1] - 1)
    nxt[plain] = chain.row_targets[pos]
    return nxt


def simulate(
    chain: ExtendedChain,
    surfers: int,
    steps: int,
    seed: int = 0,
    start: str = "independent",
) -> SurferStats:
    """Run ``surfers`` independent walks of ``steps`` visited states each.

    Every surfer owns a random stream spawned from ``seed``.  With
    ``start="independent"`` each surfer's first state is its own draw from
    the initial law.  ``start="stratified"`` places surfer ``s`` on node
    ``s mod N`` and reweights so every start node carries exactly its
    initial-law mass, which removes the sampling noise of the start
    allocation.  Visits are counted from step 0.
    """
    if surfers < 1 or steps < 1:
        raise ValidationError("surfers and steps must be >= 1")
    if start not in ("independent", "stratified"):
        raise ValidationError(f"unknown start mode {start!r}")
    streams = [np.random.Generator(np.random.PCG64(ss)) for ss in np.random.SeedSequence(seed).spawn(surfers)]
    n = chain.n_nodes
    support = np.flatnonzero(chain.initial > 0)

    if start == "independent":
        cdf = np.cumsum(chain.initial)
        cdf[-1] = 1.0
        first = np.array([rng.random() for rng in streams])
        state = np.minimum(np.searchsorted(cdf, first, side="right"), chain.n_states - 1)
        weight = np.full(surfers, 1.0 / surfers)
    else:
        state = support[np.arange(surfers) % len(support)]
        per_node = np.bincount(state, minlength=chain.n_states)
        weight = chain.initial[state] / per_node[state]
        weight /= weight.sum()
    state = state.astype(np.int64)

    state_counts = np.zeros(chain.n_states, dtype=np.int64)
    weighted = np.zeros(chain.n_states)
    sojourns = []
    last_copy = np.full(surfers, -1, dtype=np.int64)
    has_t = len(chain.t_members) > 0

    done = 0
    while done < steps:
        width = min(_CHUNK, steps - done)
        u = np.empty((width, surfers))
        for k, rng in enumerate(streams):
            u[:, k] = rng.random(width)
        traj = np.empty((width, surfers), dtype=np.int64)
        for t in range(width):
            traj[t] = state
            state = _advance(chain, state, u[t])
        state_counts += np.bincount(traj.ravel(), minlength=chain.n_states)
        weighted += np.bincount(
            traj.ravel(), weights=np.broadcast_to(weight, traj.shape).ravel(), minlength=chain.n_states
        )
        if has_t:
            # a copy state is always entered straight from T, so each one
            # closes a sojourn that began after the previous copy
            at_copy = chain.is_copy[traj]
            for k in np.flatnonzero(at_copy.any(axis=0)):
                times = np.flatnonzero(at_copy[:, k]) + done
                prev = np.concatenate([[last_copy[k]], times[:-1]])
                sojourns.append(times - prev - 1)
                last_copy[k] = times[-1]
        done += width

    folded_counts = np.bincount(chain.fold, weights=state_counts, minlength=n).astype(np.int64)
    freq = np.bincount(chain.fold, weights=weighted, minlength=n) / steps
    return SurferStats(
        surfers=surfers,
        steps=steps,
        seed=seed,
        start=start,
        counts=folded_counts,
        frequencies=freq,
        sojourns=np.concatenate(sojourns) if sojourns else np.zeros(0, dtype=np.int64),
        state_counts=state_counts,
    )


def sojourn_check(stats: SurferStats, theta_T: float | None, min_episodes: int = 100) -> dict:
    """Compare the mean T-sojourn length with its expected value ``1/theta_T``."""
    n_ep = len(stats.sojourns)
    if theta_T is None or n_ep < min_episodes:
        raise InsufficientDataError(f"{n_ep} completed sojourns, need at least {min_episodes}")
    mean = float(stats.sojourns.mean())
    expected = 1.0 / theta_T
    return {
        "episodes": n_ep,
        "empirical_mean": mean,
        "expected_mean": expected,
        "relative_error": abs(mean - expected) / expected,
    }
