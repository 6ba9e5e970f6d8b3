"""Agreement metrics between two score vectors."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from purerank.classification import DANGLING, RECURRENT, TRANSIENT
from purerank.errors import ValidationError


def _pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValidationError("score vectors must be 1-D and of equal length")
    return a, b


def top_k(scores, k: int) -> np.ndarray:
    """Ids of the ``k`` highest scores; ties go to the smaller id."""
    scores = np.asarray(scores, dtype=np.float64)
    if not 0 < k <= len(scores):
        raise ValidationError(f"k must lie in [1, {len(scores)}], got {k}")
    order = np.lexsort((np.arange(len(scores)), -scores))
    return order[:k]


def top_k_overlap(a, b, k: int = 100) -> float:
    """Percentage of shared ids between the two top-k sets."""
    a, b = _pair(a, b)
    shared = np.intersect1d(top_k(a, k), top_k(b, k), assume_unique=True)
    return 100.0 * len(shared) / k


def _count_swaps(x: np.ndarray) -> int:
    """Inversions in ``x`` by bottom-up merge sort."""
    n = len(x)
    x = x.copy()
    buf = np.empty_like(x)
    swaps = 0
    width = 1
    while width < n:
        for lo in range(0, n - width, 2 * width):
            mid = lo + width
            hi = min(lo + 2 * width, n)
            left, right = x[lo:mid], x[mid:hi]
            # each right element jumps over the left elements greater than it
            pos = np.searchsorted(left, right, side="right")
            swaps += int(((mid - lo) - pos).sum())
            merged_pos = pos + np.arange(hi - mid)
            mask = np.ones(hi - lo, dtype=bool)
            mask[merged_pos] = False
            buf[lo + merged_pos] = right
            buf[lo:hi][mask] = left
            x[lo:hi] = buf[lo:hi]
        width *= 2
    return swaps


def _tied_pairs(sorted_vals: np.ndarray) -> int:
    if len(sorted_vals) == 0:
        return 0
    _, counts = np.unique(sorted_vals, return_counts=True)
    return int((counts * (counts - 1) // 2).sum())


def kendall_tau(a, b) -> float | None:
    """Kendall's tau-b in O(N log N).

    Returns None when either vector is constant.
    """
    a, b = _pair(a, b)
    n = len(a)
    if n < 2:
        raise ValidationError("need at least two observations")
    order = np.lexsort((b, a))
    a_s, b_s = a[order], b[order]
    n0 = n * (n - 1) // 2
    n1 = _tied_pairs(a_s)
    # pairs tied in both
    joint = np.flatnonzero(np.diff(a_s) != 0) + 1
    starts = np.concatenate([[0], joint])
    ends = np.concatenate([joint, [n]])
    n3 = 0
    for lo, hi in zip(starts, ends):
        if hi - lo > 1:
            n3 += _tied_pairs(b_s[lo:hi])
    swaps = _count_swaps(b_s)
    n2 = _tied_pairs(np.sort(b_s))
    return tau_b_from_counts(n0, n1, n2, n3, swaps)


def tau_b_from_counts(n0: int, n1: int, n2: int, n3: int, swaps: int) -> float | None:
    """tau-b from pair counts: total, tied in a, tied in b, tied in both, discordant."""
    denom = (n0 - n1) * (n0 - n2)
    if denom == 0:
        return None
    concordant_minus_discordant = n0 - n1 - n2 + n3 - 2 * swaps
    return concordant_minus_discordant / math.sqrt(denom)


def pearson(a, b) -> float | None:
    """Product-moment correlation; None when either vector is constant."""
    a, b = _pair(a, b)
    if len(a) < 2:
        raise ValidationError("need at least two observations")
    da = a - a.mean()
    db = b - b.mean()
    sa = math.sqrt(float(da @ da))
    sb = math.sqrt(float(db @ db))
    if sa == 0 or sb == 0:
        return None
    r = float(da @ db) / (sa * sb)
    return max(-1.0, min(1.0, r))


_KIND_LABEL = {RECURRENT: "R", TRANSIENT: "T", DANGLING: "D"}


def class_breakdown(scores, kind, k: int = 100) -> dict:
    """Top-k composition (percent) and mean score per class label.

    ``kind`` holds per-node class codes or the letters ``R``/``T``/``D``.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.array([_KIND_LABEL.get(x, x) if not isinstance(x, str) else x for x in np.asarray(kind).tolist()])
    if len(labels) != len(scores):
        raise ValidationError("scores and classes must be aligned")
    top = top_k(scores, k)
    comp, mean = {}, {}
    for lab in ("R", "T", "D"):
        mask = labels == lab
        comp[lab] = 100.0 * np.count_nonzero(mask[top]) / k
        mean[lab] = float(scores[mask].mean()) if mask.any() else None
    return {"top_k_composition_pct": comp, "mean_score": mean}


@dataclass
class ComparisonReport:
    k: int
    top_k_overlap_pct: float
    kendall_tau: float | None
    pearson_r: float | None
    breakdown_a: dict | None = None
    breakdown_b: dict | None = None
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def compare(a, b, kind=None, k: int = 100, labels=("a", "b"), graph_id: str | None = None) -> ComparisonReport:
    k = min(k, len(np.asarray(a)))
    report = ComparisonReport(
        k=k,
        top_k_overlap_pct=top_k_overlap(a, b, k),
        kendall_tau=kendall_tau(a, b),
        pearson_r=pearson(a, b),
        metadata={
            "measures": list(labels),
            "graph": graph_id,
            "tie_break": "ascending node id",
            "kendall_variant": "tau-b",
        },
    )
    if kind is not None:
        report.breakdown_a = class_breakdown(a, kind, k)
        report.breakdown_b = class_breakdown(b, kind, k)
    return report
