import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from purerank import ValidationError, class_breakdown, compare, kendall_tau, pearson, top_k_overlap
from purerank.metrics import tau_b_from_counts, top_k


def tau_b_quadratic(a, b):
    """tau-b by enumerating every pair; returns the exact pair counts too."""
    n = len(a)
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    iu = np.triu_indices(n, 1)
    da = np.sign(a[:, None] - a[None, :])[iu]
    db = np.sign(b[:, None] - b[None, :])[iu]
    n0 = n * (n - 1) // 2
    n1 = np.count_nonzero(da == 0)
    n2 = np.count_nonzero(db == 0)
    n3 = np.count_nonzero((da == 0) & (db == 0))
    disc = np.count_nonzero(da * db < 0)
    return tau_b_from_counts(n0, int(n1), int(n2), int(n3), int(disc))


def test_overlap_examples():
    a = np.array([4, 3, 2, 1]) / 10
    b = np.array([3, 4, 1, 2]) / 10
    assert top_k_overlap(a, a, 3) == 100.0
    assert top_k_overlap(a, b, 2) == 100.0
    assert top_k_overlap([5, 4, 0, 0], [0, 0, 5, 4], 2) == 0.0
    with pytest.raises(ValidationError):
        top_k_overlap(a, b, 5)
    with pytest.raises(ValidationError):
        top_k_overlap(a, b[:3], 2)


def test_top_k_ties_go_to_smaller_ids():
    assert top_k([1, 2, 2, 1, 2], 2).tolist() == [1, 2]
    assert top_k([0.5] * 4, 3).tolist() == [0, 1, 2]


def test_tau_examples():
    a = np.array([1.0, 2.0, 3.0, 4.0])
    assert kendall_tau(a, a) == 1.0
    assert kendall_tau(a, -a) == -1.0
    assert abs(kendall_tau([1, 2, 3], [1, 3, 2]) - 1 / 3) < 1e-15
    assert kendall_tau([1, 1, 1], [1, 2, 3]) is None
    with pytest.raises(ValidationError):
        kendall_tau([1.0], [2.0])


def test_pearson_examples():
    a = np.array([1.0, 2.0, 3.0, 7.0])
    assert abs(pearson(a, 2 * a + 0.1) - 1) < 1e-15
    assert abs(pearson(a, -a) + 1) < 1e-15
    # centred (-1, 0, 1) and (-4/3, -1/3, 5/3): r = 3 / sqrt(2 * 42/9) = 0.98198...
    r = pearson([1, 2, 3], [1, 2, 4])
    assert abs(r - 3 / math.sqrt(2 * 42 / 9)) < 1e-15
    assert math.floor(r * 1000) / 1000 == 0.981
    assert pearson([2, 2, 2], [1, 2, 3]) is None


def test_tau_fast_matches_quadratic_exactly():
    rng = np.random.default_rng(60)
    for _ in range(300):
        n = int(rng.integers(2, 201))
        if rng.random() < 0.5:
            a = rng.integers(0, max(2, n // 4), size=n).astype(float)
            b = rng.integers(0, max(2, n // 4), size=n).astype(float)
        else:
            a, b = rng.random(n), rng.random(n)
        assert kendall_tau(a, b) == tau_b_quadratic(a, b)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=2, max_size=40))
def test_tau_property_ties(pairs):
    a = np.array([p[0] for p in pairs], dtype=float)
    b = np.array([p[1] for p in pairs], dtype=float)
    assert kendall_tau(a, b) == tau_b_quadratic(a, b)


def test_symmetry_and_monotone_invariance():
    rng = np.random.default_rng(61)
    for _ in range(50):
        n = int(rng.integers(5, 150))
        a, b = rng.random(n), rng.random(n)
        b[rng.integers(n)] = b[0]
        k = int(rng.integers(1, n + 1))
        assert abs(kendall_tau(a, b) - kendall_tau(b, a)) < 1e-15
        assert abs(pearson(a, b) - pearson(b, a)) < 1e-15
        assert top_k_overlap(a, b, k) == top_k_overlap(b, a, k)
        fa, fb = np.exp(3 * a), np.log1p(b) * 7 + 2
        assert kendall_tau(fa, fb) == kendall_tau(a, b)
        assert top_k_overlap(fa, fb, k) == top_k_overlap(a, b, k)
        assert -1 <= kendall_tau(a, b) <= 1 and -1 <= pearson(a, b) <= 1


def test_class_breakdown_uniform_scores():
    kind = ["R"] * 2 + ["T"] * 3 + ["D"] * 5
    out = class_breakdown(np.full(10, 0.1), kind, 10)
    assert out["top_k_composition_pct"] == {"R": 20.0, "T": 30.0, "D": 50.0}
    assert out["mean_score"] == pytest.approx({"R": 0.1, "T": 0.1, "D": 0.1}, abs=1e-16)
    out = class_breakdown([0.5, 0.3, 0.2], ["T", "T", "D"], 2)
    assert out["mean_score"]["R"] is None
    assert out["top_k_composition_pct"] == {"R": 0.0, "T": 100.0, "D": 0.0}
    # numeric class codes work too: 0 dangling, 1 transient, 2 recurrent
    assert class_breakdown([0.5, 0.5], [2, 0], 1)["top_k_composition_pct"]["R"] == 100.0
    with pytest.raises(ValidationError):
        class_breakdown([0.5, 0.5], ["T"], 1)


def test_compare_report():
    a = np.array([0.4, 0.3, 0.2, 0.1])
    b = np.array([0.3, 0.4, 0.1, 0.2])
    rep = compare(a, b, ["T", "T", "D", "D"], k=2, labels=("x", "y"), graph_id="g")
    d = rep.to_dict()
    assert d["top_k_overlap_pct"] == 100.0 and d["k"] == 2
    assert abs(d["kendall_tau"] - 1 / 3) < 1e-15
    assert d["breakdown_a"]["top_k_composition_pct"]["T"] == 100.0
    assert d["metadata"]["kendall_variant"] == "tau-b" and d["metadata"]["graph"] == "g"
    assert compare(a, b).k == 4
