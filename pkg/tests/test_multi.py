import io

import numpy as np
import pytest

from helpers import random_graph
from purerank import (
    MultiGraph,
    ParseError,
    SolverOptions,
    ValidationError,
    build_splitting_network,
    compute,
    load_multi_edge_list,
    multi_purerank,
    net_score,
)

EXACT = SolverOptions(tolerance=1e-15)


def _signed_pair():
    return MultiGraph.from_edges([("1", "2", "s", 1.0), ("2", "1", "s", -1.0)])


def test_sign_split_attributes():
    mg = _signed_pair()
    assert mg.attributes == ("s+", "s-")
    assert mg.attr.tolist() == [0, 1] and mg.weight.tolist() == [1.0, 1.0]


def test_signed_pair_split_edges():
    g, cmap = build_splitting_network(_signed_pair())
    # copies: 0=1+, 1=2+, 2=1-, 3=2-
    assert sorted((s, t) for s, t, _ in g.edges()) == [(0, 1), (1, 2), (2, 1), (3, 2)]
    assert cmap.tolist() == [[0, 0], [1, 0], [0, 1], [1, 1]]
    assert g.labels == ("1:s+", "2:s+", "1:s-", "2:s-")


def test_signed_pair_scores():
    res = multi_purerank(_signed_pair(), EXACT)
    assert np.abs(res.scores - [[1 / 8, 3 / 8], [3 / 8, 1 / 8]]).max() < 1e-12
    assert np.abs(net_score(res, "s+", "s-") - [-0.25, 0.25]).max() < 1e-12
    assert np.array_equal(net_score(res, 0, 1), net_score(res, "s+", "s-"))
    with pytest.raises(ValidationError):
        net_score(res, 0, 5)
    with pytest.raises(ValidationError):
        net_score(res, "nope", 1)


def _random_multi(rng, m, n_max=40):
    n, edges = random_graph(rng, n_max=n_max, n_min=2)
    attrs = [f"a{k}" for k in range(m)]
    return n, edges, [(str(s), str(t), attrs[int(rng.integers(m))], w) for s, t, w in edges]


def test_single_attribute_is_the_plain_graph():
    rng = np.random.default_rng(50)
    for _ in range(20):
        n, edges, medges = _random_multi(rng, 1)
        if not edges:
            continue
        mg = MultiGraph.from_edges(medges)
        g, _ = build_splitting_network(mg)
        # same labels in the same first-appearance order, same edges
        remap = {int(lab): i for i, lab in enumerate(mg.labels)}
        plain = {(remap[s], remap[t]) for s, t, _ in edges}
        assert {(s, t) for s, t, _ in g.edges()} == plain
        res = multi_purerank(mg)
        assert np.abs(res.scores[:, 0] - compute(g).pi).sum() < 1e-12


def test_split_structure_properties():
    rng = np.random.default_rng(51)
    for _ in range(30):
        m = int(rng.integers(1, 4))
        n, edges, medges = _random_multi(rng, m)
        if not medges:
            continue
        mg = MultiGraph.from_edges(medges)
        g, cmap = build_splitting_network(mg)
        N, M = mg.n_nodes, mg.n_attributes
        assert g.n_nodes == M * N
        # the split edge count is m * E once duplicate (src, dst, attr) edges are merged
        distinct = {(s, t, a) for s, t, a in zip(mg.src.tolist(), mg.dst.tolist(), mg.attr.tolist())}
        assert g.n_edges == M * len(distinct)
        assert sorted(map(tuple, cmap.tolist())) == [(i, a) for i in range(N) for a in range(M)]
        P = g.P.toarray()
        for i in range(N):
            for a in range(1, M):
                assert np.array_equal(P[a * N + i], P[i])
        # inlink purity: every edge into copy j^(a) came from an attribute-a edge
        for s, t, _ in g.edges():
            j, a = cmap[t]
            src_node = cmap[s][0]
            assert any(
                mg.src[e] == src_node and mg.dst[e] == j and mg.attr[e] == a for e in range(len(mg.src))
            )
        res = multi_purerank(mg)
        assert abs(res.scores.sum() - 1) < 1e-10


def test_split_edge_count_without_duplicates():
    mg = MultiGraph.from_edges([("x", "y", "p", 1), ("y", "z", "q", 2), ("z", "x", "r", 3)])
    g, _ = build_splitting_network(mg)
    assert g.n_edges == 3 * 3


def test_attribute_symmetric_graph():
    rng = np.random.default_rng(52)
    for _ in range(15):
        n, edges = random_graph(rng, n_max=30, n_min=2)
        if not edges:
            continue
        medges = [(str(s), str(t), a, w) for s, t, w in edges for a in ("u", "v")]
        res = multi_purerank(MultiGraph.from_edges(medges))
        assert np.abs(res.scores[:, 0] - res.scores[:, 1]).max() < 1e-12
        assert np.abs(net_score(res, "u", "v")).max() < 1e-12


def test_no_negative_edges():
    mg = MultiGraph.from_edges(
        [("1", "2", "pos", 1.0), ("2", "3", "pos", 1.0), ("3", "1", "pos", 2.0), ("3", "2", "pos", 1.0)],
        attributes=["pos", "neg"],
    )
    res = multi_purerank(mg, EXACT)
    g, _ = build_splitting_network(mg)
    oracle = compute(g, EXACT).pi
    n = mg.n_nodes
    # the neg copies get no inlinks, so they keep only their baseline share
    assert np.allclose(res.scores[:, 1], 1 / (2 * n) / (1 + res.result.theta_T), atol=1e-12)
    assert np.abs(net_score(res, "pos", "neg") - (oracle[:n] - oracle[n:])).max() < 1e-15


def test_sign_split_round_trip():
    rng = np.random.default_rng(53)
    for _ in range(20):
        m = int(rng.integers(1, 4))
        n, edges, medges = _random_multi(rng, m)
        if not medges:
            continue
        signed = [(s, t, a, w if rng.random() < 0.6 else -w) for s, t, a, w in medges]
        mg = MultiGraph.from_edges(signed)
        assert np.all(mg.weight > 0)
        used = len({a for _, _, a, _ in signed})
        assert used <= mg.n_attributes <= 2 * used


def test_from_edges_errors():
    with pytest.raises(ValidationError):
        MultiGraph.from_edges([("1", "2", "a", 0.0)])
    with pytest.raises(ValidationError):
        MultiGraph.from_edges([("1", "2", "a", float("nan"))])
    with pytest.raises(ValidationError):
        MultiGraph.from_edges([])


def test_loader():
    mg = load_multi_edge_list(io.StringIO("# c\n1 2 like 1\n2 1 like -2\n1 3 cite 0.5\n"))
    assert mg.attributes == ("like+", "like-", "cite")
    assert mg.labels == ("1", "2", "3")
    with pytest.raises(ParseError):
        load_multi_edge_list(io.StringIO("1 2 like\n"))
    with pytest.raises(ParseError):
        load_multi_edge_list(io.StringIO("1 2 like x\n"))
    with pytest.raises(ValidationError):
        load_multi_edge_list(io.StringIO("1 2 like 0\n"))
