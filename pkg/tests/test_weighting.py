import random
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from citepath.network import CitationNetwork, NetworkError, sinks, sources
from citepath.weighting import (
    DEFAULT_TELEPORT,
    ConvergenceError,
    eigen_residual,
    eigenvector_centrality,
    fv_effect_arcs,
    fv_gradient,
    fv_index,
    fv_normalize,
    fv_value,
    fv_weights,
    path_counts,
    spc_weights,
    total_paths,
)
from oracles import arc_path_counts, random_dag


# -- SPC ---------------------------------------------------------------------


def test_spc_single_arc():
    assert spc_weights(CitationNetwork("ST", [("S", "T")])).weights == {("S", "T"): 1}


def test_spc_diamond(diamond):
    assert set(spc_weights(diamond).weights.values()) == {1}
    assert total_paths(diamond) == 2


def test_spc_chain_with_shortcut():
    net = CitationNetwork("ABC", [("A", "B"), ("B", "C"), ("A", "C")])
    assert spc_weights(net).weights == {("A", "B"): 1, ("A", "C"): 1, ("B", "C"): 1}
    assert total_paths(net) == 2


def test_spc_weighted_example_against_hand_count():
    # S1, S2 -> m -> T1, T2 plus S1 -> T2 directly
    net = CitationNetwork(
        ["S1", "S2", "m", "T1", "T2"],
        [("S1", "m"), ("S2", "m"), ("m", "T1"), ("m", "T2"), ("S1", "T2")],
    )
    w = spc_weights(net).weights
    assert w[("S1", "m")] == 2 and w[("m", "T1")] == 2 and w[("S1", "T2")] == 1


def test_spc_needs_arcs():
    with pytest.raises(NetworkError):
        spc_weights(CitationNetwork("A", []))


@settings(max_examples=300)
@given(st.integers(0, 2**32))
def test_spc_matches_enumeration(seed):
    net = random_dag(random.Random(seed))
    if not net.arcs:
        return
    assert spc_weights(net).weights == arc_path_counts(net)


@settings(max_examples=100)
@given(st.integers(0, 2**32))
def test_path_count_conservation(seed):
    net = random_dag(random.Random(seed))
    if not net.arcs:
        return
    n_minus, n_plus = path_counts(net)
    from_src = sum(n_plus[s] for s in sources(net))
    into_sinks = sum(n_minus[t] for t in sinks(net))
    assert from_src == into_sinks == total_paths(net)
    # every non-terminal node routes N-(v) * N+(v) paths both in and out
    w = spc_weights(net).weights
    for v in net.nodes:
        if net.pred[v] and net.succ[v]:
            flow_in = sum(w[(u, v)] for u in net.pred[v])
            flow_out = sum(w[(v, x)] for x in net.succ[v])
            assert flow_in == flow_out == n_minus[v] * n_plus[v]


# -- eigenvector centrality --------------------------------------------------


def dense_principal(net, teleport=DEFAULT_TELEPORT):
    """Principal eigenvector of the damped citation operator by full eigendecomposition."""
    nodes = net.nodes
    idx = {n: i for i, n in enumerate(nodes)}
    m = np.full((len(nodes), len(nodes)), teleport)
    for t, h in net.arcs:
        m[idx[t], idx[h]] += 1.0
    vals, vecs = np.linalg.eig(m)
    v = np.abs(np.real(vecs[:, np.argmax(np.real(vals))]))
    return dict(zip(nodes, v / v.max()))


def test_eig_single_node():
    assert eigenvector_centrality(CitationNetwork("A", [])) == {"A": 1.0}


def test_eig_symmetric_pair():
    net = CitationNetwork("AB", [("A", "B"), ("B", "A")])
    eig = eigenvector_centrality(net)
    assert eig["A"] == pytest.approx(1.0, abs=1e-12) and eig["B"] == pytest.approx(1.0, abs=1e-12)


def test_eig_star_cited_work_dominates():
    # A and B both cite C: knowledge flows C -> A and C -> B
    net = CitationNetwork("ABC", [("C", "A"), ("C", "B")])
    eig = eigenvector_centrality(net)
    assert eig["C"] == 1.0
    assert eig["A"] == eig["B"] < 1.0
    ref = dense_principal(net)
    for n in "ABC":
        assert eig[n] == pytest.approx(ref[n], rel=1e-6)


def test_eig_matches_dense_oracle_on_random_dags():
    rng = random.Random(11)
    for _ in range(50):
        net = random_dag(rng)
        if not len(net):
            continue
        eig = eigenvector_centrality(net)
        ref = dense_principal(net)
        assert max(abs(eig[n] - ref[n]) for n in net.nodes) < 1e-6
        assert max(eig.values()) == 1.0 and min(eig.values()) > 0


def test_eig_fixed_point_residual():
    rng = random.Random(5)
    tol = 1e-12
    for _ in range(30):
        net = random_dag(rng)
        if not len(net):
            continue
        eig = eigenvector_centrality(net, tol=tol)
        assert eigen_residual(net, eig) < 10 * tol


def test_eig_nonconvergence_reports_residual():
    net = CitationNetwork("ABCD", [("A", "B"), ("B", "C"), ("C", "D")])
    with pytest.raises(ConvergenceError) as err:
        eigenvector_centrality(net, max_iters=2)
    assert err.value.residual > 0


def test_eig_is_deterministic():
    net = random_dag(random.Random(9), max_nodes=12)
    assert eigenvector_centrality(net) == eigenvector_centrality(net)


# -- FV index, gradient, normalization ---------------------------------------


def test_fv_value_examples():
    assert fv_value(3, 1, 0.5) == 1.0
    assert fv_value(4, 0, 0.25) == 1.25
    assert fv_value(0, 2, 0.25) == -0.75
    with pytest.raises(NetworkError):
        fv_value(0, 0, 0.1)


def test_fv_index_uses_citation_sense_degrees():
    # knowledge-flow arc C -> A: C is cited (receives), A cites (makes)
    net = CitationNetwork("AC", [("C", "A")])
    m = fv_index(net, {"A": 0.2, "C": 1.0})
    assert (m["C"].indeg, m["C"].outdeg, m["C"].w_fv) == (1, 0, 2.0)
    assert (m["A"].indeg, m["A"].outdeg, m["A"].w_fv) == (0, 1, -0.8)


def test_fv_index_range():
    rng = random.Random(2)
    for _ in range(30):
        net = random_dag(rng)
        if not net.arcs:
            continue
        eig = eigenvector_centrality(net)
        for m in fv_index(net, eig).values():
            assert -1.0 <= m.w_fv <= 1.0 + max(eig.values())


def test_fv_gradient_examples():
    net = CitationNetwork("ijkl", [("i", "j"), ("k", "l")])
    g = fv_gradient(net, {"i": 1.2, "j": 0.4, "k": 0.1, "l": 0.9})
    assert g[("i", "j")] == pytest.approx(0.8)
    assert g[("k", "l")] == pytest.approx(-0.8)
    assert fv_effect_arcs(g) == [("k", "l")]
    assert fv_effect_arcs({("a", "b"): 0.0}) == []


def test_fv_normalize_examples():
    g = {("a", "b"): -1.0, ("b", "c"): 0.0, ("c", "d"): 1.0}
    assert fv_normalize(g) == {("a", "b"): 2.0, ("b", "c"): 1.5, ("c", "d"): 1.0}


def test_fv_normalize_degenerate_warns():
    with pytest.warns(RuntimeWarning):
        assert fv_normalize({("a", "b"): 0.3, ("b", "c"): 0.3}) == {("a", "b"): 1.0, ("b", "c"): 1.0}


@given(st.lists(st.integers(-400, 400), min_size=2, max_size=30, unique=True))
def test_fv_normalize_is_order_reversing_affine(ints):
    grads = {(f"t{i}", f"h{i}"): v / 16 for i, v in enumerate(ints)}
    norm = fv_normalize(grads)
    assert min(norm.values()) == 1.0 and max(norm.values()) == 2.0
    by_grad = sorted(grads, key=grads.get)
    by_norm = sorted(norm, key=norm.get, reverse=True)
    assert by_grad == by_norm
    vals = [norm[a] for a in by_grad]
    assert all(x > y for x, y in zip(vals, vals[1:]))
    # affine: equal gradient steps give equal weight steps
    lo, hi = min(grads.values()), max(grads.values())
    for a in grads:
        assert norm[a] == pytest.approx(2.0 - (grads[a] - lo) / (hi - lo), abs=1e-12)


def test_fv_weights_end_to_end():
    net = CitationNetwork("ABCD", [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        res = fv_weights(net)
    assert res.weighted.scheme == "FV-normalized"
    assert all(1.0 <= w <= 2.0 for w in res.weighted.weights.values())
    assert len(res.fv_effect) == sum(1 for g in res.gradients.values() if g < 0)
