import random

import pytest
from hypothesis import given, settings, strategies as st

from citepath.graphio import (
    PajekFormatError,
    network_to_dot,
    read_edge_list,
    read_pajek_net,
    write_edge_list,
    write_pajek_net,
)
from citepath.network import CitationNetwork
from oracles import random_dag


def test_minimal_pajek_file():
    net = read_pajek_net('*Vertices 2\n1 "a"\n2 "b"\n*Arcs\n1 2')
    assert net.nodes == ["a", "b"]
    assert net.arcs == (("a", "b"),)
    assert net.weights is None


def test_out_of_range_vertex():
    with pytest.raises(PajekFormatError, match="out of range"):
        read_pajek_net('*Vertices 2\n1 "a"\n2 "b"\n*Arcs\n1 3')


def test_non_numeric_weight():
    with pytest.raises(PajekFormatError, match="non-numeric"):
        read_pajek_net("*Vertices 2\n*Arcs\n1 2 heavy")


def test_labels_with_spaces_and_unlabelled_vertices():
    net = read_pajek_net('% comment\n*Vertices 3\n1 "cloud computing"\n*Arcs\n1 2 2.5\n2 3')
    assert net.nodes == ["cloud computing", "2", "3"]
    assert net.weights == {("cloud computing", "2"): 2.5}


def test_diamond_round_trip(diamond):
    w = {a: i + 0.25 for i, a in enumerate(diamond.arcs)}
    net = diamond.with_weights(w)
    back = read_pajek_net(write_pajek_net(net))
    assert back.same_structure(net)
    assert back.nodes == net.nodes
    assert back.weights == net.weights


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_pajek_round_trip_random(seed):
    rng = random.Random(seed)
    net = random_dag(rng)
    weights = {a: rng.choice([rng.randint(1, 10**12), rng.uniform(-5, 5)]) for a in net.arcs}
    net = net.with_weights(weights)
    text = write_pajek_net(net)
    back = read_pajek_net(text)
    assert back.nodes == net.nodes and back.arcs == net.arcs
    assert back.weights == (net.weights or None)
    assert write_pajek_net(back) == text


def test_edge_list_reverses_orientation():
    net = read_edge_list("citing,cited\nB,A\nC,B\n")
    assert net.arcs == (("A", "B"), ("B", "C"))
    assert read_edge_list(write_edge_list(net)).arcs == net.arcs


def test_dot_quotes_labels():
    net = CitationNetwork(["x y", "z"], [("x y", "z")], {("x y", "z"): 3})
    dot = network_to_dot(net, "p")
    assert '"x y" -> z [label="3"];' in dot
    assert dot.startswith("digraph p {")
