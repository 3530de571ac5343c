import json

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from src.bin.errors import (
    ConfigError,
    GraphFormatError,
    NodeIdError,
    QuantizeBoundError,
)
from src.graph.graph import (
    connected_components,
    diameter,
    dump_graph,
    load_graph,
    make_graph,
    max_degree,
    neighbors,
    permute_graph,
    to_numeric,
)
from src.graph.partition import Partition
from src.graph.quantize import QuantizerConfig, quantize_labels, quantize_value

from .strategies import connected_graphs, graphs

TRIANGLE = (
    '{"nodes":[{"id":0,"label":[0]},{"id":1,"label":[0]},{"id":2,"label":[0]}],'
    '"edges":[[0,1],[1,2],[2,0]]}'
)


def test_load_smallest_graph():
    g = load_graph('{"nodes":[{"id":0,"label":[0]}],"edges":[]}')
    assert g.node_count == 1
    assert g.label_dim == 1
    assert g.edge_count == 0


def test_load_triangle_normalizes_edges():
    g = load_graph(TRIANGLE)
    assert g.node_count == 3
    assert g.edges == frozenset({(0, 1), (1, 2), (0, 2)})


def test_load_rejects_out_of_range_node():
    doc = (
        '{"nodes":[{"id":0,"label":[0]},{"id":1,"label":[0]},{"id":2,"label":[0]}],'
        '"edges":[[0,5]]}'
    )
    with pytest.raises(NodeIdError):
        load_graph(doc)


@pytest.mark.parametrize(
    "doc",
    [
        "not json",
        '{"nodes":[]}',
        '{"nodes":[{"id":0,"label":[0]},{"id":1,"label":[0]}],"edges":[[0,1],[1,0]]}',
        '{"nodes":[{"id":0,"label":[0]},{"id":1,"label":[0,1]}],"edges":[]}',
        '{"nodes":[{"id":0,"label":[0]},{"id":2,"label":[0]}],"edges":[]}',
        '{"nodes":[{"id":0,"label":[0.5]}],"edges":[]}',
        '{"nodes":[{"id":0,"label":[]}],"edges":[]}',
    ],
)
def test_load_rejects_malformed_documents(doc):
    with pytest.raises(GraphFormatError):
        load_graph(doc)


def test_numeric_mode_accepts_reals():
    g = load_graph('{"nodes":[{"id":0,"label":[0.5, 1]}],"edges":[]}', exact=False)
    assert g.labels == ((0.5, 1.0),)
    assert not g.exact


def test_self_loop_is_one_neighbor():
    g = make_graph([[0], [0]], [(0, 0), (0, 1)])
    assert neighbors(g, 0) == [0, 1]
    assert max_degree(g) == 2


@given(graphs(self_loops=True))
def test_dump_then_load_is_identity(g):
    assert load_graph(dump_graph(g)) == g


def test_dump_is_sorted():
    g = make_graph([[1], [0], [2]], [(2, 1), (1, 0)])
    assert json.loads(dump_graph(g))["edges"] == [[0, 1], [1, 2]]


def test_diameter_examples():
    path = make_graph([[0]] * 4, [(0, 1), (1, 2), (2, 3)])
    assert diameter(path) == 3
    assert diameter(make_graph([[0]], [])) == 0
    # composantes : la plus grande compte
    split = make_graph([[0]] * 5, [(0, 1), (2, 3), (3, 4)])
    assert diameter(split) == 2
    assert connected_components(split) == [[0, 1], [2, 3, 4]]


@given(graphs(self_loops=True), st.data())
def test_diameter_is_invariant_under_permutation(g, data):
    perm = data.draw(st.permutations(list(range(g.node_count))))
    assert diameter(permute_graph(g, perm)) == diameter(g)


@given(connected_graphs())
def test_connected_diameter_below_node_count(g):
    assert connected_components(g) == [list(range(g.node_count))]
    assert diameter(g) <= g.node_count - 1


def test_permute_graph_moves_labels_and_edges():
    g = make_graph([[7], [8], [9]], [(0, 1)])
    h = permute_graph(g, [2, 0, 1])
    assert h.labels == ((8,), (9,), (7,))
    assert h.edges == frozenset({(0, 2)})
    with pytest.raises(ValueError):
        permute_graph(g, [0, 0, 1])


def test_to_numeric_converts_labels():
    g = to_numeric(make_graph([[1], [2]], [(0, 1)]))
    assert g.labels == ((1.0,), (2.0,))
    assert to_numeric(g) is g


def test_partition_first_difference():
    a = Partition.from_keys([0, 0, 1])
    b = Partition.from_keys([5, 6, 6])
    assert a.first_difference(a) is None
    u, v = a.first_difference(b)
    assert a.same_block(u, v) != b.same_block(u, v)
    assert Partition.from_keys([0, 1, 2]).refines(a)
    assert not a.refines(Partition.from_keys([0, 1, 2]))


def test_quantizer_intervals():
    # centres -1, 0, 1 ; intervalles fermés de demi-largeur 0.25
    cfg = QuantizerConfig(bound=1.0, width=0.5)
    assert cfg.interval_count == 3
    assert quantize_value(-1.0, cfg) == 0
    assert quantize_value(-0.75, cfg) == 0
    assert quantize_value(0.25, cfg) == 1
    assert quantize_value(-0.25, cfg) == 1
    assert quantize_value(1.0, cfg) == 2
    assert quantize_value(0.75, cfg) == 2


@pytest.mark.parametrize("z", [-0.5, -0.7, 0.3, 0.5, 0.74])
def test_quantizer_gaps_are_rejected(z):
    with pytest.raises(QuantizeBoundError):
        quantize_value(z, QuantizerConfig(bound=1.0, width=0.5))


def test_quantizer_rejects_values_beyond_bound():
    with pytest.raises(QuantizeBoundError):
        quantize_value(1.5, QuantizerConfig(bound=1.0, width=0.5))


@given(
    st.integers(min_value=1, max_value=16),
    st.integers(min_value=1, max_value=8),
    st.data(),
)
def test_quantizer_constant_per_interval_and_injective(
    bound_quarters, width_eighths, data
):
    # grilles dyadiques : tous les points tirés sont des flottants exacts
    cfg = QuantizerConfig(bound=bound_quarters / 4, width=width_eighths / 8)
    last = cfg.interval_count - 1

    def point(i):
        shift = data.draw(st.integers(min_value=-4, max_value=4))
        z = -cfg.bound + 2 * i * cfg.width + shift * cfg.width / 8
        assume(abs(z) <= cfg.bound)
        return z

    i = data.draw(st.integers(min_value=0, max_value=last))
    j = data.draw(st.integers(min_value=0, max_value=last))
    a, b, c = point(i), point(i), point(j)
    assert quantize_value(a, cfg) == quantize_value(b, cfg) == i
    assert (quantize_value(c, cfg) == quantize_value(a, cfg)) == (i == j)


def test_quantizer_rejects_bad_config():
    with pytest.raises(ConfigError):
        QuantizerConfig(bound=0.0, width=0.1)
    with pytest.raises(ConfigError):
        QuantizerConfig(bound=1.0, width=-1.0)


def test_quantize_labels_gives_exact_graph():
    g = make_graph([[0.1], [0.2], [0.9]], [(0, 1), (1, 2)], exact=False)
    q = quantize_labels(g, QuantizerConfig(bound=1.0, width=0.5))
    assert q.exact
    assert q.labels == ((1,), (1,), (2,))
    assert q.edges == g.edges
