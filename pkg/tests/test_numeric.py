import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.bin.errors import ConfigError, DimensionMismatchError, NodeIdError
from src.graph.graph import make_graph, permute_graph, to_numeric
from src.harness.generators import distance_targets, gen_cycle
from src.numeric.gradcheck import grad_check, relative_error
from src.numeric.model import (
    NumericConfig,
    NumericParams,
    forward,
    init_params,
    loss_and_grad,
    mse,
    params_from_json,
    params_to_json,
)

from .strategies import graphs

SMALL = NumericConfig(feature_dim=4, layers=2, combine_hidden=6, readout_hidden=6)


def _distance_items(g, source=0):
    targets = distance_targets(g, source)
    numeric = to_numeric(g)
    return [(numeric, v, (targets[v],)) for v in range(g.node_count)]


def test_init_is_deterministic():
    a = init_params(SMALL, 3).flat()
    b = init_params(SMALL, 3).flat()
    c = init_params(SMALL, 4).flat()
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_init_shapes_and_zero_biases():
    p = init_params(SMALL, 0)
    p.check(SMALL)
    assert p["combine.0.W1"].shape == (6, 2)
    assert p["combine.1.W1"].shape == (6, 8)
    assert not p["readout.b2"].any()


@pytest.mark.parametrize(
    "kwargs",
    [
        {"layers": 0},
        {"feature_dim": 0},
        {"aggregate": "max"},
        {"activation": "relu"},
    ],
)
def test_invalid_config(kwargs):
    with pytest.raises(ConfigError):
        NumericConfig(**kwargs)


def test_params_must_match_config():
    p = init_params(SMALL, 0)
    with pytest.raises(DimensionMismatchError):
        p.check(NumericConfig(feature_dim=5, layers=2))


def test_label_dimension_is_checked():
    g = to_numeric(gen_cycle(4))
    cfg = NumericConfig(input_dim=2, feature_dim=3, layers=1)
    with pytest.raises(DimensionMismatchError):
        forward(g, init_params(cfg, 0), cfg)


def test_target_dimension_is_checked():
    g = to_numeric(gen_cycle(4))
    with pytest.raises(DimensionMismatchError):
        loss_and_grad([(g, 0, (1.0, 2.0))], init_params(SMALL, 0), SMALL)


@pytest.mark.parametrize("node", [-1, 4])
def test_dataset_node_must_exist(node):
    g = to_numeric(gen_cycle(4))
    with pytest.raises(NodeIdError):
        loss_and_grad([(g, node, (1.0,))], init_params(SMALL, 0), SMALL)
    with pytest.raises(NodeIdError):
        mse([(g, node, (1.0,))], init_params(SMALL, 0), SMALL)


def test_isolated_node_forward():
    g = make_graph([[0.5]], [], exact=False)
    result = forward(g, init_params(SMALL, 1), SMALL)
    assert result.outputs.shape == (1, 1)
    assert len(result.states) == SMALL.layers + 1
    assert np.isfinite(result.outputs).all()


def test_triangle_nodes_share_output():
    g = make_graph([[1.0]] * 3, [(0, 1), (1, 2), (0, 2)], exact=False)
    out = forward(g, init_params(SMALL, 2), SMALL).outputs
    np.testing.assert_array_equal(out[0], out[1])
    np.testing.assert_array_equal(out[0], out[2])


@pytest.mark.parametrize("aggregate", ["sum", "mean"])
def test_equivalent_nodes_bit_identical(aggregate):
    g = to_numeric(gen_cycle(6, "one"))
    cfg = NumericConfig(feature_dim=8, layers=4, aggregate=aggregate)
    result = forward(g, init_params(cfg, 7), cfg)
    for h in result.states:
        np.testing.assert_array_equal(h[1], h[5])
        np.testing.assert_array_equal(h[2], h[4])
    np.testing.assert_array_equal(result.outputs[1], result.outputs[5])
    assert not np.array_equal(result.outputs[0], result.outputs[3])


@settings(max_examples=40, deadline=None)
@given(graphs(max_nodes=7), st.data())
def test_forward_is_permutation_equivariant(g, data):
    perm = data.draw(st.permutations(list(range(g.node_count))))
    numeric = to_numeric(g)
    p = init_params(SMALL, 11)
    out = forward(numeric, p, SMALL).outputs
    out_perm = forward(permute_graph(numeric, perm), p, SMALL).outputs
    for v in range(g.node_count):
        np.testing.assert_array_equal(out[v], out_perm[perm[v]])


def test_zero_readout_gives_zero_loss_and_gradient():
    g = to_numeric(gen_cycle(5))
    p = init_params(SMALL, 0)
    arrays = dict(p.arrays)
    arrays["readout.W2"] = np.zeros_like(arrays["readout.W2"])
    zero = NumericParams(arrays)
    ds = [(g, v, (0.0,)) for v in range(5)]
    loss, grads = loss_and_grad(ds, zero, SMALL)
    assert loss == 0.0
    assert not grads.flat().any()


def test_loss_matches_mse_and_ignores_duplicates():
    ds = _distance_items(gen_cycle(6, "one"))
    p = init_params(SMALL, 5)
    loss, _ = loss_and_grad(ds, p, SMALL)
    assert loss == pytest.approx(mse(ds, p, SMALL))
    assert mse(ds + ds, p, SMALL) == pytest.approx(mse(ds, p, SMALL))


def test_empty_dataset():
    loss, grads = loss_and_grad([], init_params(SMALL, 0), SMALL)
    assert loss == 0.0
    assert not grads.flat().any()


@pytest.mark.parametrize("m", [1, 4, 8])
def test_gradient_matches_finite_differences(m):
    cfg = NumericConfig(feature_dim=m, layers=2, combine_hidden=6, readout_hidden=6)
    ds = _distance_items(gen_cycle(6, "one"))
    report = grad_check(ds, init_params(cfg, 100 + m), cfg)
    assert report.ok(1e-5), report
    assert report.parameter_count == init_params(cfg, 0).flat().size


@pytest.mark.parametrize("activation", ["sigmoid", "identity"])
def test_gradient_other_activations_and_mean(activation):
    cfg = NumericConfig(
        feature_dim=3,
        layers=2,
        aggregate="mean",
        combine_hidden=4,
        readout_hidden=4,
        activation=activation,
    )
    g = make_graph([[0.0], [1.0], [0.0], [2.0]], [(0, 1), (1, 2), (1, 3)], exact=False)
    ds = [(g, v, (float(v),)) for v in range(4)]
    assert grad_check(ds, init_params(cfg, 9), cfg).ok(1e-5)


def test_affine_network_gradient_is_exact():
    # sortie affine en chaque paramètre : la perte est quadratique
    cfg = NumericConfig(
        feature_dim=1,
        layers=1,
        combine_hidden=1,
        readout_hidden=1,
        activation="identity",
    )
    ds = _distance_items(gen_cycle(6, "one"))
    assert grad_check(ds, init_params(cfg, 8), cfg).max_relative_error <= 1e-9


def test_coarse_step_is_detected():
    ds = _distance_items(gen_cycle(6, "one"))
    report = grad_check(ds, init_params(SMALL, 3), SMALL, step=1.0)
    assert not report.ok(1e-5)


def test_relative_error_floor():
    assert relative_error(1e-12, 0.0) == pytest.approx(1e-4)
    assert relative_error(1.0, 3.0) == pytest.approx(0.5)


def test_params_json_round_trip():
    p = init_params(SMALL, 21)
    back, cfg = params_from_json(params_to_json(p, SMALL))
    assert cfg == SMALL
    for name, array in p.arrays.items():
        np.testing.assert_array_equal(back[name], array)
