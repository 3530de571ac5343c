import logging

import numpy as np
import pytest

from src.bin.errors import ConfigError, DivergenceError
from src.graph.graph import to_numeric
from src.harness.generators import distance_targets, gen_cycle
from src.numeric.model import NumericConfig, forward, init_params
from src.numeric.train import TrainConfig, train

CFG = NumericConfig(feature_dim=8, layers=4)


def test_constant_target_is_reached():
    g = to_numeric(gen_cycle(5))
    ds = [(g, v, (0.5,)) for v in range(5)]
    hyper = TrainConfig(lr=0.05, steps=2000, optimizer="gd", tol=1e-6)
    _, history = train(ds, CFG, hyper)
    assert history[-1] <= 1e-6
    assert len(history) <= 2001


def test_distance_regression_on_marked_cycle():
    g = gen_cycle(6, "one")
    targets = distance_targets(g, 0)
    numeric = to_numeric(g)
    ds = [(numeric, v, (targets[v],)) for v in range(6)]
    hyper = TrainConfig(lr=0.01, steps=10_000, seed=1, optimizer="adam", tol=1e-3)
    p, history = train(ds, CFG, hyper)
    assert history[-1] <= 1e-3
    assert history[-1] < history[0]
    outputs = forward(numeric, p, CFG).outputs[:, 0]
    np.testing.assert_allclose(outputs, targets, atol=0.1)


def test_default_is_full_batch_gradient_descent():
    assert TrainConfig().optimizer == "gd"
    g = gen_cycle(6, "one")
    targets = distance_targets(g, 0)
    numeric = to_numeric(g)
    ds = [(numeric, v, (targets[v],)) for v in range(6)]
    _, history = train(ds, CFG, TrainConfig(lr=0.01, steps=200, seed=1))
    assert len(history) == 201
    assert history[-1] < history[0]


def test_equivalent_nodes_cannot_be_separated(caplog):
    numeric = to_numeric(gen_cycle(6, "one"))
    ds = [(numeric, 1, (0.0,)), (numeric, 5, (1.0,))]
    with caplog.at_level(logging.WARNING, logger="wl_unfolding_logger"):
        p, history = train(ds, CFG, TrainConfig(steps=300, seed=2))
    assert any("équivalence" in r.getMessage() for r in caplog.records)
    outputs = forward(numeric, p, CFG).outputs
    assert outputs[1, 0] == outputs[5, 0]
    assert 2 * history[-1] >= 0.5 * (1 - 1e-12)


def test_zero_steps_returns_initial_loss():
    g = to_numeric(gen_cycle(4))
    ds = [(g, v, (1.0,)) for v in range(4)]
    p0 = init_params(CFG, 0)
    p, history = train(ds, CFG, TrainConfig(steps=0), params=p0)
    assert len(history) == 1
    np.testing.assert_array_equal(p.flat(), p0.flat())


def test_divergence_is_reported():
    cfg = NumericConfig(feature_dim=4, layers=3, activation="identity")
    g = to_numeric(gen_cycle(5, "one"))
    ds = [(g, v, (float(v),)) for v in range(5)]
    hyper = TrainConfig(lr=1e6, steps=500, optimizer="gd")
    with pytest.raises(DivergenceError), np.errstate(all="ignore"):
        train(ds, cfg, hyper)


@pytest.mark.parametrize(
    "kwargs", [{"lr": 0.0}, {"steps": -1}, {"optimizer": "sgd-momentum"}]
)
def test_invalid_train_config(kwargs):
    with pytest.raises(ConfigError):
        TrainConfig(**kwargs)
