import numpy as np
import pytest

from src.bin.config import JACOBIAN_SAFETY
from src.bin.errors import ConfigError
from src.graph.graph import make_graph, max_degree, to_numeric
from src.harness.generators import gen_cycle, gen_random_labeled
from src.numeric.model import NumericConfig, NumericParams, init_params
from src.numeric.perturb import (
    estimate_jacobian_bound,
    output_bound,
    perturb_experiment,
    perturb_report_rows,
    perturb_report_to_json,
    rigorous_jacobian_bound,
    step_bounds,
)

SCALAR = NumericConfig(
    feature_dim=1, layers=3, combine_hidden=1, readout_hidden=1, activation="identity"
)
TANH = NumericConfig(feature_dim=4, layers=3, combine_hidden=6, readout_hidden=6)
PATH = make_graph([[0.0], [1.0], [0.0]], [(0, 1), (1, 2)], exact=False)


def _scalar_params(w1, readout_w1=1.0):
    arrays = {}
    for k in range(SCALAR.layers):
        arrays[f"combine.{k}.W1"] = np.array([w1])
        arrays[f"combine.{k}.b1"] = np.zeros(1)
        arrays[f"combine.{k}.W2"] = np.array([[1.0]])
        arrays[f"combine.{k}.b2"] = np.zeros(1)
    arrays["readout.W1"] = np.array([[readout_w1]])
    arrays["readout.b1"] = np.zeros(1)
    arrays["readout.W2"] = np.array([[1.0]])
    arrays["readout.b2"] = np.zeros(1)
    return NumericParams(arrays)


def test_affine_bound_is_exact():
    p = _scalar_params([1.0, 0.0])
    assert estimate_jacobian_bound(p, SCALAR) == pytest.approx(1.0)
    half = _scalar_params([0.25, 0.25], readout_w1=0.5)
    assert estimate_jacobian_bound(half, SCALAR, fan_in=1) == pytest.approx(0.5)
    assert estimate_jacobian_bound(half, SCALAR, fan_in=3) == pytest.approx(1.0)


def test_mean_aggregate_ignores_fan_in():
    cfg = NumericConfig(
        feature_dim=1,
        layers=3,
        aggregate="mean",
        combine_hidden=1,
        readout_hidden=1,
        activation="identity",
    )
    half = _scalar_params([0.25, 0.25], readout_w1=0.5)
    assert estimate_jacobian_bound(half, cfg, fan_in=5) == pytest.approx(0.5)


def test_unit_bound_grows_linearly():
    p = _scalar_params([1.0, 0.0])
    report = perturb_experiment(PATH, p, SCALAR, 1e-3, 10, 0)
    assert report.jacobian_bound == pytest.approx(1.0)
    assert report.bounds == pytest.approx((0.0, 3e-3, 6e-3, 9e-3))
    assert report.ok


def test_contracting_bound_stays_below_limit():
    p = _scalar_params([0.25, 0.25], readout_w1=0.5)
    eta = 1e-2
    report = perturb_experiment(PATH, p, SCALAR, eta, 20, 1)
    assert report.jacobian_bound == pytest.approx(0.75)
    assert all(b < eta * 3 / (1 - 0.75) for b in report.bounds)
    assert report.ok


def test_constant_offsets_drift_is_nondecreasing():
    p = _scalar_params([1.0, 0.5])
    report = perturb_experiment(PATH, p, SCALAR, 1e-3, 3, 0, offset_mode="constant")
    assert report.observed[0] == 0.0
    assert list(report.observed) == sorted(report.observed)
    assert report.observed[-1] > report.observed[1]
    assert report.ok


@pytest.mark.parametrize("eta", [1e-3, 1e-2])
def test_random_networks_respect_bound(eta):
    g = to_numeric(gen_random_labeled(8, 0.4, 3, 12))
    for seed in range(3):
        report = perturb_experiment(g, init_params(TANH, seed), TANH, eta, 25, seed)
        assert report.ok, report


def test_zero_eta_changes_nothing():
    g = to_numeric(gen_cycle(5, "one"))
    report = perturb_experiment(g, init_params(TANH, 0), TANH, 0.0, 5, 0)
    assert report.observed == (0.0,) * (TANH.layers + 1)
    assert report.output_drift == 0.0
    assert report.ok


def test_given_bound_is_used():
    g = to_numeric(gen_cycle(4))
    report = perturb_experiment(
        g, init_params(TANH, 0), TANH, 1e-3, 2, 0, jacobian_bound=2.0
    )
    assert report.jacobian_bound == 2.0
    assert report.output_bound == pytest.approx(output_bound(1e-3, 4, 2.0, 3))


def test_estimate_grows_with_samples():
    p = init_params(TANH, 4)
    few = estimate_jacobian_bound(p, TANH, samples=8, seed=3)
    many = estimate_jacobian_bound(p, TANH, samples=64, seed=3)
    assert few <= many


def test_rigorous_bound_dominates_samples():
    p = init_params(TANH, 6)
    sampled = estimate_jacobian_bound(p, TANH, box=(-3.0, 3.0), fan_in=2)
    rigorous = rigorous_jacobian_bound(p, TANH, fan_in=2)
    assert rigorous >= sampled / JACOBIAN_SAFETY - 1e-12


def test_step_and_output_bounds():
    assert step_bounds(1.0, 1, 0.5, 2) == [0.0, 1.0, 1.5]
    assert output_bound(1.0, 1, 0.5, 2) == pytest.approx(1.75)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"eta": -1.0},
        {"offset_mode": "gaussian"},
        {"samples": 0},
        {"box": (1.0, -1.0)},
    ],
)
def test_invalid_arguments(kwargs):
    args = {"eta": 1e-3, **kwargs}
    eta = args.pop("eta")
    with pytest.raises(ConfigError):
        perturb_experiment(PATH, init_params(TANH, 0), TANH, eta, 2, 0, **args)


def test_report_rows():
    report = perturb_experiment(PATH, init_params(TANH, 0), TANH, 1e-3, 4, 0)
    rows = perturb_report_rows(report)
    assert [row["step"] for row in rows] == ["0", "1", "2", "3", "readout"]
    assert not any(row["violation"] for row in rows)


def test_report_carries_weight_only_bound():
    p = _scalar_params([0.25, -0.25], readout_w1=0.5)
    report = perturb_experiment(PATH, p, SCALAR, 1e-3, 4, 0)
    expected = rigorous_jacobian_bound(p, SCALAR, fan_in=max_degree(PATH))
    assert report.rigorous_bound == pytest.approx(expected)
    assert report.rigorous_bound >= report.jacobian_bound - 1e-12
    payload = perturb_report_to_json(report)
    assert payload["rigorous_jacobian_bound"] == report.rigorous_bound
    assert payload["jacobian_bound"] == report.jacobian_bound
    assert payload["steps"][-1]["step"] == "readout"
