from .gradcheck import GradCheckReport, grad_check, relative_error
from .model import (
    ForwardResult,
    NumericConfig,
    NumericItem,
    NumericParams,
    forward,
    init_params,
    loss_and_grad,
    mse,
    params_from_json,
    params_to_json,
)
from .perturb import (
    PERTURB_COLUMNS,
    PerturbReport,
    estimate_jacobian_bound,
    perturb_experiment,
    perturb_report_rows,
    perturb_report_to_json,
    rigorous_jacobian_bound,
)
from .train import TrainConfig, train

__all__ = [
    "PERTURB_COLUMNS",
    "ForwardResult",
    "GradCheckReport",
    "NumericConfig",
    "NumericItem",
    "NumericParams",
    "PerturbReport",
    "TrainConfig",
    "estimate_jacobian_bound",
    "forward",
    "grad_check",
    "init_params",
    "loss_and_grad",
    "mse",
    "params_from_json",
    "params_to_json",
    "perturb_experiment",
    "perturb_report_rows",
    "perturb_report_to_json",
    "relative_error",
    "rigorous_jacobian_bound",
    "train",
]
