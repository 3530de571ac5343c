from ..unfolding.codec import TreeCode, decode_tree, encode_tree
from .gnn import (
    Dataset,
    DatasetItem,
    ExactGnnProgram,
    TargetViolation,
    aggregate_exact,
    attach,
    combine_exact,
    construct_gnn,
    evaluate,
    exact_gnn_trace,
    program_from_json,
    program_to_json,
    run_exact_gnn,
    validate_target,
)

__all__ = [
    "Dataset",
    "DatasetItem",
    "ExactGnnProgram",
    "TargetViolation",
    "TreeCode",
    "aggregate_exact",
    "attach",
    "combine_exact",
    "construct_gnn",
    "decode_tree",
    "encode_tree",
    "evaluate",
    "exact_gnn_trace",
    "program_from_json",
    "program_to_json",
    "run_exact_gnn",
    "validate_target",
]
