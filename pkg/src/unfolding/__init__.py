from .codec import (
    TreeCode,
    canonical_code,
    canonical_form,
    decode_tree,
    encode_tree,
    tree_to_debug,
)
from .equivalence import (
    CodeTable,
    graphs_unfolding_equivalent,
    node_classes_by_unfolding,
    unfolding_codes,
    unfolding_equivalent,
)
from .tree import VOID, UnfoldingTree, Void, leaf, truncate, unfold

__all__ = [
    "VOID",
    "CodeTable",
    "TreeCode",
    "UnfoldingTree",
    "Void",
    "canonical_code",
    "canonical_form",
    "decode_tree",
    "encode_tree",
    "graphs_unfolding_equivalent",
    "leaf",
    "node_classes_by_unfolding",
    "tree_to_debug",
    "truncate",
    "unfold",
    "unfolding_codes",
    "unfolding_equivalent",
]
