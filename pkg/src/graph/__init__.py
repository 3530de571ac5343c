from .graph import (
    Graph,
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
from .partition import Partition
from .quantize import QuantizerConfig, quantize_labels

__all__ = [
    "Graph",
    "Partition",
    "QuantizerConfig",
    "connected_components",
    "diameter",
    "dump_graph",
    "load_graph",
    "make_graph",
    "max_degree",
    "neighbors",
    "permute_graph",
    "quantize_labels",
    "to_numeric",
]
