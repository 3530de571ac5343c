from .checks import (
    BRIDGE_COLUMNS,
    BridgeReport,
    ConvergenceBound,
    bridge_row,
    check_convergence_bound,
    check_depth_sufficiency,
    check_graph_theorem,
    check_node_theorem,
    check_stepwise_correspondence,
)

__all__ = [
    "BRIDGE_COLUMNS",
    "BridgeReport",
    "ConvergenceBound",
    "bridge_row",
    "check_convergence_bound",
    "check_depth_sufficiency",
    "check_graph_theorem",
    "check_node_theorem",
    "check_stepwise_correspondence",
]
