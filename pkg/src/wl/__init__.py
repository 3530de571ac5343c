from .coloring import (
    ColorDictionary,
    ColoringTrace,
    color_partition,
    trace_to_json,
    wl_graphs_equivalent,
    wl_init,
    wl_node_equivalent,
    wl_refine,
    wl_run,
    wl_step,
)

__all__ = [
    "ColorDictionary",
    "ColoringTrace",
    "color_partition",
    "trace_to_json",
    "wl_graphs_equivalent",
    "wl_init",
    "wl_node_equivalent",
    "wl_refine",
    "wl_run",
    "wl_step",
]
