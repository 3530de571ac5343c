"""
Vérifications croisées entre le test 1-WL et les arbres de dépliage.

Les deux côtés sont calculés par des modules indépendants (``src.wl`` et
``src.unfolding``), chacun sert d'oracle à l'autre.
"""

from collections.abc import Callable
from dataclasses import dataclass
from typing import Any, NamedTuple

from beartype import beartype

from ..graph.graph import Graph, diameter
from ..unfolding.equivalence import (
    CodeTable,
    graphs_unfolding_equivalent,
    node_classes_by_unfolding,
)
from ..wl.coloring import (
    ColorDictionary,
    color_partition,
    wl_graphs_equivalent,
    wl_refine,
    wl_run,
)

DictionaryFactory = Callable[[], ColorDictionary]
TableFactory = Callable[[], CodeTable]

BRIDGE_COLUMNS = [
    "graph_id",
    "n",
    "m",
    "diameter",
    "wl_steps",
    "classes_wl",
    "classes_unfold",
    "match",
    "bound_r",
    "bound_r1",
]


@dataclass(frozen=True)
class BridgeReport:
    """
    Résultat de la correspondance pas à pas entre partitions WL et partitions
    de dépliage. ``counterexample = (t, u, v)`` désigne la première étape en
    désaccord et une paire de nœuds groupée d'un côté, séparée de l'autre.
    """

    graph_id: int
    step_matches: tuple[bool, ...]
    convergence_step: int | None
    diameter: int
    bound_satisfied: bool
    counterexample: tuple[int, int, int] | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


class ConvergenceBound(NamedTuple):
    steps: int
    r: int
    within_r: bool
    within_r_plus_1: bool


@beartype
def check_stepwise_correspondence(
    g: Graph,
    t_max: int,
    graph_id: int = 0,
    dictionary_factory: DictionaryFactory = ColorDictionary,
    table_factory: TableFactory = CodeTable,
) -> BridgeReport:
    """
    Compare, pour chaque ``t`` de ``0`` à ``t_max``, la partition des couleurs
    WL à l'étape ``t`` et la partition des arbres de dépliage de profondeur ``t``.

    :param g: Graphe testé.
    :type g: Graph

    :param t_max: Dernière étape comparée (``>= 1``).
    :type t_max: int

    :param graph_id: Identifiant reporté dans le rapport.
    :type graph_id: int

    :return: Rapport avec un drapeau par étape et le premier contre-exemple.
    :rtype: BridgeReport
    """
    if t_max < 1:
        raise ValueError("t_max doit valoir au moins 1")
    trace = wl_refine([g], t_max, dictionary_factory())
    table = table_factory()
    matches: list[bool] = []
    counterexample = None
    for t in range(t_max + 1):
        wl_partition = color_partition(trace, 0, t)
        unfold_partition = node_classes_by_unfolding(g, t, table)
        diff = wl_partition.first_difference(unfold_partition)
        matches.append(diff is None)
        if diff is not None and counterexample is None:
            counterexample = (t, diff[0], diff[1])

    r = diameter(g)
    converged = wl_run([g], dictionary=dictionary_factory()).converged_at
    return BridgeReport(
        graph_id=graph_id,
        step_matches=tuple(matches),
        convergence_step=converged,
        diameter=r,
        bound_satisfied=converged is not None and converged <= r + 1,
        counterexample=counterexample,
    )


@beartype
def check_node_theorem(
    g: Graph,
    dictionary_factory: DictionaryFactory = ColorDictionary,
    table_factory: TableFactory = CodeTable,
) -> bool:
    """La partition WL finale égale la partition de dépliage de profondeur ``r + 1``."""
    final = color_partition(wl_run([g], dictionary=dictionary_factory()))
    return final == node_classes_by_unfolding(g, diameter(g) + 1, table_factory())


@beartype
def check_graph_theorem(
    g1: Graph,
    g2: Graph,
    dictionary_factory: DictionaryFactory = ColorDictionary,
    table_factory: TableFactory = CodeTable,
) -> bool:
    """Les deux prédicats d'équivalence de graphes rendent le même verdict."""
    wl = wl_graphs_equivalent(g1, g2, dictionary=dictionary_factory())
    ue = graphs_unfolding_equivalent(g1, g2, table_factory())
    return wl == ue


@beartype
def check_convergence_bound(
    g: Graph, dictionary_factory: DictionaryFactory = ColorDictionary
) -> ConvergenceBound:
    """
    Nombre d'étapes avant stabilisation du test 1-WL comparé au diamètre.

    >>> from src.graph.graph import make_graph
    >>> check_convergence_bound(make_graph([[0]] * 3, [(0, 1), (1, 2)]))
    ConvergenceBound(steps=2, r=2, within_r=True, within_r_plus_1=True)
    """
    trace = wl_run([g], dictionary=dictionary_factory())
    # sans convergence, le compte d'étapes dépasse forcément les bornes
    steps = trace.converged_at
    if steps is None:
        steps = trace.last_step + 1
    r = diameter(g)
    return ConvergenceBound(steps, r, steps <= r, steps <= r + 1)


@beartype
def check_depth_sufficiency(
    g: Graph, table_factory: TableFactory = CodeTable
) -> bool:
    """Les partitions de profondeurs ``r + 1``, ``r + 2`` et ``r + 3`` coïncident."""
    r = diameter(g)
    table = table_factory()
    base = node_classes_by_unfolding(g, r + 1, table)
    return all(
        node_classes_by_unfolding(g, r + extra, table) == base for extra in (2, 3)
    )


@beartype
def bridge_row(
    graph_id: int,
    g: Graph,
    dictionary_factory: DictionaryFactory = ColorDictionary,
    table_factory: TableFactory = CodeTable,
) -> dict[str, Any]:
    """Ligne du rapport CSV du pont WL / dépliage."""
    bound = check_convergence_bound(g, dictionary_factory)
    wl_classes = color_partition(wl_run([g], dictionary=dictionary_factory()))
    unfold_classes = node_classes_by_unfolding(g, bound.r + 1, table_factory())
    return {
        "graph_id": graph_id,
        "n": g.node_count,
        "m": g.edge_count,
        "diameter": bound.r,
        "wl_steps": bound.steps,
        "classes_wl": len(wl_classes),
        "classes_unfold": len(unfold_classes),
        "match": wl_classes == unfold_classes,
        "bound_r": bound.within_r,
        "bound_r1": bound.within_r_plus_1,
    }
