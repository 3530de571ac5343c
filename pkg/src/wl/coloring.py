from collections import Counter
from collections.abc import Hashable, Sequence
from dataclasses import dataclass, replace
from typing import Any

from beartype import beartype

from ..bin.errors import DimensionMismatchError
from ..graph.graph import Graph, check_node, neighbors
from ..graph.partition import Partition

Colors = tuple[int, ...]


class ColorDictionary:
    """
    Dictionnaire injectif du test 1-WL.

    ``HASH_0`` associe une couleur fraîche à chaque vecteur d'étiquette,
    ``HASH`` à chaque clé ``(couleur précédente, multi-ensemble trié des
    couleurs voisines)``. Les couleurs sont des entiers jamais réutilisés.
    """

    def __init__(self) -> None:
        self.initial: dict[Hashable, int] = {}
        self.refinement: dict[Hashable, int] = {}
        self._issued: set[int] = set()
        self._next = 0

    def fresh(self) -> int:
        color = self._next
        self._next += 1
        return color

    def _assign(self, table: dict[Hashable, int], key: Hashable) -> int:
        found = table.get(key)
        if found is None:
            found = self.fresh()
            if found in self._issued:
                raise AssertionError(f"HASH non injectif : couleur {found} réutilisée")
            self._issued.add(found)
            table[key] = found
        return found

    def initial_color(self, label: Hashable) -> int:
        return self._assign(self.initial, label)

    def refine_color(self, previous: int, neighbor_colors: Sequence[int]) -> int:
        return self._assign(self.refinement, (previous, tuple(sorted(neighbor_colors))))

    def is_injective(self) -> bool:
        values = list(self.initial.values()) + list(self.refinement.values())
        return len(values) == len(set(values))

    def __len__(self) -> int:
        return len(self.initial) + len(self.refinement)


@dataclass(frozen=True)
class ColoringTrace:
    """
    Historique d'une exécution 1-WL sur un ou plusieurs graphes colorés ensemble.

    ``steps[t][i]`` est le tuple des couleurs des nœuds du graphe ``i`` à
    l'étape ``t`` (l'étape 0 est ``HASH_0``). Le dictionnaire est partagé
    entre une trace et celles qui en dérivent par :func:`wl_step`.
    """

    graphs: tuple[Graph, ...]
    steps: tuple[tuple[Colors, ...], ...]
    dictionary: ColorDictionary
    converged_at: int | None = None

    @property
    def last_step(self) -> int:
        return len(self.steps) - 1

    def colors(self, step: int = -1, graph_index: int = 0) -> Colors:
        return self.steps[step][graph_index]

    def distinct_count(self, step: int) -> int:
        return len({c for colors in self.steps[step] for c in colors})


@beartype
def wl_init(
    gs: Sequence[Graph], dictionary: ColorDictionary | None = None
) -> ColoringTrace:
    """
    Étape 0 : couleurs ``HASH_0(ℓ_v)`` attribuées conjointement à tous les graphes.

    :raises ValueError: Si la liste est vide.
    :raises DimensionMismatchError: Si les dimensions d'étiquettes diffèrent.
    """
    if not gs:
        raise ValueError("au moins un graphe est requis")
    dims = {g.label_dim for g in gs if g.node_count}
    if len(dims) > 1:
        raise DimensionMismatchError(
            f"dimensions d'étiquettes mélangées : {sorted(dims)}"
        )
    dictionary = dictionary if dictionary is not None else ColorDictionary()
    step0 = tuple(
        tuple(dictionary.initial_color(label) for label in g.labels) for g in gs
    )
    return ColoringTrace(graphs=tuple(gs), steps=(step0,), dictionary=dictionary)


@beartype
def wl_step(tr: ColoringTrace) -> ColoringTrace:
    """
    Ajoute une étape de raffinement :
    ``c_v^(t) = HASH(c_v^(t-1), {c_u^(t-1) : u ∈ ne[v]})``.
    """
    previous = tr.steps[-1]
    step = tuple(
        tuple(
            tr.dictionary.refine_color(
                colors[v], [colors[u] for u in neighbors(g, v)]
            )
            for v in range(g.node_count)
        )
        for g, colors in zip(tr.graphs, previous, strict=True)
    )
    return replace(tr, steps=tr.steps + (step,))


def _is_stable(tr: ColoringTrace, per_graph_stability: bool) -> bool:
    t = tr.last_step
    if tr.distinct_count(t) != tr.distinct_count(t - 1):
        return False
    if not per_graph_stability:
        return True
    return all(
        len(set(now)) == len(set(before))
        for now, before in zip(tr.steps[t], tr.steps[t - 1], strict=True)
    )


@beartype
def wl_run(
    gs: Sequence[Graph],
    max_steps: int | None = None,
    per_graph_stability: bool = True,
    dictionary: ColorDictionary | None = None,
) -> ColoringTrace:
    """
    Itère le raffinement jusqu'à ce que le nombre de couleurs distinctes ne
    change plus entre deux étapes consécutives.

    ``converged_at`` est la plus petite étape ``t >= 1`` stable. Sans
    stabilité après ``max_steps`` étapes (par défaut le nombre total de
    nœuds), ``converged_at`` reste ``None``.

    :param gs: Graphes colorés conjointement.
    :type gs: Sequence[Graph]

    :param max_steps: Nombre maximal d'étapes.
    :type max_steps: int | None

    :param per_graph_stability: Exige aussi la stabilité du nombre de couleurs
        de chaque graphe (renforcement pour les paires de graphes).
    :type per_graph_stability: bool

    :param dictionary: Dictionnaire de couleurs (neuf par défaut).
    :type dictionary: ColorDictionary | None

    :return: Trace complète jusqu'à la convergence.
    :rtype: ColoringTrace
    """
    tr = wl_init(gs, dictionary)
    limit = max_steps if max_steps is not None else sum(g.node_count for g in gs)
    for _ in range(limit):
        tr = wl_step(tr)
        if _is_stable(tr, per_graph_stability):
            return replace(tr, converged_at=tr.last_step)
    return tr


@beartype
def wl_refine(
    gs: Sequence[Graph], steps: int, dictionary: ColorDictionary | None = None
) -> ColoringTrace:
    """Exactement ``steps`` étapes de raffinement, sans arrêt anticipé."""
    tr = wl_init(gs, dictionary)
    converged_at = None
    for _ in range(steps):
        tr = wl_step(tr)
        if converged_at is None and _is_stable(tr, True):
            converged_at = tr.last_step
    return replace(tr, converged_at=converged_at)


@beartype
def color_partition(
    tr: ColoringTrace, graph_index: int = 0, step: int = -1
) -> Partition:
    """Partition des nœuds d'un graphe selon leurs couleurs à une étape."""
    return Partition.from_keys(tr.steps[step][graph_index])


@beartype
def wl_node_equivalent(
    g: Graph, u: int, v: int, dictionary: ColorDictionary | None = None
) -> bool:
    """
    Vrai si ``u`` et ``v`` ont la même couleur à la fin du test 1-WL.

    :raises NodeIdError: Si ``u`` ou ``v`` n'est pas un nœud de ``g``.
    """
    check_node(g, u)
    check_node(g, v)
    return color_partition(wl_run([g], dictionary=dictionary)).same_block(u, v)


@beartype
def wl_graphs_equivalent(
    g1: Graph,
    g2: Graph,
    per_graph_stability: bool = True,
    dictionary: ColorDictionary | None = None,
) -> bool:
    """
    Équivalence 1-WL de deux graphes : exécution conjointe (dictionnaire
    partagé) puis comparaison des histogrammes couleur → effectif.
    """
    tr = wl_run(
        [g1, g2], per_graph_stability=per_graph_stability, dictionary=dictionary
    )
    return Counter(tr.colors(graph_index=0)) == Counter(tr.colors(graph_index=1))


@beartype
def trace_to_json(tr: ColoringTrace) -> dict[str, Any]:
    """
    Export JSON
    ``{"steps":[{"step":t,"graph":i,"colors":[...]}],"converged_at":t}``.
    """
    return {
        "steps": [
            {"step": t, "graph": gi, "colors": list(colors)}
            for t, step in enumerate(tr.steps)
            for gi, colors in enumerate(step)
        ],
        "converged_at": tr.converged_at,
    }
