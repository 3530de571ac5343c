from collections import Counter
from collections.abc import Hashable, Sequence

from beartype import beartype

from ..graph.graph import Graph, check_node, diameter, neighbors
from ..graph.partition import Partition


class CodeTable:
    """
    Table d'internement AHU partagée entre plusieurs graphes.

    Chaque forme canonique ``(étiquette, identifiants des enfants triés)``
    reçoit un identifiant frais à sa première apparition. Dans une même table,
    deux identifiants sont égaux si et seulement si les arbres correspondants
    ont le même ``canonical_code`` ; les arbres ne sont jamais matérialisés.
    """

    def __init__(self) -> None:
        self._ids: dict[Hashable, int] = {}

    def key(self, label: Hashable, child_ids: Sequence[int]) -> Hashable:
        # multi-ensemble : les doublons sont conservés
        return (label, tuple(sorted(child_ids)))

    def intern(self, label: Hashable, child_ids: Sequence[int]) -> int:
        key = self.key(label, child_ids)
        found = self._ids.get(key)
        if found is None:
            found = len(self._ids)
            self._ids[key] = found
        return found

    def __len__(self) -> int:
        return len(self._ids)


@beartype
def unfolding_codes(g: Graph, d: int, table: CodeTable | None = None) -> list[int]:
    """
    Identifiant (dans ``table``) de l'arbre de dépliage de profondeur ``d`` de
    chaque nœud, calculé niveau par niveau : mémoïsation par (nœud, profondeur).
    """
    if d < 0:
        raise ValueError("la profondeur doit être positive ou nulle")
    table = table if table is not None else CodeTable()
    codes = [table.intern(g.labels[v], ()) for v in range(g.node_count)]
    for _ in range(d):
        codes = [
            table.intern(g.labels[v], [codes[u] for u in neighbors(g, v)])
            for v in range(g.node_count)
        ]
    return codes


@beartype
def node_classes_by_unfolding(
    g: Graph, d: int, table: CodeTable | None = None
) -> Partition:
    """
    Classes d'équivalence des nœuds selon leur arbre de dépliage de profondeur ``d``.

    >>> from src.graph.graph import make_graph
    >>> cycle = make_graph([[0]] * 6, [(i, (i + 1) % 6) for i in range(6)])
    >>> len(node_classes_by_unfolding(cycle, 4))
    1
    """
    return Partition.from_keys(unfolding_codes(g, d, table))


@beartype
def unfolding_equivalent(g: Graph, u: int, v: int) -> bool:
    """
    Vrai si ``u`` et ``v`` ont le même arbre de dépliage de profondeur
    ``diam(g) + 1``, profondeur qui suffit à décider l'équivalence.

    :raises NodeIdError: Si ``u`` ou ``v`` n'est pas un nœud de ``g``.
    """
    check_node(g, u)
    check_node(g, v)
    return node_classes_by_unfolding(g, diameter(g) + 1).same_block(u, v)


@beartype
def graphs_unfolding_equivalent(
    g1: Graph, g2: Graph, table: CodeTable | None = None
) -> bool:
    """
    Équivalence par dépliage de deux graphes : les multi-ensembles des codes de
    profondeur ``r + 1`` (``r`` = plus grand des deux diamètres) coïncident.

    Les deux graphes sont codés avec la même table.

    :param g1: Premier graphe.
    :type g1: Graph

    :param g2: Second graphe.
    :type g2: Graph

    :param table: Table partagée (une table neuve par défaut).
    :type table: CodeTable | None

    :return: ``True`` si une bijection des nœuds préserve les arbres de dépliage.
    :rtype: bool
    """
    if g1.node_count != g2.node_count:
        return False
    table = table if table is not None else CodeTable()
    depth = max(diameter(g1), diameter(g2)) + 1
    return Counter(unfolding_codes(g1, depth, table)) == Counter(
        unfolding_codes(g2, depth, table)
    )
