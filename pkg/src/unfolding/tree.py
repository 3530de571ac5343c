from dataclasses import dataclass
from enum import Enum

from beartype import beartype

from ..graph.graph import Graph, LabelVector, check_node, neighbors


class Void(Enum):
    """Étiquette vide de la racine produite par l'union d'arbres."""

    VOID = "VOID"

    def __repr__(self) -> str:
        return "VOID"


VOID = Void.VOID

RootLabel = LabelVector | Void


@dataclass(frozen=True)
class UnfoldingTree:
    """
    Arbre enraciné étiqueté ; les enfants forment un multi-ensemble.

    L'ordre de ``children`` n'a pas de sens : deux arbres sont isomorphes si
    et seulement si leurs codes canoniques (``canonical_code``) sont égaux.
    L'égalité Python compare la structure ordonnée, utile sur les formes
    canoniques.
    """

    label: RootLabel
    children: tuple["UnfoldingTree", ...] = ()

    @property
    def is_void(self) -> bool:
        return self.label is VOID

    @property
    def height(self) -> int:
        """Profondeur effective (un nœud isolé donne une feuille à toute profondeur)."""
        if not self.children:
            return 0
        return 1 + max(c.height for c in self.children)

    @property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)


def leaf(label: RootLabel) -> UnfoldingTree:
    return UnfoldingTree(label, ())


@beartype
def unfold(g: Graph, v: int, d: int) -> UnfoldingTree:
    """
    Arbre de dépliage du nœud ``v`` jusqu'à la profondeur ``d``.

    ``d = 0`` donne la feuille ``Tree(ℓ_v)`` ; sinon la racine porte ``ℓ_v``
    et possède un sous-arbre de profondeur ``d-1`` par voisin (doublons
    conservés). Les sous-arbres identiques ``(u, k)`` sont partagés en mémoire.

    :param g: Graphe source.
    :type g: Graph

    :param v: Nœud racine.
    :type v: int

    :param d: Profondeur du dépliage.
    :type d: int

    :return: Arbre de dépliage.
    :rtype: UnfoldingTree

    :raises NodeIdError: Si ``v`` n'est pas un nœud de ``g``.
    :raises ValueError: Si ``d`` est négatif.
    """
    check_node(g, v)
    if d < 0:
        raise ValueError("la profondeur doit être positive ou nulle")

    memo: dict[tuple[int, int], UnfoldingTree] = {}

    def build(u: int, k: int) -> UnfoldingTree:
        key = (u, k)
        if key not in memo:
            if k == 0:
                memo[key] = leaf(g.labels[u])
            else:
                kids = tuple(build(w, k - 1) for w in neighbors(g, u))
                memo[key] = UnfoldingTree(g.labels[u], kids)
        return memo[key]

    return build(v, d)


@beartype
def truncate(t: UnfoldingTree, d: int) -> UnfoldingTree:
    """Tronque ``t`` à la profondeur ``d``."""
    if d < 0:
        raise ValueError("la profondeur doit être positive ou nulle")
    if d == 0:
        return leaf(t.label)
    return UnfoldingTree(t.label, tuple(truncate(c, d - 1) for c in t.children))
