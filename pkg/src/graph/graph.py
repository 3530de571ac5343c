import json
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from beartype import beartype

from ..bin.errors import GraphFormatError, NodeIdError

Number = int | float
LabelVector = tuple[Number, ...]


@dataclass(frozen=True)
class Graph:
    """
    Graphe simple non orienté, étiqueté sur les nœuds.

    Les identifiants de nœuds sont exactement ``0..node_count-1``. Les arêtes
    sont des paires ``(min, max)`` ; une boucle ``(v, v)`` est autorisée.
    En mode exact (``exact=True``) les étiquettes sont des entiers Python
    (précision arbitraire), en mode numérique des flottants 64 bits.

    Construire un graphe via :func:`make_graph` ou :func:`load_graph`, qui
    normalisent les arêtes avant validation.
    """

    node_count: int
    labels: tuple[LabelVector, ...]
    edges: frozenset[tuple[int, int]]
    exact: bool = True
    _adjacency: tuple[tuple[int, ...], ...] = field(
        default=(), init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if self.node_count < 0:
            raise GraphFormatError("nombre de nœuds négatif")
        if len(self.labels) != self.node_count:
            raise GraphFormatError(
                f"{len(self.labels)} étiquettes pour {self.node_count} nœuds"
            )
        dims = {len(label) for label in self.labels}
        if len(dims) > 1:
            raise GraphFormatError(f"dimensions d'étiquettes incohérentes : {dims}")
        if dims and 0 in dims:
            raise GraphFormatError("dimension d'étiquette nulle")
        for label in self.labels:
            for entry in label:
                _check_entry(entry, self.exact)

        adjacency: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.edges:
            if u > v:
                raise GraphFormatError(f"arête non normalisée : ({u}, {v})")
            if not 0 <= u < self.node_count or not 0 <= v < self.node_count:
                raise NodeIdError(f"identifiant de nœud hors limites : ({u}, {v})")
            adjacency[u].append(v)
            if u != v:
                adjacency[v].append(u)
        object.__setattr__(
            self, "_adjacency", tuple(tuple(sorted(a)) for a in adjacency)
        )

    @property
    def label_dim(self) -> int:
        return len(self.labels[0]) if self.labels else 0

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def _check_entry(entry: object, exact: bool) -> None:
    if isinstance(entry, bool):
        raise GraphFormatError("étiquette booléenne refusée")
    if exact and not isinstance(entry, int):
        raise GraphFormatError(f"étiquette non entière en mode exact : {entry!r}")
    if not exact and not isinstance(entry, float):
        raise GraphFormatError(f"étiquette non flottante en mode numérique : {entry!r}")


@beartype
def make_graph(
    labels: Sequence[Sequence[Number]],
    edges: Iterable[Sequence[int]],
    exact: bool = True,
) -> Graph:
    """
    Construit un graphe validé à partir d'étiquettes et d'une liste d'arêtes.

    Les arêtes sont normalisées en ``(min, max)``. Une arête présente deux
    fois (dans un sens ou dans l'autre) est refusée.

    :param labels: Étiquette de chaque nœud, dans l'ordre des identifiants.
    :type labels: Sequence[Sequence[int | float]]

    :param edges: Paires de nœuds non ordonnées.
    :type edges: Iterable[Sequence[int]]

    :param exact: Mode exact (entiers) ou numérique (flottants).
    :type exact: bool

    :return: Graphe validé.
    :rtype: Graph

    :raises GraphFormatError: Arête dupliquée ou mal formée, étiquettes incohérentes.
    :raises NodeIdError: Identifiant de nœud hors limites.
    """
    n = len(labels)
    if exact:
        label_tuple = tuple(tuple(entry for entry in label) for label in labels)
    else:
        label_tuple = tuple(
            tuple(_as_float(entry) for entry in label) for label in labels
        )

    normalized: set[tuple[int, int]] = set()
    for pair in edges:
        if len(pair) != 2:
            raise GraphFormatError(f"arête mal formée : {list(pair)}")
        u, v = int(pair[0]), int(pair[1])
        if not 0 <= u < n or not 0 <= v < n:
            raise NodeIdError(f"identifiant de nœud hors limites : ({u}, {v})")
        key = (min(u, v), max(u, v))
        if key in normalized:
            raise GraphFormatError(f"arête dupliquée : {list(key)}")
        normalized.add(key)

    return Graph(
        node_count=n,
        labels=label_tuple,
        edges=frozenset(normalized),
        exact=exact,
    )


def _as_float(entry: object) -> float:
    if isinstance(entry, bool) or not isinstance(entry, int | float):
        raise GraphFormatError(f"étiquette non numérique : {entry!r}")
    return float(entry)


@beartype
def load_graph(document: str, exact: bool = True) -> Graph:
    """
    Lit un graphe au format JSON.

    Schéma : ``{"nodes":[{"id":0,"label":[0]},...],"edges":[[0,1],...]}``.
    Les identifiants doivent être contigus à partir de 0 (l'ordre de la liste
    ``nodes`` est libre).

    >>> g = load_graph('{"nodes":[{"id":0,"label":[0]}],"edges":[]}')
    >>> g.node_count, g.label_dim
    (1, 1)

    :param document: Texte JSON.
    :type document: str

    :param exact: ``True`` exige des étiquettes entières.
    :type exact: bool

    :return: Graphe validé, arêtes normalisées.
    :rtype: Graph

    :raises GraphFormatError: JSON invalide ou schéma non respecté.
    :raises NodeIdError: Arête vers un nœud inexistant.
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as e:
        raise GraphFormatError(f"JSON invalide : {e}") from e

    if not isinstance(data, dict) or "nodes" not in data or "edges" not in data:
        raise GraphFormatError("le document doit contenir 'nodes' et 'edges'")
    nodes, edges = data["nodes"], data["edges"]
    if not isinstance(nodes, list) or not isinstance(edges, list):
        raise GraphFormatError("'nodes' et 'edges' doivent être des listes")

    by_id: dict[int, list[Number]] = {}
    for node in nodes:
        if not isinstance(node, dict) or "id" not in node or "label" not in node:
            raise GraphFormatError(f"nœud mal formé : {node!r}")
        node_id, label = node["id"], node["label"]
        if isinstance(node_id, bool) or not isinstance(node_id, int):
            raise GraphFormatError(f"identifiant non entier : {node_id!r}")
        if node_id in by_id:
            raise GraphFormatError(f"identifiant dupliqué : {node_id}")
        if not isinstance(label, list):
            raise GraphFormatError(f"étiquette non liste pour le nœud {node_id}")
        by_id[node_id] = label

    if set(by_id) != set(range(len(by_id))):
        raise GraphFormatError("les identifiants doivent être contigus à partir de 0")

    for pair in edges:
        if not isinstance(pair, list) or any(
            isinstance(x, bool) or not isinstance(x, int) for x in pair
        ):
            raise GraphFormatError(f"arête mal formée : {pair!r}")

    labels = [by_id[i] for i in range(len(by_id))]
    return make_graph(labels, edges, exact=exact)


@beartype
def dump_graph(g: Graph) -> str:
    """Sérialise le graphe sous sa forme normalisée (nœuds par id, arêtes triées)."""
    payload = {
        "nodes": [{"id": i, "label": list(label)} for i, label in enumerate(g.labels)],
        "edges": [list(e) for e in sorted(g.edges)],
    }
    return json.dumps(payload, separators=(",", ":"))


def _check_node(g: Graph, v: int) -> None:
    if not 0 <= v < g.node_count:
        raise NodeIdError(
            f"identifiant de nœud hors limites : {v} (n={g.node_count})"
        )


@beartype
def neighbors(g: Graph, v: int) -> list[int]:
    """
    Voisins de ``v`` triés par identifiant croissant.

    ``v`` lui-même apparaît une fois si une boucle ``(v, v)`` existe.

    >>> tri = make_graph([[0], [0], [0]], [(0, 1), (1, 2), (0, 2)])
    >>> neighbors(tri, 0)
    [1, 2]
    """
    _check_node(g, v)
    return list(g._adjacency[v])


def check_node(g: Graph, v: int) -> None:
    """Lève :class:`NodeIdError` si ``v`` n'est pas un nœud de ``g``."""
    _check_node(g, v)


def _bfs_distances(g: Graph, source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g._adjacency[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


@beartype
def bfs_distances(g: Graph, source: int) -> dict[int, int]:
    """Distances (nombre d'arêtes) depuis ``source`` vers les nœuds atteignables."""
    _check_node(g, source)
    return _bfs_distances(g, source)


@beartype
def connected_components(g: Graph) -> list[list[int]]:
    """Composantes connexes, chacune triée, ordonnées par plus petit nœud."""
    seen: set[int] = set()
    components: list[list[int]] = []
    for v in range(g.node_count):
        if v in seen:
            continue
        component = sorted(_bfs_distances(g, v))
        seen.update(component)
        components.append(component)
    return components


@beartype
def diameter(g: Graph) -> int:
    """
    Diamètre du graphe : maximum, sur les composantes connexes, de
    l'excentricité maximale (BFS depuis chaque nœud). Un nœud seul donne 0.

    Pour un graphe non connexe, on prend le plus grand diamètre de
    composante : les arbres de dépliage ne traversent jamais deux composantes.

    >>> diameter(make_graph([[0], [0], [0]], [(0, 1), (1, 2)]))
    2
    """
    best = 0
    for component in connected_components(g):
        for v in component:
            eccentricity = max(_bfs_distances(g, v).values())
            best = max(best, eccentricity)
    return best


@beartype
def max_degree(g: Graph) -> int:
    """Taille maximale d'un voisinage (une boucle compte pour un voisin)."""
    return max((len(a) for a in g._adjacency), default=0)


@beartype
def permute_graph(g: Graph, perm: Sequence[int]) -> Graph:
    """
    Renumérote les nœuds : l'ancien nœud ``i`` devient ``perm[i]``.

    :raises ValueError: Si ``perm`` n'est pas une permutation de ``0..n-1``.
    """
    if sorted(perm) != list(range(g.node_count)):
        raise ValueError("perm doit être une permutation de 0..n-1")
    labels: list[LabelVector] = [()] * g.node_count
    for old, new in enumerate(perm):
        labels[new] = g.labels[old]
    edges = [(perm[u], perm[v]) for u, v in g.edges]
    return make_graph(labels, edges, exact=g.exact)


@beartype
def to_numeric(g: Graph) -> Graph:
    """Copie de ``g`` en mode numérique (étiquettes converties en flottants)."""
    if not g.exact:
        return g
    return make_graph(
        [[float(z) for z in label] for label in g.labels], sorted(g.edges), exact=False
    )
