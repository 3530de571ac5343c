from collections.abc import Iterator, Sequence
from fractions import Fraction

from beartype import beartype

from ..bin.errors import ConfigError
from ..constructive.gnn import DatasetItem
from ..graph.graph import Graph, bfs_distances, diameter, make_graph
from ..unfolding.codec import canonical_code
from ..unfolding.equivalence import CodeTable, unfolding_codes
from ..unfolding.tree import UnfoldingTree, unfold
from .prng import SplitMix64, mix64

MARKINGS = ("none", "one", "all-distinct")


@beartype
def gen_cycle(n: int, marking: str = "none") -> Graph:
    """
    Cycle ``0–1–…–(n−1)–0``.

    Marquages : ``none`` (toutes les étiquettes ``[0]``), ``one`` (le nœud 0
    reçoit ``[1]``), ``all-distinct`` (le nœud ``i`` reçoit ``[i]``).

    >>> gen_cycle(4, "one").labels
    ((1,), (0,), (0,), (0,))

    :raises ConfigError: ``n < 3`` ou marquage inconnu.
    """
    if n < 3:
        raise ConfigError("un cycle demande au moins 3 nœuds")
    if marking not in MARKINGS:
        raise ConfigError(f"marquage inconnu : {marking}")
    if marking == "none":
        labels = [[0] for _ in range(n)]
    elif marking == "one":
        labels = [[1]] + [[0] for _ in range(n - 1)]
    else:
        labels = [[i] for i in range(n)]
    return make_graph(labels, [(i, (i + 1) % n) for i in range(n)])


def _random_labels(rng: SplitMix64, n: int, alphabet: int) -> list[list[int]]:
    return [[rng.below(alphabet)] for _ in range(n)]


@beartype
def gen_random_labeled(n: int, edge_prob: float, alphabet: int, seed: int) -> Graph:
    """
    Graphe aléatoire : chaque paire non ordonnée ``{u, v}`` (``u < v``, dans
    l'ordre lexicographique) est une arête avec probabilité ``edge_prob`` ;
    étiquettes uniformes dans ``{[0], ..., [alphabet−1]}``.

    :param n: Nombre de nœuds.
    :type n: int

    :param edge_prob: Probabilité d'arête, dans ``[0, 1]``.
    :type edge_prob: float

    :param alphabet: Taille de l'alphabet d'étiquettes (``>= 1``).
    :type alphabet: int

    :param seed: Graine du générateur SplitMix64.
    :type seed: int

    :return: Graphe en mode exact, identique pour une même graine.
    :rtype: Graph

    :raises ConfigError: Paramètres hors domaine.
    """
    if n < 0:
        raise ConfigError("n doit être >= 0")
    if not 0.0 <= edge_prob <= 1.0:
        raise ConfigError("edge_prob doit être dans [0, 1]")
    if alphabet < 1:
        raise ConfigError("alphabet doit être >= 1")
    rng = SplitMix64(seed)
    labels = _random_labels(rng, n, alphabet)
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < edge_prob
    ]
    return make_graph(labels, edges)


@beartype
def gen_circulant(n: int, degree: int, alphabet: int, seed: int) -> Graph:
    """
    Graphe circulant ``degree``-régulier : ``i`` est relié à ``i ± 1 … i ± degree/2``
    (et à ``i + n/2`` si ``degree`` est impair, ``n`` pair).

    :raises ConfigError: Degré impossible pour ``n`` nœuds.
    """
    if n < 1 or alphabet < 1:
        raise ConfigError("n et alphabet doivent être >= 1")
    if not 0 <= degree < n or (degree % 2 == 1 and n % 2 == 1):
        raise ConfigError(f"pas de graphe circulant {degree}-régulier à {n} nœuds")
    edges: set[tuple[int, int]] = set()
    for i in range(n):
        for step in range(1, degree // 2 + 1):
            j = (i + step) % n
            edges.add((min(i, j), max(i, j)))
        if degree % 2 == 1:
            j = (i + n // 2) % n
            edges.add((min(i, j), max(i, j)))
    rng = SplitMix64(seed)
    return make_graph(_random_labels(rng, n, alphabet), sorted(edges))


def _target_of(code: int, seed: int) -> Fraction:
    # valeur pseudo-aléatoire dans {-10, -9.9, ..., 10}
    mixed = mix64(seed)
    for chunk in code.to_bytes((code.bit_length() + 7) // 8 or 1, "big"):
        mixed = mix64(mixed ^ chunk)
    return Fraction(mixed % 201 - 100, 10)


@beartype
def gen_equivalence_respecting_targets(
    g: Graph, seed: int, depth: int | None = None
) -> list[DatasetItem]:
    """
    Cibles pseudo-aléatoires fonction du code canonique de l'arbre de
    dépliage de profondeur ``depth`` (``diam(g) + 1`` par défaut) : deux
    nœuds équivalents reçoivent la même cible.

    Pour un jeu multi-graphes, passer la même ``depth`` à chaque graphe.

    >>> items = gen_equivalence_respecting_targets(gen_cycle(6), seed=1)
    >>> len({item.target for item in items})
    1
    """
    d = depth if depth is not None else diameter(g) + 1
    items = []
    # les arbres sont codés une fois par classe
    classes = unfolding_codes(g, d, CodeTable())
    by_class: dict[int, Fraction] = {}
    for v in range(g.node_count):
        if classes[v] not in by_class:
            by_class[classes[v]] = _target_of(canonical_code(unfold(g, v, d)), seed)
        items.append(DatasetItem(g, v, (by_class[classes[v]],)))
    return items


def distance_targets(g: Graph, source: int) -> Sequence[float]:
    """Distance (en arêtes) de chaque nœud à ``source`` ; cible de régression."""
    dist = bfs_distances(g, source)
    return [float(dist.get(v, -1)) for v in range(g.node_count)]


def enumerate_labeled_trees(max_nodes: int, alphabet: int) -> list[UnfoldingTree]:
    """
    Tous les arbres enracinés étiquetés (enfants en multi-ensemble) d'au plus
    ``max_nodes`` nœuds, étiquettes ``(0,) … (alphabet−1,)``, deux à deux non
    isomorphes.

    >>> len(enumerate_labeled_trees(2, 2))
    6
    """
    pool: list[UnfoldingTree] = []

    def multisets(remaining: int, start: int) -> Iterator[tuple[UnfoldingTree, ...]]:
        if remaining == 0:
            yield ()
            return
        for index in range(start, len(pool)):
            t = pool[index]
            if t.size > remaining:
                break
            for rest in multisets(remaining - t.size, index):
                yield (t, *rest)

    for size in range(1, max_nodes + 1):
        # le pool ne contient encore que des arbres de taille < size
        batch = [
            UnfoldingTree((label,), children)
            for label in range(alphabet)
            for children in multisets(size - 1, 0)
        ]
        pool.extend(batch)
    return pool
