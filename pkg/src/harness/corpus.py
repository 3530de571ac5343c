import json
from dataclasses import asdict, dataclass

from beartype import beartype

from ..bin.config import CORPUS_COUNT, DEFAULT_SEED
from ..bin.errors import ConfigError, GraphFormatError
from ..graph.graph import Graph, dump_graph, load_graph, make_graph, permute_graph
from .generators import MARKINGS, gen_circulant, gen_cycle, gen_random_labeled
from .prng import SplitMix64

GENERATORS = ("random", "circulant", "cycle")

Corpus = list[tuple[int, Graph]]
GraphPair = tuple[Graph, Graph]


@dataclass(frozen=True)
class CorpusSpec:
    """
    Description reproductible d'un corpus : même spécification, même corpus.

    :param generator: ``random``, ``circulant`` ou ``cycle``.
    :param size: Taille maximale ``n`` ; chaque graphe a entre 1 et ``n`` nœuds
        (au moins 3 pour les cycles).
    :param count: Nombre de graphes.
    :param edge_prob: Probabilité d'arête (``random``).
    :param degree: Degré de régularité (``circulant``).
    :param alphabet: Taille de l'alphabet d'étiquettes.
    :param seed: Graine SplitMix64.
    """

    generator: str = "random"
    size: int = 10
    count: int = CORPUS_COUNT
    edge_prob: float = 0.3
    degree: int = 2
    alphabet: int = 3
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.generator not in GENERATORS:
            raise ConfigError(f"générateur inconnu : {self.generator}")
        if self.size < 1 or self.count < 0 or self.alphabet < 1 or self.degree < 0:
            raise ConfigError("size, alphabet >= 1 et count, degree >= 0 requis")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise ConfigError("edge_prob doit être dans [0, 1]")


def _circulant_size(n: int, degree: int) -> int:
    n = max(n, degree + 1)
    if degree % 2 == 1 and n % 2 == 1:
        n += 1
    return n


@beartype
def build_corpus(spec: CorpusSpec) -> Corpus:
    """
    Construit ``spec.count`` graphes numérotés ``0..count-1``.

    La taille et la graine de chaque graphe sont tirées dans l'ordre d'un même
    flux SplitMix64 initialisé par ``spec.seed``.

    >>> [g.node_count for _, g in build_corpus(CorpusSpec(count=3, seed=7))] == [
    ...     g.node_count for _, g in build_corpus(CorpusSpec(count=3, seed=7))
    ... ]
    True
    """
    rng = SplitMix64(spec.seed)
    corpus: Corpus = []
    for graph_id in range(spec.count):
        n = 1 + rng.below(spec.size)
        seed = rng.next_u64()
        if spec.generator == "random":
            g = gen_random_labeled(n, spec.edge_prob, spec.alphabet, seed)
        elif spec.generator == "circulant":
            g = gen_circulant(
                _circulant_size(n, spec.degree), spec.degree, spec.alphabet, seed
            )
        else:
            g = gen_cycle(max(n, 3), MARKINGS[seed % len(MARKINGS)])
        corpus.append((graph_id, g))
    return corpus


@beartype
def dump_corpus(corpus: Corpus) -> str:
    """JSON ``{"graphs":[{"graph_id":i,"graph":{...}},...]}``, graphes normalisés."""
    payload = {
        "graphs": [
            {"graph_id": graph_id, "graph": json.loads(dump_graph(g))}
            for graph_id, g in corpus
        ]
    }
    return json.dumps(payload, separators=(",", ":"))


@beartype
def load_corpus(document: str, exact: bool = True) -> Corpus:
    """
    Lit un corpus ou, à défaut, un graphe seul (``graph_id`` 0).

    :raises GraphFormatError: Document mal formé.
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as e:
        raise GraphFormatError(f"JSON invalide : {e}") from e
    if isinstance(data, dict) and "graphs" in data:
        try:
            entries = [(int(e["graph_id"]), e["graph"]) for e in data["graphs"]]
        except (KeyError, TypeError, ValueError) as e:
            raise GraphFormatError(f"corpus mal formé : {e}") from e
        return [(gid, load_graph(json.dumps(raw), exact)) for gid, raw in entries]
    return [(0, load_graph(document, exact))]


@beartype
def random_pairs(corpus: Corpus, count: int, seed: int) -> list[GraphPair]:
    """Paires aléatoires, de même nombre de nœuds quand c'est possible."""
    if not corpus:
        return []
    rng = SplitMix64(seed)
    by_size: dict[int, list[Graph]] = {}
    for _, g in corpus:
        by_size.setdefault(g.node_count, []).append(g)
    pairs = []
    for _ in range(count):
        g1 = corpus[rng.below(len(corpus))][1]
        same = by_size[g1.node_count]
        pairs.append((g1, same[rng.below(len(same))]))
    return pairs


def _rotated_cycle(rng: SplitMix64, n: int, alphabet: int) -> GraphPair:
    labels = [[rng.below(alphabet)] for _ in range(n)]
    shift = rng.below(n)
    rotated = labels[shift:] + labels[:shift]
    edges = [(i, (i + 1) % n) for i in range(n)]
    return make_graph(labels, edges), make_graph(rotated, edges)


@beartype
def constructed_equivalent_pairs(
    corpus: Corpus, count: int, seed: int, alphabet: int = 3
) -> list[GraphPair]:
    """
    Paires équivalentes par construction : alternativement un graphe du
    corpus et une renumérotation aléatoire de ses nœuds, puis deux cycles
    dont les étiquettes diffèrent d'une rotation.
    """
    rng = SplitMix64(seed)
    pairs = []
    for i in range(count):
        if i % 2 == 0 and corpus:
            g = corpus[rng.below(len(corpus))][1]
            perm = list(range(g.node_count))
            rng.shuffle(perm)
            pairs.append((g, permute_graph(g, perm)))
        else:
            pairs.append(_rotated_cycle(rng, 3 + rng.below(8), alphabet))
    return pairs
