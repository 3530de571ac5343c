"""
GNN exact construit : l'état de chaque nœud est le code entier de son arbre
de dépliage, ``h_v^k = ∇(T_v^k)``.

AGGREGATE réunit les arbres des voisins sous une racine VOID, COMBINE
(ATTACH) remplace cette racine par l'étiquette du nœud, READOUT est une
table code → sortie. Sur un jeu de données fini, la sortie reproduit la
cible exactement.
"""

import json
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from beartype import beartype

from ..bin.errors import AttachError, InvalidTargetError
from ..bin.log import logger
from ..bin.utils import decimal_to_int, int_to_decimal
from ..graph.graph import Graph, check_node, diameter, neighbors
from ..graph.quantize import QuantizerConfig, quantize_labels
from ..unfolding.codec import TreeCode, decode_tree, encode_tree
from ..unfolding.tree import VOID, UnfoldingTree, leaf

Output = tuple[Fraction, ...]


@dataclass(frozen=True)
class DatasetItem:
    graph: Graph
    node: int
    target: Output


Dataset = Sequence[DatasetItem]


@dataclass(frozen=True)
class TargetViolation:
    """Deux éléments de même code de dépliage mais de cibles différentes."""

    items: tuple[int, int]
    nodes: tuple[int, int]


@dataclass(frozen=True)
class ExactGnnProgram:
    """
    GNN exact : nombre d'itérations, table de READOUT et sortie par défaut
    pour les codes inconnus. ``quantizer`` est présent quand le programme a
    été construit sur des graphes à étiquettes réelles.
    """

    steps: int
    readout: dict[TreeCode, Output]
    default_output: Output
    quantizer: QuantizerConfig | None = field(default=None)


def attach(source: UnfoldingTree, target: UnfoldingTree) -> UnfoldingTree:
    """ATTACH : ``target`` dont la racine prend l'étiquette de celle de ``source``."""
    return UnfoldingTree(source.label, target.children)


@beartype
def aggregate_exact(codes: Sequence[TreeCode]) -> TreeCode:
    """
    Union sous une racine VOID des arbres décodés (multi-ensemble conservé).

    Un voisinage vide donne la feuille VOID.

    :raises TreeDecodeError: Si un code n'est pas décodable.
    """
    return encode_tree(UnfoldingTree(VOID, tuple(decode_tree(c) for c in codes)))


@beartype
def combine_exact(prev: TreeCode, agg: TreeCode) -> TreeCode:
    """
    ``∇(ATTACH(∇⁻¹(prev), ∇⁻¹(agg)))``.

    :raises AttachError: Si la racine de ``agg`` n'est pas VOID.
    :raises TreeDecodeError: Si un code n'est pas décodable.
    """
    aggregated = decode_tree(agg)
    if not aggregated.is_void:
        raise AttachError("la racine de l'arbre agrégé doit être VOID")
    return encode_tree(attach(decode_tree(prev), aggregated))


@beartype
def run_exact_gnn(g: Graph, steps: int) -> list[TreeCode]:
    """
    Passage de messages exact :
    ``h_v^0 = ∇(Tree(ℓ_v))`` puis
    ``h_v^k = COMBINE(h_v^{k-1}, AGGREGATE{h_u^{k-1} : u ∈ ne[v]})``.

    Les codes obtenus vérifient ``h_v^k = encode_tree(unfold(g, v, k))``.

    :param g: Graphe à étiquettes entières.
    :type g: Graph

    :param steps: Nombre d'itérations.
    :type steps: int

    :return: Code de chaque nœud après ``steps`` itérations.
    :rtype: list[int]
    """
    return exact_gnn_trace(g, steps)[-1]


@beartype
def exact_gnn_trace(g: Graph, steps: int) -> list[list[TreeCode]]:
    """Codes de tous les nœuds à chaque itération ``0..steps``."""
    if steps < 0:
        raise ValueError("le nombre d'itérations doit être positif ou nul")
    codes = [encode_tree(leaf(label)) for label in g.labels]
    trace = [codes]
    for _ in range(steps):
        # nœuds équivalents : même calcul, fait une seule fois
        memo: dict[tuple[TreeCode, tuple[TreeCode, ...]], TreeCode] = {}
        updated = []
        for v in range(g.node_count):
            incoming = tuple(sorted(codes[u] for u in neighbors(g, v)))
            key = (codes[v], incoming)
            if key not in memo:
                memo[key] = combine_exact(codes[v], aggregate_exact(incoming))
            updated.append(memo[key])
        codes = updated
        trace.append(codes)
    return trace


def _dataset_steps(ds: Dataset) -> int:
    graphs = {id(item.graph): item.graph for item in ds}
    return max((diameter(g) for g in graphs.values()), default=0) + 1


def _item_codes(ds: Dataset, steps: int) -> list[TreeCode]:
    per_graph: dict[int, list[TreeCode]] = {}
    codes = []
    for item in ds:
        check_node(item.graph, item.node)
        key = id(item.graph)
        if key not in per_graph:
            per_graph[key] = run_exact_gnn(item.graph, steps)
        codes.append(per_graph[key][item.node])
    return codes


@beartype
def validate_target(ds: Dataset) -> TargetViolation | None:
    """
    Vérifie que la cible préserve l'équivalence par dépliage : deux éléments
    de même code de profondeur ``r + 1`` (``r`` = diamètre maximal du jeu)
    doivent avoir la même cible.

    :param ds: Jeu de données.
    :type ds: Sequence[DatasetItem]

    :return: ``None`` si la cible est valide, sinon une paire fautive.
    :rtype: TargetViolation | None
    """
    codes = _item_codes(ds, _dataset_steps(ds))
    first_seen: dict[TreeCode, int] = {}
    for i, code in enumerate(codes):
        j = first_seen.setdefault(code, i)
        if ds[j].target != ds[i].target:
            return TargetViolation(items=(j, i), nodes=(ds[j].node, ds[i].node))
    return None


def _quantized(ds: Dataset, quantizer: QuantizerConfig) -> list[DatasetItem]:
    cache: dict[int, Graph] = {}
    items = []
    for item in ds:
        key = id(item.graph)
        if key not in cache:
            cache[key] = quantize_labels(item.graph, quantizer)
        items.append(DatasetItem(cache[key], item.node, item.target))
    return items


@beartype
def construct_gnn(
    ds: Dataset, quantizer: QuantizerConfig | None = None
) -> ExactGnnProgram:
    """
    Construit le GNN exact qui reproduit toutes les cibles du jeu de données.

    Le programme itère ``r + 1`` fois et sa table de READOUT associe à chaque
    code de profondeur ``r + 1`` la cible de l'élément correspondant. Avec un
    ``quantizer``, les étiquettes réelles sont d'abord ramenées à des entiers.

    :param ds: Jeu de données (graphe, nœud, cible).
    :type ds: Sequence[DatasetItem]

    :param quantizer: Quantificateur pour des graphes à étiquettes réelles.
    :type quantizer: QuantizerConfig | None

    :return: Programme exact.
    :rtype: ExactGnnProgram

    :raises InvalidTargetError: Si la cible ne préserve pas l'équivalence.
    """
    items = _quantized(ds, quantizer) if quantizer is not None else list(ds)
    violation = validate_target(items)
    if violation is not None:
        logger.error(f"❌ Cible non valide : éléments {violation.items}")
        raise InvalidTargetError(
            f"cible non compatible avec l'équivalence par dépliage : {violation}",
            violation,
        )

    steps = _dataset_steps(items)
    codes = _item_codes(items, steps)
    readout = {code: item.target for code, item in zip(codes, items, strict=True)}
    width = len(items[0].target) if items else 0
    logger.info(f"✅ GNN construit : {steps} itérations, {len(readout)} codes")
    return ExactGnnProgram(
        steps=steps,
        readout=readout,
        default_output=tuple(Fraction(0) for _ in range(width)),
        quantizer=quantizer,
    )


@beartype
def evaluate(p: ExactGnnProgram, g: Graph, v: int) -> Output:
    """
    Sortie du programme sur ``v`` ; un code inconnu donne ``default_output``.

    Un programme construit avec un quantificateur quantifie toujours les
    étiquettes de ``g``, en mode exact comme en mode numérique.
    """
    check_node(g, v)
    if p.quantizer is not None:
        g = quantize_labels(g, p.quantizer)
    code = run_exact_gnn(g, p.steps)[v]
    return p.readout.get(code, p.default_output)


@beartype
def program_to_json(p: ExactGnnProgram) -> str:
    """Sérialisation JSON ; les codes sont des chaînes décimales."""
    payload: dict[str, Any] = {
        "steps": p.steps,
        "readout": [
            {"code": int_to_decimal(code), "out": [str(x) for x in out]}
            for code, out in sorted(p.readout.items())
        ],
        "default": [str(x) for x in p.default_output],
    }
    if p.quantizer is not None:
        payload["quantizer"] = {"bound": p.quantizer.bound, "width": p.quantizer.width}
    return json.dumps(payload)


@beartype
def program_from_json(document: str) -> ExactGnnProgram:
    data = json.loads(document)
    quantizer = data.get("quantizer")
    return ExactGnnProgram(
        steps=int(data["steps"]),
        readout={
            decimal_to_int(entry["code"]): tuple(Fraction(x) for x in entry["out"])
            for entry in data["readout"]
        },
        default_output=tuple(Fraction(x) for x in data["default"]),
        quantizer=QuantizerConfig(**quantizer) if quantizer else None,
    )
