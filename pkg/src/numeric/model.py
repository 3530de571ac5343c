"""
GNN numérique différentiable à composantes universelles.

Chaque itération ``k`` applique COMBINE, un perceptron à deux couches sur la
concaténation ``[h_v, AGGREGATE{h_u : u ∈ ne[v]}]`` ; READOUT est un second
perceptron à deux couches. Les réductions sur les voisins se font dans un
ordre canonique (lignes triées par valeur), et chaque nœud est calculé
séparément : deux nœuds équivalents obtiennent des sorties identiques bit à
bit.
"""

import json
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np
from beartype import beartype

from ..bin.errors import ConfigError, DimensionMismatchError
from ..graph.graph import Graph, check_node, neighbors

ACTIVATIONS = ("tanh", "sigmoid", "identity")
AGGREGATES = ("sum", "mean")

# borne de |σ'| par activation
ACTIVATION_SLOPE = {"tanh": 1.0, "sigmoid": 0.25, "identity": 1.0}

NumericItem = tuple[Graph, int, Sequence[float]]


@dataclass(frozen=True)
class NumericConfig:
    """
    Architecture du GNN numérique.

    :param input_dim: Dimension des étiquettes (``h^0_v = ℓ_v``).
    :param feature_dim: Dimension ``m`` des états cachés.
    :param layers: Nombre d'itérations ``K``.
    :param aggregate: ``sum`` ou ``mean``.
    :param combine_hidden: Largeur cachée de COMBINE.
    :param readout_hidden: Largeur cachée de READOUT.
    :param output_dim: Dimension de la sortie par nœud.
    :param activation: ``tanh``, ``sigmoid`` ou ``identity``.
    """

    input_dim: int = 1
    feature_dim: int = 8
    layers: int = 4
    aggregate: str = "sum"
    combine_hidden: int = 16
    readout_hidden: int = 16
    output_dim: int = 1
    activation: str = "tanh"

    def __post_init__(self) -> None:
        for name in (
            "input_dim",
            "feature_dim",
            "layers",
            "combine_hidden",
            "readout_hidden",
            "output_dim",
        ):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} doit être >= 1")
        if self.aggregate not in AGGREGATES:
            raise ConfigError(f"agrégation inconnue : {self.aggregate}")
        if self.activation not in ACTIVATIONS:
            raise ConfigError(f"activation inconnue : {self.activation}")

    def layer_input_dim(self, k: int) -> int:
        return self.input_dim if k == 0 else self.feature_dim

    def shapes(self) -> dict[str, tuple[int, ...]]:
        shapes: dict[str, tuple[int, ...]] = {}
        for k in range(self.layers):
            d = self.layer_input_dim(k)
            shapes[f"combine.{k}.W1"] = (self.combine_hidden, 2 * d)
            shapes[f"combine.{k}.b1"] = (self.combine_hidden,)
            shapes[f"combine.{k}.W2"] = (self.feature_dim, self.combine_hidden)
            shapes[f"combine.{k}.b2"] = (self.feature_dim,)
        shapes["readout.W1"] = (self.readout_hidden, self.feature_dim)
        shapes["readout.b1"] = (self.readout_hidden,)
        shapes["readout.W2"] = (self.output_dim, self.readout_hidden)
        shapes["readout.b2"] = (self.output_dim,)
        return shapes


@dataclass(frozen=True)
class NumericParams:
    """Paramètres nommés (``combine.<k>.W1`` ... ``readout.b2``), réels 64 bits."""

    arrays: dict[str, np.ndarray]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.arrays[name]

    @property
    def dtype(self) -> np.dtype[Any]:
        return next(iter(self.arrays.values())).dtype

    def flat(self) -> np.ndarray:
        return np.concatenate([a.ravel() for a in self.arrays.values()])

    def with_flat(self, theta: np.ndarray) -> "NumericParams":
        arrays, offset = {}, 0
        for name, a in self.arrays.items():
            arrays[name] = theta[offset : offset + a.size].reshape(a.shape).copy()
            offset += a.size
        return NumericParams(arrays)

    def zeros_like(self) -> "NumericParams":
        return NumericParams({k: np.zeros_like(a) for k, a in self.arrays.items()})

    def astype(self, dtype: Any) -> "NumericParams":
        return NumericParams({k: a.astype(dtype) for k, a in self.arrays.items()})

    def check(self, cfg: NumericConfig) -> None:
        expected = cfg.shapes()
        actual = {k: a.shape for k, a in self.arrays.items()}
        if expected != actual:
            raise DimensionMismatchError(
                "paramètres incompatibles avec la configuration"
            )


@beartype
def init_params(cfg: NumericConfig, seed: int) -> NumericParams:
    """
    Initialisation pseudo-aléatoire déterministe : poids gaussiens divisés par
    ``sqrt(fan_in)``, biais nuls.
    """
    rng = np.random.default_rng(seed)
    arrays: dict[str, np.ndarray] = {}
    for name, shape in cfg.shapes().items():
        if name.rsplit(".", 1)[-1].startswith("W"):
            arrays[name] = rng.normal(size=shape) / np.sqrt(shape[1])
        else:
            arrays[name] = np.zeros(shape)
    return NumericParams(arrays)


def activate(kind: str, z: np.ndarray) -> np.ndarray:
    if kind == "tanh":
        return np.tanh(z)
    if kind == "sigmoid":
        return 1.0 / (1.0 + np.exp(-z))
    return z.copy()


def activation_grad(kind: str, a: np.ndarray) -> np.ndarray:
    """Dérivée de l'activation exprimée en fonction de sa sortie ``a``."""
    if kind == "tanh":
        return 1.0 - a * a
    if kind == "sigmoid":
        return a * (1.0 - a)
    return np.ones_like(a)


def aggregate_rows(h: np.ndarray, nbrs: Sequence[int], kind: str) -> np.ndarray:
    """Somme (ou moyenne) des états voisins, lignes triées par valeur."""
    if not nbrs:
        return np.zeros(h.shape[1], dtype=h.dtype)
    rows = h[list(nbrs)]
    order = np.lexsort(rows.T[::-1])
    total = rows[order].sum(axis=0)
    if kind == "mean":
        return total / len(nbrs)
    return total


@dataclass(frozen=True)
class LayerCache:
    inputs: np.ndarray
    hidden: np.ndarray


@dataclass(frozen=True)
class ForwardResult:
    """États ``h^0..h^K`` (tableaux ``(n, d_k)``) et sorties ``(n, out)``."""

    states: tuple[np.ndarray, ...]
    outputs: np.ndarray
    layers: tuple[LayerCache, ...] = field(repr=False)
    readout: LayerCache = field(repr=False)


def _initial_states(g: Graph, cfg: NumericConfig, dtype: Any) -> np.ndarray:
    if g.node_count and g.label_dim != cfg.input_dim:
        raise DimensionMismatchError(
            f"étiquettes de dimension {g.label_dim}, attendu {cfg.input_dim}"
        )
    return np.asarray(g.labels, dtype=dtype).reshape(g.node_count, cfg.input_dim)


def forward(
    g: Graph,
    p: NumericParams,
    cfg: NumericConfig,
    transition_offsets: Sequence[np.ndarray] | None = None,
    readout_offset: np.ndarray | None = None,
) -> ForwardResult:
    """
    Propagation avant : ``h^k_v = COMBINE_w(h^{k-1}_v, AGGREGATE_w{h^{k-1}_u})``
    puis ``o_v = READOUT_w(h^K_v)``.

    ``transition_offsets[k-1]`` et ``readout_offset`` s'ajoutent aux sorties
    des composantes (expérience de perturbation).

    :raises DimensionMismatchError: Étiquettes ou paramètres de mauvaise dimension.
    """
    p.check(cfg)
    dtype = p.dtype
    adjacency = [neighbors(g, v) for v in range(g.node_count)]
    h = _initial_states(g, cfg, dtype)
    states = [h]
    caches = []
    for k in range(cfg.layers):
        w1, b1 = p[f"combine.{k}.W1"], p[f"combine.{k}.b1"]
        w2, b2 = p[f"combine.{k}.W2"], p[f"combine.{k}.b2"]
        d = cfg.layer_input_dim(k)
        inputs = np.empty((g.node_count, 2 * d), dtype=dtype)
        hidden = np.empty((g.node_count, cfg.combine_hidden), dtype=dtype)
        new_h = np.empty((g.node_count, cfg.feature_dim), dtype=dtype)
        for v in range(g.node_count):
            x = np.concatenate([h[v], aggregate_rows(h, adjacency[v], cfg.aggregate)])
            a = activate(cfg.activation, w1 @ x + b1)
            out = w2 @ a + b2
            if transition_offsets is not None:
                out = out + transition_offsets[k]
            inputs[v], hidden[v], new_h[v] = x, a, out
        caches.append(LayerCache(inputs, hidden))
        states.append(new_h)
        h = new_h

    r1, c1, r2, c2 = p["readout.W1"], p["readout.b1"], p["readout.W2"], p["readout.b2"]
    hidden = np.empty((g.node_count, cfg.readout_hidden), dtype=dtype)
    outputs = np.empty((g.node_count, cfg.output_dim), dtype=dtype)
    for v in range(g.node_count):
        a = activate(cfg.activation, r1 @ h[v] + c1)
        out = r2 @ a + c2
        if readout_offset is not None:
            out = out + readout_offset
        hidden[v], outputs[v] = a, out
    return ForwardResult(
        states=tuple(states),
        outputs=outputs,
        layers=tuple(caches),
        readout=LayerCache(h, hidden),
    )


def _backward(
    g: Graph,
    p: NumericParams,
    cfg: NumericConfig,
    result: ForwardResult,
    d_out: np.ndarray,
    grads: dict[str, np.ndarray],
) -> None:
    r1, r2 = p["readout.W1"], p["readout.W2"]
    hidden = result.readout.hidden
    grads["readout.W2"] += d_out.T @ hidden
    grads["readout.b2"] += d_out.sum(axis=0)
    dz = (d_out @ r2) * activation_grad(cfg.activation, hidden)
    grads["readout.W1"] += dz.T @ result.readout.inputs
    grads["readout.b1"] += dz.sum(axis=0)
    d_h = dz @ r1

    adjacency = [neighbors(g, v) for v in range(g.node_count)]
    for k in reversed(range(cfg.layers)):
        cache = result.layers[k]
        w1, w2 = p[f"combine.{k}.W1"], p[f"combine.{k}.W2"]
        d = cfg.layer_input_dim(k)
        grads[f"combine.{k}.W2"] += d_h.T @ cache.hidden
        grads[f"combine.{k}.b2"] += d_h.sum(axis=0)
        dz = (d_h @ w2) * activation_grad(cfg.activation, cache.hidden)
        grads[f"combine.{k}.W1"] += dz.T @ cache.inputs
        grads[f"combine.{k}.b1"] += dz.sum(axis=0)
        d_x = dz @ w1
        d_prev = d_x[:, :d].copy()
        for v in range(g.node_count):
            nbrs = adjacency[v]
            if not nbrs:
                continue
            share = d_x[v, d:] / len(nbrs) if cfg.aggregate == "mean" else d_x[v, d:]
            for u in nbrs:
                d_prev[u] += share
        d_h = d_prev


def _group_items(
    ds: Sequence[NumericItem], cfg: NumericConfig
) -> list[tuple[Graph, list[tuple[int, np.ndarray]]]]:
    groups: dict[int, tuple[Graph, list[tuple[int, np.ndarray]]]] = {}
    for graph, node, target in ds:
        check_node(graph, node)
        y = np.asarray(target, dtype=np.float64).reshape(-1)
        if y.shape != (cfg.output_dim,):
            raise DimensionMismatchError(
                f"cible de dimension {y.size}, attendu {cfg.output_dim}"
            )
        groups.setdefault(id(graph), (graph, []))[1].append((node, y))
    return list(groups.values())


def mse_value(ds: Sequence[NumericItem], p: NumericParams, cfg: NumericConfig) -> Any:
    """Erreur quadratique moyenne, calculée dans le type des paramètres."""
    if not ds:
        return p.dtype.type(0)
    total = np.zeros((), dtype=p.dtype)
    for graph, items in _group_items(ds, cfg):
        outputs = forward(graph, p, cfg).outputs
        for node, y in items:
            diff = outputs[node] - y.astype(p.dtype)
            total = total + (diff * diff).sum()
    return total / (len(ds) * cfg.output_dim)


def mse(ds: Sequence[NumericItem], p: NumericParams, cfg: NumericConfig) -> float:
    """Erreur quadratique moyenne (sur les éléments et les composantes de sortie)."""
    return float(mse_value(ds, p, cfg))


@beartype
def loss_and_grad(
    ds: Sequence[NumericItem], p: NumericParams, cfg: NumericConfig
) -> tuple[float, NumericParams]:
    """
    Erreur quadratique moyenne et son gradient exact (mode inverse).

    :param ds: Éléments ``(graphe, nœud, cible)``.
    :type ds: Sequence[tuple[Graph, int, Sequence[float]]]

    :param p: Paramètres courants.
    :type p: NumericParams

    :param cfg: Architecture.
    :type cfg: NumericConfig

    :return: ``(mse, gradient)`` ; le gradient a la forme des paramètres.
    :rtype: tuple[float, NumericParams]

    :raises DimensionMismatchError: Cible ou étiquettes de mauvaise dimension.
    """
    grads = p.zeros_like()
    if not ds:
        return 0.0, grads
    count = len(ds) * cfg.output_dim
    total = 0.0
    for graph, items in _group_items(ds, cfg):
        result = forward(graph, p, cfg)
        d_out = np.zeros_like(result.outputs)
        for node, y in items:
            diff = result.outputs[node] - y
            total += float((diff * diff).sum())
            d_out[node] += 2.0 * diff / count
        _backward(graph, p, cfg, result, d_out, grads.arrays)
    return total / count, grads


@beartype
def params_to_json(p: NumericParams, cfg: NumericConfig) -> str:
    """JSON plat : configuration et tableaux étiquetés par leur forme."""
    return json.dumps(
        {
            "config": asdict(cfg),
            "arrays": [
                {"name": name, "shape": list(a.shape), "data": a.ravel().tolist()}
                for name, a in p.arrays.items()
            ],
        }
    )


@beartype
def params_from_json(document: str) -> tuple[NumericParams, NumericConfig]:
    data = json.loads(document)
    cfg = NumericConfig(**data["config"])
    arrays = {
        entry["name"]: np.asarray(entry["data"], dtype=np.float64).reshape(
            entry["shape"]
        )
        for entry in data["arrays"]
    }
    p = NumericParams(arrays)
    p.check(cfg)
    return p, cfg
