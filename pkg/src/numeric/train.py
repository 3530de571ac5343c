from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from beartype import beartype

from ..bin.errors import ConfigError, DivergenceError
from ..bin.log import logger
from ..constructive.gnn import DatasetItem, validate_target
from ..graph.graph import Graph, make_graph
from .model import NumericConfig, NumericItem, NumericParams, init_params, loss_and_grad

OPTIMIZERS = ("gd", "adam")


@dataclass(frozen=True)
class TrainConfig:
    """
    Hyperparamètres d'entraînement plein lot.

    :param lr: Pas d'apprentissage.
    :param steps: Nombre maximal d'itérations.
    :param seed: Graine de l'initialisation.
    :param optimizer: ``gd`` (descente de gradient simple) ou ``adam``.
    :param tol: Arrêt anticipé dès que la mse passe sous ce seuil.
    """

    lr: float = 0.01
    steps: int = 1000
    seed: int = 0
    optimizer: str = "gd"
    tol: float = 0.0

    def __post_init__(self) -> None:
        if not self.lr > 0:
            raise ConfigError("lr doit être > 0")
        if self.steps < 0:
            raise ConfigError("steps doit être >= 0")
        if self.optimizer not in OPTIMIZERS:
            raise ConfigError(f"optimiseur inconnu : {self.optimizer}")


def _exact_version(g: Graph) -> Graph | None:
    if g.exact:
        return g
    if not all(float(z).is_integer() for label in g.labels for z in label):
        return None
    return make_graph(
        [[int(z) for z in label] for label in g.labels], sorted(g.edges), exact=True
    )


def _check_targets(ds: Sequence[NumericItem]) -> None:
    exact: dict[int, Graph | None] = {}
    items = []
    for graph, node, target in ds:
        if id(graph) not in exact:
            exact[id(graph)] = _exact_version(graph)
        g = exact[id(graph)]
        if g is None:
            logger.info("🔎 Étiquettes non entières : vérification des cibles ignorée")
            return
        items.append(DatasetItem(g, node, tuple(Fraction(float(t)) for t in target)))
    violation = validate_target(items)
    if violation is not None:
        i, j = violation.items
        logger.warning(
            f"⚠️ Cible non compatible avec l'équivalence de dépliage "
            f"(éléments {i} et {j}) : "
            "l'erreur ne pourra pas tendre vers 0"
        )


@beartype
def train(
    ds: Sequence[NumericItem],
    cfg: NumericConfig,
    hyper: TrainConfig,
    params: NumericParams | None = None,
) -> tuple[NumericParams, list[float]]:
    """
    Entraîne le GNN numérique par descente de gradient plein lot.

    Les cibles sont d'abord confrontées à l'équivalence de dépliage sur la
    version à étiquettes entières du jeu de données ; une violation est
    signalée dans le journal sans interrompre l'entraînement.

    :param ds: Éléments ``(graphe, nœud, cible)``.
    :type ds: Sequence[tuple[Graph, int, Sequence[float]]]

    :param cfg: Architecture.
    :type cfg: NumericConfig

    :param hyper: Hyperparamètres.
    :type hyper: TrainConfig

    :param params: Paramètres initiaux ; ``init_params(cfg, hyper.seed)`` par défaut.
    :type params: NumericParams | None

    :return: Paramètres finaux et mse avant chaque mise à jour (plus la mse finale).
    :rtype: tuple[NumericParams, list[float]]

    :raises DivergenceError: Si la mse devient NaN ou infinie.
    """
    _check_targets(ds)
    p = params if params is not None else init_params(cfg, hyper.seed)
    theta = p.flat()
    m = np.zeros_like(theta)
    s = np.zeros_like(theta)
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    history: list[float] = []

    logger.info(
        f"🚀 Entraînement : {len(ds)} élément(s), "
        f"{hyper.steps} itérations, {hyper.optimizer}"
    )
    for t in range(1, hyper.steps + 1):
        loss, grad = loss_and_grad(ds, p, cfg)
        if not np.isfinite(loss):
            logger.error(f"❌ Divergence à l'itération {t}")
            raise DivergenceError(f"mse non finie à l'itération {t}")
        history.append(loss)
        if loss <= hyper.tol:
            break
        g = grad.flat()
        if hyper.optimizer == "adam":
            m = beta1 * m + (1 - beta1) * g
            s = beta2 * s + (1 - beta2) * g * g
            m_hat = m / (1 - beta1**t)
            s_hat = s / (1 - beta2**t)
            theta = theta - hyper.lr * m_hat / (np.sqrt(s_hat) + eps)
        else:
            theta = theta - hyper.lr * g
        p = p.with_flat(theta)
    else:
        loss, _ = loss_and_grad(ds, p, cfg)
        if not np.isfinite(loss):
            raise DivergenceError("mse non finie en fin d'entraînement")
        history.append(loss)

    logger.info(f"🏁 Entraînement terminé : mse finale {history[-1]:.3e}")
    return p, history
