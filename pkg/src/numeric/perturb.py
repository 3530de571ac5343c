"""
Bornes de Jacobien et expérience de propagation d'erreur.

Si chaque composante perturbée s'écarte de l'originale d'au plus ``η`` (en
norme infinie) et que ``B`` majore la norme du Jacobien des transitions,
l'écart des états vérifie ``‖H̄^k − H^k‖∞ ≤ ηN·Σ_{i<k} B^i`` et celui des
sorties ``ηN + B·ηN·Σ_{i<K} B^i``.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np
from beartype import beartype

from ..bin.config import JACOBIAN_SAFETY
from ..bin.errors import ConfigError
from ..bin.log import logger
from ..graph.graph import Graph, max_degree
from .model import (
    ACTIVATION_SLOPE,
    NumericConfig,
    NumericParams,
    activate,
    activation_grad,
    forward,
)

PERTURB_COLUMNS = ["step", "observed", "bound", "violation"]
OFFSET_MODES = ("uniform", "constant")

Box = tuple[float, float]


@dataclass(frozen=True)
class PerturbReport:
    """
    Résultat d'une expérience de perturbation.

    ``observed[k]`` est l'écart maximal (sur les essais) de ``H^k`` pour
    ``k = 0..K`` ; ``bounds[k]`` la borne théorique correspondante.
    ``rigorous_bound`` est la borne de Jacobien calculée sur les seuls poids,
    rapportée à titre de comparaison avec ``jacobian_bound``.
    """

    eta: float
    node_count: int
    jacobian_bound: float
    rigorous_bound: float
    trials: int
    observed: tuple[float, ...]
    bounds: tuple[float, ...]
    output_drift: float
    output_bound: float
    violations: int

    @property
    def ok(self) -> bool:
        return self.violations == 0


def _fan(cfg: NumericConfig, fan_in: int) -> int:
    return fan_in if cfg.aggregate == "sum" else 1


def _combine_norm(jac: np.ndarray, d: int, fan: int) -> float:
    # jac : (m, 2d) ; colonnes [état propre | agrégat]
    rows = np.abs(jac[:, :d]).sum(axis=1) + fan * np.abs(jac[:, d:]).sum(axis=1)
    return float(rows.max())


def _combine_jacobian(
    p: NumericParams, cfg: NumericConfig, k: int, x: np.ndarray
) -> np.ndarray:
    w1, b1, w2 = p[f"combine.{k}.W1"], p[f"combine.{k}.b1"], p[f"combine.{k}.W2"]
    a = activate(cfg.activation, w1 @ x + b1)
    return w2 @ (activation_grad(cfg.activation, a)[:, None] * w1)


def _readout_jacobian(
    p: NumericParams, cfg: NumericConfig, h: np.ndarray
) -> np.ndarray:
    r1, c1, r2 = p["readout.W1"], p["readout.b1"], p["readout.W2"]
    a = activate(cfg.activation, r1 @ h + c1)
    return r2 @ (activation_grad(cfg.activation, a)[:, None] * r1)


def _affine_bound(p: NumericParams, cfg: NumericConfig, fan: int) -> float:
    best = 0.0
    for k in range(cfg.layers):
        jac = p[f"combine.{k}.W2"] @ p[f"combine.{k}.W1"]
        best = max(best, _combine_norm(jac, cfg.layer_input_dim(k), fan))
    readout = p["readout.W2"] @ p["readout.W1"]
    return max(best, float(np.abs(readout).sum(axis=1).max()))


@beartype
def estimate_jacobian_bound(
    p: NumericParams,
    cfg: NumericConfig,
    box: Box = (-1.0, 1.0),
    samples: int = 256,
    seed: int = 0,
    fan_in: int = 1,
    safety: float = JACOBIAN_SAFETY,
) -> float:
    """
    Estime ``B``, borne de la norme infinie (somme de ligne maximale) du
    Jacobien des transitions et du READOUT.

    Pour COMBINE, la partie agrégat est multipliée par ``fan_in`` en
    agrégation ``sum`` (chaque voisin contribue) et par 1 en ``mean``.
    Avec l'activation ``identity`` les composantes sont affines et la borne
    est exacte (sans facteur de sécurité). Sinon le supremum est estimé sur
    ``samples`` points tirés uniformément dans ``box``, puis multiplié par
    ``safety``. Les tirages des ``s`` premiers échantillons ne dépendent pas
    de ``samples`` : l'estimation est croissante en ``samples``.

    :param box: Intervalle ``(lo, hi)`` appliqué à chaque coordonnée d'entrée.
    :type box: tuple[float, float]

    :param samples: Nombre de points échantillonnés (>= 1).
    :type samples: int

    :return: La borne ``B``.
    :rtype: float

    :raises ConfigError: ``samples < 1`` ou intervalle vide.
    """
    if samples < 1:
        raise ConfigError("samples doit être >= 1")
    lo, hi = box
    if lo > hi:
        raise ConfigError(f"intervalle vide : {box}")
    fan = _fan(cfg, fan_in)
    if cfg.activation == "identity":
        return _affine_bound(p, cfg, fan)

    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(samples):
        for k in range(cfg.layers):
            d = cfg.layer_input_dim(k)
            x = rng.uniform(lo, hi, size=2 * d)
            best = max(best, _combine_norm(_combine_jacobian(p, cfg, k, x), d, fan))
        h = rng.uniform(lo, hi, size=cfg.feature_dim)
        best = max(best, float(np.abs(_readout_jacobian(p, cfg, h)).sum(axis=1).max()))
    return best * safety


@beartype
def rigorous_jacobian_bound(
    p: NumericParams, cfg: NumericConfig, fan_in: int = 1
) -> float:
    """
    Borne valable sur tout l'espace : ``|W2|·max|σ'|·|W1|`` par composante.

    Plus lâche que l'estimation échantillonnée, mais sans hypothèse de domaine.
    """
    slope = ACTIVATION_SLOPE[cfg.activation]
    fan = _fan(cfg, fan_in)
    best = 0.0
    for k in range(cfg.layers):
        jac = slope * (np.abs(p[f"combine.{k}.W2"]) @ np.abs(p[f"combine.{k}.W1"]))
        best = max(best, _combine_norm(jac, cfg.layer_input_dim(k), fan))
    readout = slope * (np.abs(p["readout.W2"]) @ np.abs(p["readout.W1"]))
    return max(best, float(readout.sum(axis=1).max()))


def step_bounds(eta: float, n: int, b: float, layers: int) -> list[float]:
    """
    ``ηN·Σ_{i<k} B^i`` pour ``k = 0..K``.

    >>> step_bounds(0.5, 2, 2.0, 3)
    [0.0, 1.0, 3.0, 7.0]
    """
    bounds, partial, power = [0.0], 0.0, 1.0
    for _ in range(layers):
        partial += power
        power *= b
        bounds.append(eta * n * partial)
    return bounds


def output_bound(eta: float, n: int, b: float, layers: int) -> float:
    """
    >>> output_bound(0.5, 2, 2.0, 3)
    15.0
    """
    return eta * n + b * step_bounds(eta, n, b, layers)[-1]


def _offsets(
    rng: np.random.Generator, eta: float, size: int, mode: str
) -> np.ndarray:
    if mode == "constant":
        return np.full(size, eta)
    return rng.uniform(-eta, eta, size=size)


def _default_box(g: Graph, p: NumericParams, cfg: NumericConfig) -> Box:
    clean = forward(g, p, cfg)
    values = [cache.inputs for cache in clean.layers] + [clean.readout.inputs]
    lo = min((float(v.min()) for v in values if v.size), default=0.0)
    hi = max((float(v.max()) for v in values if v.size), default=0.0)
    return lo - 1.0, hi + 1.0


def _max_abs(a: np.ndarray) -> float:
    return float(np.abs(a).max()) if a.size else 0.0


@beartype
def perturb_experiment(
    g: Graph,
    p: NumericParams,
    cfg: NumericConfig,
    eta: float,
    trials: int,
    seed: int,
    jacobian_bound: float | None = None,
    offset_mode: str = "uniform",
    box: Box | None = None,
    samples: int = 256,
) -> PerturbReport:
    """
    Compare un GNN et sa version perturbée ``f̃^k = f^k + δ^k`` (et READOUT
    de même), avec ``‖δ^k‖∞ ≤ η``, sur ``trials`` tirages d'offsets.

    Chaque essai tire un vecteur d'offset par itération (partagé par tous les
    nœuds) et un pour READOUT : uniforme dans ``[−η, η]`` (``uniform``) ou
    constant égal à ``+η`` (``constant``). ``B`` vaut ``jacobian_bound`` s'il
    est fourni, sinon :func:`estimate_jacobian_bound` avec ``fan_in`` égal au
    degré maximal du graphe et, par défaut, une boîte couvrant les entrées
    des composantes sur le graphe non perturbé, élargie de 1.

    :param eta: Amplitude ``η`` des perturbations (>= 0).
    :type eta: float

    :return: Écarts observés, bornes et nombre de violations.
    :rtype: PerturbReport

    :raises ConfigError: ``eta`` négatif ou mode d'offset inconnu.
    """
    if eta < 0:
        raise ConfigError("eta doit être >= 0")
    if offset_mode not in OFFSET_MODES:
        raise ConfigError(f"mode d'offset inconnu : {offset_mode}")

    if jacobian_bound is None:
        jacobian_bound = estimate_jacobian_bound(
            p,
            cfg,
            box=box if box is not None else _default_box(g, p, cfg),
            samples=samples,
            seed=seed,
            fan_in=max_degree(g),
        )
    n = g.node_count
    bounds = step_bounds(eta, n, jacobian_bound, cfg.layers)
    final_bound = output_bound(eta, n, jacobian_bound, cfg.layers)

    clean = forward(g, p, cfg)
    rng = np.random.default_rng(seed)
    observed = [0.0] * (cfg.layers + 1)
    drift_out = 0.0
    violations = 0
    for _ in range(trials):
        offsets = [
            _offsets(rng, eta, cfg.feature_dim, offset_mode)
            for _ in range(cfg.layers)
        ]
        readout_offset = _offsets(rng, eta, cfg.output_dim, offset_mode)
        noisy = forward(g, p, cfg, offsets, readout_offset)
        for k in range(cfg.layers + 1):
            drift = _max_abs(noisy.states[k] - clean.states[k])
            observed[k] = max(observed[k], drift)
            violations += int(drift > bounds[k])
        drift = _max_abs(noisy.outputs - clean.outputs)
        drift_out = max(drift_out, drift)
        violations += int(drift > final_bound)

    report = PerturbReport(
        eta=eta,
        node_count=n,
        jacobian_bound=jacobian_bound,
        rigorous_bound=rigorous_jacobian_bound(p, cfg, fan_in=max_degree(g)),
        trials=trials,
        observed=tuple(observed),
        bounds=tuple(bounds),
        output_drift=drift_out,
        output_bound=final_bound,
        violations=violations,
    )
    if violations:
        logger.warning(f"⚠️ Perturbation η={eta} : {violations} violation(s) de borne")
    else:
        logger.info(
            f"✅ Perturbation η={eta} : aucune violation (B={jacobian_bound:.4f}, "
            f"borne sur les poids {report.rigorous_bound:.4f})"
        )
    return report


def perturb_report_rows(report: PerturbReport) -> list[dict[str, Any]]:
    """Lignes CSV ``step,observed,bound,violation``, READOUT en dernier."""
    rows: list[dict[str, Any]] = [
        {
            "step": str(k),
            "observed": observed,
            "bound": bound,
            "violation": observed > bound,
        }
        for k, (observed, bound) in enumerate(zip(report.observed, report.bounds))
    ]
    rows.append(
        {
            "step": "readout",
            "observed": report.output_drift,
            "bound": report.output_bound,
            "violation": report.output_drift > report.output_bound,
        }
    )
    return rows


def perturb_report_to_json(report: PerturbReport) -> dict[str, Any]:
    """Rapport complet : bornes de Jacobien, lignes par étape et violations."""
    return {
        "eta": report.eta,
        "node_count": report.node_count,
        "trials": report.trials,
        "jacobian_bound": report.jacobian_bound,
        "rigorous_jacobian_bound": report.rigorous_bound,
        "violations": report.violations,
        "steps": perturb_report_rows(report),
    }
