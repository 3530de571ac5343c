"""Vérification du gradient par différences finies centrées."""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from beartype import beartype

from ..bin.log import logger
from .model import NumericConfig, NumericItem, NumericParams, loss_and_grad, mse_value


@dataclass(frozen=True)
class GradCheckReport:
    max_relative_error: float
    worst_index: int
    parameter_count: int

    def ok(self, tolerance: float = 1e-5) -> bool:
        return self.max_relative_error <= tolerance


def relative_error(a: float, b: float) -> float:
    """
    >>> relative_error(1.0, 1.0)
    0.0
    >>> relative_error(0.0, 0.0)
    0.0
    """
    return abs(a - b) / max(1e-8, abs(a) + abs(b))


@beartype
def grad_check(
    ds: Sequence[NumericItem],
    p: NumericParams,
    cfg: NumericConfig,
    step: float = 1e-6,
) -> GradCheckReport:
    """
    Compare le gradient analytique à ``(L(w+h) - L(w-h)) / 2h`` pour chaque
    paramètre. Les différences finies sont évaluées en précision étendue
    (``np.longdouble``) pour que l'erreur d'arrondi reste sous la tolérance.

    :param step: Pas ``h``.
    :type step: float

    :return: Erreur relative maximale ``|a - b| / max(1e-8, |a| + |b|)``.
    :rtype: GradCheckReport
    """
    _, analytic = loss_and_grad(ds, p, cfg)
    grad = analytic.flat()
    wide = p.astype(np.longdouble)
    theta = wide.flat()
    h = np.longdouble(step)
    worst, worst_index = 0.0, -1
    for i in range(theta.size):
        original = theta[i]
        theta[i] = original + h
        plus = mse_value(ds, wide.with_flat(theta), cfg)
        theta[i] = original - h
        minus = mse_value(ds, wide.with_flat(theta), cfg)
        theta[i] = original
        numeric = float((plus - minus) / (2 * h))
        err = relative_error(float(grad[i]), numeric)
        if err > worst:
            worst, worst_index = err, i
    logger.info(f"🔎 Vérification du gradient : erreur relative max {worst:.3e}")
    return GradCheckReport(worst, worst_index, int(theta.size))
