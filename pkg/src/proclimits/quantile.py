"""Quantiles as generalized inverses, quantile processes and their limit transform."""

from __future__ import annotations

import numpy as np

from .dist import DistributionModel, _check_alpha
from .empirical import EmpiricalSample
from .exceptions import DensityVanishes, GridMismatch, ValidationError
from .grid import AlphaGrid, GridFunction, LevelGrid

DENSITY_FLOOR = 1e-12


def _order_index(n: int, alpha: np.ndarray) -> np.ndarray:
    """Smallest k >= 1 with k / n >= alpha, evaluated in floating point.

    ``ceil(n * alpha)`` alone can be off by one when ``n * alpha`` rounds
    across an integer; the two corrections make the result agree with the
    ECDF values ``k / n`` that callers compare against.
    """
    k = np.ceil(n * alpha).astype(np.int64)
    k = np.clip(k, 1, n)
    k = np.where((k > 1) & ((k - 1) / n >= alpha), k - 1, k)
    k = np.where((k < n) & (k / n < alpha), k + 1, k)
    return k


def empirical_quantile(sample: EmpiricalSample, alpha):
    """inf{x : F_n(x) >= alpha}, i.e. the ceil(n alpha)-th order statistic."""
    a = _check_alpha(alpha)
    k = _order_index(sample.n, a)
    res = sample.values[k - 1]
    return float(res) if np.ndim(res) == 0 else res


def quantile_curve(F, grid: LevelGrid) -> GridFunction:
    pts = grid.points
    if isinstance(F, EmpiricalSample):
        vals = empirical_quantile(F, pts)
    elif isinstance(F, DistributionModel):
        vals = F.inverse_cdf(pts)
    else:
        raise ValidationError(f"expected a distribution model or an empirical sample, got {type(F).__name__}")
    return GridFunction(pts, np.atleast_1d(vals), label="alpha")


def quantile_process(sample: EmpiricalSample, model: DistributionModel, grid: LevelGrid,
                     true_curve: GridFunction | None = None) -> GridFunction:
    """Standardized quantile process sqrt(n) (q_hat - q) on the grid."""
    if true_curve is None:
        true_curve = quantile_curve(model, grid)
    emp = np.atleast_1d(empirical_quantile(sample, grid.points))
    return GridFunction(grid.points, np.sqrt(sample.n) * (emp - true_curve.values), label="alpha")


def quantile_limit_transform(model: DistributionModel, grid: LevelGrid, phi: GridFunction,
                             side: str = "left") -> GridFunction:
    """phi(alpha) / f(q_alpha) on the grid.

    ``side="left"`` uses the left-limit density version; ``side="right"``
    uses f(q_alpha+), the other branch of the hulls where f jumps.
    """
    if not np.allclose(phi.points, grid.points, rtol=0, atol=1e-12):
        raise GridMismatch("phi must live on the alpha grid")
    q = np.atleast_1d(model.inverse_cdf(grid.points))
    if side == "left":
        f = np.atleast_1d(model.density(q))
    elif side == "right":
        f = np.atleast_1d(model.density_right(q))
    else:
        raise ValidationError(f"side must be 'left' or 'right', got {side!r}")
    if np.any(f < DENSITY_FLOOR):
        bad = grid.points[np.argmax(f < DENSITY_FLOOR)]
        raise DensityVanishes(f"density at the {bad:.6g}-quantile is below {DENSITY_FLOOR:g}")
    return phi.with_values(phi.values / f)


def check_quantile_conditions(model: DistributionModel, grid: LevelGrid, resolution: int = 2001) -> list[str]:
    """Spot-check the quantile limit theorem's assumptions for a model.

    Returns a list of human-readable problems (empty when none are found):
    atoms inside the quantile range, or a density not bounded away from zero.
    """
    problems = []
    q_lo, q_hi = model.inverse_cdf([grid.lo, grid.hi])
    for loc, mass in model.atoms():
        if q_lo <= loc <= q_hi:
            problems.append(f"atom of mass {mass:g} at {loc:g} inside [{q_lo:.6g}, {q_hi:.6g}]")
    if not problems:
        xs = np.linspace(q_lo, q_hi, resolution)
        f = np.minimum(model.density(xs), model.density_right(xs))
        if np.min(f) < DENSITY_FLOOR:
            problems.append("density is not bounded away from zero on the quantile range")
    return problems


__all__ = [
    "AlphaGrid",
    "empirical_quantile",
    "quantile_curve",
    "quantile_process",
    "quantile_limit_transform",
    "check_quantile_conditions",
]
