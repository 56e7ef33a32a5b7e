"""Scalar statistics of grid functions and summaries of Monte Carlo output."""

from __future__ import annotations

import numpy as np
from scipy.integrate import trapezoid

from .exceptions import BadExponent, EmptyInput, GridMismatch, TooFewPoints, ValidationError
from .grid import GridFunction

KDE_POINTS = 512
KDE_EXTENT = 4.0  # bandwidths beyond the data on each side


def _as_values(x) -> np.ndarray:
    """Accept an McResult, a GridFunction or any array-like of reals."""
    if hasattr(x, "statistics"):
        x = x.statistics
    elif isinstance(x, GridFunction):
        x = x.values
    return np.asarray(x, dtype=float).ravel()


def sup_norm(f: GridFunction) -> float:
    """max |f| over the grid."""
    return float(np.max(np.abs(f.values)))


def weighted_lp(f: GridFunction, p: float = 2.0, w: GridFunction | None = None) -> float:
    """Trapezoidal approximation of the integral of |f|^p w over the grid interval.

    Parameters
    ----------
    f : GridFunction
    p : float, default=2
        Exponent, at least 1.
    w : GridFunction, optional
        Nonnegative weight on the same grid; defaults to 1.
    """
    if not np.isfinite(p) or p < 1:
        raise BadExponent(f"exponent must be >= 1, got {p}")
    if w is None:
        wv = np.ones_like(f.values)
    else:
        if not f.same_grid(w):
            raise GridMismatch("weight must live on the grid of f")
        wv = w.values
        if np.any(wv < 0):
            raise ValidationError("weight must be nonnegative")
    if f.points.size == 1:
        return 0.0
    return float(trapezoid(np.abs(f.values) ** p * wv, f.points))


def statistic(name: str, f: GridFunction) -> float:
    """Evaluate a named statistic: ``supnorm``, ``cvm_p1`` or ``cvm_p2`` (unit weight)."""
    if name == "supnorm":
        return sup_norm(f)
    if name == "cvm_p1":
        return weighted_lp(f, 1.0)
    if name == "cvm_p2":
        return weighted_lp(f, 2.0)
    raise ValidationError(f"unknown statistic {name!r}")


STATISTICS = ("supnorm", "cvm_p1", "cvm_p2")


def ks_two_sample(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov distance sup |ECDF_a - ECDF_b|."""
    x, y = _as_values(a), _as_values(b)
    if x.size == 0 or y.size == 0:
        raise EmptyInput("both samples must be nonempty")
    x, y = np.sort(x), np.sort(y)
    pooled = np.concatenate((x, y))
    fx = np.searchsorted(x, pooled, side="right") / x.size
    fy = np.searchsorted(y, pooled, side="right") / y.size
    return float(np.max(np.abs(fx - fy)))


def ecdf(values) -> tuple[np.ndarray, np.ndarray]:
    """Sorted values and ECDF heights i/m, for step plots."""
    x = np.sort(_as_values(values))
    if x.size == 0:
        raise EmptyInput("ECDF of an empty sample")
    return x, np.arange(1, x.size + 1) / x.size


def silverman_bandwidth(values) -> float:
    """1.06 * sd * m^(-1/5), with the sample sd (ddof=1)."""
    x = _as_values(values)
    if x.size < 2:
        raise TooFewPoints("bandwidth rule needs at least two values")
    return 1.06 * float(np.std(x, ddof=1)) * x.size ** -0.2


def kde(values, bandwidth="auto") -> GridFunction:
    """Gaussian kernel density estimate on a 512-point grid.

    The grid spans the data range extended by four bandwidths on each side,
    enough for the trapezoidal integral to be within 1e-3 of one.
    """
    x = _as_values(values)
    if x.size < 2:
        raise TooFewPoints(f"kde needs at least two values, got {x.size}")
    if isinstance(bandwidth, str):
        if bandwidth != "auto":
            raise ValidationError(f"bandwidth must be positive or 'auto', got {bandwidth!r}")
        h = silverman_bandwidth(x)
        if h == 0.0:
            raise ValidationError("all values coincide; give an explicit bandwidth")
    else:
        h = float(bandwidth)
        if not h > 0:
            raise ValidationError(f"bandwidth must be positive, got {bandwidth}")
    grid = np.linspace(x.min() - KDE_EXTENT * h, x.max() + KDE_EXTENT * h, KDE_POINTS)
    dens = np.zeros(KDE_POINTS)
    # chunk over data to bound memory at m * 512
    for start in range(0, x.size, 4096):
        z = (grid[:, None] - x[None, start:start + 4096]) / h
        dens += np.exp(-0.5 * z * z).sum(axis=1)
    dens /= x.size * h * np.sqrt(2.0 * np.pi)
    return GridFunction(grid, dens, label="x")


__all__ = [
    "STATISTICS",
    "sup_norm",
    "weighted_lp",
    "statistic",
    "ks_two_sample",
    "ecdf",
    "silverman_bandwidth",
    "kde",
]
