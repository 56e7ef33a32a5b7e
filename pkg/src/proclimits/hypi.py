"""Semicontinuous hulls and a grid surrogate of the hypi-semimetric.

The lower (upper) hull at a point is the liminf (limsup) of the function over
shrinking neighbourhoods. On a grid the neighbourhood cannot shrink below one
cell, so the hulls are windowed minima (maxima) over ``window`` neighbours on
each side, clamped at the boundary. Equalities that hold for the exact hulls
hold here up to one grid cell.

The distance compares completed graphs. The completed graph of a grid
function v is the point set {(t_i, v_i)} together with a vertical segment
between v_i and v_{i+1} placed midway between t_i and t_{i+1}. Time is
rescaled to [0, 1]; the Hausdorff distance of two completed graphs is
computed after densifying the vertical segments. Two grid functions are at
distance zero iff both their lower and upper hulls agree on the grid.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d
from scipy.spatial import cKDTree

from .exceptions import BelowFloor, GridMismatch, ValidationError
from .grid import GridFunction

__all__ = [
    "GridFunction",
    "lower_hull",
    "upper_hull",
    "hypi_distance",
    "sup_distance",
    "hull_product",
    "hull_reciprocal",
    "converges_hypi",
    "HypiDiagnostic",
    "tail_inf",
    "tail_sup",
]


def _check_window(window):
    if int(window) != window or window < 1:
        raise ValidationError(f"window must be a positive integer, got {window!r}")
    return int(window)


def lower_hull(g: GridFunction, window: int = 1) -> GridFunction:
    """Windowed minimum, the discrete lower semicontinuous hull."""
    w = _check_window(window)
    return g.with_values(minimum_filter1d(g.values, size=2 * w + 1, mode="nearest"))


def upper_hull(g: GridFunction, window: int = 1) -> GridFunction:
    """Windowed maximum, the discrete upper semicontinuous hull."""
    w = _check_window(window)
    return g.with_values(maximum_filter1d(g.values, size=2 * w + 1, mode="nearest"))


def _completed_graph(values: np.ndarray, step: float) -> np.ndarray:
    """Densified completed graph on the rescaled grid t_i = i / (m - 1)."""
    m = values.size
    if m == 1:
        return np.array([[0.0, values[0]]])
    t = np.linspace(0.0, 1.0, m)
    pieces = [np.column_stack((t, values))]
    a, b = values[:-1], values[1:]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    mids = 0.5 * (t[:-1] + t[1:])
    counts = np.floor((hi - lo) / step).astype(np.int64) + 1
    # points lo, lo + step, ..., plus hi itself
    rep_mid = np.repeat(mids, counts)
    rep_lo = np.repeat(lo, counts)
    offsets = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    ys = np.minimum(rep_lo + offsets * step, np.repeat(hi, counts))
    pieces.append(np.column_stack((rep_mid, ys)))
    pieces.append(np.column_stack((mids, hi)))
    return np.vstack(pieces)


def _rows(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a + 0.0)  # + 0.0 folds -0.0 into 0.0
    return a.view(np.dtype((np.void, a.dtype.itemsize * a.shape[1]))).ravel()


def _directed(p: np.ndarray, q: np.ndarray) -> float:
    # exact matches first: the tree compares squared distances, which
    # underflow for gaps below ~1e-154 and can then pick the wrong neighbour
    p = p[~np.isin(_rows(p), _rows(q))]
    if p.size == 0:
        return 0.0
    idx = cKDTree(q).query(p, k=1)[1]
    diff = p - q[idx]
    return float(np.max(np.hypot(diff[:, 0], diff[:, 1])))


def _hausdorff(p: np.ndarray, q: np.ndarray) -> float:
    return max(_directed(p, q), _directed(q, p))


def _graph_step(f: GridFunction, resolution: float | None) -> float:
    m = f.points.size
    if resolution is not None:
        if not resolution > 0:
            raise ValidationError("resolution must be positive")
        return float(resolution)
    # a quarter of a rescaled grid cell
    return 0.25 / max(m - 1, 1)


def hypi_distance(f: GridFunction, g: GridFunction, window: int = 1,
                  resolution: float | None = None) -> float:
    """Grid surrogate of the hypi-semimetric.

    Maximum of the Hausdorff distances between the completed graphs of the two
    lower hulls and of the two upper hulls. Symmetric, satisfies the triangle
    inequality, and vanishes iff the hull pairs coincide on the grid.

    Parameters
    ----------
    f, g : GridFunction
        Functions on the same grid.
    window : int, default=1
        Hull window, in grid points on each side.
    resolution : float, optional
        Vertical densification step; defaults to a quarter of a rescaled
        grid cell. Distances are exact for the densified graphs.
    """
    if not f.same_grid(g):
        raise GridMismatch("hypi_distance needs functions on a common grid")
    step = _graph_step(f, resolution)
    d_lower = _hausdorff(
        _completed_graph(lower_hull(f, window).values, step),
        _completed_graph(lower_hull(g, window).values, step),
    )
    d_upper = _hausdorff(
        _completed_graph(upper_hull(f, window).values, step),
        _completed_graph(upper_hull(g, window).values, step),
    )
    return max(d_lower, d_upper)


def sup_distance(f: GridFunction, g: GridFunction) -> float:
    if not f.same_grid(g):
        raise GridMismatch("sup_distance needs functions on a common grid")
    return float(np.max(np.abs(f.values - g.values)))


def hull_product(phi: GridFunction, c: GridFunction, window: int = 1) -> tuple[GridFunction, GridFunction]:
    """Hulls of phi * c for continuous phi, from the hulls of c alone.

    Where phi is positive the lower hull of the product is phi times the lower
    hull of c; where phi is negative it is phi times the upper hull of c (and
    dually for the upper hull of the product).
    """
    phi.require_same_grid(c)
    c_lo = lower_hull(c, window).values
    c_hi = upper_hull(c, window).values
    v = phi.values
    pos, neg = v > 0, v < 0
    lower = v * (c_lo * pos + c_hi * neg)
    upper = v * (c_hi * pos + c_lo * neg)
    return phi.with_values(lower), phi.with_values(upper)


def hull_reciprocal(c: GridFunction, floor: float, window: int = 1) -> tuple[GridFunction, GridFunction]:
    """Hulls of 1 / c: the lower hull is 1 / (upper hull of c) and vice versa."""
    if not floor > 0:
        raise ValidationError("floor must be positive")
    if np.any(c.values < floor):
        raise BelowFloor(f"c drops to {c.values.min():.6g}, below the floor {floor:g}")
    return (c.with_values(1.0 / upper_hull(c, window).values),
            c.with_values(1.0 / lower_hull(c, window).values))


@dataclass
class HypiDiagnostic:
    distances: list[float]
    converged: bool
    tolerance: float
    sup_distances: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"distances": self.distances, "converged": self.converged, "tolerance": self.tolerance}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @property
    def monotone(self) -> bool:
        """True if the distances never increase along the sequence."""
        d = np.asarray(self.distances)
        return bool(np.all(np.diff(d) <= 1e-15))


def converges_hypi(seq, target: GridFunction, tolerance: float | None = None,
                   window: int = 1) -> HypiDiagnostic:
    """Distances of a sequence to a target; converged if the last is within tolerance.

    The default tolerance is one rescaled grid cell plus a small slack, the
    resolution limit of the grid hulls.
    """
    seq = list(seq)
    if not seq:
        raise ValidationError("need at least one sequence element")
    if tolerance is None:
        tolerance = 1.0 / max(target.points.size - 1, 1) + 1e-9
    dists = [hypi_distance(h, target, window) for h in seq]
    sups = [sup_distance(h, target) for h in seq]
    return HypiDiagnostic(dists, bool(dists[-1] <= tolerance), float(tolerance), sups)


def tail_inf(seq, start: int | None = None) -> float:
    """inf over the tail seq[start:], a finite stand-in for liminf (default: last half)."""
    a = np.asarray(seq, dtype=float)
    if start is None:
        start = a.size // 2
    return float(np.min(a[start:]))


def tail_sup(seq, start: int | None = None) -> float:
    a = np.asarray(seq, dtype=float)
    if start is None:
        start = a.size // 2
    return float(np.max(a[start:]))
