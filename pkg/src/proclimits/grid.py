"""Uniform grids over level intervals and bounded functions sampled on them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import GridMismatch, ValidationError


@dataclass(frozen=True)
class LevelGrid:
    """Uniform grid of levels on a closed sub-interval of (0, 1).

    Parameters
    ----------
    lo, hi : float
        Interval endpoints, ``0 < lo < hi < 1``. Both are grid points.
    count : int, default=201
        Number of grid points. A one-point grid sits at ``lo``.
    """

    lo: float
    hi: float
    count: int = 201
    label = "level"

    def __post_init__(self):
        lo, hi, count = float(self.lo), float(self.hi), int(self.count)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "count", count)
        if count < 1:
            raise ValidationError(f"grid needs at least one point, got {count}")
        if count == 1:
            if not 0.0 < lo < 1.0:
                raise ValidationError(f"grid point must lie in (0, 1), got {lo}")
        elif not 0.0 < lo < hi < 1.0:
            raise ValidationError(f"grid needs 0 < lo < hi < 1, got lo={lo}, hi={hi}")

    @property
    def points(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.count)

    @property
    def spacing(self) -> float:
        return 0.0 if self.count == 1 else (self.hi - self.lo) / (self.count - 1)

    def __len__(self):
        return self.count

    def nearest_index(self, level: float) -> int:
        return int(np.argmin(np.abs(self.points - level)))

    def function(self, values) -> GridFunction:
        return GridFunction(self.points, values, label=self.label)

    @classmethod
    def parse(cls, text: str):
        """Parse ``"lo:hi:count"``."""
        try:
            lo, hi, count = text.split(":")
            return cls(float(lo), float(hi), int(count))
        except ValueError as exc:
            raise ValidationError(f"grid spec must look like lo:hi:count, got {text!r} ({exc})") from None


@dataclass(frozen=True)
class TauGrid(LevelGrid):
    label = "tau"


@dataclass(frozen=True)
class AlphaGrid(LevelGrid):
    label = "alpha"


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A bounded function known on a uniform grid over a closed interval."""

    points: np.ndarray
    values: np.ndarray
    label: str = field(default="t")

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).ravel()
        vals = np.array(self.values, dtype=float).ravel()
        if vals.size == 1 and pts.size > 1:
            vals = np.full(pts.size, vals[0])
        if pts.size != vals.size or pts.size == 0:
            raise ValidationError(f"points ({pts.size}) and values ({vals.size}) must be nonempty and match")
        if not np.all(np.isfinite(vals)):
            raise ValidationError("grid function values must be finite")
        if pts.size > 1:
            steps = np.diff(pts)
            if np.any(steps <= 0):
                raise ValidationError("grid points must be strictly increasing")
            span = pts[-1] - pts[0]
            if np.max(np.abs(steps - span / (pts.size - 1))) > 1e-9 * max(1.0, abs(span)):
                raise ValidationError("grid points must be uniformly spaced")
        pts.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    @classmethod
    def on_interval(cls, lo: float, hi: float, count: int, func, label: str = "t") -> GridFunction:
        pts = np.linspace(lo, hi, count)
        return cls(pts, func(pts), label=label)

    @property
    def domain_lo(self) -> float:
        return float(self.points[0])

    @property
    def domain_hi(self) -> float:
        return float(self.points[-1])

    @property
    def spacing(self) -> float:
        n = self.points.size
        return 0.0 if n == 1 else (self.domain_hi - self.domain_lo) / (n - 1)

    def __len__(self):
        return self.points.size

    def with_values(self, values) -> GridFunction:
        return GridFunction(self.points, values, label=self.label)

    def same_grid(self, other: GridFunction) -> bool:
        return self.points.size == other.points.size and np.allclose(
            self.points, other.points, rtol=0.0, atol=1e-12
        )

    def require_same_grid(self, other: GridFunction):
        if not self.same_grid(other):
            raise GridMismatch("grid functions live on different grids")

    def __neg__(self):
        return self.with_values(-self.values)

    def __add__(self, other):
        if isinstance(other, GridFunction):
            self.require_same_grid(other)
            return self.with_values(self.values + other.values)
        return self.with_values(self.values + other)

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            self.require_same_grid(other)
            return self.with_values(self.values - other.values)
        return self.with_values(self.values - other)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self.require_same_grid(other)
            return self.with_values(self.values * other.values)
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def __repr__(self):
        return (
            f"GridFunction({self.label} in [{self.domain_lo:.6g}, {self.domain_hi:.6g}], "
            f"{self.points.size} points)"
        )
