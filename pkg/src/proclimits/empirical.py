"""Empirical distribution functions backed by sorted data and prefix sums."""

from __future__ import annotations

import numpy as np

from .exceptions import EmptyInput, ValidationError
from .rng import as_generator


def _compensated_prefix(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Prefix sums as an unevaluated pair ``hi + lo``.

    ``hi`` is the plain running sum; ``lo`` accumulates the exact rounding
    error of every addition (TwoSum), so ``hi[k] + lo[k]`` is accurate to
    roughly one rounding of the true prefix sum even for n = 10**6.
    """
    n = values.size
    hi = np.empty(n + 1)
    hi[0] = 0.0
    np.cumsum(values, out=hi[1:])
    prev = hi[:-1]
    # np.add.accumulate is a sequential scan; confirm so the error terms below are exact
    if not np.array_equal(hi[1:], prev + values):
        acc = 0.0
        for k, v in enumerate(values, start=1):
            acc = acc + v
            hi[k] = acc
        prev = hi[:-1]
    s = hi[1:]
    bb = s - prev
    err = (prev - (s - bb)) + (values - bb)
    lo = np.empty(n + 1)
    lo[0] = 0.0
    np.cumsum(err, out=lo[1:])
    return hi, lo


class EmpiricalSample:
    """Sorted observations of a real sample, i.e. the empirical law F_n.

    Parameters
    ----------
    values : array_like
        Observations, any order. At least one, all finite.
    assume_sorted : bool, default=False
        Skip the sort when the caller guarantees nondecreasing input.
    """

    __slots__ = ("_values", "_hi", "_lo")

    def __init__(self, values, assume_sorted: bool = False):
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size == 0:
            raise EmptyInput("an empirical sample needs at least one observation")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("sample contains non-finite values")
        if not assume_sorted:
            arr = np.sort(arr)
        arr = arr.copy()
        arr.flags.writeable = False
        self._values = arr
        self._hi, self._lo = _compensated_prefix(arr)
        self._hi.flags.writeable = False
        self._lo.flags.writeable = False

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n(self) -> int:
        return self._values.size

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"EmpiricalSample(n={self.n}, min={self._values[0]:.6g}, max={self._values[-1]:.6g})"

    @property
    def prefix_sums(self) -> np.ndarray:
        """``prefix_sums[k]`` is the sum of the ``k`` smallest values."""
        return self._hi + self._lo

    def prefix_pair(self) -> tuple[np.ndarray, np.ndarray]:
        return self._hi, self._lo

    def _tail_sum(self, j):
        # sum of values[j:], computed from the compensated pair
        return (self._hi[-1] - self._hi[j]) + (self._lo[-1] - self._lo[j])

    def _head_sum(self, j):
        return self._hi[j] + self._lo[j]

    @property
    def mean(self) -> float:
        return float(self._head_sum(self.n) / self.n)

    def moments(self) -> tuple[float, float]:
        return self.mean, float(np.mean(self._values**2))

    def count_le(self, x):
        return np.searchsorted(self._values, x, side="right")

    def ecdf(self, x):
        """F_n(x) = #{values <= x} / n."""
        res = self.count_le(x) / self.n
        return float(res) if np.ndim(res) == 0 else res

    cdf = ecdf

    def cdf_left(self, x):
        res = np.searchsorted(self._values, x, side="left") / self.n
        return float(res) if np.ndim(res) == 0 else res

    def partial_moment_above(self, x):
        """(1/n) sum of (Y_k - x)^+ in O(log n)."""
        x = np.asarray(x, dtype=float)
        j = self.count_le(x)
        res = (self._tail_sum(j) - (self.n - j) * x) / self.n
        res = np.maximum(res, 0.0)
        return float(res) if res.ndim == 0 else res

    def partial_moment_below(self, x):
        """(1/n) sum of (x - Y_k)^+ in O(log n)."""
        x = np.asarray(x, dtype=float)
        j = self.count_le(x)
        res = (j * x - self._head_sum(j)) / self.n
        res = np.maximum(res, 0.0)
        return float(res) if res.ndim == 0 else res

    # shared protocol with analytic models
    partial_expectation_above = partial_moment_above
    partial_expectation_below = partial_moment_below

    def integrate_cdf(self, a: float, b: float) -> float:
        """Exact integral of F_n over [a, b] as a sum over constant pieces."""
        if a == b:
            return 0.0
        sign = 1.0
        if a > b:
            a, b, sign = b, a, -1.0
        v = self._values
        i0 = int(np.searchsorted(v, a, side="right"))
        i1 = int(np.searchsorted(v, b, side="left"))
        knots = np.concatenate(([a], v[i0:i1], [b]))
        # F_n is constant on [knots[k], knots[k+1]) and equals (#values <= knots[k]) / n there
        levels = np.arange(i0, i1 + 1, dtype=float)
        if i1 > i0:
            levels[1:] = np.searchsorted(v, v[i0:i1], side="right")
        return sign * float(np.dot(np.diff(knots), levels) / self.n)

    def resample(self, rng) -> EmpiricalSample:
        """n-out-of-n bootstrap draw with replacement."""
        gen = as_generator(rng)
        idx = gen.integers(0, self.n, size=self.n)
        counts = np.bincount(idx, minlength=self.n)
        return EmpiricalSample(np.repeat(self._values, counts), assume_sorted=True)
