"""scikit-learn style estimators for expectile and quantile curves.

``fit`` takes a one-dimensional sample (or a single-column 2-D array);
``predict`` maps levels to the fitted curve's values.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .dist import DistributionModel
from .empirical import EmpiricalSample
from .exceptions import ValidationError
from .expectile import expectile, expectile_curve, expectile_process
from .grid import AlphaGrid, GridFunction, TauGrid
from .quantile import empirical_quantile, quantile_curve, quantile_process


def _check_sample(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 2 and X.shape[1] != 1:
        raise ValidationError(f"expected a single column, got shape {X.shape}")
    X = check_array(X.reshape(-1, 1), ensure_all_finite=True, dtype=np.float64)
    return X.ravel()


def _check_levels(levels) -> np.ndarray:
    return check_array(np.asarray(levels, dtype=float).reshape(-1, 1), dtype=np.float64).ravel()


class _CurveEstimator(BaseEstimator):
    _grid_cls = TauGrid

    def __init__(self, lo: float = 0.6, hi: float = 0.7, count: int = 201):
        self.lo = lo
        self.hi = hi
        self.count = count

    def fit(self, X, y=None):
        """Fit the empirical curve of the sample ``X`` on the level grid."""
        self.sample_ = EmpiricalSample(_check_sample(X))
        self.grid_ = self._grid_cls(self.lo, self.hi, self.count)
        self.n_samples_ = self.sample_.n
        self.curve_ = self._curve(self.sample_)
        return self

    def curve(self) -> GridFunction:
        check_is_fitted(self, "curve_")
        return self.curve_

    def process(self, model: DistributionModel) -> GridFunction:
        """Standardized process of the fitted sample against a reference law."""
        check_is_fitted(self, "curve_")
        return self._process(model)


class ExpectileCurveEstimator(_CurveEstimator):
    """Empirical expectiles on a tau grid.

    Parameters
    ----------
    lo, hi : float, default=0.6, 0.7
        Level interval.
    count : int, default=201
        Number of grid levels.

    Attributes
    ----------
    sample_ : EmpiricalSample
    grid_ : TauGrid
    curve_ : GridFunction
        Empirical expectiles at the grid levels.
    """

    _grid_cls = TauGrid

    def _curve(self, sample):
        return expectile_curve(sample, self.grid_).as_function()

    def _process(self, model):
        return expectile_process(self.sample_, model, self.grid_)

    def predict(self, levels) -> np.ndarray:
        """Empirical expectiles at arbitrary levels in (0, 1)."""
        check_is_fitted(self, "curve_")
        return np.atleast_1d(expectile(_check_levels(levels), self.sample_))


class QuantileCurveEstimator(_CurveEstimator):
    """Empirical quantiles (generalized inverse of the ECDF) on an alpha grid.

    Parameters and attributes as for :class:`ExpectileCurveEstimator`, with
    defaults on [0.25, 0.75].
    """

    _grid_cls = AlphaGrid

    def __init__(self, lo: float = 0.25, hi: float = 0.75, count: int = 101):
        super().__init__(lo, hi, count)

    def _curve(self, sample):
        return quantile_curve(sample, self.grid_)

    def _process(self, model):
        return quantile_process(self.sample_, model, self.grid_)

    def predict(self, levels) -> np.ndarray:
        check_is_fitted(self, "curve_")
        return np.atleast_1d(empirical_quantile(self.sample_, _check_levels(levels)))


__all__ = ["ExpectileCurveEstimator", "QuantileCurveEstimator"]
