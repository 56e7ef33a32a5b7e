import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from proclimits.dist import PointMass
from proclimits.estimators import ExpectileCurveEstimator, QuantileCurveEstimator
from proclimits.exceptions import ValidationError
from proclimits.expectile import expectile
from proclimits.empirical import EmpiricalSample


def test_expectile_estimator():
    y = np.random.default_rng(0).normal(size=300)
    est = ExpectileCurveEstimator(lo=0.6, hi=0.7, count=11)
    assert est.get_params() == {"lo": 0.6, "hi": 0.7, "count": 11}
    with pytest.raises(NotFittedError):
        est.predict([0.5])
    est.fit(y.reshape(-1, 1))
    assert est.n_samples_ == 300
    assert est.predict([0.5])[0] == pytest.approx(y.mean(), abs=1e-12)
    assert est.curve_.values[0] == expectile(0.6, EmpiricalSample(y))
    twin = clone(est).set_params(count=3).fit(y)
    assert twin.curve().points.size == 3


def test_quantile_estimator():
    est = QuantileCurveEstimator().fit([3.0, 1.0, 2.0])
    assert est.predict([0.5, 1 / 3]).tolist() == [2.0, 1.0]
    assert est.curve_.label == "alpha"
    p = QuantileCurveEstimator().fit(np.ones(10)).process(PointMass(1.0))
    np.testing.assert_array_equal(p.values, 0.0)


def test_input_validation():
    with pytest.raises(ValidationError):
        ExpectileCurveEstimator().fit(np.ones((5, 2)))
    with pytest.raises(ValueError):
        ExpectileCurveEstimator().fit([1.0, np.nan])
