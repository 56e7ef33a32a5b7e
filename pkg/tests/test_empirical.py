import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from proclimits.empirical import EmpiricalSample
from proclimits.exceptions import EmptyInput, ValidationError
from proclimits.rng import RngStream

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
samples = arrays(np.float64, st.integers(1, 60), elements=finite)


def test_ecdf_examples():
    s = EmpiricalSample([3.0, 1.0, 2.0])
    assert s.ecdf(2.0) == pytest.approx(2 / 3)
    assert s.ecdf(0.5) == 0.0
    assert s.ecdf(3.0) == 1.0
    assert s.ecdf(10.0) == 1.0
    assert EmpiricalSample([0.0, 0.0, 1.0]).ecdf(0.0) == pytest.approx(2 / 3)
    assert s.cdf_left(2.0) == pytest.approx(1 / 3)


def test_partial_moment_examples():
    assert EmpiricalSample([0.0, 2.0]).partial_moment_above(1.0) == 0.5
    assert EmpiricalSample([1.0, 2.0, 3.0]).partial_moment_above(3.0) == 0.0
    assert EmpiricalSample([1.0, 2.0, 3.0]).partial_moment_above(0.0) == 2.0


def test_prefix_sums_invariants():
    s = EmpiricalSample([5.0, -1.0, 2.5, 2.5])
    np.testing.assert_array_equal(s.values, [-1.0, 2.5, 2.5, 5.0])
    assert s.prefix_sums[0] == 0.0
    assert s.prefix_sums[-1] == 9.0
    np.testing.assert_allclose(s.prefix_sums, np.concatenate(([0.0], np.cumsum(s.values))))


def test_validation():
    with pytest.raises(EmptyInput):
        EmpiricalSample([])
    with pytest.raises(ValidationError):
        EmpiricalSample([1.0, np.nan])


@given(samples, finite)
def test_ecdf_matches_naive_count(v, x):
    s = EmpiricalSample(v)
    assert s.ecdf(x) == np.count_nonzero(v <= x) / v.size
    assert s.cdf_left(x) == np.count_nonzero(v < x) / v.size


@given(samples, finite)
def test_partial_moments_match_naive_sum(v, x):
    s = EmpiricalSample(v)
    above = np.maximum(v - x, 0.0).mean()
    below = np.maximum(x - v, 0.0).mean()
    scale = max(1.0, np.abs(v).max(), abs(x))
    assert s.partial_moment_above(x) == pytest.approx(above, abs=1e-12 * scale)
    assert s.partial_moment_below(x) == pytest.approx(below, abs=1e-12 * scale)


def test_partial_moments_accurate_for_large_n():
    gen = np.random.default_rng(3)
    v = gen.normal(1e4, 1.0, 10**4)
    s = EmpiricalSample(v)
    x = 1e4 + 0.3
    exact = float(np.sum(np.sort(np.maximum(v - x, 0.0)))) / v.size
    assert s.partial_moment_above(x) == pytest.approx(exact, abs=1e-12)


def test_resample():
    one = EmpiricalSample([4.2])
    assert one.resample(RngStream(1)).values.tolist() == [4.2]
    s = EmpiricalSample([1.0, 1.0, 2.0, 7.0])
    r = s.resample(RngStream(9, 4))
    assert r.n == s.n
    assert set(r.values.tolist()) <= {1.0, 2.0, 7.0}
    np.testing.assert_array_equal(r.values, s.resample(RngStream(9, 4)).values)
    assert np.all(np.diff(r.values) >= 0)


def test_resample_mean_concentrates():
    gen = np.random.default_rng(11)
    s = EmpiricalSample(gen.normal(size=200))
    reps = 2000
    means = np.array([s.resample(RngStream(5, r)).mean for r in range(reps)])
    sd = np.std(s.values)
    assert abs(means.mean() - s.mean) < 4 * sd / np.sqrt(s.n * reps)
