import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from proclimits.exceptions import BelowFloor, GridMismatch
from proclimits.grid import GridFunction
from proclimits.hypi import (converges_hypi, hull_product, hull_reciprocal, hypi_distance,
                             lower_hull, sup_distance, tail_inf, tail_sup, upper_hull)

M = 41
T = np.linspace(-1.0, 1.0, M)  # contains 0 at index 20
CELL = 1.0 / (M - 1)  # one grid cell after rescaling t to [0, 1]

values = arrays(np.float64, M, elements=st.floats(-5, 5))


def gf(v):
    return GridFunction(T, v)


def step(v_at_zero=1.0):
    v = (T >= 0).astype(float)
    v[M // 2] = v_at_zero
    return gf(v)


def test_hull_examples():
    s = step()
    assert lower_hull(s).values[M // 2] == 0.0
    assert upper_hull(s).values[M // 2] == 1.0
    const = gf(np.full(M, 2.5))
    np.testing.assert_array_equal(lower_hull(const).values, 2.5)
    np.testing.assert_array_equal(upper_hull(const).values, 2.5)
    lin = gf(3.0 * T)
    assert np.max(np.abs(lower_hull(lin).values - lin.values)) <= 3.0 * (T[1] - T[0]) + 1e-12


@given(values, st.integers(1, 4))
def test_hull_ordering_and_duality(v, w):
    g = gf(v)
    lo, hi = lower_hull(g, w).values, upper_hull(g, w).values
    assert np.all(lo <= v) and np.all(v <= hi)
    np.testing.assert_array_equal(hi, -lower_hull(-g, w).values)


@given(values)
def test_hull_window_monotone(v):
    g = gf(v)
    twice = lower_hull(lower_hull(g, 1), 1).values
    np.testing.assert_array_equal(twice, lower_hull(g, 2).values)
    assert np.all(lower_hull(g, 2).values <= lower_hull(g, 1).values)


def test_distance_examples():
    s = step()
    assert hypi_distance(s, s) == 0.0
    zero, one = GridFunction(np.linspace(0, 1, 11), 0.0), GridFunction(np.linspace(0, 1, 11), 1.0)
    assert hypi_distance(zero, one) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(GridMismatch):
        hypi_distance(s, zero)


def test_step_versions_agree_to_grid_resolution():
    # 1{t >= 0} and 1{t > 0} have identical exact hulls; their grid versions
    # are one-cell shifts of each other, so the surrogate sees one cell
    f, g = step(1.0), step(0.0)
    d = hypi_distance(f, g)
    assert d <= CELL + 1e-12
    assert sup_distance(f, g) == 1.0


@settings(max_examples=60)
@given(values, values, values)
def test_semimetric_axioms(a, b, c):
    f, g, h = gf(a), gf(b), gf(c)
    assert hypi_distance(f, g) == hypi_distance(g, f)
    assert hypi_distance(f, h) <= hypi_distance(f, g) + hypi_distance(g, h) + 1e-12
    assert hypi_distance(f, g) <= sup_distance(f, g) + 1e-12


@settings(max_examples=60)
@given(values, values)
def test_zero_iff_hulls_coincide(a, b):
    f, g = gf(a), gf(b)
    same = (np.array_equal(lower_hull(f).values, lower_hull(g).values)
            and np.array_equal(upper_hull(f).values, upper_hull(g).values))
    assert (hypi_distance(f, g) == 0.0) == same


def test_sup_distance():
    f = gf(np.zeros(M))
    assert sup_distance(f, f) == 0.0
    assert sup_distance(f, gf(np.full(M, -2.0))) == 2.0


def _window_spread(phi, c, w=1):
    """max over the window of |phi_i - phi_j| |c_j|: the one-cell tolerance."""
    n = phi.size
    out = np.zeros(n)
    for i in range(n):
        j = np.arange(max(0, i - w), min(n, i + w + 1))
        out[i] = np.max(np.abs(phi[i] - phi[j]) * np.abs(c[j]))
    return out


@given(st.integers(0, 2**32))
def test_hull_product_matches_direct_hulls(seed):
    gen = np.random.default_rng(seed)
    c = gen.choice([-1.0, 0.5, 2.0], size=M)
    phi = np.sin(3 * T + gen.uniform(0, 6))
    lower, upper = hull_product(gf(phi), gf(c))
    direct = gf(phi * c)
    tol = _window_spread(phi, c) + 1e-12
    assert np.all(np.abs(lower.values - lower_hull(direct).values) <= tol)
    assert np.all(np.abs(upper.values - upper_hull(direct).values) <= tol)


def test_hull_product_signs():
    c = step()
    lo, hi = hull_product(gf(np.ones(M)), c)
    np.testing.assert_array_equal(lo.values, lower_hull(c).values)
    np.testing.assert_array_equal(hi.values, upper_hull(c).values)
    lo, hi = hull_product(gf(-np.ones(M)), c)
    np.testing.assert_array_equal(lo.values, -upper_hull(c).values)
    np.testing.assert_array_equal(hi.values, -lower_hull(c).values)


@given(st.integers(0, 2**32))
def test_hull_reciprocal_matches_direct_hulls(seed):
    gen = np.random.default_rng(seed)
    c = gen.choice([1.0, 2.0, 3.5], size=M) * (1 + 0.1 * np.cos(T))
    lower, upper = hull_reciprocal(gf(c), floor=0.5)
    np.testing.assert_allclose(lower.values, lower_hull(gf(1 / c)).values, rtol=1e-15)
    np.testing.assert_allclose(upper.values, upper_hull(gf(1 / c)).values, rtol=1e-15)


def test_hull_reciprocal_examples():
    lo, hi = hull_reciprocal(gf(np.full(M, 2.0)), 1.0)
    np.testing.assert_array_equal(lo.values, 0.5)
    np.testing.assert_array_equal(hi.values, 0.5)
    c = gf(1.0 + (T >= 0))
    assert hull_reciprocal(c, 0.5)[0].values[M // 2] == 0.5
    with pytest.raises(BelowFloor):
        hull_reciprocal(c, 1.5)


def ramp(n):
    return gf(np.clip(n * T, 0.0, 1.0))


def test_ramp_to_step_diagnostics():
    target = step()
    seq = [ramp(n) for n in (1, 2, 4, 8, 16, 32, 64, 128)]
    diag = converges_hypi(seq, target)
    assert diag.monotone
    assert diag.distances[-1] <= CELL + 1e-9
    assert diag.converged
    assert min(diag.sup_distances) >= 0.9
    assert json.loads(diag.to_json()).keys() == {"distances", "converged", "tolerance"}


def test_converges_constant_and_shifted():
    target = step()
    diag = converges_hypi([target] * 3, target)
    assert diag.distances == [0.0, 0.0, 0.0] and diag.converged
    shifted = converges_hypi([target + 0.5] * 3, target)
    assert not shifted.converged


bounded = st.lists(st.floats(-10, 10), min_size=2, max_size=50)


@given(bounded, bounded)
def test_liminf_limsup_sum_chains(a, b):
    k = min(len(a), len(b))
    a, b = np.array(a[:k]), np.array(b[:k])
    s = a + b
    eps = 1e-12
    assert tail_inf(a) + tail_sup(b) + eps >= tail_inf(s) >= tail_inf(a) + tail_inf(b) - eps
    assert tail_sup(a) + tail_inf(b) - eps <= tail_sup(s) <= tail_sup(a) + tail_sup(b) + eps


@given(st.lists(st.floats(0.1, 10), min_size=2, max_size=50))
def test_liminf_of_reciprocal(a):
    a = np.array(a)
    assert tail_inf(1 / a) == 1 / tail_sup(a)


@given(bounded, st.floats(-3, 3))
def test_accumulation_points_of_products(b, a0):
    b = np.array(b)
    n = np.arange(1, b.size + 1)
    a = a0 + 1.0 / n  # converges to a0
    start = b.size // 2
    slack = np.max(np.abs(b)) * np.max(np.abs(a[start:] - a0)) + 1e-12
    assert abs(tail_inf(a * b) - tail_inf(a0 * b)) <= slack
    assert abs(tail_sup(a * b) - tail_sup(a0 * b)) <= slack
