import math

import numpy as np
import pytest

from proclimits.dist import Mixture, Normal, PointMass, Uniform, paper_mixture
from proclimits.exceptions import NotPSD, ValidationError
from proclimits.expectile import expectile_curve, ident, psi_dot_inv, psi_dot_inv_left
from proclimits.grid import AlphaGrid, GridFunction, TauGrid
from proclimits.limit import (CovarianceMatrix, bridge_covariance, brownian_bridge,
                              covariance_matrix, limit_expectile_path, limit_quantile_path,
                              sample_gaussian, z_covariance)
from proclimits.quantile import quantile_limit_transform
from proclimits.rng import RngStream

from conftest import TAU0

BERNOULLI = Mixture((0.5, 0.5), (PointMass(0.0), PointMass(1.0)))


def test_z_covariance_examples(mixture):
    g = TauGrid(0.3, 0.8, 6)
    pm = PointMass(2.0)
    c = expectile_curve(pm, g)
    assert z_covariance(pm, c, 0.3, 0.8) == 0.0
    cb = expectile_curve(BERNOULLI, TauGrid(0.5, 0.5, 1))
    assert z_covariance(BERNOULLI, cb, 0.5, 0.5) == 0.0625
    cm = expectile_curve(mixture, g)
    assert z_covariance(mixture, cm, 0.4, 0.7) == pytest.approx(z_covariance(mixture, cm, 0.7, 0.4), abs=1e-12)
    # off-grid levels are solved afresh
    assert z_covariance(mixture, cm, 0.45, 0.45) > 0
    with pytest.raises(ValidationError):
        z_covariance(mixture, cm, 0.2, 0.5)


def test_covariance_matrix_properties(mixture):
    g1 = TauGrid(0.65, 0.65, 1)
    cov1 = covariance_matrix(mixture, expectile_curve(mixture, g1))
    assert cov1.entries.shape == (1, 1) and cov1.entries[0, 0] > 0
    g = TauGrid(0.6, 0.7, 21)
    cov = covariance_matrix(mixture, expectile_curve(mixture, g))
    d = np.sqrt(np.diag(cov.entries))
    assert np.all(np.abs(cov.entries) <= np.outer(d, d) + 1e-9)
    assert cov.min_eigenvalue() >= -1e-10
    assert cov.jitter <= 1e-10 * np.max(np.diag(cov.entries))


def test_kernel_matches_brute_force_monte_carlo(mixture):
    g = TauGrid(0.6, 0.7, 3)
    c = expectile_curve(mixture, g)
    y = mixture.draw(10**6, RngStream(99))
    for i in range(3):
        for j in range(3):
            prod = ident(g.points[i], c.mu[i], y) * ident(g.points[j], c.mu[j], y)
            se = prod.std() / math.sqrt(y.size)
            assert abs(prod.mean() - z_covariance(mixture, c, g.points[i], g.points[j])) <= 4 * se


def test_kernel_matches_empirical_process_covariance():
    """Sample covariance of sqrt(n) psi_n(mu) over 2000 reps, n = 10^4."""
    m = paper_mixture()
    g = TauGrid(0.6, 0.7, 5)
    c = expectile_curve(m, g)
    cov = covariance_matrix(m, c).entries
    reps, n = 2000, 10**4
    z = np.empty((reps, g.count))
    for r in range(reps):
        y = m.draw(n, RngStream(4242, r))
        z[r] = [math.sqrt(n) * ident(t, mu, y).mean() for t, mu in zip(g.points, c.mu)]
    np.testing.assert_allclose(np.cov(z, rowvar=False), cov, rtol=0.10)


def test_kernel_continuity_for_continuous_model():
    nm = Normal(0.0, 2.0)
    gaps = []
    for count in (11, 21, 41):
        g = TauGrid(0.3, 0.7, count)
        e = covariance_matrix(nm, expectile_curve(nm, g)).entries
        gaps.append(np.max(np.abs(np.diff(e, axis=0))))
    assert gaps[0] > gaps[1] > gaps[2]


def test_not_psd():
    g = TauGrid(0.4, 0.6, 2)
    bad = CovarianceMatrix(g, np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(NotPSD):
        bad.factor
    with pytest.raises(NotPSD):
        CovarianceMatrix(g, np.array([[1.0, 0.5], [0.2, 1.0]]))


def test_sample_gaussian():
    g = TauGrid(0.4, 0.6, 3)
    zero = CovarianceMatrix(g, np.zeros((3, 3)))
    np.testing.assert_array_equal(sample_gaussian(zero, RngStream(1)).values, 0.0)
    target = np.array([[2.0, 1.0, 0.5], [1.0, 1.5, 0.7], [0.5, 0.7, 1.0]])
    cov = CovarianceMatrix(g, target)
    a = sample_gaussian(cov, RngStream(3, 7)).values
    np.testing.assert_array_equal(a, sample_gaussian(cov, RngStream(3, 7)).values)
    draws = np.array([sample_gaussian(cov, RngStream(5, r)).values for r in range(10**5)])
    np.testing.assert_allclose(np.cov(draws, rowvar=False), target, rtol=0.05)


def test_brownian_bridge():
    g = AlphaGrid(0.25, 0.75, 3)
    bc = bridge_covariance(g).entries
    np.testing.assert_allclose(np.diag(bc), g.points * (1 - g.points), rtol=1e-15)
    assert bc[0, 2] == 0.0625
    paths = np.array([brownian_bridge(g, RngStream(8, r)).values for r in range(10**5)])
    np.testing.assert_allclose(np.cov(paths, rowvar=False), bc, rtol=0.05)
    assert np.all(np.abs(paths.mean(axis=0)) < 4 * np.sqrt(np.diag(bc) / 10**5))


def test_limit_expectile_path_continuity_and_linearity():
    nm = Normal(0.0, 1.0)
    incs = []
    for count in (51, 201):
        g = TauGrid(0.3, 0.7, count)
        p = limit_expectile_path(nm, expectile_curve(nm, g), RngStream(12))
        incs.append(np.max(np.abs(np.diff(p.values))))
    assert incs[1] < incs[0]
    m = paper_mixture()
    g = TauGrid(0.6, 0.7, 11)
    c = expectile_curve(m, g)
    cov = covariance_matrix(m, c)
    z = sample_gaussian(cov, RngStream(1))
    np.testing.assert_allclose(psi_dot_inv(m, c, 2 * z).values, 2 * psi_dot_inv(m, c, z).values, rtol=1e-15)
    np.testing.assert_array_equal(limit_expectile_path(m, c, RngStream(1), cov=cov).values,
                                  psi_dot_inv(m, c, z).values)


def test_limit_expectile_jump_factor_at_atom():
    m = paper_mixture()
    g = TauGrid(TAU0, 0.7, 2)
    c = expectile_curve(m, g)
    z = sample_gaussian(covariance_matrix(m, c), RngStream(2))
    right = psi_dot_inv(m, c, z).values[0]
    left = psi_dot_inv_left(m, c, z).values[0]
    F, F_left = 0.9 * 0.5987063256829237 + 0.1, 0.9 * 0.5987063256829237
    expected = (TAU0 + (1 - 2 * TAU0) * F_left) / (TAU0 + (1 - 2 * TAU0) * F)
    assert right / left == pytest.approx(expected, rel=1e-9)


def test_limit_quantile_path():
    g = AlphaGrid(0.25, 0.75, 11)
    np.testing.assert_allclose(limit_quantile_path(Uniform(0.0, 1.0), g, RngStream(6)).values,
                               brownian_bridge(g, RngStream(6)).values, rtol=1e-15)
    g1 = AlphaGrid(0.5, 0.5, 1)
    vals = np.array([limit_quantile_path(Normal(0.0, 4.0), g1, RngStream(10, r)).values[0]
                     for r in range(20000)])
    oracle = 0.25 * (4 * math.sqrt(2 * math.pi)) ** 2
    assert oracle == pytest.approx(25.13, abs=0.01)
    assert np.mean(vals**2) == pytest.approx(oracle, rel=0.05)
    zero = quantile_limit_transform(Normal(0.0, 4.0), g, GridFunction(g.points, 0.0))
    np.testing.assert_array_equal(zero.values, 0.0)


def test_reproducible_from_stream():
    m = paper_mixture()
    c = expectile_curve(m, TauGrid(0.6, 0.7, 21))
    a = limit_expectile_path(m, c, RngStream(2**63, 5)).values
    b = limit_expectile_path(m, c, RngStream(2**63, 5)).values
    np.testing.assert_array_equal(a, b)
