"""Gaussian limit processes of the expectile and quantile processes.

The expectile limit is psi_dot_inv(Z), where Z is centered Gaussian with
covariance E[I_tau(mu_tau, Y) I_tau'(mu_tau', Y)]. The quantile limit is
V / f(q) for a Brownian bridge V.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import ndtr

from .dist import DistributionModel, Mixture, Normal, PointMass, Uniform
from .exceptions import NotPSD, ValidationError
from .expectile import ExpectileCurve, psi_dot_inv
from .grid import GridFunction, LevelGrid
from .quantile import quantile_limit_transform
from .rng import as_generator

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _raw_moments(model: DistributionModel, a: np.ndarray, b: np.ndarray):
    """(int 1, int y, int y^2) dF over the half-open intervals (a, b]."""
    if isinstance(model, Mixture):
        out = [np.zeros(np.shape(a)) for _ in range(3)]
        for w, comp in zip(model.weights, model.components):
            if w:
                parts = _raw_moments(comp, a, b)
                out = [o + w * p for o, p in zip(out, parts)]
        return out
    if isinstance(model, PointMass):
        c = model.location
        inside = ((a < c) & (c <= b)).astype(float)
        return inside, inside * c, inside * c * c
    if isinstance(model, Uniform):
        lo = np.clip(a, model.lo, model.hi)
        hi = np.clip(b, model.lo, model.hi)
        d = 1.0 / (model.hi - model.lo)
        return d * (hi - lo), d * (hi**2 - lo**2) / 2.0, d * (hi**3 - lo**3) / 3.0
    if isinstance(model, Normal):
        m, s = model.loc, model.scale
        za = (a - m) / s
        zb = (b - m) / s
        phi_a = np.where(np.isfinite(za), np.exp(-0.5 * np.where(np.isfinite(za), za, 0.0) ** 2), 0.0) * _INV_SQRT_2PI
        phi_b = np.where(np.isfinite(zb), np.exp(-0.5 * np.where(np.isfinite(zb), zb, 0.0) ** 2), 0.0) * _INV_SQRT_2PI
        za_phi = np.where(np.isfinite(za), za, 0.0) * phi_a
        zb_phi = np.where(np.isfinite(zb), zb, 0.0) * phi_b
        p = ndtr(zb) - ndtr(za)
        e1 = phi_a - phi_b  # int z phi
        e2 = p + za_phi - zb_phi  # int z^2 phi
        return p, m * p + s * e1, m * m * p + 2.0 * m * s * e1 + s * s * e2
    raise ValidationError(f"no closed-form moments for {type(model).__name__}")


def _kernel(model: DistributionModel, tau1, mu1, tau2, mu2):
    """E[I_tau1(mu1, Y) I_tau2(mu2, Y)] by exact piecewise integration.

    On each interval between the two expectiles the product is
    c * (y - mu1)(y - mu2) for a constant c determined by which side of each
    expectile the interval lies on.
    """
    tau1, mu1, tau2, mu2 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (tau1, mu1, tau2, mu2)))
    first_low = mu1 <= mu2
    lo = np.where(first_low, mu1, mu2)
    hi = np.where(first_low, mu2, mu1)
    tau_lo = np.where(first_low, tau1, tau2)
    tau_hi = np.where(first_low, tau2, tau1)
    inf = np.full(lo.shape, np.inf)
    pieces = (
        (-inf, lo, (1.0 - tau1) * (1.0 - tau2)),
        (lo, hi, tau_lo * (1.0 - tau_hi)),
        (hi, inf, tau1 * tau2),
    )
    total = np.zeros(lo.shape)
    for a, b, coef in pieces:
        m0, m1, m2 = _raw_moments(model, a, b)
        # int (y - mu1)(y - mu2) dF
        total = total + coef * (m2 - (mu1 + mu2) * m1 + mu1 * mu2 * m0)
    return total


def z_covariance(model: DistributionModel, curve: ExpectileCurve, tau: float, tau2: float) -> float:
    """cov(Z_tau, Z_tau2) for the expectile limit.

    ``tau`` and ``tau2`` need not be grid points; the expectiles are taken from
    the curve when they are and solved afresh otherwise.
    """
    from .expectile import expectile

    def mu_at(level):
        idx = curve.grid.nearest_index(level)
        if abs(curve.points[idx] - level) <= 1e-14:
            return curve.mu[idx]
        return expectile(level, model)

    lo, hi = curve.grid.lo, curve.grid.hi
    for level in (tau, tau2):
        if not lo - 1e-12 <= level <= hi + 1e-12:
            raise ValidationError(f"level {level} lies outside the curve's grid [{lo}, {hi}]")
    return float(_kernel(model, tau, mu_at(tau), tau2, mu_at(tau2)))


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Covariance of a Gaussian process on a level grid.

    ``jitter`` records the multiple of the identity added before factorizing.
    """

    grid: LevelGrid
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        m = self.grid.count
        if e.shape != (m, m):
            raise ValidationError(f"covariance must be {m}x{m}, got {e.shape}")
        if not np.all(np.isfinite(e)):
            raise NotPSD("covariance has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(e))) if e.size else 1.0)
        if np.max(np.abs(e - e.T)) > 1e-12 * scale:
            raise NotPSD("covariance matrix is not symmetric")
        e = 0.5 * (e + e.T)
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    @property
    def jitter(self) -> float:
        m = self.grid.count
        return 1e-12 * float(np.trace(self.entries)) / m

    @cached_property
    def factor(self) -> np.ndarray:
        """L with L L^T = entries + jitter * I, from a clipped eigendecomposition."""
        m = self.grid.count
        a = self.entries + self.jitter * np.eye(m)
        w, v = np.linalg.eigh(a)
        max_diag = float(np.max(np.diag(a))) if m else 0.0
        if w.size and w.min() < -1e-10 * max(max_diag, 1.0):
            raise NotPSD(f"smallest eigenvalue {w.min():.3g} is too negative")
        return v * np.sqrt(np.clip(w, 0.0, None))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries).min())


def covariance_matrix(model: DistributionModel, curve: ExpectileCurve, grid: LevelGrid | None = None) -> CovarianceMatrix:
    """Covariance of Z on the curve's grid."""
    grid = curve.grid if grid is None else grid
    if grid != curve.grid and not np.allclose(grid.points, curve.points, rtol=0, atol=1e-14):
        raise ValidationError("grid must match the curve's grid")
    tau = curve.points
    mu = curve.mu
    t1, t2 = np.meshgrid(tau, tau, indexing="ij")
    m1, m2 = np.meshgrid(mu, mu, indexing="ij")
    cov = CovarianceMatrix(curve.grid, _kernel(model, t1, m1, t2, m2))
    cov.factor  # validates positive semidefiniteness now rather than at first draw
    return cov


def sample_gaussian(cov: CovarianceMatrix, rng) -> GridFunction:
    """One centered Gaussian path with covariance ``cov``."""
    gen = as_generator(rng)
    z = gen.standard_normal(cov.grid.count)
    return GridFunction(cov.grid.points, cov.factor @ z, label=cov.grid.label)


def bridge_covariance(grid: LevelGrid) -> CovarianceMatrix:
    s, t = np.meshgrid(grid.points, grid.points, indexing="ij")
    return CovarianceMatrix(grid, np.minimum(s, t) - s * t)


def brownian_bridge(grid: LevelGrid, rng) -> GridFunction:
    """Brownian bridge on [0, 1] observed at the grid levels.

    Built as W(t) - t W(1) from independent Brownian increments, which is exact
    at the grid points and avoids factorizing a nearly singular matrix.
    """
    gen = as_generator(rng)
    t = grid.points
    knots = np.concatenate(([0.0], t, [1.0]))
    incr = gen.standard_normal(knots.size - 1) * np.sqrt(np.diff(knots))
    w = np.cumsum(incr)
    return GridFunction(t, w[:-1] - t * w[-1], label=grid.label)


def limit_expectile_path(model: DistributionModel, curve: ExpectileCurve, rng,
                         cov: CovarianceMatrix | None = None, side: str = "right") -> GridFunction:
    """One draw of psi_dot_inv(Z) on the curve's grid."""
    if cov is None:
        cov = covariance_matrix(model, curve)
    z = sample_gaussian(cov, rng)
    return psi_dot_inv(model, curve, z, side=side)


def limit_quantile_path(model: DistributionModel, grid: LevelGrid, rng, side: str = "left") -> GridFunction:
    """One draw of V / f(q) for a Brownian bridge V."""
    return quantile_limit_transform(model, grid, brownian_bridge(grid, rng), side=side)


__all__ = [
    "CovarianceMatrix",
    "z_covariance",
    "covariance_matrix",
    "sample_gaussian",
    "bridge_covariance",
    "brownian_bridge",
    "limit_expectile_path",
    "limit_quantile_path",
]
