"""Expectiles: identification function, exact and bisection solvers, curves,
standardized processes and the limit transform.

Every routine that takes a law ``F`` accepts either an analytic
:class:`~proclimits.dist.DistributionModel` or an
:class:`~proclimits.empirical.EmpiricalSample`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .dist import DistributionModel
from .empirical import EmpiricalSample
from .exceptions import GridMismatch, NoConvergence, ValidationError
from .grid import GridFunction, LevelGrid, TauGrid

_GL_NODES, _GL_WEIGHTS = leggauss(64)


def ident(tau, x, y):
    """Identification function: tau (y - x) if y >= x, else -(1 - tau)(x - y)."""
    tau = np.asarray(tau, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    res = np.where(y >= x, tau * (y - x), -(1.0 - tau) * (x - y))
    return float(res) if res.ndim == 0 else res


def ident_dist(tau, x, F):
    """Expected identification function E[I_tau(x, Y)] for Y ~ F.

    Uses ``tau * E(Y - x)^+ - (1 - tau) * E(x - Y)^+``, which is continuous
    and strictly decreasing in ``x``.
    """
    tau = np.asarray(tau, dtype=float)
    above = F.partial_expectation_above(x)
    below = F.partial_expectation_below(x)
    res = tau * above - (1.0 - tau) * below
    return float(res) if np.ndim(res) == 0 else res


def _check_tau(tau):
    t = np.asarray(tau, dtype=float)
    if np.any(~(t > 0.0)) or np.any(~(t < 1.0)):
        raise ValidationError(f"tau must lie strictly inside (0, 1), got {tau!r}")
    return t


def _solve_empirical(sample: EmpiricalSample, tau: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Exact root of ident_dist(tau, x, F_n) = target.

    The map is piecewise linear with kinks at the data. Its value at the k-th
    order statistic is nonincreasing in k, so a binary search (vectorized over
    tau) locates the kink interval and the linear piece is solved in closed form.
    """
    v = sample.values
    n = sample.n
    hi, lo = sample.prefix_pair()
    total_hi, total_lo = hi[-1], lo[-1]

    def at_order_stat(k):
        x = v[k]
        tail = (total_hi - hi[k]) + (total_lo - lo[k])
        head = hi[k] + lo[k]
        above = (tail - (n - k) * x) / n
        below = (k * x - head) / n
        return tau * above - (1.0 - tau) * below

    # k = #{i : g(v[i]) > target}; invariant g(v[left-1]) > target >= g(v[right])
    left = np.zeros(tau.shape, dtype=np.int64)
    right = np.full(tau.shape, n, dtype=np.int64)
    while np.any(left < right):
        mid = (left + right) // 2
        mid_c = np.minimum(mid, n - 1)
        gt = at_order_stat(mid_c) > target
        active = left < right
        left = np.where(active & gt, mid + 1, left)
        right = np.where(active & ~gt, mid, right)
    k = left
    head = hi[k] + lo[k]
    tail = (total_hi - hi[k]) + (total_lo - lo[k])
    num = tau * tail + (1.0 - tau) * head - n * target
    den = tau * (n - k) + (1.0 - tau) * k
    x = num / den
    # the closed form is exact on [v[k-1], v[k]]; clamp rounding spill-over
    lower = np.where(k > 0, v[np.maximum(k - 1, 0)], -np.inf)
    upper = np.where(k < n, v[np.minimum(k, n - 1)], np.inf)
    return np.clip(x, lower, upper)


def _solve_model(model: DistributionModel, tau: np.ndarray, target: np.ndarray, xtol: float = 1e-12) -> np.ndarray:
    """Vectorized bisection for ident_dist(tau, x, F) = target."""
    center = model.mean
    half = 8.0 * max(model.sd, 1e-3 * max(1.0, abs(center)), 1e-12)

    def g(x):
        return tau * model._pe_above(x) - (1.0 - tau) * model._pe_below(x) - target

    lo = np.full(tau.shape, center - half)
    hi = np.full(tau.shape, center + half)
    for _ in range(201):
        bad = g(lo) < 0
        if not bad.any():
            break
        lo = np.where(bad, center - 2.0 * (center - lo), lo)
    else:
        raise NoConvergence("bracket expansion exceeded 200 doublings (lower end)")
    for _ in range(201):
        bad = g(hi) > 0
        if not bad.any():
            break
        hi = np.where(bad, center + 2.0 * (hi - center), hi)
    else:
        raise NoConvergence("bracket expansion exceeded 200 doublings (upper end)")
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        active = (hi - lo) > xtol * np.maximum(1.0, np.abs(mid))
        active &= (mid > lo) & (mid < hi)
        if not active.any():
            break
        pos = g(mid) > 0
        lo = np.where(active & pos, mid, lo)
        hi = np.where(active & ~pos, mid, hi)
    best = 0.5 * (lo + hi)
    # a root sitting on a kink (e.g. an atom) is returned exactly
    best_g = np.abs(g(best))
    for k in model.kinks():
        inside = (lo <= k) & (k <= hi)
        if inside.any():
            gk = np.abs(g(np.full(best.shape, k)))
            take = inside & (gk <= best_g)
            best = np.where(take, k, best)
            best_g = np.where(take, gk, best_g)
    return best


def ident_inverse(tau, target, F):
    """Solve ident_dist(tau, x, F) = target for x (vectorized in tau and target).

    With ``target = 0`` this is the expectile; with ``target = -t * nu`` it
    evaluates the inverse of the map x -> -I_tau(x, F) at ``t * nu``.
    """
    t = _check_tau(tau)
    tgt = np.asarray(target, dtype=float)
    t, tgt = np.broadcast_arrays(t, tgt)
    shape = t.shape
    t = np.atleast_1d(t).astype(float)
    tgt = np.atleast_1d(tgt).astype(float)
    if isinstance(F, EmpiricalSample):
        res = _solve_empirical(F, t, tgt)
    elif isinstance(F, DistributionModel):
        res = _solve_model(F, t, tgt)
    else:
        raise ValidationError(f"expected a distribution model or an empirical sample, got {type(F).__name__}")
    res = res.reshape(shape)
    return float(res) if res.ndim == 0 else res


def expectile(tau, F):
    """The tau-expectile of F, the unique zero of x -> E[I_tau(x, Y)]."""
    return ident_inverse(tau, 0.0, F)


def expectile_level(x, F) -> float:
    """The level tau whose expectile equals ``x``.

    ident_dist is affine in tau, so this is closed form:
    tau = E(x - Y)^+ / (E(Y - x)^+ + E(x - Y)^+).
    """
    above = F.partial_expectation_above(x)
    below = F.partial_expectation_below(x)
    denom = above + below
    if not denom > 0:
        raise ValidationError("the law is degenerate at x; every level has expectile x")
    return float(below / denom)


@dataclass(frozen=True, eq=False)
class ExpectileCurve:
    """Expectiles of one law on a level grid."""

    grid: LevelGrid
    mu: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        if mu.shape != (self.grid.count,):
            raise ValidationError("curve length must match the grid")
        mu.flags.writeable = False
        object.__setattr__(self, "mu", mu)

    @property
    def points(self) -> np.ndarray:
        return self.grid.points

    def as_function(self) -> GridFunction:
        return GridFunction(self.grid.points, self.mu, label="tau")

    def lipschitz_bound(self, F) -> float:
        """Upper bound for |mu_tau - mu_tau'| / |tau - tau'| on the grid interval."""
        a = min(self.grid.lo, 1.0 - self.grid.hi)
        abs_mean = F.partial_expectation_above(0.0) + F.partial_expectation_below(0.0)
        return (max(abs(self.mu[0]), abs(self.mu[-1])) + abs_mean) / a


@lru_cache(maxsize=64)
def _model_curve(model: DistributionModel, grid: LevelGrid) -> np.ndarray:
    mu = ident_inverse(grid.points, 0.0, model)
    mu = np.atleast_1d(mu)
    mu.flags.writeable = False
    return mu


def expectile_curve(F, grid: LevelGrid) -> ExpectileCurve:
    """Expectiles of F at every grid level."""
    if isinstance(F, DistributionModel):
        return ExpectileCurve(grid, _model_curve(F, grid))
    return ExpectileCurve(grid, np.atleast_1d(ident_inverse(grid.points, 0.0, F)))


def expectile_process(sample: EmpiricalSample, model: DistributionModel, grid: LevelGrid,
                      true_curve: ExpectileCurve | None = None) -> GridFunction:
    """Standardized expectile process sqrt(n) (mu_hat - mu) on the grid."""
    if true_curve is None:
        true_curve = expectile_curve(model, grid)
    emp = np.atleast_1d(ident_inverse(grid.points, 0.0, sample))
    return GridFunction(grid.points, np.sqrt(sample.n) * (emp - true_curve.mu), label="tau")


def _integrate_smooth(func, a: float, b: float, tol: float = 1e-12, depth: int = 0) -> float:
    # adaptive composite 64-point Gauss-Legendre
    half, mid = 0.5 * (b - a), 0.5 * (a + b)
    whole = half * float(np.dot(_GL_WEIGHTS, func(mid + half * _GL_NODES)))
    if depth >= 12:
        return whole
    q = 0.5 * half
    left = q * float(np.dot(_GL_WEIGHTS, func(a + q + q * _GL_NODES)))
    right = q * float(np.dot(_GL_WEIGHTS, func(mid + q + q * _GL_NODES)))
    if abs(left + right - whole) <= tol * max(1.0, abs(whole)):
        return left + right
    return (_integrate_smooth(func, a, mid, tol, depth + 1)
            + _integrate_smooth(func, mid, b, tol, depth + 1))


def _integrate_cdf(F, a: float, b: float) -> float:
    """Integral of F over [a, b], a < b."""
    if isinstance(F, EmpiricalSample):
        return F.integrate_cdf(a, b)
    knots = [a] + [k for k in F.kinks() if a < k < b] + [b]
    return sum(_integrate_smooth(F._cdf, lo, hi) for lo, hi in zip(knots[:-1], knots[1:]))


def increment_factor(tau: float, x1: float, x2: float, F) -> float:
    """tau + (1 - 2 tau) * int_0^1 F(x2 + s (x1 - x2)) ds.

    Satisfies ident_dist(tau, x1) - ident_dist(tau, x2) = (x2 - x1) * factor.
    The integral is exact for empirical laws and split at atoms and kinks for
    analytic ones.
    """
    tau = float(tau)
    x1, x2 = float(x1), float(x2)
    if x1 == x2:
        avg = F.cdf(x2)
    else:
        lo, hi = min(x1, x2), max(x1, x2)
        avg = _integrate_cdf(F, lo, hi) / (hi - lo)
    return tau + (1.0 - 2.0 * tau) * float(avg)


def psi0_inverse(F, grid: LevelGrid, nu: GridFunction, t: float = 1.0) -> GridFunction:
    """Pointwise x with -ident_dist(tau, x, F) = t * nu(tau)."""
    if not np.allclose(nu.points, grid.points, rtol=0, atol=1e-12):
        raise GridMismatch("nu must live on the level grid")
    x = ident_inverse(grid.points, -t * nu.values, F)
    return GridFunction(grid.points, np.atleast_1d(x), label="tau")


def _denominator(model, curve: ExpectileCurve, side: str) -> np.ndarray:
    tau = curve.points
    if side == "right":
        Fmu = model.cdf(curve.mu)
    elif side == "left":
        Fmu = model.cdf_left(curve.mu)
    else:
        raise ValidationError(f"side must be 'right' or 'left', got {side!r}")
    return tau + (1.0 - 2.0 * tau) * np.asarray(Fmu)


def psi_dot_inv(model, curve: ExpectileCurve, phi: GridFunction, side: str = "right") -> GridFunction:
    """Divide phi pointwise by tau + (1 - 2 tau) F(mu_tau).

    ``side="left"`` uses F(mu_tau-) instead, which gives the other branch of
    the limit's hulls where F jumps at mu_tau.
    """
    if not np.allclose(phi.points, curve.points, rtol=0, atol=1e-12):
        raise GridMismatch("phi and the expectile curve must share a grid")
    return phi.with_values(phi.values / _denominator(model, curve, side))


def psi_dot_inv_left(model, curve: ExpectileCurve, phi: GridFunction) -> GridFunction:
    return psi_dot_inv(model, curve, phi, side="left")


__all__ = [
    "TauGrid",
    "ExpectileCurve",
    "ident",
    "ident_dist",
    "ident_inverse",
    "expectile",
    "expectile_level",
    "expectile_curve",
    "expectile_process",
    "increment_factor",
    "psi0_inverse",
    "psi_dot_inv",
    "psi_dot_inv_left",
]
