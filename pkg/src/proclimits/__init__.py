"""Empirical expectile and quantile processes, their bootstrap and Gaussian limits."""

from .dist import Mixture, Normal, PointMass, Uniform, paper_mixture, resolve_model
from .empirical import EmpiricalSample
from .estimators import ExpectileCurveEstimator, QuantileCurveEstimator
from .exceptions import NumericalError, ProclimitsError, ValidationError
from .expectile import (ExpectileCurve, expectile, expectile_curve, expectile_level,
                        expectile_process, ident, ident_dist, psi_dot_inv)
from .grid import AlphaGrid, GridFunction, LevelGrid, TauGrid
from .hypi import hypi_distance, lower_hull, sup_distance, upper_hull
from .limit import covariance_matrix, z_covariance
from .montecarlo import McResult, McRunConfig, run_bootstrap_mc, run_limit_mc, run_sampling_mc
from .quantile import empirical_quantile, quantile_curve, quantile_process
from .rng import RngStream
from .stats import kde, ks_two_sample, sup_norm, weighted_lp

__version__ = "0.1.0"

__all__ = [
    "AlphaGrid", "EmpiricalSample", "ExpectileCurve", "ExpectileCurveEstimator", "GridFunction",
    "LevelGrid", "McResult", "McRunConfig", "Mixture", "Normal", "NumericalError", "PointMass",
    "ProclimitsError", "QuantileCurveEstimator", "RngStream", "TauGrid", "Uniform",
    "ValidationError", "covariance_matrix", "empirical_quantile", "expectile", "expectile_curve",
    "expectile_level", "expectile_process", "hypi_distance", "ident", "ident_dist", "kde",
    "ks_two_sample", "lower_hull", "paper_mixture", "psi_dot_inv", "quantile_curve",
    "quantile_process", "resolve_model", "run_bootstrap_mc", "run_limit_mc", "run_sampling_mc",
    "sup_distance", "sup_norm", "upper_hull", "weighted_lp", "z_covariance",
]
