"""Seeded, thread-parallel Monte Carlo over replications.

Replication r always draws from stream index r of the master seed and writes
into slot r of a preallocated array, so results do not depend on the thread
count or on scheduling order.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .dist import DistributionModel, resolve_model
from .empirical import EmpiricalSample
from .exceptions import NumericalError, ValidationError
from .expectile import expectile_curve, expectile_process
from .grid import AlphaGrid, LevelGrid, TauGrid
from .limit import covariance_matrix, limit_expectile_path, limit_quantile_path
from .quantile import quantile_curve, quantile_process
from .rng import RngStream
from .stats import STATISTICS, statistic

PROCESSES = ("expectile", "quantile")
MODES = ("sampling", "bootstrap", "limit")
DESK_REPS = 500
FULL_SCALE_REPS = 10_000

# stream index reserved for drawing a bootstrap input sample from a model;
# far above any replication index
INPUT_STREAM = 2**62


@dataclass
class McRunConfig:
    """Configuration of one Monte Carlo run.

    ``model`` is anything :func:`resolve_model` accepts: a preset name, a JSON
    string or path, a dict, or a model instance.
    """

    model: object = "paper-mixture"
    n: int = 10_000
    reps: int = DESK_REPS
    grid: LevelGrid = field(default_factory=lambda: LevelGrid(0.6, 0.7, 201))
    statistic: str = "supnorm"
    process: str = "expectile"
    mode: str = "sampling"
    master_seed: int = 0
    threads: int = 1
    full_scale: bool = False

    def validate(self) -> McRunConfig:
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n}")
        if int(self.reps) != self.reps or self.reps < 1:
            raise ValidationError(f"reps must be a positive integer, got {self.reps}")
        if int(self.threads) != self.threads or self.threads < 1:
            raise ValidationError(f"threads must be a positive integer, got {self.threads}")
        if self.statistic not in STATISTICS:
            raise ValidationError(f"statistic must be one of {STATISTICS}, got {self.statistic!r}")
        if self.process not in PROCESSES:
            raise ValidationError(f"process must be one of {PROCESSES}, got {self.process!r}")
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not isinstance(self.grid, LevelGrid):
            raise ValidationError("grid must be a LevelGrid")
        RngStream(self.master_seed)  # range check
        return self

    @property
    def level_grid(self) -> LevelGrid:
        cls = TauGrid if self.process == "expectile" else AlphaGrid
        return cls(self.grid.lo, self.grid.hi, self.grid.count)

    def resolved_model(self) -> DistributionModel:
        return resolve_model(self.model)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["grid"] = {"lo": self.grid.lo, "hi": self.grid.hi, "count": self.grid.count}
        m = self.model
        d["model"] = m.to_dict() if isinstance(m, DistributionModel) else m
        return d


@dataclass
class McResult:
    config: McRunConfig
    statistics: np.ndarray
    wall_time: float = 0.0
    stream_indices: np.ndarray | None = None

    def __post_init__(self):
        self.statistics = np.asarray(self.statistics, dtype=float)
        if self.stream_indices is None:
            self.stream_indices = np.arange(self.statistics.size)
        if self.statistics.size != self.config.reps:
            raise ValidationError("one statistic per replication expected")

    def __len__(self):
        return self.statistics.size

    def metadata_json(self) -> str:
        return json.dumps({"config": self.config.to_dict(), "wall_time": self.wall_time})


def _run_reps(config: McRunConfig, one_rep) -> McResult:
    """Evaluate ``one_rep(generator) -> float`` for every replication."""
    out = np.empty(config.reps)

    def task(r):
        try:
            out[r] = one_rep(RngStream(config.master_seed, r).generator())
        except NumericalError as exc:
            raise type(exc)(f"replication {r}: {exc}") from exc

    start = time.perf_counter()
    if config.threads == 1:
        for r in range(config.reps):
            task(r)
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            # list() re-raises the first failure
            list(pool.map(task, range(config.reps)))
    return McResult(config, out, time.perf_counter() - start)


def _require_mode(config: McRunConfig, mode: str):
    config.validate()
    if config.mode != mode:
        raise ValidationError(f"config.mode is {config.mode!r}, expected {mode!r}")


def run_sampling_mc(config: McRunConfig) -> McResult:
    """Statistic of the standardized process of fresh samples from the model."""
    _require_mode(config, "sampling")
    model = config.resolved_model()
    grid = config.level_grid
    stat = config.statistic
    if config.process == "expectile":
        truth = expectile_curve(model, grid)

        def one_rep(gen):
            return statistic(stat, expectile_process(model.sample(config.n, gen), model, grid, truth))
    else:
        truth = quantile_curve(model, grid)

        def one_rep(gen):
            return statistic(stat, quantile_process(model.sample(config.n, gen), model, grid, truth))

    return _run_reps(config, one_rep)


def draw_input_sample(config: McRunConfig) -> EmpiricalSample:
    """The sample a bootstrap run resamples when none is supplied."""
    gen = RngStream(config.master_seed, INPUT_STREAM).generator()
    return config.resolved_model().sample(config.n, gen)


def run_bootstrap_mc(config: McRunConfig, input_sample: EmpiricalSample | None = None) -> McResult:
    """Statistic of sqrt(n) (curve of resample - curve of input sample).

    The bootstrap sample size equals the input sample size.
    """
    _require_mode(config, "bootstrap")
    if input_sample is None:
        input_sample = draw_input_sample(config)
    elif not isinstance(input_sample, EmpiricalSample):
        input_sample = EmpiricalSample(input_sample)
    grid = config.level_grid
    stat = config.statistic
    # the process functions only use the model through the centering curve,
    # which is supplied explicitly here
    if config.process == "expectile":
        center = expectile_curve(input_sample, grid)

        def one_rep(gen):
            return statistic(stat, expectile_process(input_sample.resample(gen), None, grid, center))
    else:
        center = quantile_curve(input_sample, grid)

        def one_rep(gen):
            return statistic(stat, quantile_process(input_sample.resample(gen), None, grid, center))

    return _run_reps(config, one_rep)


def run_limit_mc(config: McRunConfig) -> McResult:
    """Statistic of draws from the Gaussian limit of the standardized process."""
    _require_mode(config, "limit")
    model = config.resolved_model()
    grid = config.level_grid
    stat = config.statistic
    if config.process == "expectile":
        curve = expectile_curve(model, grid)
        cov = covariance_matrix(model, curve)

        def one_rep(gen):
            return statistic(stat, limit_expectile_path(model, curve, gen, cov=cov))
    else:

        def one_rep(gen):
            return statistic(stat, limit_quantile_path(model, grid, gen))

    return _run_reps(config, one_rep)


def run_mc(config: McRunConfig, input_sample: EmpiricalSample | None = None) -> McResult:
    """Dispatch on ``config.mode``."""
    config.validate()
    if config.mode == "sampling":
        return run_sampling_mc(config)
    if config.mode == "bootstrap":
        return run_bootstrap_mc(config, input_sample)
    return run_limit_mc(config)


__all__ = [
    "McRunConfig",
    "McResult",
    "run_sampling_mc",
    "run_bootstrap_mc",
    "run_limit_mc",
    "run_mc",
    "draw_input_sample",
    "DESK_REPS",
    "FULL_SCALE_REPS",
]
