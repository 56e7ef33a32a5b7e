"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
The environment variable PROCLIMITS_SEED, when set, overrides ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import io as pio
from .dist import PRESETS, resolve_model
from .exceptions import NumericalError, ValidationError
from .expectile import expectile_curve, expectile_level, expectile_process
from .grid import AlphaGrid, LevelGrid, TauGrid
from .hypi import hypi_distance, sup_distance
from .montecarlo import (DESK_REPS, FULL_SCALE_REPS, McRunConfig, run_bootstrap_mc,
                         run_limit_mc, run_sampling_mc)
from .quantile import check_quantile_conditions, quantile_curve, quantile_process
from .rng import RngStream
from .stats import STATISTICS, ecdf, kde
from .svg import emit_svg

DEFAULT_GRIDS = {"expectile": "0.6:0.7:201", "quantile": "0.25:0.75:101"}
SEED_ENV = "PROCLIMITS_SEED"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _common(with_mc: bool = True) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--model", default="paper-mixture",
                   help=f"preset ({', '.join(PRESETS)}) or JSON file (default: paper-mixture)")
    p.add_argument("--grid", help="level grid lo:hi:count (default depends on the process)")
    p.add_argument("--seed", type=int, default=0, help=f"master seed; {SEED_ENV} overrides it")
    p.add_argument("--out", help="output path (default: stdout)")
    if with_mc:
        p.add_argument("--n", type=int, default=10_000, help="sample size")
        p.add_argument("--reps", type=int, help=f"replications (default {DESK_REPS}, "
                                                 f"{FULL_SCALE_REPS} with --full-scale)")
        p.add_argument("--stat", choices=STATISTICS, default="supnorm")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--full-scale", action="store_true",
                       help="use the long-running replication count")
        p.add_argument("--process", choices=("expectile", "quantile"), default="expectile")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="proclimits", description="Expectile and quantile process simulations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    mc = _common()
    plain = _common(with_mc=False)

    p = sub.add_parser("expectile", parents=[plain], help="expectile curve of a model or sample")
    p.add_argument("--sample", help="CSV sample; use its empirical law instead of --model")
    p.add_argument("--level-of", type=float, metavar="X",
                   help="print the level whose expectile is X instead of a curve")

    p = sub.add_parser("quantile", parents=[plain], help="quantile curve of a model or sample")
    p.add_argument("--sample", help="CSV sample; use its empirical law instead of --model")

    p = sub.add_parser("process", parents=[mc], help="one standardized process path")
    p.add_argument("--rep", type=int, default=0, help="stream index of the sample (default 0)")

    p = sub.add_parser("mc", parents=[mc], help="Monte Carlo statistics")
    p.add_argument("--mode", choices=("sampling", "bootstrap", "limit"), default="sampling")
    p.add_argument("--input", help="bootstrap input sample CSV")

    p = sub.add_parser("bootstrap", parents=[mc], help="bootstrap statistics")
    p.add_argument("--input", help="input sample CSV (default: drawn from --model)")

    sub.add_parser("limit", parents=[mc], help="statistics of the Gaussian limit")

    p = sub.add_parser("hypi-dist", help="grid hypi distance of two grid-function CSVs")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("plot", parents=[mc], help="SVG figures")
    p.add_argument("kind", choices=("paths", "ecdf", "kde", "curve"))
    p.add_argument("inputs", nargs="*", help="CSV files (ecdf/kde: rep,statistic; curve: level,value)")
    p.add_argument("--paths", type=int, default=4, help="number of paths for kind=paths")
    return parser


def _seed(args) -> int:
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return args.seed


def _grid(args, process: str) -> LevelGrid:
    cls = TauGrid if process == "expectile" else AlphaGrid
    g = LevelGrid.parse(args.grid or DEFAULT_GRIDS[process])
    return cls(g.lo, g.hi, g.count)


def _config(args, mode: str) -> McRunConfig:
    reps = args.reps
    if reps is None:
        reps = FULL_SCALE_REPS if args.full_scale else DESK_REPS
    return McRunConfig(
        model=args.model, n=args.n, reps=reps, grid=_grid(args, args.process),
        statistic=args.stat, process=args.process, mode=mode, master_seed=_seed(args),
        threads=args.threads, full_scale=args.full_scale,
    ).validate()


def _warn_conditions(cfg: McRunConfig):
    """The quantile limit needs a density bounded away from zero; say so if it is not."""
    if cfg.process != "quantile":
        return
    for problem in check_quantile_conditions(cfg.resolved_model(), cfg.level_grid):
        print(f"proclimits: warning: {problem}", file=sys.stderr)


def _write_text(text: str, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(writer, obj, out):
    writer(obj, out if out else sys.stdout)


def _law(args):
    if getattr(args, "sample", None):
        return pio.read_sample(args.sample)
    return resolve_model(args.model)


def _cmd_expectile(args):
    law = _law(args)
    if args.level_of is not None:
        _write_text(f"{expectile_level(args.level_of, law)!r}\n", args.out)
        return
    _emit(pio.write_grid_function, expectile_curve(law, _grid(args, "expectile")).as_function(), args.out)


def _cmd_quantile(args):
    _emit(pio.write_grid_function, quantile_curve(_law(args), _grid(args, "quantile")), args.out)


def _process_path(model, grid, process, n, seed, rep):
    sample = model.sample(n, RngStream(seed, rep))
    if process == "expectile":
        return expectile_process(sample, model, grid)
    return quantile_process(sample, model, grid)


def _cmd_process(args):
    cfg = _config(args, "sampling")
    _warn_conditions(cfg)
    path = _process_path(cfg.resolved_model(), cfg.level_grid, cfg.process, cfg.n, cfg.master_seed, args.rep)
    _emit(pio.write_grid_function, path, args.out)


def _run(args, mode):
    cfg = _config(args, mode)
    _warn_conditions(cfg)
    if mode == "sampling":
        res = run_sampling_mc(cfg)
    elif mode == "limit":
        res = run_limit_mc(cfg)
    else:
        sample = pio.read_sample(args.input) if getattr(args, "input", None) else None
        res = run_bootstrap_mc(cfg, sample)
    _emit(pio.write_mc_result, res, args.out)


def _cmd_hypi(args):
    f = pio.read_grid_function(args.first)
    g = pio.read_grid_function(args.second)
    d = {"hypi_distance": hypi_distance(f, g, args.window), "sup_distance": sup_distance(f, g)}
    _write_text(json.dumps(d) + "\n", args.out)


def _cmd_plot(args):
    if not args.out:
        raise ValidationError("plot needs --out file.svg")
    if args.kind == "paths":
        cfg = _config(args, "sampling")
        model, grid = cfg.resolved_model(), cfg.level_grid
        series = []
        for r in range(args.paths):
            f = _process_path(model, grid, cfg.process, cfg.n, cfg.master_seed, r)
            series.append((f"rep {r}", f.points, f.values))
        emit_svg(series, args.out, title=f"{cfg.process} process, n={cfg.n}",
                 xlabel=grid.label, ylabel="standardized process")
        return
    if not args.inputs:
        raise ValidationError(f"plot {args.kind} needs input CSV files")
    series = []
    for path in args.inputs:
        name = os.path.basename(path)
        if args.kind == "curve":
            f = pio.read_grid_function(path)
            series.append((name, f.points, f.values))
        else:
            _, stats = pio.read_mc_statistics(path)
            if args.kind == "ecdf":
                series.append((name, *ecdf(stats)))
            else:
                k = kde(stats)
                series.append((name, k.points, k.values))
    ylabel = {"curve": "value", "ecdf": "ECDF", "kde": "density"}[args.kind]
    emit_svg(series, args.out, title=args.kind, xlabel="statistic" if args.kind != "curve" else "level",
             ylabel=ylabel, steps=args.kind == "ecdf")


COMMANDS = {
    "expectile": _cmd_expectile,
    "quantile": _cmd_quantile,
    "process": _cmd_process,
    "mc": lambda a: _run(a, a.mode),
    "bootstrap": lambda a: _run(a, "bootstrap"),
    "limit": lambda a: _run(a, "limit"),
    "hypi-dist": _cmd_hypi,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"proclimits: configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"proclimits: numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"proclimits: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
