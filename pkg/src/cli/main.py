# ABOUTME: Command-line entry point: rate sweeps, Bell optimization, protocol simulation and raw extraction.
# ABOUTME: Maps domain errors to exit codes (2 usage/schema, 3 runtime); aborted protocols still exit 0.

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, TypeVar

from pydantic import ValidationError

from src.cli.output import (
    write_experiment_csv,
    write_key,
    write_max_entropy_csv,
    write_rate_csv,
    write_summary_csv,
    write_transcript_csv,
)
from src.cli.schema import RatePoint, RunConfig, load_run_config
from src.config import config
from src.errors import (
    ArgumentError,
    ConfigError,
    ConstraintError,
    DomainError,
    RandomnessAmplificationError,
)
from src.extractor.bitio import read_bits, write_header
from src.extractor.convolution import conv_extract
from src.extractor.params import working_lengths
from src.protocol.executor import honest_abort_experiment, run
from src.quantum.functionals import chsh_coefficients, eberhard_coefficients
from src.quantum.optimizer import OptimizationResult, optimize_bell, optimize_s_tilde
from src.rates.eat import optimize_cut
from src.rates.maximal import max_entropy_curve
from src.sources.params import MdlParams

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3

T = TypeVar("T")
R = TypeVar("R")


def _ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int) -> list[R]:
    """Map in a thread pool; results keep the input order."""
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def rate_row(point: RatePoint) -> dict[str, Any]:
    """
    Evaluate one rate-table row.

    Status values: ok, non_positive (eta_opt <= 0), infeasible_mu (no distribution
    in the box) and no_violation (mu_min = 0, nothing is certifiable).
    """
    row: dict[str, Any] = {
        **point.model_dump(),
        "eta_opt": float("nan"),
        "s_t_star": float("nan"),
    }
    try:
        params = MdlParams.of(point.mu_min, point.mu_max)
    except ConstraintError as e:
        logger.warning(f"Rate row skipped: {e}")
        return {**row, "status": "infeasible_mu"}
    try:
        result = optimize_cut(
            point.n,
            max(point.s_exp - point.delta_est, 0.0),
            point.eps_s,
            point.eps_ea,
            params,
            s_exp=point.s_exp,
            delta_est=point.delta_est,
        )
    except DomainError as e:
        logger.warning(f"Rate row at mu = ({point.mu_min}, {point.mu_max}) undefined: {e}")
        return {**row, "status": "no_violation"}
    status = "ok" if result.positive else "non_positive"
    return {**row, "eta_opt": result.eta_opt, "s_t_star": result.s_t_star, "status": status}


def cmd_rate(cfg: RunConfig, out: Path) -> Path:
    """Write rate.csv: eta_opt for every grid point, sorted, infeasible rows included."""
    section = cfg.require("rate")
    points = section.rows()
    rows = _ordered_map(rate_row, points, cfg.workers or config.OPTIMIZER_WORKERS)
    logger.info(f"Evaluated {len(rows)} rate points")
    return write_rate_csv(out / "rate.csv", rows)


def _report(functional: str, params: MdlParams | None, result: OptimizationResult) -> dict[str, Any]:
    report: dict[str, Any] = {"functional": functional}
    if params is not None:
        report.update(mu_min=params.mu_min, mu_max=params.mu_max)
    report.update(result.to_dict())
    return report


def cmd_optimize(cfg: RunConfig, out: Path) -> Path:
    """Maximize the chosen functional; print a report and write optimize.json."""
    section = cfg.require("optimize")
    optimizer = cfg.optimizer.build()
    params = section.params()
    if section.functional == "chsh":
        result = optimize_bell(chsh_coefficients(), optimizer)
    elif section.functional == "eberhard":
        result = optimize_bell(eberhard_coefficients(), optimizer)
    else:
        result = optimize_s_tilde(params, optimizer)

    report = _report(section.functional, params if section.functional == "s_tilde" else None, result)
    print(f"{section.functional} optimum: {result.value:.12g}")
    print("angles (a0, a1, b0, b1): " + ", ".join(f"{a:.9f}" for a in result.angles))
    print("state spectrum: " + ", ".join(f"{v:.6g}" for v in report["state_spectrum"]))
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)

    path = out / "optimize.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text + "\n")
    logger.info(f"Wrote {path}")
    return path


def cmd_simulate(cfg: RunConfig, out: Path) -> list[Path]:
    """Run the protocol once and write transcript.csv, summary.csv, key.bin and key.hdr."""
    source = cfg.require("source").build()
    eat = cfg.require("eat").build()
    optimizer = cfg.optimizer.build()
    extractor = cfg.extractor.build()
    device = cfg.device.build(source.params, optimizer)

    outcome = run(
        device,
        source,
        eat,
        extractor,
        seed=cfg.seed,
        check_feasibility=cfg.check_feasibility,
        optimizer=optimizer,
    )
    written = [
        write_transcript_csv(out / "transcript.csv", outcome.transcript),
        write_summary_csv(out / "summary.csv", outcome),
        write_key(out / "key.bin", outcome.key),
    ]
    header = out / "key.hdr"
    n_bits, _ = working_lengths(eat.n, outcome.d)
    write_header(header, n_bits, outcome.m)
    written.append(header)

    if cfg.experiment is not None:
        experiment = honest_abort_experiment(
            device, source, eat, cfg.experiment.trials, seed=cfg.seed, workers=cfg.workers
        )
        written.append(write_experiment_csv(out / "experiment.csv", experiment))
    return written


def cmd_extract(cfg: RunConfig, out: Path, base: Path) -> Path:
    """Apply conv_extract to two packed bitstreams; relative paths resolve against `base`."""
    section = cfg.require("extract")
    n_bits, m = section.lengths(base)
    x = read_bits(section.resolve(base, section.x_path), n_bits)
    z = read_bits(section.resolve(base, section.z_path), n_bits)
    key = conv_extract(x, z, m)
    path = write_key(out / section.output, key)
    logger.info(f"Extracted {m} bits from N = {n_bits} into {path}")
    return path


def cmd_max_entropy(cfg: RunConfig, out: Path) -> Path:
    """Write max_entropy.csv along one mu_max family."""
    section = cfg.require("max_entropy")
    points = max_entropy_curve(section.mu_min, section.family, cfg.optimizer.build())
    return write_max_entropy_csv(out / "max_entropy.csv", points)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mdl-ra",
        description="Device-independent randomness amplification from MDL sources",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("rate", "finite-size entropy rates over a parameter grid"),
        ("optimize", "maximize a Bell functional over quantum strategies"),
        ("simulate", "run the protocol against simulated devices"),
        ("extract", "two-source extraction of packed bitstreams"),
        ("max-entropy", "maximal single-round entropy along a mu family"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, type=Path, help="YAML run-config file")
        cmd.add_argument("--out", type=Path, default=Path("."), help="output directory")
        cmd.add_argument("--seed", type=int, default=None, help="override the master seed")
        cmd.add_argument("--log-level", default=None, help="override LOG_LEVEL")
    return parser


def configure_logging(level: str | None) -> None:
    name = (level or config.LOG_LEVEL).upper()
    if not isinstance(logging.getLevelName(name), int):
        raise ConfigError(f"unknown log level: {name}")
    logging.basicConfig(level=name, format=config.LOG_FORMAT, force=True)


def dispatch(args: argparse.Namespace) -> Any:
    config.validate()
    cfg = load_run_config(args.config)
    if args.seed is not None:
        cfg = RunConfig.model_validate({**cfg.model_dump(), "seed": args.seed})
    out: Path = args.out
    if args.command == "rate":
        return cmd_rate(cfg, out)
    if args.command == "optimize":
        return cmd_optimize(cfg, out)
    if args.command == "simulate":
        return cmd_simulate(cfg, out)
    if args.command == "extract":
        return cmd_extract(cfg, out, args.config.parent)
    return cmd_max_entropy(cfg, out)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configure_logging(args.log_level)
        dispatch(args)
    except (ConfigError, ArgumentError, ValidationError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except (RandomnessAmplificationError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
