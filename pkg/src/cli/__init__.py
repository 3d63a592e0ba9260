# ABOUTME: Command-line front end: YAML run-config schema, CSV writers and the mdl-ra entry point.
# ABOUTME: Subcommands are rate, optimize, simulate, extract and max-entropy.

from src.cli.main import (
    cmd_extract,
    cmd_max_entropy,
    cmd_optimize,
    cmd_rate,
    cmd_simulate,
    main,
)
from src.cli.schema import RunConfig, load_run_config, parse_run_config

__all__ = [
    "RunConfig",
    "cmd_extract",
    "cmd_max_entropy",
    "cmd_optimize",
    "cmd_rate",
    "cmd_simulate",
    "load_run_config",
    "main",
    "parse_run_config",
]
