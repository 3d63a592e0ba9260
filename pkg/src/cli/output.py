# ABOUTME: CSV and packed-binary writers for the command-line outputs.
# ABOUTME: Column orders are fixed; floats are written with repr so reruns are byte-identical.

import csv
import io
import logging
import math
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

from src.extractor.bitio import write_bits
from src.protocol.executor import AbortExperiment
from src.protocol.records import ProtocolOutcome, Transcript
from src.rates.maximal import MaxEntropyPoint
from src.sources.bits import BitString

logger = logging.getLogger(__name__)

RATE_COLUMNS = (
    "mu_min", "mu_max", "n", "delta_est", "eps_s", "eps_ea", "s_exp", "eta_opt", "s_t_star", "status",
)
TRANSCRIPT_COLUMNS = ("i", "x", "y", "a", "b", "c")
SUMMARY_COLUMNS = ("c_bar", "aborted", "m", "secrecy_eps", "eta_opt", "s_t_star")
MAX_ENTROPY_COLUMNS = ("mu_min", "mu_max", "s_tilde_star", "entropy_bound")
EXPERIMENT_COLUMNS = (
    "trials", "aborts", "abort_rate", "hoeffding_bound", "slack", "n", "s_exp", "delta_est", "seed",
)


def format_value(value: Any) -> str:
    """Render one CSV cell: lowercase booleans, empty cells for NaN."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return str(value)


def render_csv(columns: Sequence[str], rows: Iterable[dict[str, Any]]) -> str:
    """Build CSV text for rows keyed by column name."""
    output = io.StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[col]) for col in columns])
    return output.getvalue()


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[dict[str, Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_csv(columns, rows))
    logger.info(f"Wrote {path}")
    return path


def write_rate_csv(path: Path, rows: Sequence[dict[str, Any]]) -> Path:
    return write_csv(path, RATE_COLUMNS, rows)


def write_max_entropy_csv(path: Path, points: Sequence[MaxEntropyPoint]) -> Path:
    return write_csv(path, MAX_ENTROPY_COLUMNS, (p.to_dict() for p in points))


def write_transcript_csv(path: Path, transcript: Transcript) -> Path:
    """One row per executed round."""
    path.parent.mkdir(parents=True, exist_ok=True)
    output = io.StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(TRANSCRIPT_COLUMNS)
    writer.writerows(
        (i, x, y, a, b, repr(c))
        for i, (x, y, a, b, c) in enumerate(
            zip(
                transcript.x.tolist(),
                transcript.y.tolist(),
                transcript.a.tolist(),
                transcript.b.tolist(),
                transcript.c.tolist(),
                strict=True,
            )
        )
    )
    path.write_text(output.getvalue())
    logger.info(f"Wrote {len(transcript)} rounds to {path}")
    return path


def write_summary_csv(path: Path, outcome: ProtocolOutcome) -> Path:
    return write_csv(path, SUMMARY_COLUMNS, [outcome.summary()])


def write_experiment_csv(path: Path, experiment: AbortExperiment) -> Path:
    return write_csv(path, EXPERIMENT_COLUMNS, [experiment.to_dict()])


def write_key(path: Path, key: BitString | None) -> Path:
    """Packed key bits; an aborted or empty extraction writes an empty file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    write_bits(path, key if key is not None else BitString.zeros(0))
    return path
