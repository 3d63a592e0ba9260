# ABOUTME: End-to-end tests of the mdl-ra command line through main(argv).
# ABOUTME: Uses tmp_path run configs and checks output files, CSV headers and exit codes.

import csv
import json
import math
from pathlib import Path
from typing import Any
from unittest.mock import patch

import numpy as np
import pytest
import yaml

from src.cli.main import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main
from src.cli.output import RATE_COLUMNS, SUMMARY_COLUMNS, TRANSCRIPT_COLUMNS
from src.extractor.bitio import read_bits
from src.extractor.convolution import conv_extract
from src.rates.eat import RateResult
from src.sources.bits import BitString

CHSH_ANGLES = [0.0, math.pi / 2, math.pi / 4, -math.pi / 4]


def write_config(tmp_path: Path, data: dict[str, Any], name: str = "run.yaml") -> Path:
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data))
    return path


def read_rows(path: Path) -> list[dict[str, str]]:
    with path.open(newline="") as f:
        return list(csv.DictReader(f))


def header(path: Path) -> str:
    return path.read_text().splitlines()[0]


def fixed_rate(eta: float, n: int) -> RateResult:
    return RateResult(
        eta_opt=eta, s_t_star=0.01, hmin_bound=n * eta, a_star=0.0, b_star=0.0, zeta_star=0.0,
        n=n, s_exp=0.05, delta_est=0.01,
    )


def simulate_config(n: int = 1000, **device: Any) -> dict[str, Any]:
    return {
        "seed": 7,
        "check_feasibility": False,
        "source": {"mu_min": 0.25, "mu_max": 0.25},
        "device": device or {"angles": CHSH_ANGLES},
        "eat": {"n": n, "s_exp": 0.01294, "delta_est": 0.001},
    }


class TestRate:
    """Tests for the rate subcommand."""

    def test_rate_table(self, tmp_path):
        """Rows are sorted, typed by status and carry the reference value."""
        cfg = write_config(
            tmp_path,
            {
                "rate": {
                    "points": [
                        {"mu_min": 0.25, "mu_max": 0.25, "n": "1e11", "s_exp": 0.01294},
                        {"mu_min": 0.3, "mu_max": 0.4, "n": 1000, "s_exp": 0.01},
                        {"mu_min": 0.0, "mu_max": 0.5, "n": 1000, "s_exp": 0.01},
                        {"mu_min": 0.25, "mu_max": 0.25, "n": 1000, "s_exp": 0.0002},
                    ]
                }
            },
        )
        assert main(["rate", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
        path = tmp_path / "rate.csv"
        assert header(path) == ",".join(RATE_COLUMNS)
        rows = read_rows(path)
        assert [r["status"] for r in rows] == ["no_violation", "non_positive", "ok", "infeasible_mu"]
        assert (rows[2]["mu_min"], rows[2]["mu_max"], rows[2]["n"]) == ("0.25", "0.25", "100000000000")
        assert (rows[2]["s_exp"], rows[2]["delta_est"], rows[2]["eps_s"]) == ("0.01294", "0.0001", "1e-07")
        assert float(rows[2]["eta_opt"]) == pytest.approx(0.97362, abs=0.01)
        assert rows[3]["eta_opt"] == ""
        assert (rows[0]["mu_min"], rows[0]["eta_opt"], rows[0]["s_t_star"]) == ("0.0", "", "")

    def test_empty_grid(self, tmp_path):
        """An empty rate section writes only the header."""
        cfg = write_config(tmp_path, {"rate": {}})
        assert main(["rate", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
        assert (tmp_path / "rate.csv").read_text() == ",".join(RATE_COLUMNS) + "\n"

    def test_missing_section(self, tmp_path):
        """A config without the subcommand's section is a usage error."""
        cfg = write_config(tmp_path, {"seed": 1})
        assert main(["rate", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_USAGE


class TestSimulate:
    """Tests for the simulate subcommand."""

    def test_outputs(self, tmp_path):
        """n = 1000 rounds give 1000 transcript rows and the summary columns."""
        cfg = write_config(tmp_path, simulate_config(1000))
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
        assert header(out / "transcript.csv") == ",".join(TRANSCRIPT_COLUMNS)
        assert len(read_rows(out / "transcript.csv")) == 1000
        assert header(out / "summary.csv") == ",".join(SUMMARY_COLUMNS)
        summary = read_rows(out / "summary.csv")[0]
        assert summary["aborted"] in ("true", "false")
        assert (out / "key.hdr").read_text().split()[0] == "2000"
        assert (out / "key.bin").exists()

    def test_byte_identical_reruns(self, tmp_path):
        """The same config and seed reproduce every output byte for byte."""
        cfg = write_config(tmp_path, simulate_config(2000))
        first, second = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", "--config", str(cfg), "--out", str(first)]) == EXIT_OK
        assert main(["simulate", "--config", str(cfg), "--out", str(second)]) == EXIT_OK
        for name in ("transcript.csv", "summary.csv", "key.bin", "key.hdr"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_seed_override(self, tmp_path):
        """--seed replaces the config's master seed."""
        cfg = write_config(tmp_path, simulate_config(2000))
        first, second = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", "--config", str(cfg), "--out", str(first)]) == EXIT_OK
        assert main(["simulate", "--config", str(cfg), "--out", str(second), "--seed", "8"]) == EXIT_OK
        assert (first / "transcript.csv").read_bytes() != (second / "transcript.csv").read_bytes()

    def test_deterministic_device_aborts(self, tmp_path):
        """A local device aborts; the key file is empty and m = 0."""
        cfg = write_config(tmp_path, simulate_config(5000, kind="deterministic", alice=[0, 0], bob=[0, 0]))
        assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
        summary = read_rows(tmp_path / "summary.csv")[0]
        assert summary["aborted"] == "true"
        assert summary["m"] == "0"
        assert (tmp_path / "key.bin").read_bytes() == b""
        assert (tmp_path / "key.hdr").read_text() == "10000 0\n"

    def test_scripted_run_writes_key(self, tmp_path):
        """A passing run at eta = 0.9 writes 255 key bits over N = 2n, whatever the longer seed."""
        data = {
            "seed": 3,
            "check_feasibility": False,
            "source": {"mu_min": 0.25, "mu_max": 0.25, "kind": "scripted", "script": [0] * 2000 + [1, 2, 3, 0] * 500},
            "device": {"kind": "scripted", "outputs": [[0, 0], [1, 1]] * 1000},
            "eat": {"n": 2000, "s_exp": 0.05, "delta_est": 0.01},
            "extractor": {"d": 6000},
        }
        cfg = write_config(tmp_path, data)
        with patch("src.protocol.executor.eta_opt", return_value=fixed_rate(0.9, 2000)):
            assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK

        rows = read_rows(tmp_path / "transcript.csv")
        assert rows[0] == {"i": "0", "x": "0", "y": "0", "a": "0", "b": "0", "c": "0.25"}
        assert rows[1] == {"i": "1", "x": "0", "y": "0", "a": "1", "b": "1", "c": "0.0"}
        summary = read_rows(tmp_path / "summary.csv")[0]
        assert (summary["c_bar"], summary["aborted"], summary["m"]) == ("0.125", "false", "255")
        assert (summary["eta_opt"], summary["s_t_star"]) == ("0.9", "0.01")
        assert float(summary["secrecy_eps"]) == pytest.approx(12 * 1.1e-7 + 1e-7)
        assert (tmp_path / "key.hdr").read_text() == "4000 255\n"

        x = BitString(np.tile(np.array([0, 0, 1, 1], dtype=np.uint8), 1000))
        z = BitString(np.tile(np.array([0, 1, 1, 0, 1, 1, 0, 0], dtype=np.uint8), 500))
        key = read_bits(tmp_path / "key.bin", 255)
        assert key == conv_extract(x, z, 255)
        assert len((tmp_path / "key.bin").read_bytes()) == 32

    def test_experiment_section(self, tmp_path):
        """An experiment section adds experiment.csv."""
        data = simulate_config(500)
        data["eat"]["delta_est"] = 0.005
        data["experiment"] = {"trials": 5}
        cfg = write_config(tmp_path, data)
        assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
        rows = read_rows(tmp_path / "experiment.csv")
        assert rows[0]["trials"] == "5"
        assert 0 <= int(rows[0]["aborts"]) <= 5

    @pytest.mark.parametrize(
        "source",
        [{"mu_min": 0.3, "mu_max": 0.4}, {"mu": 0.1, "mu_min": 0.2}, {"mu_min": 0.2}],
    )
    def test_malformed_mu(self, tmp_path, source):
        """Malformed mu boxes exit with a usage error."""
        data = simulate_config(100)
        data["source"] = source
        cfg = write_config(tmp_path, data)
        assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_USAGE

    def test_missing_config_file(self, tmp_path):
        """A missing run config is a usage error."""
        assert main(["simulate", "--config", str(tmp_path / "none.yaml")]) == EXIT_USAGE

    def test_bad_log_level(self, tmp_path):
        """Unknown log levels are usage errors."""
        cfg = write_config(tmp_path, simulate_config(100))
        assert main(["simulate", "--config", str(cfg), "--log-level", "LOUD"]) == EXIT_USAGE


class TestExtract:
    """Tests for the extract subcommand."""

    def write_inputs(self, tmp_path: Path, x: str, z: str) -> None:
        (tmp_path / "x.bin").write_bytes(BitString.from_str(x).pack())
        (tmp_path / "z.bin").write_bytes(BitString.from_str(z).pack())

    def test_hand_case(self, tmp_path):
        """x = 1000, z = 1100, m = 2 extracts 11."""
        self.write_inputs(tmp_path, "1000", "1100")
        cfg = write_config(tmp_path, {"extract": {"x_path": "x.bin", "z_path": "z.bin", "n_bits": 4, "m": 2}})
        assert main(["extract", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
        assert (tmp_path / "key.bin").read_bytes() == bytes([0b11])

    def test_zero_input(self, tmp_path):
        """An all-zero first source extracts zeros."""
        self.write_inputs(tmp_path, "0" * 16, "1011001110001111")
        (tmp_path / "in.hdr").write_text("16 9\n")
        cfg = write_config(
            tmp_path,
            {"extract": {"x_path": "x.bin", "z_path": "z.bin", "header": "in.hdr", "output": "zero.bin"}},
        )
        assert main(["extract", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
        assert (tmp_path / "zero.bin").read_bytes() == b"\x00\x00"

    def test_output_longer_than_input(self, tmp_path):
        """m > N is a usage error."""
        self.write_inputs(tmp_path, "1000", "1100")
        cfg = write_config(tmp_path, {"extract": {"x_path": "x.bin", "z_path": "z.bin", "n_bits": 4, "m": 5}})
        assert main(["extract", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_USAGE

    def test_missing_input_file(self, tmp_path):
        """An unreadable bitstream is a runtime error."""
        cfg = write_config(tmp_path, {"extract": {"x_path": "x.bin", "z_path": "z.bin", "n_bits": 4, "m": 2}})
        assert main(["extract", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_RUNTIME


class TestOptimizeAndMaxEntropy:
    """Tests for the optimize and max-entropy subcommands."""

    def test_optimize_chsh(self, tmp_path, capsys):
        """CHSH optimization prints and writes the Tsirelson value."""
        cfg = write_config(
            tmp_path,
            {"optimize": {"mu_min": 0.25, "mu_max": 0.25, "functional": "chsh"}, "optimizer": {"restarts": 8, "workers": 1}},
        )
        assert main(["optimize", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
        report = json.loads((tmp_path / "optimize.json").read_text())
        assert report["functional"] == "chsh"
        assert report["value"] == pytest.approx(2 * math.sqrt(2), abs=1e-6)
        assert "chsh optimum" in capsys.readouterr().out

    def test_max_entropy(self, tmp_path):
        """The uniform box certifies one bit."""
        cfg = write_config(
            tmp_path,
            {"max_entropy": {"mu_min": [0.25]}, "optimizer": {"restarts": 8, "workers": 1}},
        )
        assert main(["max-entropy", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
        rows = read_rows(tmp_path / "max_entropy.csv")
        assert len(rows) == 1
        assert float(rows[0]["entropy_bound"]) == pytest.approx(1.0, abs=1e-4)
