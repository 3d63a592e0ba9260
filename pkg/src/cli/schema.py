# ABOUTME: Pydantic schema for YAML run-config files; unknown keys are rejected before any computation.
# ABOUTME: Sections build the domain objects (sources, devices, EAT parameters) the subcommands consume.

import logging
from pathlib import Path
from typing import Annotated, Any, Literal

import yaml
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    ValidationError,
    model_validator,
)

from src.config import config
from src.errors import ConfigError
from src.extractor.bitio import read_header
from src.protocol.devices import DeterministicDevice, DeviceKind, HonestQuantumDevice, ScriptedDevice
from src.protocol.executor import ExtractorSettings
from src.quantum.measurement import QuantumStrategy
from src.quantum.operators import phi_plus
from src.quantum.optimizer import OptimizerConfig, optimize_s_tilde
from src.rates.eat import EatParams
from src.sources.bits import BitString
from src.sources.models import SourceKind, SourceModel
from src.sources.params import MdlParams, SvParams, sv_to_mdl

logger = logging.getLogger(__name__)

MAX_SEED = 2**64 - 1


def _integral(value: Any) -> Any:
    # PyYAML reads 1e11 (no dot) as a string and 1.0e11 as a float.
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


Count = Annotated[int, BeforeValidator(_integral)]


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class MuBox(Section):
    """Either an SV bias `mu` or an explicit box (mu_min, mu_max)."""

    mu: float | None = None
    mu_min: float | None = None
    mu_max: float | None = None

    @model_validator(mode="after")
    def _one_form(self) -> "MuBox":
        explicit = self.mu_min is not None or self.mu_max is not None
        if self.mu is not None and explicit:
            raise ValueError("give either mu or (mu_min, mu_max), not both")
        if self.mu is None and (self.mu_min is None or self.mu_max is None):
            raise ValueError("both mu_min and mu_max are required without an SV bias mu")
        try:
            self.params()
        except ValidationError as e:
            raise ValueError(f"invalid mu box: {e.errors()[0]['msg']}") from e
        return self

    def params(self) -> MdlParams:
        if self.mu is not None:
            return sv_to_mdl(SvParams(mu=self.mu))
        return MdlParams(mu_min=self.mu_min, mu_max=self.mu_max)


class SourceSection(MuBox):
    kind: SourceKind = SourceKind.IID
    probabilities: tuple[float, float, float, float] | None = None
    favored: int = Field(default=0, ge=0, le=3)
    alternate: int = Field(default=3, ge=0, le=3)
    script: list[int] | None = None
    script_hex: str | None = None

    def build(self) -> SourceModel:
        params = self.params()
        if self.kind == SourceKind.IID:
            return SourceModel.iid(params, self.probabilities)
        if self.kind == SourceKind.EXTREMAL:
            return SourceModel.extremal(params, self.favored)
        if self.kind == SourceKind.HISTORY_TOGGLE:
            return SourceModel.history_toggle(params, self.favored, self.alternate)
        if self.script_hex is not None:
            return SourceModel.scripted_bits(params, BitString.from_hex(self.script_hex))
        if self.script is None:
            raise ConfigError("scripted source needs `script` or `script_hex`")
        return SourceModel.scripted(params, self.script)


class DeviceSection(Section):
    """
    Device under test.

    honest_quantum measures phi_plus at `angles` when given, otherwise the optimized
    S~ strategy for the source box; `noise` is the depolarizing weight.
    """

    kind: DeviceKind = DeviceKind.HONEST_QUANTUM
    noise: float = Field(default=0.0, ge=0.0, le=1.0)
    angles: tuple[float, float, float, float] | None = None
    alice: tuple[int, int] = (0, 0)
    bob: tuple[int, int] = (0, 0)
    outputs: list[tuple[int, int]] = Field(default_factory=list)

    def build(
        self, params: MdlParams, optimizer: OptimizerConfig | None = None
    ) -> HonestQuantumDevice | DeterministicDevice | ScriptedDevice:
        if self.kind == DeviceKind.DETERMINISTIC:
            return DeterministicDevice(self.alice, self.bob)
        if self.kind == DeviceKind.SCRIPTED:
            return ScriptedDevice.from_pairs(self.outputs)
        if self.angles is not None:
            strategy = QuantumStrategy.from_angles(phi_plus(), self.angles)
        else:
            strategy = optimize_s_tilde(params, optimizer).strategy
        return HonestQuantumDevice(strategy, self.noise)


class EatSection(Section):
    n: Count = Field(..., ge=1)
    s_exp: float
    delta_est: float = Field(..., gt=0.0)
    eps_s: float = Field(default=1e-7, gt=0.0, lt=1.0)
    eps_ea: float = Field(default=1e-7, gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _threshold(self) -> "EatSection":
        if not self.delta_est < self.s_exp:
            raise ValueError("delta_est must be smaller than s_exp")
        return self

    def build(self) -> EatParams:
        return EatParams(**self.model_dump())


class ExtractorSection(Section):
    d: Count | None = Field(default=None, ge=0)
    eps_ext: float = Field(default=1e-8, gt=0.0, lt=1.0)

    def build(self) -> ExtractorSettings:
        return ExtractorSettings(**self.model_dump())


class ExperimentSection(Section):
    trials: Count = Field(..., ge=1)


class RatePoint(Section):
    """One rate-table row; an infeasible box is reported in the row, not rejected here."""

    mu_min: float
    mu_max: float
    n: Count = Field(..., ge=1)
    s_exp: float
    delta_est: float = Field(default=1e-4, gt=0.0)
    eps_s: float = Field(default=1e-7, gt=0.0, lt=1.0)
    eps_ea: float = Field(default=1e-7, gt=0.0, lt=1.0)

    def sort_key(self) -> tuple[float, ...]:
        return (self.mu_min, self.mu_max, self.n, self.delta_est, self.eps_s, self.eps_ea, self.s_exp)


class RateSweep(Section):
    """Cartesian grid over mu boxes, round counts and expected violations."""

    mu: list[tuple[float, float]]
    n: list[Count]
    s_exp: list[float]
    delta_est: float = Field(default=1e-4, gt=0.0)
    eps_s: float = Field(default=1e-7, gt=0.0, lt=1.0)
    eps_ea: float = Field(default=1e-7, gt=0.0, lt=1.0)

    def points(self) -> list[RatePoint]:
        return [
            RatePoint(
                mu_min=mu_min,
                mu_max=mu_max,
                n=n,
                s_exp=s_exp,
                delta_est=self.delta_est,
                eps_s=self.eps_s,
                eps_ea=self.eps_ea,
            )
            for mu_min, mu_max in self.mu
            for n in self.n
            for s_exp in self.s_exp
        ]


class RateSection(Section):
    points: list[RatePoint] = Field(default_factory=list)
    sweep: RateSweep | None = None

    def rows(self) -> list[RatePoint]:
        rows = list(self.points)
        if self.sweep is not None:
            rows.extend(self.sweep.points())
        return sorted(rows, key=RatePoint.sort_key)


class OptimizeSection(MuBox):
    functional: Literal["s_tilde", "chsh", "eberhard"] = "s_tilde"


class OptimizerSection(Section):
    restarts: Count | None = Field(default=None, ge=1)
    xatol: float | None = Field(default=None, ge=0.0)
    fatol: float | None = Field(default=None, ge=0.0)
    max_iter: Count | None = Field(default=None, ge=1)
    seed: Count | None = Field(default=None, ge=0)
    workers: Count | None = Field(default=None, ge=1)

    def build(self) -> OptimizerConfig:
        return OptimizerConfig(**self.model_dump(exclude_none=True))


class MaxEntropySection(Section):
    mu_min: list[float]
    family: Literal["one_minus_three", "one_third_rest"] = "one_minus_three"


class ExtractSection(Section):
    """Packed inputs for raw extraction; lengths come from `header` or from n_bits and m."""

    x_path: Path
    z_path: Path
    header: Path | None = None
    n_bits: Count | None = Field(default=None, ge=1)
    m: Count | None = Field(default=None, ge=0)
    output: str = "key.bin"

    @model_validator(mode="after")
    def _lengths(self) -> "ExtractSection":
        if self.header is None and (self.n_bits is None or self.m is None):
            raise ValueError("extract needs a header file or both n_bits and m")
        return self

    def lengths(self, base: Path) -> tuple[int, int]:
        if self.header is not None:
            return read_header(self.resolve(base, self.header))
        return int(self.n_bits), int(self.m)  # type: ignore[arg-type]

    @staticmethod
    def resolve(base: Path, path: Path) -> Path:
        return path if path.is_absolute() else base / path


class RunConfig(Section):
    """A complete run-config file; each subcommand reads the sections it needs."""

    seed: Count = Field(default_factory=lambda: config.DEFAULT_SEED, ge=0, le=MAX_SEED)
    workers: Count | None = Field(default=None, ge=1)
    check_feasibility: bool = True
    source: SourceSection | None = None
    device: DeviceSection = Field(default_factory=DeviceSection)
    eat: EatSection | None = None
    extractor: ExtractorSection = Field(default_factory=ExtractorSection)
    experiment: ExperimentSection | None = None
    optimizer: OptimizerSection = Field(default_factory=OptimizerSection)
    rate: RateSection | None = None
    optimize: OptimizeSection | None = None
    max_entropy: MaxEntropySection | None = None
    extract: ExtractSection | None = None

    def require(self, name: str) -> Any:
        """Return a section, raising ConfigError when the subcommand's section is missing."""
        section = getattr(self, name)
        if section is None:
            raise ConfigError(f"run config has no `{name}` section")
        return section


def parse_run_config(data: Any) -> RunConfig:
    """Validate an already-loaded mapping."""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"run config must be a mapping, got {type(data).__name__}")
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid run config:\n{e}") from e


def load_run_config(path: Path) -> RunConfig:
    """
    Load and validate a YAML run-config file.

    Raises:
        ConfigError: If the file is missing, is not YAML, or fails the schema.
    """
    try:
        text = path.read_text()
    except FileNotFoundError as e:
        raise ConfigError(f"run config not found: {path}") from e
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"run config {path} is not valid YAML: {e}") from e
    cfg = parse_run_config(data)
    logger.debug(f"Loaded run config from {path}")
    return cfg
