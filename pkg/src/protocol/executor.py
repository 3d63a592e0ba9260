# ABOUTME: Runs the randomness amplification protocol end to end against device and source models.
# ABOUTME: Scores every round, applies the abort test, draws the seed after the rounds and extracts the key.

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.config import config
from src.errors import ArgumentError, ConstraintError, DomainError
from src.extractor.convolution import conv_extract
from src.extractor.params import output_length, working_lengths
from src.protocol.devices import DeviceModel
from src.protocol.records import AbortReason, ProtocolOutcome, Transcript
from src.quantum.behavior import Behavior
from src.quantum.functionals import LOSS_ENTRIES, WIN_ENTRY, winning_table
from src.quantum.optimizer import OptimizerConfig, optimize_s_tilde
from src.rates.eat import EatParams, RateResult, completeness_bound, eta_opt
from src.rates.tradeoff import FrequencyDist
from src.sources.models import SourceModel, pairs_from_uniforms
from src.sources.params import MdlParams
from src.sources.rng import DEVICE_COLUMN, SOURCE_COLUMN, RoundRandomness
from src.sources.seed import draw_seed

logger = logging.getLogger(__name__)


class ExtractorSettings(BaseModel):
    """Seed length (default 2n) and extractor error."""

    model_config = ConfigDict(frozen=True)

    d: int | None = Field(default=None, ge=0)
    eps_ext: float = Field(default=1e-8, gt=0.0, lt=1.0)

    @field_validator("d")
    @classmethod
    def _even(cls, v: int | None) -> int | None:
        if v is not None and v % 2:
            raise ValueError("seed length d must be even")
        return v

    def seed_length(self, n: int) -> int:
        return 2 * n if self.d is None else self.d


def abort_predicate(c_bar: float, s_exp: float, delta_est: float) -> bool:
    """Abort exactly when c_bar < s_exp - delta_est; equality passes."""
    return c_bar < s_exp - delta_est


def secrecy_epsilon(eps_s: float, eps_ext: float, eps_ea: float) -> float:
    """Overall secrecy parameter 12 (eps_s + eps_ext) + eps_ea."""
    return 12.0 * (eps_s + eps_ext) + eps_ea


def secrecy_distance(eps_s: float, eps_ext: float) -> float:
    """Distance of the key from uniform given non-abort: 6 (eps_s + eps_ext)."""
    return 6.0 * (eps_s + eps_ext)


def _scores(params: MdlParams, x: ArrayLike, y: ArrayLike, a: ArrayLike, b: ArrayLike) -> NDArray[np.float64]:
    return winning_table(params)[np.asarray(a), np.asarray(b), np.asarray(x), np.asarray(y)]


def _mean(c: NDArray[np.float64]) -> float:
    return math.fsum(c.tolist()) / c.size if c.size else float("nan")


@dataclass
class _Rounds:
    transcript: Transcript
    reason: AbortReason


def _run_shard(
    device: DeviceModel,
    source: SourceModel,
    rng: RoundRandomness,
    start: int,
    stop: int,
) -> tuple[NDArray[np.int64], ...]:
    u = rng.block(start, stop)
    pairs, _ = pairs_from_uniforms(source, u[:, SOURCE_COLUMN])
    x, y = pairs // 2, pairs % 2
    a, b = device.respond_block(x, y, u[:, DEVICE_COLUMN])
    return x, y, np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)


def _execute_vectorized(
    device: DeviceModel,
    source: SourceModel,
    params: MdlParams,
    n: int,
    rng: RoundRandomness,
    workers: int,
) -> _Rounds:
    shard = config.PROTOCOL_SHARD_SIZE
    bounds = [(start, min(start + shard, n)) for start in range(0, n, shard)]

    def task(bound: tuple[int, int]) -> tuple[NDArray[np.int64], ...]:
        return _run_shard(device, source, rng, *bound)

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(task, bounds))
    else:
        parts = [task(bound) for bound in bounds]

    x, y, a, b = (np.concatenate([p[k] for p in parts]) for k in range(4))
    c = _scores(params, x, y, a, b)
    return _Rounds(Transcript(x, y, a, b, c), AbortReason.NONE)


def _execute_sequential(
    device: DeviceModel,
    source: SourceModel,
    params: MdlParams,
    n: int,
    rng: RoundRandomness,
) -> _Rounds:
    table = winning_table(params)
    cols: list[list[int]] = [[], [], [], []]
    scores: list[float] = []
    state = source.initial_state()
    reason = AbortReason.NONE
    shard = config.PROTOCOL_SHARD_SIZE
    for start in range(0, n, shard):
        u = rng.block(start, min(start + shard, n))
        for k in range(u.shape[0]):
            i = start + k
            pairs, state = pairs_from_uniforms(source, u[k : k + 1, SOURCE_COLUMN], state)
            pair = int(pairs[0])
            x, y = pair // 2, pair % 2
            a, b = device.respond(i, x, y, float(u[k, DEVICE_COLUMN]))
            if a not in (0, 1) or b not in (0, 1):
                logger.warning(f"Device returned non-binary output ({a}, {b}) in round {i}; aborting")
                reason = AbortReason.INVALID_OUTPUT
                break
            for col, value in zip(cols, (x, y, a, b), strict=True):
                col.append(value)
            scores.append(float(table[a, b, x, y]))
        if reason is not AbortReason.NONE:
            break
    x_arr, y_arr, a_arr, b_arr = (np.array(col, dtype=np.int64) for col in cols)
    transcript = Transcript(x_arr, y_arr, a_arr, b_arr, np.array(scores, dtype=np.float64))
    return _Rounds(transcript, reason)


def execute_rounds(
    device: DeviceModel,
    source: SourceModel,
    n: int,
    rng: RoundRandomness,
    workers: int | None = None,
) -> _Rounds:
    """Play n rounds; i.i.d. device and source take the sharded vectorized path."""
    if n < 1:
        raise ArgumentError(f"n must be at least 1, got {n}")
    if device.is_iid and not source.is_history_dependent:
        return _execute_vectorized(
            device, source, source.params, n, rng, workers or config.PROTOCOL_WORKERS
        )
    logger.debug("History-dependent source or stateful device: sequential path")
    return _execute_sequential(device, source, source.params, n, rng)


def _warn_feasibility(eat: EatParams, params: MdlParams, optimizer: OptimizerConfig | None) -> None:
    ceiling = optimize_s_tilde(params, optimizer).value
    if eat.s_exp > ceiling:
        logger.warning(
            f"S_exp = {eat.s_exp:.6g} exceeds the certified ceiling S~* = {ceiling:.6g}; "
            "an honest device will abort"
        )
    if ceiling <= eat.delta_est:
        logger.warning(
            f"S~* = {ceiling:.6g} <= delta_est = {eat.delta_est:.6g}: cannot amplify with this source"
        )


def run(
    device: DeviceModel,
    source: SourceModel,
    eat: EatParams,
    ext: ExtractorSettings | None = None,
    seed: int | None = None,
    check_feasibility: bool = False,
    optimizer: OptimizerConfig | None = None,
) -> ProtocolOutcome:
    """
    Execute the protocol.

    Args:
        device: Device under test.
        source: Source of the round inputs and of the seed.
        eat: Rounds, expected violation, confidence width and security parameters.
        ext: Seed length and extractor error.
        seed: Master seed (default: config.DEFAULT_SEED).
        check_feasibility: Log warnings when S_exp cannot be met by any device.
        optimizer: Settings for the feasibility optimizer.

    Returns:
        ProtocolOutcome; aborted runs are ordinary outcomes.

    Raises:
        ConstraintError: If the source fails its audit.
        ArgumentError: If a scripted source holds fewer than n + min(d, 2n)/2 pairs.
    """
    settings = ext or ExtractorSettings()
    master = config.DEFAULT_SEED if seed is None else seed
    params = source.params
    d = settings.seed_length(eat.n)
    n_bits, d_used = working_lengths(eat.n, d)

    if source.is_replay and len(source.script) < eat.n + d_used // 2:
        raise ArgumentError(
            f"scripted source holds {len(source.script)} pairs; {eat.n} rounds and a "
            f"{d_used}-bit seed need {eat.n + d_used // 2}"
        )
    audit = source.audit()
    if not audit.ok:
        raise ConstraintError(f"source fails the mu-box audit: {audit.violations[:3]}")
    if check_feasibility:
        _warn_feasibility(eat, params, optimizer)

    rounds = execute_rounds(device, source, eat.n, RoundRandomness(master, "rounds"))
    transcript = rounds.transcript
    c_bar = _mean(transcript.c)

    rate: RateResult | None
    try:
        rate = eta_opt(eat, params)
    except DomainError as e:
        logger.warning(f"No certified rate for this source: {e}")
        rate = None
    completeness = completeness_bound(eat.n, eat.delta_est, params)

    if rounds.reason is AbortReason.INVALID_OUTPUT:
        aborted, reason = True, AbortReason.INVALID_OUTPUT
    elif abort_predicate(c_bar, eat.s_exp, eat.delta_est):
        aborted, reason = True, AbortReason.THRESHOLD
    else:
        aborted, reason = False, AbortReason.NONE

    key = None
    m = 0
    if not aborted and rate is not None:
        # The seed stream is only touched after the last round.
        z = draw_seed(source, d_used, RoundRandomness(master, "seed"), history=transcript.pairs())
        m = output_length(eat.n, rate.eta_opt, d, params, settings.eps_ext, eat.eps_s)
        if m >= 1:
            key = conv_extract(transcript.output_bits().padded(n_bits), z.padded(n_bits), m)

    outcome = ProtocolOutcome(
        aborted=aborted,
        reason=reason,
        c_bar=c_bar,
        transcript=transcript,
        key=key,
        secrecy_eps=secrecy_epsilon(eat.eps_s, settings.eps_ext, eat.eps_ea),
        secrecy_distance=secrecy_distance(eat.eps_s, settings.eps_ext),
        completeness_eps=completeness,
        rate=rate,
        d=d,
        m=m,
    )
    if aborted:
        logger.info(f"Protocol aborted ({reason.value}): c_bar = {c_bar:.6g}, threshold {eat.threshold:.6g}")
    else:
        logger.info(f"Protocol passed: c_bar = {c_bar:.6g}, extracted {m} bits")
    return outcome


def replay(transcript: Transcript, eat: EatParams, params: MdlParams) -> tuple[float, bool]:
    """Recompute (c_bar, aborted) from stored inputs and outputs alone."""
    c = _scores(params, transcript.x, transcript.y, transcript.a, transcript.b)
    c_bar = _mean(c)
    return c_bar, abort_predicate(c_bar, eat.s_exp, eat.delta_est)


def frequency_of(transcript: Transcript, params: MdlParams) -> FrequencyDist:
    """Empirical distribution of the score classes (win, lose, zero)."""
    entries = np.stack([transcript.a, transcript.b, transcript.x, transcript.y], axis=1)
    wins = int(np.all(entries == WIN_ENTRY, axis=1).sum())
    losses = int(sum(np.all(entries == loss, axis=1).sum() for loss in LOSS_ENTRIES))
    return FrequencyDist.from_counts(wins, losses, len(transcript) - wins - losses)


def predicted_frequency(behavior: Behavior, inputs: ArrayLike, params: MdlParams) -> FrequencyDist:
    """Score-class distribution an i.i.d. device with this behavior produces."""
    q = np.asarray(inputs, dtype=np.float64).reshape(2, 2)
    p_win = float(behavior.p[WIN_ENTRY] * q[0, 0])
    p_lose = float(sum(behavior.p[e] * q[e[2], e[3]] for e in LOSS_ENTRIES))
    return FrequencyDist(p_win=p_win, p_lose=p_lose, p_zero=max(0.0, 1.0 - p_win - p_lose))


@dataclass
class AbortExperiment:
    """Monte-Carlo abort frequency of repeated honest runs next to the Hoeffding bound."""

    trials: int
    aborts: int
    abort_rate: float
    hoeffding_bound: float
    n: int
    s_exp: float
    delta_est: float
    seed: int

    @property
    def slack(self) -> float:
        """Three binomial standard deviations at the bound."""
        p = min(max(self.hoeffding_bound, 0.0), 1.0)
        return 3.0 * math.sqrt(p * (1.0 - p) / self.trials)

    def to_dict(self) -> dict[str, Any]:
        return {**asdict(self), "slack": self.slack}


def honest_abort_experiment(
    device: DeviceModel,
    source: SourceModel,
    eat: EatParams,
    trials: int,
    seed: int | None = None,
    workers: int | None = None,
) -> AbortExperiment:
    """
    Run the round phase `trials` times and count threshold aborts.

    Each trial uses its own child stream, so results do not depend on worker count.
    """
    if trials < 1:
        raise ArgumentError(f"trials must be at least 1, got {trials}")
    master = config.DEFAULT_SEED if seed is None else seed
    base = RoundRandomness(master, "trial")
    pool_size = workers or config.PROTOCOL_WORKERS

    def trial(t: int) -> bool:
        rounds = execute_rounds(device, source, eat.n, base.child(t), workers=1)
        if rounds.reason is not AbortReason.NONE:
            return True
        return abort_predicate(_mean(rounds.transcript.c), eat.s_exp, eat.delta_est)

    if pool_size > 1:
        with ThreadPoolExecutor(max_workers=pool_size) as pool:
            outcomes = list(pool.map(trial, range(trials)))
    else:
        outcomes = [trial(t) for t in range(trials)]

    aborts = int(sum(outcomes))
    experiment = AbortExperiment(
        trials=trials,
        aborts=aborts,
        abort_rate=aborts / trials,
        hoeffding_bound=completeness_bound(eat.n, eat.delta_est, source.params),
        n=eat.n,
        s_exp=eat.s_exp,
        delta_est=eat.delta_est,
        seed=master,
    )
    logger.info(
        f"Abort experiment: {aborts}/{trials} aborted, Hoeffding bound "
        f"{experiment.hoeffding_bound:.4g}"
    )
    return experiment
