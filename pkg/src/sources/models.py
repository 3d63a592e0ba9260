# ABOUTME: Adversarial MDL source models that choose the input pair (x, y) of every round.
# ABOUTME: Each model is immutable; sampling state lives in an explicit history or state value.

import logging
from collections import deque
from collections.abc import Hashable, Sequence
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from numpy.typing import NDArray

from src.errors import ArgumentError, ConstraintError
from src.sources.bits import BitString
from src.sources.params import MdlParams, SvParams, sv_to_mdl
from src.sources.rng import SOURCE_COLUMN, RoundRandomness

logger = logging.getLogger(__name__)

AUDIT_DEPTH = 8
AUDIT_TOL = 1e-12

# Pair index 2*x + y orders the four input pairs as 00, 01, 10, 11.
PAIRS: tuple[tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))


def pair_index(x: int, y: int) -> int:
    return 2 * x + y


class SourceKind(str, Enum):
    """Menu of source strategies."""

    IID = "iid"
    EXTREMAL = "extremal"
    HISTORY_TOGGLE = "history_toggle"
    SCRIPTED = "scripted"


@dataclass
class AuditReport:
    """Result of checking every reachable conditional distribution against the mu box."""

    ok: bool
    checked: int
    depth: int
    violations: list[str] = field(default_factory=list)
    replay: bool = False

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class SourceModel:
    """
    A source of input pairs obeying (or replaying) an MDL box.

    Kinds:
        iid: the same distribution `probabilities` every round.
        extremal: pair `favored` gets min(mu_max, 1 - 3 mu_min), the rest is split equally.
        history_toggle: extremal on `favored`, switching to `alternate` after each
            emission of the currently favored pair, and back again.
        scripted: replays `script` (pair indices) verbatim.
    """

    kind: SourceKind
    params: MdlParams
    probabilities: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    favored: int = 0
    alternate: int = 3
    script: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == SourceKind.IID:
            q = np.asarray(self.probabilities, dtype=np.float64)
            if q.shape != (4,) or abs(q.sum() - 1.0) > AUDIT_TOL:
                raise ConstraintError(f"iid probabilities must be 4 values summing to 1: {q}")
            if np.any(q < self.params.mu_min - AUDIT_TOL) or np.any(q > self.params.mu_max + AUDIT_TOL):
                raise ConstraintError(
                    f"iid probabilities {q.tolist()} leave the box "
                    f"[{self.params.mu_min}, {self.params.mu_max}]"
                )
        for name in ("favored", "alternate"):
            if getattr(self, name) not in range(4):
                raise ArgumentError(f"{name} must be a pair index in 0..3")
        if any(p not in range(4) for p in self.script):
            raise ArgumentError("script entries must be pair indices in 0..3")

    # Factories

    @classmethod
    def iid(cls, params: MdlParams, probabilities: Sequence[float] | None = None) -> "SourceModel":
        probs = tuple(probabilities) if probabilities is not None else (0.25,) * 4
        return cls(SourceKind.IID, params, probabilities=probs)  # type: ignore[arg-type]

    @classmethod
    def extremal(cls, params: MdlParams, favored: int = 0) -> "SourceModel":
        return cls(SourceKind.EXTREMAL, params, favored=favored)

    @classmethod
    def history_toggle(cls, params: MdlParams, favored: int = 0, alternate: int = 3) -> "SourceModel":
        return cls(SourceKind.HISTORY_TOGGLE, params, favored=favored, alternate=alternate)

    @classmethod
    def scripted(cls, params: MdlParams, pairs: Sequence[int]) -> "SourceModel":
        return cls(SourceKind.SCRIPTED, params, script=tuple(int(p) for p in pairs))

    @classmethod
    def scripted_bits(cls, params: MdlParams, bits: BitString) -> "SourceModel":
        """Script from a bit string read pairwise as x0 y0 x1 y1 ..."""
        if len(bits) % 2:
            raise ArgumentError("scripted bit payload must have even length")
        arr = bits.bits.reshape(-1, 2)
        return cls.scripted(params, (2 * arr[:, 0] + arr[:, 1]).tolist())

    # State machine

    @property
    def is_history_dependent(self) -> bool:
        return self.kind in (SourceKind.HISTORY_TOGGLE, SourceKind.SCRIPTED)

    @property
    def is_replay(self) -> bool:
        return self.kind == SourceKind.SCRIPTED

    def initial_state(self) -> int:
        return 0

    def step(self, state: int, pair: int) -> int:
        """Advance the internal state after the source emitted `pair`."""
        if self.kind == SourceKind.HISTORY_TOGGLE:
            current = self.favored if state == 0 else self.alternate
            return 1 - state if pair == current else state
        if self.kind == SourceKind.SCRIPTED:
            return state + 1
        return state

    def distribution(self, state: int) -> NDArray[np.float64]:
        """The four conditional pair probabilities in the given state."""
        if self.kind == SourceKind.IID:
            return np.asarray(self.probabilities, dtype=np.float64)
        if self.kind == SourceKind.SCRIPTED:
            if state >= len(self.script):
                raise ArgumentError(
                    f"scripted source exhausted after {len(self.script)} pairs"
                )
            out = np.zeros(4)
            out[self.script[state]] = 1.0
            return out
        target = self.favored if state == 0 else self.alternate
        return _extremal_distribution(self.params, target)

    def state_after(self, history: Sequence[int]) -> int:
        state = self.initial_state()
        if self.kind == SourceKind.SCRIPTED:
            return state + len(history)
        if not self.is_history_dependent:
            return state
        for pair in history:
            state = self.step(state, int(pair))
        return state

    def conditional(self, history: Sequence[int] = ()) -> NDArray[np.float64]:
        """
        P(x_i y_i | x^{i-1} y^{i-1}) for the given history of pair indices.

        Args:
            history: Earlier pairs, as indices 2x + y.

        Returns:
            Probabilities of pairs 00, 01, 10, 11.
        """
        return self.distribution(self.state_after(history))

    def audit(self, depth: int = AUDIT_DEPTH) -> AuditReport:
        """
        Check every conditional distribution reachable within `depth` rounds.

        Scripted sources are replays of recorded inputs and are reported with
        replay=True instead of being checked.
        """
        if self.is_replay:
            logger.warning("Scripted source is a replay; mu-box audit bypassed")
            return AuditReport(ok=True, checked=0, depth=depth, replay=True)

        violations: list[str] = []
        seen: set[Hashable] = {self.initial_state()}
        queue: deque[tuple[int, int]] = deque([(self.initial_state(), 0)])
        checked = 0
        lo, hi = self.params.mu_min, self.params.mu_max
        while queue:
            state, level = queue.popleft()
            probs = self.distribution(state)
            checked += 1
            if abs(float(probs.sum()) - 1.0) > AUDIT_TOL:
                violations.append(f"state {state}: probabilities sum to {probs.sum()}")
            for pair, p in enumerate(probs):
                if p < lo - AUDIT_TOL or p > hi + AUDIT_TOL:
                    violations.append(f"state {state}: P({PAIRS[pair]}) = {p} outside [{lo}, {hi}]")
            if level >= depth:
                continue
            for pair in range(4):
                if probs[pair] <= 0:
                    continue
                nxt = self.step(state, pair)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append((nxt, level + 1))

        report = AuditReport(ok=not violations, checked=checked, depth=depth, violations=violations)
        if not report.ok:
            logger.warning(f"Source audit failed with {len(violations)} violations")
        return report


def _extremal_distribution(params: MdlParams, target: int) -> NDArray[np.float64]:
    top = min(params.mu_max, 1.0 - 3.0 * params.mu_min)
    out = np.full(4, (1.0 - top) / 3.0)
    out[target] = top
    return out


def from_sv(sv: SvParams, kind: SourceKind | str = SourceKind.IID, **kwargs: Any) -> SourceModel:
    """Build a source model directly from a Santha-Vazirani bias."""
    params = sv_to_mdl(sv)
    builders = {
        SourceKind.IID: SourceModel.iid,
        SourceKind.EXTREMAL: SourceModel.extremal,
        SourceKind.HISTORY_TOGGLE: SourceModel.history_toggle,
        SourceKind.SCRIPTED: SourceModel.scripted,
    }
    return builders[SourceKind(kind)](params, **kwargs)


def _draw(probs: NDArray[np.float64], u: float) -> int:
    cumulative = np.cumsum(probs)
    idx = int(np.searchsorted(cumulative, u, side="right"))
    # Guard against cumulative[-1] landing a hair below 1.
    return min(idx, 3)


def sample_pair(
    model: SourceModel,
    history: Sequence[int],
    rng: RoundRandomness,
    index: int | None = None,
) -> tuple[int, int]:
    """
    Draw the input pair for round `index` (default: len(history)).

    Returns:
        (x, y) bits.
    """
    i = len(history) if index is None else index
    u = float(rng.round(i)[SOURCE_COLUMN])
    return PAIRS[_draw(model.conditional(history), u)]


def sample_block(
    model: SourceModel,
    rng: RoundRandomness,
    start: int,
    stop: int,
    state: int | None = None,
) -> tuple[NDArray[np.int64], int]:
    """
    Draw pair indices for rounds start..stop-1.

    Args:
        model: Source model.
        rng: Round-indexed randomness.
        start: First round.
        stop: One past the last round.
        state: Model state before round `start` (default: initial state).

    Returns:
        Pair indices and the model state after the block.
    """
    return pairs_from_uniforms(model, rng.block(start, stop)[:, SOURCE_COLUMN], state)


def pairs_from_uniforms(
    model: SourceModel,
    u: NDArray[np.float64],
    state: int | None = None,
) -> tuple[NDArray[np.int64], int]:
    """Map one uniform per round to pair indices, threading the model state."""
    current = model.initial_state() if state is None else state
    if not model.is_history_dependent:
        cumulative = np.cumsum(model.distribution(current))
        pairs = np.minimum(np.searchsorted(cumulative, u, side="right"), 3).astype(np.int64)
        return pairs, current

    pairs = np.empty(u.size, dtype=np.int64)
    for k, value in enumerate(u):
        pair = _draw(model.distribution(current), float(value))
        pairs[k] = pair
        current = model.step(current, pair)
    return pairs, current
