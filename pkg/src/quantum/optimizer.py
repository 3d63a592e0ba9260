# ABOUTME: Maximizes quantum Bell values through the top eigenvalue of the Bell operator.
# ABOUTME: Nelder-Mead over the four measurement angles with seeded random restarts run in a thread pool.

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field
from scipy import linalg
from scipy.optimize import minimize

from src.config import config
from src.quantum.behavior import born_behavior
from src.quantum.functionals import BellCoefficients, s_tilde_coefficients
from src.quantum.measurement import Measurement, QuantumStrategy, bloch_projectors
from src.quantum.operators import IDENTITY2, PAULI_X, PAULI_Z, DensityOperator
from src.services.cache import get_optimizer_cache
from src.sources.params import MdlParams

logger = logging.getLogger(__name__)


class OptimizerConfig(BaseModel):
    """Settings for the random-restart eigenvalue maximization."""

    model_config = ConfigDict(frozen=True)

    restarts: int = Field(default_factory=lambda: config.OPTIMIZER_RESTARTS, ge=1)
    xatol: float = Field(default_factory=lambda: config.OPTIMIZER_XATOL, ge=0.0)
    fatol: float = Field(default_factory=lambda: config.OPTIMIZER_FATOL, ge=0.0)
    max_iter: int = Field(default_factory=lambda: config.OPTIMIZER_MAX_ITER, ge=1)
    seed: int = Field(default_factory=lambda: config.OPTIMIZER_SEED, ge=0)
    workers: int = Field(default_factory=lambda: config.OPTIMIZER_WORKERS, ge=1)
    use_cache: bool = True

    def cache_settings(self) -> dict[str, Any]:
        """Settings that influence the result (worker count and caching do not)."""
        return self.model_dump(exclude={"workers", "use_cache"})


@dataclass
class OptimizationResult:
    """Best strategy found for a Bell functional."""

    value: float
    strategy: QuantumStrategy
    converged: bool
    restart_index: int
    evaluations: int
    spectrum: NDArray[np.float64]

    @property
    def angles(self) -> tuple[float, float, float, float]:
        return self.strategy.angles

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "angles": list(self.angles),
            "converged": self.converged,
            "restart_index": self.restart_index,
            "evaluations": self.evaluations,
            "operator_spectrum": self.spectrum.tolist(),
            "state_spectrum": self.strategy.state.spectrum().tolist(),
        }


def _plane_projectors(angles: NDArray[np.float64]) -> NDArray[np.complex128]:
    """Projectors indexed [outcome, input, row, col] for two x-z plane angles."""
    obs = np.cos(angles)[:, None, None] * PAULI_Z + np.sin(angles)[:, None, None] * PAULI_X
    return np.stack([(IDENTITY2 + obs) / 2, (IDENTITY2 - obs) / 2])


def _operator(
    coefficients: NDArray[np.float64],
    alice: NDArray[np.complex128],
    bob: NDArray[np.complex128],
) -> NDArray[np.complex128]:
    op = np.einsum("abxy,axij,bykl->ikjl", coefficients, alice, bob).reshape(4, 4)
    # Symmetrize away rounding so eigh sees an exactly Hermitian matrix.
    return (op + op.conj().T) / 2


def bell_operator(
    coeffs: BellCoefficients,
    measurements: tuple[Measurement, Measurement, Measurement, Measurement] | ArrayLike,
    inputs: ArrayLike | None = None,
) -> NDArray[np.complex128]:
    """
    Bell operator sum c(a,b,x,y) A_x^a (x) B_y^b.

    Args:
        coeffs: Functional coefficients; joint-mode weights are folded in.
        measurements: Four Measurements or four angles (alice_0, alice_1, bob_0, bob_1).
        inputs: Optional input weighting for joint-mode coefficients.

    Returns:
        4x4 Hermitian matrix whose expectation in any state equals the functional's value.
    """
    items = list(measurements)  # type: ignore[arg-type]
    angles = np.array([m.angle if isinstance(m, Measurement) else float(m) for m in items])
    return _operator(
        coeffs.effective(inputs), _plane_projectors(angles[:2]), _plane_projectors(angles[2:])
    )


def _top_eigenvalue(op: NDArray[np.complex128]) -> float:
    return float(linalg.eigvalsh(op, subset_by_index=[3, 3])[0])


def _run_restart(
    index: int,
    coefficients: NDArray[np.float64],
    cfg: OptimizerConfig,
) -> tuple[float, NDArray[np.float64], bool, int]:
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, index]))
    x0 = rng.uniform(-np.pi, np.pi, size=4)

    def objective(theta: NDArray[np.float64]) -> float:
        return -_top_eigenvalue(
            _operator(coefficients, _plane_projectors(theta[:2]), _plane_projectors(theta[2:]))
        )

    options = {"xatol": cfg.xatol, "fatol": cfg.fatol, "maxiter": cfg.max_iter}
    result = minimize(objective, x0, method="Nelder-Mead", options=options)
    # One polish from the end point resets a possibly collapsed simplex.
    polished = minimize(objective, result.x, method="Nelder-Mead", options=options)
    evaluations = int(result.nfev + polished.nfev)
    best = polished if polished.fun <= result.fun else result
    logger.debug(f"Restart {index}: value {-best.fun:.12g} after {evaluations} evaluations")
    return float(-best.fun), np.asarray(best.x), bool(polished.success), evaluations


def optimize_bell(
    coeffs: BellCoefficients,
    cfg: OptimizerConfig | None = None,
    inputs: ArrayLike | None = None,
) -> OptimizationResult:
    """
    Maximize a Bell functional over two-qubit states and x-z plane measurements.

    For fixed angles the quantum maximum is the top eigenvalue of the Bell
    operator; the angles are optimized with Nelder-Mead from `cfg.restarts`
    seeded starting points. Ties go to the lowest restart index.

    Args:
        coeffs: Functional to maximize.
        cfg: Optimizer settings (default: from config).
        inputs: Optional input weighting for joint-mode coefficients.

    Returns:
        OptimizationResult whose value is re-evaluated through the Born rule.
    """
    settings = cfg or OptimizerConfig()
    coefficients = coeffs.effective(inputs)

    def task(i: int) -> tuple[float, NDArray[np.float64], bool, int]:
        return _run_restart(i, coefficients, settings)

    if settings.workers > 1 and settings.restarts > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            runs = list(pool.map(task, range(settings.restarts)))
    else:
        runs = [task(i) for i in range(settings.restarts)]

    best_index = max(range(len(runs)), key=lambda i: (runs[i][0], -i))
    _, angles, converged, _ = runs[best_index]
    evaluations = sum(r[3] for r in runs)

    op = bell_operator(coeffs, angles, inputs)
    eigenvalues, eigenvectors = linalg.eigh(op)
    state = DensityOperator.pure(eigenvectors[:, -1])
    strategy = QuantumStrategy.from_angles(state, angles)
    value = coeffs.evaluate(born_behavior(strategy), inputs)

    if not converged:
        logger.warning(
            f"Optimizer did not converge within {settings.max_iter} iterations; "
            f"reporting best value {value:.12g}"
        )
    logger.info(
        f"Bell optimization finished: value {value:.12g} (restart {best_index} of "
        f"{settings.restarts}, {evaluations} evaluations)"
    )
    return OptimizationResult(
        value=value,
        strategy=strategy,
        converged=converged,
        restart_index=best_index,
        evaluations=evaluations,
        spectrum=eigenvalues[::-1].copy(),
    )


def _trivial_s_tilde(params: MdlParams) -> OptimizationResult:
    """With mu_min = 0 no violation exists; |11> measured along Z scores exactly 0."""
    state = DensityOperator.pure([0.0, 0.0, 0.0, 1.0])
    strategy = QuantumStrategy.from_angles(state, [0.0, 0.0, 0.0, 0.0])
    spectrum = linalg.eigvalsh(bell_operator(s_tilde_coefficients(params), strategy.angles))[::-1]
    return OptimizationResult(
        value=0.0,
        strategy=strategy,
        converged=True,
        restart_index=0,
        evaluations=0,
        spectrum=spectrum.copy(),
    )


def optimize_s_tilde(params: MdlParams, cfg: OptimizerConfig | None = None) -> OptimizationResult:
    """
    Certified, source-independent MDL violation S~* for a mu box.

    Results are memoized in the process-wide optimizer cache.
    """
    settings = cfg or OptimizerConfig()
    if params.mu_min == 0.0:
        logger.info("mu_min = 0: no MDL violation is certifiable, returning trivial strategy")
        return _trivial_s_tilde(params)

    use_cache = settings.use_cache and config.CACHE_ENABLED
    if use_cache:
        cached = get_optimizer_cache().get(params, settings.cache_settings())
        if cached is not None:
            logger.debug(f"Optimizer cache hit for mu = ({params.mu_min}, {params.mu_max})")
            return cached

    result = optimize_bell(s_tilde_coefficients(params), settings)
    if use_cache:
        get_optimizer_cache().set(params, settings.cache_settings(), result)
    return result


def bloch_spot_check(
    coeffs: BellCoefficients,
    samples: int = 4,
    seed: int = 0,
    inputs: ArrayLike | None = None,
    reference: float | None = None,
) -> float:
    """
    Best value found with unrestricted Bloch-sphere measurement directions.

    Each sample starts from random directions and is refined with Nelder-Mead over
    eight spherical angles. A result above `reference` means the x-z plane
    restriction lost value.

    Returns:
        Best top eigenvalue found.
    """
    coefficients = coeffs.effective(inputs)
    rng = np.random.default_rng(np.random.SeedSequence([seed, samples]))

    def projectors(params: NDArray[np.float64]) -> tuple[NDArray[np.complex128], ...]:
        per_measurement = []
        for k in range(4):
            theta, phi = params[2 * k], params[2 * k + 1]
            direction = [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
            per_measurement.append(bloch_projectors(direction))
        alice = np.stack(per_measurement[:2], axis=1)
        bob = np.stack(per_measurement[2:], axis=1)
        return alice, bob

    def objective(params: NDArray[np.float64]) -> float:
        alice, bob = projectors(params)
        return -_top_eigenvalue(_operator(coefficients, alice, bob))

    best = -np.inf
    for _ in range(samples):
        x0 = rng.uniform(0.0, 2 * np.pi, size=8)
        result = minimize(objective, x0, method="Nelder-Mead", options={"maxiter": 4000})
        best = max(best, float(-result.fun))

    if reference is not None and best > reference + 1e-7:
        logger.warning(f"Full Bloch search found {best:.12g} above plane optimum {reference:.12g}")
    return best
