"""Newton's method with deflation applied as a scalar rescaling of the step."""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .deflation import SINGULAR_DISTANCE, DeflationSingularityError
from .linalg import EUCLIDEAN, SingularMatrixError, norm

__all__ = ["NewtonConfig", "NewtonStatus", "NewtonOutcome", "newton_solve", "deflated_step"]

# smallest admissible |1 - m'[d0]/m| before the rescaled step is refused
TAU_DENOMINATOR_FLOOR = 1e-14


@dataclass(frozen=True)
class NewtonConfig:
    max_iterations: int = 100
    residual_tolerance: float = 1e-10
    step_tolerance: float = 1e-12

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not (self.residual_tolerance > 0 and self.step_tolerance > 0):
            raise ValueError("Newton tolerances must be positive")


class NewtonStatus(str, Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    LINEAR_SOLVE_FAILURE = "LinearSolveFailure"
    DEFLATION_SINGULARITY = "DeflationSingularity"
    NON_FINITE = "NonFinite"


@dataclass
class NewtonOutcome:
    status: NewtonStatus
    solution: np.ndarray | None
    iterations: int
    final_residual_norm: float
    factorizations: int = 0
    solves: int = 0

    @property
    def converged(self):
        return self.status is NewtonStatus.CONVERGED


def deflated_step(lu, F_u, deflation, u):
    """Newton step for ``m(u) F(u)`` from one solve with the factored ``F'(u)``.

    The deflated Jacobian is ``m F' + F m'^T``; its inverse applied to
    ``-m F`` is the undeflated step scaled by ``1 / (1 - m'[d0] / m)``.
    """
    step = -lu.solve(F_u)
    if deflation is None or not deflation.roots:
        return step
    denominator = 1.0 - deflation.log_derivative(u, step)
    if not abs(denominator) >= TAU_DENOMINATOR_FLOOR:
        raise DeflationSingularityError("deflated Jacobian is singular along the Newton step")
    return step / denominator


def newton_solve(
    residual,
    jacobian,
    u0,
    deflation=None,
    config=NewtonConfig(),
    residual_norm=np.linalg.norm,
    step_norm=None,
):
    """Solve ``residual(u) = 0`` from ``u0``, avoiding deflated roots.

    ``jacobian(u)`` must return a :class:`~defcon.linalg.BandedMatrix`.
    Convergence is judged on the undeflated residual, so whatever is
    returned solves the original equations. Failures are reported through
    the outcome status rather than raised.
    """
    if step_norm is None:
        kind = deflation.norm_kind if deflation is not None else EUCLIDEAN
        step_norm = lambda v: norm(v, kind)  # noqa: E731
    tol = config.residual_tolerance
    u = np.array(u0, dtype=float)
    counts = {"factorizations": 0, "solves": 0}

    def outcome(status, k, res, solution=None):
        return NewtonOutcome(status, solution, k, res, **counts)

    res = np.inf
    last_step = np.inf
    if deflation is not None and deflation.distance_to_nearest(u) < SINGULAR_DISTANCE:
        return outcome(NewtonStatus.DEFLATION_SINGULARITY, 0, res)
    for k in range(config.max_iterations + 1):
        if not np.all(np.isfinite(u)):
            return outcome(NewtonStatus.NON_FINITE, k, res)
        with np.errstate(over="ignore", invalid="ignore"):
            F_u = residual(u)
        res = float(residual_norm(F_u))
        if not np.isfinite(res):
            return outcome(NewtonStatus.NON_FINITE, k, res)
        if res <= tol or (last_step <= config.step_tolerance and res <= 1e3 * tol):
            return outcome(NewtonStatus.CONVERGED, k, res, u)
        if k == config.max_iterations:
            break
        try:
            lu = jacobian(u).factorize()
        except SingularMatrixError:
            return outcome(NewtonStatus.LINEAR_SOLVE_FAILURE, k, res)
        counts["factorizations"] += 1
        try:
            step = deflated_step(lu, F_u, deflation, u)
        except DeflationSingularityError:
            return outcome(NewtonStatus.DEFLATION_SINGULARITY, k, res)
        finally:
            counts["solves"] += lu.solves
        if not np.all(np.isfinite(step)):
            return outcome(NewtonStatus.NON_FINITE, k, res)
        u = u + step
        last_step = step_norm(step)
    return outcome(NewtonStatus.MAX_ITERATIONS, config.max_iterations, res)
