"""
Shooting for the two-point boundary value problem of the optimal maneuver. The unknowns are
``(gamma1(0), gamma2(0), p1, p2)``; ``phi(0)`` and ``x(0)`` are fixed.

Every start is iterated at once: the columns of one ``(8, k)`` batch are integrated side by
side, and damping is chosen per column.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import validator

from rolling_sphere.config import RobotParams
from rolling_sphere.exceptions import (
    DegenerateParamsError,
    InvalidStepError,
    NoConvergenceError,
)
from rolling_sphere.logging import logger
from rolling_sphere.optimal_control.pmp import first_integrals, propagate
from rolling_sphere.optimal_control.reduction import reduced_constants
from rolling_sphere.types import PMPState, ReducedConstants
from rolling_sphere.utils.basemodel import RollingSphereModel, as_float_array

RESIDUAL_TOLERANCE = 1e-8
DIFFERENCE_STEP = 1e-6
MAX_ITERATIONS = 100
RESTARTS = 32
RESTART_BOX = 5.0
SELECTIONS = ("cheapest", "first")
_MIN_DAMPING = 1.0 / 1024


class BoundaryValueProblem(RollingSphereModel):
    x0: np.ndarray
    phi0: np.ndarray
    xT: np.ndarray
    phiT: np.ndarray
    T: float

    @validator("x0", "phi0", "xT", "phiT", pre=True)
    def check_pair(cls, value) -> np.ndarray:
        return as_float_array(value, (2,))

    @validator("T")
    def check_horizon(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("horizon must be positive")

        return value

    def initial_state(self, unknowns) -> np.ndarray:
        return np.concatenate([self.phi0, self.x0, np.asarray(unknowns, dtype=float)])

    @property
    def target(self) -> np.ndarray:
        return np.concatenate([self.phiT, self.xT])


class ShootingResult(RollingSphereModel):
    state: PMPState
    residual: float
    iterations: int
    start: int
    cost: float
    integrals: np.ndarray
    constants: Optional[ReducedConstants] = None
    conditions_hold: bool = False

    @property
    def unknowns(self) -> np.ndarray:
        return self.state.as_array()[4:]

    @property
    def branch(self) -> str:
        if self.constants is None:
            return "degenerate"

        return self.constants.branch

    @property
    def exact_available(self) -> bool:
        constants = self.constants
        return constants is not None and self.conditions_hold and constants.A != constants.E


class _Shooter:
    def __init__(self, params: RobotParams, bvp: BoundaryValueProblem, dt: float, step: float):
        if not dt > 0:
            raise InvalidStepError(f"Step must be positive, got dt={dt}.")

        self.params = params
        self.bvp = bvp
        self.dt = dt
        self.step = step

    def residuals(self, unknowns: np.ndarray) -> np.ndarray:
        """Residual of every column of a ``(4, k)`` array of unknowns."""
        fixed = np.concatenate([self.bvp.phi0, self.bvp.x0])[:, None]
        y0 = np.vstack([np.repeat(fixed, unknowns.shape[1], axis=1), unknowns])
        final = propagate(self.params, y0, self.bvp.T, self.dt)
        return final[:4] - self.bvp.target[:, None]

    def residual_and_jacobian(self, Z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Residuals ``(4, k)`` and central-difference Jacobians ``(k, 4, 4)`` of the columns of
        ``Z``.
        """

        k = Z.shape[1]
        offsets = self.step * np.eye(4)[:, :, None]
        plus = (Z[:, None, :] + offsets).reshape(4, 4 * k)
        minus = (Z[:, None, :] - offsets).reshape(4, 4 * k)
        values = self.residuals(np.concatenate([Z, plus, minus], axis=1))
        difference = values[:, k : 5 * k] - values[:, 5 * k :]
        jacobian = np.transpose(difference.reshape(4, 4, k), (2, 0, 1)) / (2 * self.step)
        return values[:, :k], jacobian

    def newton(self, Z: np.ndarray, tolerance: float, max_iterations: int):
        """
        Damped Newton from every column of ``Z`` (shape ``(4, k)``). Returns the final
        unknowns, residual norms and iteration counts per column.
        """

        Z = np.array(Z, dtype=float)
        k = Z.shape[1]
        iterations = np.zeros(k, dtype=int)
        residual, jacobian = self.residual_and_jacobian(Z)
        norms = np.linalg.norm(residual, axis=0)
        active = np.ones(k, dtype=bool)
        for iteration in range(max_iterations):
            usable = np.isfinite(norms) & np.all(np.isfinite(jacobian), axis=(1, 2))
            active &= usable & ~(norms < tolerance)
            if not active.any():
                break

            columns = np.flatnonzero(active)
            solve = np.linalg.pinv(jacobian[columns])
            direction = -np.einsum("kij,jk->ik", solve, residual[:, columns])
            accepted, damping = self._line_search(Z, columns, direction, norms)

            for column in columns[~accepted]:
                logger.debug(f"Newton stalled at residual {norms[column]:.3e}.")

            active[columns[~accepted]] = False
            moved = columns[accepted]
            if len(moved) == 0:
                break

            Z[:, moved] += damping[accepted] * direction[:, accepted]
            residual[:, moved], jacobian[moved] = self.residual_and_jacobian(Z[:, moved])
            norms[moved] = np.linalg.norm(residual[:, moved], axis=0)
            iterations[moved] = iteration + 1
            logger.debug(
                f"Newton iteration {iteration + 1}: best residual {np.min(norms[moved]):.3e} "
                f"over {len(moved)} start(s)"
            )

        return Z, norms, iterations

    def _line_search(
        self, Z: np.ndarray, columns: np.ndarray, direction: np.ndarray, norms: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Halve the step of each column until its residual decreases. Returns which columns
        found a decrease and the damping factor each ended with.
        """

        damping = np.ones(len(columns))
        accepted = np.zeros(len(columns), dtype=bool)
        searching = np.ones(len(columns), dtype=bool)
        while searching.any():
            trying = np.flatnonzero(searching)
            candidate = Z[:, columns[trying]] + damping[trying] * direction[:, trying]
            trial = np.linalg.norm(self.residuals(candidate), axis=0)
            better = np.isfinite(trial) & (trial < norms[columns[trying]])
            accepted[trying[better]] = True
            searching[trying[better]] = False
            damping[trying[~better]] /= 2
            searching[trying[~better]] = damping[trying[~better]] >= _MIN_DAMPING

        return accepted, damping

    def result(self, z: np.ndarray, residual: float, iterations: int, start: int):
        state = PMPState.from_array(self.bvp.initial_state(z))
        integrals = first_integrals(self.params, state.as_array())
        constants: Optional[ReducedConstants] = None
        conditions_hold = False
        try:
            constants = reduced_constants(self.params, state)
            conditions_hold = constants.Q > 0 and constants.P > 0
        except DegenerateParamsError:
            pass

        return ShootingResult(
            state=state,
            residual=residual,
            iterations=iterations,
            start=start,
            cost=float(integrals[0]) * self.bvp.T,
            integrals=integrals,
            constants=constants,
            conditions_hold=conditions_hold,
        )

    def shoot(
        self, starts: np.ndarray, tolerance: float, max_iterations: int
    ) -> Tuple[List[ShootingResult], float]:
        """
        Converged starts in start order, distinct up to costate distance, and the best
        residual reached by any start.
        """

        Z, norms, iterations = self.newton(starts, tolerance, max_iterations)
        found: List[ShootingResult] = []
        for start in range(Z.shape[1]):
            if not norms[start] < tolerance:
                logger.debug(f"Start {start} failed with residual {norms[start]:.3e}.")
                continue

            elif any(_same(Z[:, start], other.unknowns) for other in found):
                continue

            found.append(self.result(Z[:, start], norms[start], iterations[start], start))
            logger.debug(f"Start {start} found extremal with cost {found[-1].cost:.6f}.")

        finite = norms[np.isfinite(norms)]
        return found, float(finite.min()) if len(finite) else float("inf")


def _starts(initial_guess, restarts: int, seed: Optional[int]) -> np.ndarray:
    first = np.zeros(4) if initial_guess is None else np.asarray(initial_guess, dtype=float)
    rng = np.random.default_rng(seed)
    sampled = rng.uniform(-RESTART_BOX, RESTART_BOX, size=(restarts, 4))
    return np.column_stack([first, *sampled])


def solve_bvp(
    params: RobotParams,
    bvp: BoundaryValueProblem,
    initial_guess: Optional[Sequence[float]] = None,
    dt: float = 1e-2,
    seed: Optional[int] = None,
    restarts: int = RESTARTS,
    tolerance: float = RESIDUAL_TOLERANCE,
    max_iterations: int = MAX_ITERATIONS,
    step: float = DIFFERENCE_STEP,
    select: str = "cheapest",
) -> ShootingResult:
    """
    Damped Newton shooting from ``initial_guess`` (zero costates by default) and ``restarts``
    starts sampled uniformly from ``[-5, 5]^4``. Returns the cheapest converged extremal, or
    with ``select="first"`` the one from the lowest-numbered start.

    Raises:
        :class:`~rolling_sphere.exceptions.NoConvergenceError`: With the best residual reached.
    """

    if select not in SELECTIONS:
        raise ValueError(f"Unknown selection '{select}'.")

    shooter = _Shooter(params, bvp, dt, step)
    found, best = shooter.shoot(_starts(initial_guess, restarts, seed), tolerance, max_iterations)
    if not found:
        raise NoConvergenceError(best, restarts + 1)

    if select == "first":
        return found[0]

    return min(found, key=lambda r: r.cost)


def explore_extremals(
    params: RobotParams,
    bvp: BoundaryValueProblem,
    initial_guess: Optional[Sequence[float]] = None,
    dt: float = 1e-2,
    seed: Optional[int] = None,
    restarts: int = RESTARTS,
    tolerance: float = RESIDUAL_TOLERANCE,
    max_iterations: int = MAX_ITERATIONS,
) -> List[ShootingResult]:
    """
    Run every start and return the distinct converged extremals, cheapest first.

    Raises:
        :class:`~rolling_sphere.exceptions.NoConvergenceError`: When no start converges.
    """

    shooter = _Shooter(params, bvp, dt, DIFFERENCE_STEP)
    found, best = shooter.shoot(_starts(initial_guess, restarts, seed), tolerance, max_iterations)
    if not found:
        raise NoConvergenceError(best, restarts + 1)

    return sorted(found, key=lambda r: r.cost)


def _same(z: np.ndarray, other: np.ndarray) -> bool:
    return bool(np.linalg.norm(z - other) <= 1e-6 * (1 + np.linalg.norm(z)))


def is_local_minimum(
    params: RobotParams,
    bvp: BoundaryValueProblem,
    result: ShootingResult,
    perturbations: int = 50,
    scale: float = 0.05,
    dt: float = 1e-2,
    seed: Optional[int] = None,
) -> bool:
    """
    Re-shoot from randomly perturbed costates and check that no extremal reached meets the
    boundary conditions more cheaply than ``result``.
    """

    shooter = _Shooter(params, bvp, dt, DIFFERENCE_STEP)
    rng = np.random.default_rng(seed)
    z = result.unknowns
    starts = z[:, None] * (1 + scale * rng.standard_normal((4, perturbations)))
    found, _ = shooter.shoot(starts, RESIDUAL_TOLERANCE, MAX_ITERATIONS)
    for other in found:
        if other.cost < result.cost * (1 - 1e-9):
            logger.debug(f"Cheaper extremal found: {other.cost:.6f} < {result.cost:.6f}.")
            return False

    return True


def branch_report(result: ShootingResult) -> str:
    if result.constants is None:
        return "p = 0: straight shape-space line, no pendulum reduction"

    constants = result.constants
    relation = "A < E" if constants.circulating else "A > E"
    conditions = "holds" if result.conditions_hold else "fails"
    return (
        f"{constants.branch} pendulum ({relation}: A={constants.A:.6g}, E={constants.E:.6g}); "
        f"a - 2(sqrt(H) - sigma1) = {constants.Q:.6g} ({conditions})"
    )


__all__ = [
    "BoundaryValueProblem",
    "ShootingResult",
    "branch_report",
    "explore_extremals",
    "is_local_minimum",
    "solve_bvp",
]
