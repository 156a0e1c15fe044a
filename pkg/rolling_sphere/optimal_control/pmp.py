"""
Hamiltonian system of the energy-optimal rolling problem.

State arrays carry the eight components ``(phi1, phi2, x1, x2, gamma1, gamma2, p1, p2)``
along the first axis; any trailing axes are independent extremals integrated together.
"""
from typing import Callable, Tuple, Union

import numpy as np
from scipy import integrate as sp_integrate

from rolling_sphere.config import RobotParams
from rolling_sphere.exceptions import InvalidStepError
from rolling_sphere.geometry import hat, project_rotation
from rolling_sphere.kinematics import spatial_angular_velocity, time_grid
from rolling_sphere.logging import logger
from rolling_sphere.types import Costate, PMPState, PMPTrajectory, Trajectory, shape_array

StateLike = Union[PMPState, np.ndarray]


def _state_array(state: StateLike) -> np.ndarray:
    if isinstance(state, PMPState):
        return state.as_array()

    return np.asarray(state, dtype=float)


def _controls(params: RobotParams, y: np.ndarray):
    angle = params.c * (y[0] - y[1])
    sin, cos = np.sin(angle), np.cos(angle)
    drift = params.r * params.lever * (y[6] * sin - y[7] * cos)
    return y[4] - drift, y[5] - drift, sin, cos


def optimal_control_law(params: RobotParams, phi, costate: Costate) -> Tuple[float, float]:
    """
    Wheel rates maximizing the control Hamiltonian,
    ``u_i = gamma_i - (r rho / 2h)(p1 sin(c dphi) - p2 cos(c dphi))``.
    """

    phi1, phi2 = shape_array(phi)
    y = np.array([phi1, phi2, 0.0, 0.0, *costate.as_array()])
    u1, u2, _, _ = _controls(params, y)
    return float(u1), float(u2)


def hamiltonian(params: RobotParams, state: StateLike):
    u1, u2, _, _ = _controls(params, _state_array(state))
    return 0.5 * (u1**2 + u2**2)


def pmp_rhs(params: RobotParams, state: StateLike) -> np.ndarray:
    y = _state_array(state)
    u1, u2, sin, cos = _controls(params, y)
    speed = params.r * params.lever * (u1 + u2)
    gamma_dot = params.c * params.r * params.lever * (y[6] * cos + y[7] * sin) * (u1 + u2)
    zero = np.zeros_like(u1)
    return np.stack([u1, u2, -speed * sin, speed * cos, gamma_dot, -gamma_dot, zero, zero])


def first_integrals(params: RobotParams, state: StateLike) -> np.ndarray:
    """``(H, gamma1 + gamma2, p1, p2)``, pairwise in involution."""
    y = _state_array(state)
    return np.stack([hamiltonian(params, y), y[4] + y[5], y[6], y[7]])


def _rk4(rhs: Callable[[np.ndarray], np.ndarray], y: np.ndarray, h: float) -> np.ndarray:
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * h * k1)
    k3 = rhs(y + 0.5 * h * k2)
    k4 = rhs(y + h * k3)
    return y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def propagate(params: RobotParams, state: StateLike, T: float, dt: float) -> np.ndarray:
    """
    Final state after ``T``, without storing samples. Columns of a ``(8, k)`` array are
    integrated side by side.
    """

    y = _state_array(state).copy()
    grid = time_grid(T, dt)
    for h in np.diff(grid):
        y = _rk4(lambda z: pmp_rhs(params, z), y, h)

    return y


def integrate_pmp(params: RobotParams, state0: StateLike, T: float, dt: float) -> PMPTrajectory:
    """
    Classical RK4 on the extremal flow.

    Raises:
        :class:`~rolling_sphere.exceptions.InvalidStepError`: When ``dt <= 0`` or ``T < 0``.
    """

    grid = time_grid(T, dt)
    states = np.empty((len(grid), 8))
    states[0] = _state_array(state0)
    for k, h in enumerate(np.diff(grid), start=1):
        states[k] = _rk4(lambda z: pmp_rhs(params, z), states[k - 1], h)

    trajectory = PMPTrajectory(t=grid, states=states)
    drift = first_integral_drift(params, trajectory)
    logger.debug(f"First integral drift over T={T}: {np.array2string(drift, precision=3)}")
    return trajectory


def integrate_pmp_pose(
    params: RobotParams, state0: StateLike, T: float, dt: float
) -> Tuple[PMPTrajectory, Trajectory]:
    """
    Integrate the extremal together with the sphere orientation (from ``R = I``) so the
    solution can be written in the kinematic trajectory schema.
    """

    def rhs(z: np.ndarray) -> np.ndarray:
        u1, u2, _, _ = _controls(params, z[:8])
        omega = spatial_angular_velocity(params, z[:2], (u1, u2))
        R_dot = hat(omega) @ z[8:].reshape(3, 3)
        return np.concatenate([pmp_rhs(params, z[:8]), R_dot.ravel()])

    grid = time_grid(T, dt)
    states = np.empty((len(grid), 17))
    states[0] = np.concatenate([_state_array(state0), np.eye(3).ravel()])
    for k, h in enumerate(np.diff(grid), start=1):
        z = _rk4(rhs, states[k - 1], h)
        z[8:] = project_rotation(z[8:].reshape(3, 3)).ravel()
        states[k] = z

    pmp_trajectory = PMPTrajectory(t=grid, states=states[:, :8])
    u1, u2, _, _ = _controls(params, states[:, :8].T)
    pose_trajectory = Trajectory(
        t=grid,
        phi=states[:, 0:2],
        R=states[:, 8:].reshape(-1, 3, 3),
        x=states[:, 2:4],
        u=np.stack([u1, u2], axis=1),
    )
    return pmp_trajectory, pose_trajectory


def first_integral_drift(params: RobotParams, trajectory: PMPTrajectory) -> np.ndarray:
    """Largest deviation of each first integral from its initial value."""
    values = first_integrals(params, trajectory.states.T)
    return np.max(np.abs(values - values[:, :1]), axis=1)


def controls_along(params: RobotParams, trajectory: PMPTrajectory) -> np.ndarray:
    u1, u2, _, _ = _controls(params, trajectory.states.T)
    return np.stack([u1, u2], axis=1)


def control_cost(params: RobotParams, trajectory: PMPTrajectory) -> float:
    """``∫ |u|^2 / 2 dt`` by composite Simpson quadrature."""
    if len(trajectory) < 2:
        return 0.0

    u = controls_along(params, trajectory)
    return float(sp_integrate.simpson(0.5 * np.sum(u**2, axis=1), x=trajectory.t))


def hamiltonian_gradient(params: RobotParams, state: StateLike, step: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of ``H`` in ``(phi, x, gamma, p)`` order."""
    return numeric_gradient(lambda y: hamiltonian(params, y), _state_array(state), step)


def numeric_gradient(function: Callable[[np.ndarray], float], y: np.ndarray, step: float):
    if not step > 0:
        raise InvalidStepError(f"Difference step must be positive, got {step}.")

    offsets = step * np.eye(len(y))
    return np.array(
        [(function(y + e) - function(y - e)) / (2 * step) for e in offsets], dtype=float
    )


def poisson_bracket(
    f: Callable[[np.ndarray], float],
    g: Callable[[np.ndarray], float],
    state: StateLike,
    step: float = 1e-6,
) -> float:
    """
    ``{f, g}`` in the canonical pairs ``(phi_i, gamma_i)`` and ``(x_i, p_i)``, from
    central-difference gradients.
    """

    y = _state_array(state)
    df, dg = numeric_gradient(f, y, step), numeric_gradient(g, y, step)
    q, p = slice(0, 4), slice(4, 8)
    return float(np.dot(df[q], dg[p]) - np.dot(df[p], dg[q]))


def canonical_angles(state: StateLike) -> Tuple[float, float, float]:
    """``(varphi1, varphi2, sigma2)`` of the canonical change of coordinates."""
    y = _state_array(state)
    return float(y[0] + y[1]), float(y[0] - y[1]), float(0.5 * (y[4] - y[5]))


def shape_speed(params: RobotParams, trajectory: PMPTrajectory) -> np.ndarray:
    return np.sqrt(np.sum(controls_along(params, trajectory) ** 2, axis=1))
