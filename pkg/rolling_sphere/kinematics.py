"""
The rolling constraint: wheel rates to spatial angular velocity and center velocity, and
fixed-step reconstruction of the full state on ``S x SO(3) x R^2``.
"""
import math
from typing import Callable, Tuple, Union

import numpy as np

from rolling_sphere.config import RobotParams
from rolling_sphere.exceptions import InvalidStepError
from rolling_sphere.geometry import hat, project_rotation
from rolling_sphere.logging import logger
from rolling_sphere.types import PiecewiseControl, Pose, ShapeState, Trajectory, shape_array

ControlLaw = Union[Tuple[float, float], np.ndarray, Callable[[float], np.ndarray]]
"""Constant ``(u1, u2)`` or a callable of time returning wheel rates."""

_STATE_SIZE = 13


def _control_fn(u: ControlLaw) -> Callable[[float], np.ndarray]:
    if callable(u):
        return lambda t: np.asarray(u(t), dtype=float)

    constant = np.asarray(u, dtype=float)
    return lambda t: constant


def psi(params: RobotParams, phi) -> float:
    """Yaw of the internal unit relative to the shell, ``c (phi1 - phi2)``."""
    phi1, phi2 = shape_array(phi)
    return params.c * (phi1 - phi2)


def spatial_angular_velocity(params: RobotParams, phi, u) -> np.ndarray:
    phi1, phi2 = shape_array(phi)
    u1, u2 = np.asarray(u, dtype=float)
    angle = params.c * (phi1 - phi2)
    roll = -params.lever * (u1 + u2)
    return np.array(
        [
            roll * math.cos(angle),
            roll * math.sin(angle),
            -params.c * params.j_ratio * (u1 - u2),
        ]
    )


def center_velocity(params: RobotParams, phi, u) -> np.ndarray:
    phi1, phi2 = shape_array(phi)
    u1, u2 = np.asarray(u, dtype=float)
    angle = params.c * (phi1 - phi2)
    speed = params.r * params.lever * (u1 + u2)
    return np.array([-speed * math.sin(angle), speed * math.cos(angle)])


def horizontal_lift(
    params: RobotParams, phi, R, u
) -> Tuple[float, float, np.ndarray, np.ndarray]:
    """
    The admissible velocity ``(phi1_dot, phi2_dot, R_dot, x_dot)`` over the shape
    velocity ``u``, with ``R_dot = hat(omega) R``.
    """

    u1, u2 = (float(v) for v in np.asarray(u, dtype=float))
    omega = spatial_angular_velocity(params, phi, (u1, u2))
    return u1, u2, hat(omega) @ np.asarray(R, dtype=float), center_velocity(params, phi, (u1, u2))


def _rhs(params: RobotParams, y: np.ndarray, u: np.ndarray) -> np.ndarray:
    phi = y[0:2]
    R = y[2:11].reshape(3, 3)
    u1, u2, R_dot, x_dot = horizontal_lift(params, phi, R, u)
    return np.concatenate([[u1, u2], R_dot.ravel(), x_dot])


def _rk4_step(params: RobotParams, control, t: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = _rhs(params, y, control(t))
    k2 = _rhs(params, y + 0.5 * h * k1, control(t + 0.5 * h))
    k3 = _rhs(params, y + 0.5 * h * k2, control(t + 0.5 * h))
    k4 = _rhs(params, y + h * k3, control(t + h))
    y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
    y[2:11] = project_rotation(y[2:11].reshape(3, 3)).ravel()
    return y


def time_grid(T: float, dt: float) -> np.ndarray:
    """
    Uniform grid ``0, dt, 2 dt, ...`` ending exactly at ``T``; the last step shrinks.
    """

    if not (math.isfinite(dt) and dt > 0):
        raise InvalidStepError(f"Step must be positive, got dt={dt}.")

    elif not (math.isfinite(T) and T >= 0):
        raise InvalidStepError(f"Horizon must be non-negative, got T={T}.")

    steps = int(math.ceil(T / dt - 1e-9))
    if T > 0:
        steps = max(steps, 1)

    grid = np.arange(steps + 1) * dt
    grid[-1] = T
    if steps > 1 and grid[-1] - grid[-2] <= 0:
        grid = np.delete(grid, -2)

    return grid


def _integrate_arrays(params, y0: np.ndarray, control, t0: float, T: float, dt: float):
    grid = t0 + time_grid(T, dt)
    states = np.empty((len(grid), _STATE_SIZE))
    controls = np.empty((len(grid), 2))
    states[0] = y0
    controls[0] = control(grid[0])
    for k in range(1, len(grid)):
        states[k] = _rk4_step(params, control, grid[k - 1], states[k - 1], grid[k] - grid[k - 1])
        controls[k] = control(grid[k])

    return grid, states, controls


def _initial_vector(q0: Tuple[ShapeState, Pose]) -> np.ndarray:
    shape, pose = q0
    return np.concatenate([shape_array(shape), pose.R.ravel(), pose.x])


def _to_trajectory(t, states, controls) -> Trajectory:
    return Trajectory(
        t=t,
        phi=states[:, 0:2],
        R=states[:, 2:11].reshape(-1, 3, 3),
        x=states[:, 11:13],
        u=controls,
    )


def integrate(
    params: RobotParams,
    q0: Tuple[ShapeState, Pose],
    u: ControlLaw,
    T: float,
    dt: float,
) -> Trajectory:
    """
    Integrate the kinematic control system with classical RK4, treating ``R`` as nine
    components and projecting it back onto ``SO(3)`` after every step.

    Control switches are not detected; use :func:`integrate_piecewise` for piecewise laws.

    Raises:
        :class:`~rolling_sphere.exceptions.InvalidStepError`: When ``dt <= 0`` or ``T < 0``.
    """

    grid, states, controls = _integrate_arrays(
        params, _initial_vector(q0), _control_fn(u), 0.0, T, dt
    )
    logger.debug(f"Integrated {len(grid) - 1} step(s) to T={T}.")
    return _to_trajectory(grid, states, controls)


def integrate_piecewise(
    params: RobotParams, q0: Tuple[ShapeState, Pose], control: PiecewiseControl, dt: float
) -> Trajectory:
    """
    Integrate one segment at a time so every switch of ``control`` is a grid point.
    """

    y = _initial_vector(q0)
    times, states, controls = [np.zeros(1)], [y[None, :]], [np.array([control(0.0)])]
    start = 0.0
    for duration, u1, u2 in control.segments:
        rates = np.array([u1, u2])
        grid, segment_states, _ = _integrate_arrays(params, y, lambda t: rates, start, duration, dt)
        times.append(grid[1:])
        states.append(segment_states[1:])
        controls.append(np.tile(rates, (len(grid) - 1, 1)))
        y = segment_states[-1]
        start = grid[-1]

    return _to_trajectory(np.concatenate(times), np.vstack(states), np.vstack(controls))


def no_slip_residual(params: RobotParams, trajectory: Trajectory) -> np.ndarray:
    """
    ``x_dot - r (omega2, -omega1)`` at interior samples, with both sides taken from
    central differences of the trajectory.
    """

    t, R, x = trajectory.t, trajectory.R, trajectory.x
    if len(t) < 3:
        return np.zeros((0, 2))

    span = (t[2:] - t[:-2])[:, None]
    x_dot = (x[2:] - x[:-2]) / span
    R_dot = (R[2:] - R[:-2]) / span[:, :, None]
    omega_hat = R_dot @ np.swapaxes(R[1:-1], -1, -2)
    omega1, omega2 = omega_hat[:, 2, 1], omega_hat[:, 0, 2]
    return x_dot - params.r * np.stack([omega2, -omega1], axis=1)


def vertical_momentum(params: RobotParams, trajectory: Trajectory) -> np.ndarray:
    """
    ``omega3 + (J / I_s) psi_dot`` at interior samples from central differences; zero for
    admissible motions.
    """

    t, R, phi = trajectory.t, trajectory.R, trajectory.phi
    if len(t) < 3:
        return np.zeros(0)

    span = t[2:] - t[:-2]
    R_dot = (R[2:] - R[:-2]) / span[:, None, None]
    omega3 = (R_dot @ np.swapaxes(R[1:-1], -1, -2))[:, 1, 0]
    psi_values = params.c * (phi[:, 0] - phi[:, 1])
    psi_dot = (psi_values[2:] - psi_values[:-2]) / span
    return omega3 + params.j_ratio * psi_dot
