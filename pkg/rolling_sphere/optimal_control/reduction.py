"""
Closed-form extremals through the pendulum reduction.

Along an extremal, ``theta`` defined by ``(varphi1_dot, varphi2_dot) = 2 sqrt(H) (cos theta,
sin theta)`` obeys ``theta_dot = c a cos(c varphi2 - delta)``. The substitution
``tan(vartheta / 2) = sqrt(P / Q) tan(theta / 2)`` turns this into the pendulum
``vartheta_dot^2 = 2 (E + A cos vartheta)``. When ``A < E`` the pendulum circulates and
``vartheta / 2`` is a Jacobi amplitude; when ``A > E`` it librates and ``sin(vartheta / 2)``
is a scaled ``sn``.
"""
import math
from typing import Tuple

import numpy as np
from scipy import integrate as sp_integrate

from rolling_sphere.config import RobotParams
from rolling_sphere.elliptic import complete_K, elliptic_F, jacobi_am
from rolling_sphere.exceptions import BranchError, ConditionError, DegenerateParamsError
from rolling_sphere.kinematics import time_grid
from rolling_sphere.optimal_control.pmp import hamiltonian, optimal_control_law
from rolling_sphere.types import PMPState, ReducedConstants, ShapeTrajectory
from rolling_sphere.utils import wrap_to_pi

M_CONVENTIONS = ("parameter", "literal")


def reduced_constants(params: RobotParams, state: PMPState) -> ReducedConstants:
    """
    Raises:
        :class:`~rolling_sphere.exceptions.DegenerateParamsError`: When ``p = 0``, where the
          reduction does not apply (the extremal is a straight line in shape space).
    """

    costate = state.costate
    if costate.p_norm == 0:
        raise DegenerateParamsError("Translation costate is zero; delta is undefined.")

    H = float(hamiltonian(params, state))
    sigma1 = 0.5 * (state.gamma1 + state.gamma2)
    a = params.r * params.rho / params.h * costate.p_norm
    c2 = params.c**2
    return ReducedConstants(
        H=H,
        sigma1=sigma1,
        a=a,
        E=0.5 * c2 * (a**2 + 4 * (H - sigma1**2)),
        A=2 * c2 * a * math.sqrt(H),
    )


def initial_angles(params: RobotParams, state: PMPState) -> Tuple[float, float, int]:
    """
    ``(delta, theta0, sign)`` where ``sign`` is the sign of ``theta_dot(0)``.
    """

    costate = state.costate
    if costate.p_norm == 0:
        raise DegenerateParamsError("Translation costate is zero; delta is undefined.")

    u1, u2 = optimal_control_law(params, state.shape, costate)
    if u1 == 0 and u2 == 0:
        raise DegenerateParamsError("Zero shape velocity; theta is undefined.")

    delta = costate.delta
    theta0 = math.atan2(u1 - u2, u1 + u2)
    sign = 1 if math.cos(params.c * (state.phi1 - state.phi2) - delta) >= 0 else -1
    return delta, theta0, sign


def _check_conditions(constants: ReducedConstants):
    if not (constants.Q > 0 and constants.P > 0):
        raise ConditionError(
            f"Pendulum substitution undefined: a - 2(sqrt(H) - sigma1) = {constants.Q:.6g}, "
            f"a + 2(sqrt(H) + sigma1) = {constants.P:.6g}."
        )


def _vartheta_from_theta(constants: ReducedConstants, theta: float) -> float:
    half = 0.5 * wrap_to_pi(theta)
    return 2 * math.atan2(math.sqrt(constants.P / constants.Q) * math.sin(half), math.cos(half))


def _theta_from_half_vartheta(constants: ReducedConstants, half: np.ndarray) -> np.ndarray:
    turns = np.round(half / np.pi)
    rest = half - turns * np.pi
    ratio = math.sqrt(constants.Q / constants.P)
    return 2 * (np.arctan2(ratio * np.sin(rest), np.cos(rest)) + turns * np.pi)


def pendulum_angle(
    constants: ReducedConstants, theta0: float, sign: int, t, m_convention: str = "parameter"
) -> np.ndarray:
    """
    ``vartheta(t)`` on the circulating branch, unwrapped:
    ``vartheta / 2 = am(m, F(m, vartheta0 / 2) + sign sqrt((E + A) / 2) t)``.

    ``m_convention="parameter"`` passes ``2A / (E + A)``; ``"literal"`` passes its square
    root, which does not solve the pendulum equation and is kept for comparison.

    Raises:
        :class:`~rolling_sphere.exceptions.BranchError`: When ``A >= E``.
        :class:`~rolling_sphere.exceptions.ConditionError`: When ``P <= 0`` or ``Q <= 0``.
    """

    if not constants.circulating:
        raise BranchError(
            f"Closed form needs A < E (A={constants.A:.6g}, E={constants.E:.6g}); "
            "use the librating solution."
        )

    _check_conditions(constants)
    if m_convention not in M_CONVENTIONS:
        raise ValueError(f"Unknown m convention '{m_convention}'.")

    m = constants.m_parameter if m_convention == "parameter" else constants.m_literal
    start = elliptic_F(m, 0.5 * _vartheta_from_theta(constants, theta0))
    rate = sign * math.sqrt(0.5 * (constants.E + constants.A))
    return 2 * np.asarray(jacobi_am(m, start + rate * np.asarray(t, dtype=float)))


def pendulum_angle_librating(
    constants: ReducedConstants, theta0: float, sign: int, t
) -> Tuple[np.ndarray, np.ndarray]:
    """
    ``vartheta(t)`` on the librating branch, ``sin(vartheta / 2) = k sn(sqrt(A) t + tau0)``
    with ``k^2 = (E + A) / 2A``, and the sign of ``vartheta_dot`` at each time.

    Raises:
        :class:`~rolling_sphere.exceptions.BranchError`: When ``A <= E``.
        :class:`~rolling_sphere.exceptions.ConditionError`: When ``P <= 0`` or ``Q <= 0``.
    """

    if not constants.A > constants.E:
        raise BranchError(
            f"Librating solution needs A > E (A={constants.A:.6g}, E={constants.E:.6g})."
        )

    _check_conditions(constants)
    k2 = (constants.E + constants.A) / (2 * constants.A)
    k = math.sqrt(k2)
    ratio = np.clip(math.sin(0.5 * _vartheta_from_theta(constants, theta0)) / k, -1.0, 1.0)
    tau0 = elliptic_F(k2, math.asin(ratio))
    if sign < 0:
        tau0 = 2 * complete_K(k2) - tau0

    amplitude = np.asarray(jacobi_am(k2, math.sqrt(constants.A) * np.asarray(t, float) + tau0))
    vartheta = 2 * np.arcsin(k * np.sin(amplitude))
    return vartheta, np.where(np.cos(amplitude) >= 0, 1, -1)


def _varphi2(params, constants, delta, theta, rate_sign, phi2_0) -> np.ndarray:
    ratio = -2 * (constants.sqrt_H * np.cos(theta) - constants.sigma1) / constants.a
    ratio = np.clip(ratio, -1.0, 1.0)
    phase = np.unwrap(np.arctan2(ratio, rate_sign * np.sqrt(1 - ratio**2)))
    turns = np.round((params.c * phi2_0 - delta - phase[0]) / (2 * np.pi))
    return (phase + delta + 2 * np.pi * turns) / params.c


def _with_origin(t) -> np.ndarray:
    return np.concatenate([[0.0], np.atleast_1d(np.asarray(t, dtype=float))])


def _strip_origin(values: np.ndarray, t) -> np.ndarray:
    return values[1:] if np.ndim(t) else values[1]


def exact_solution(
    params: RobotParams,
    constants: ReducedConstants,
    delta: float,
    theta0: float,
    sign: int,
    t,
    m_convention: str = "parameter",
    phi2_0: float = 0.0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    ``(theta(t), varphi2(t))`` of a circulating extremal. ``t`` must be non-negative and
    sorted; ``varphi2`` is continued from ``phi2_0`` at ``t = 0``.

    Raises:
        :class:`~rolling_sphere.exceptions.BranchError`: When ``A >= E``.
        :class:`~rolling_sphere.exceptions.ConditionError`: When ``a - 2(sqrt(H) - sigma1) <= 0``.
    """

    times = _with_origin(t)
    half = 0.5 * pendulum_angle(constants, theta0, sign, times, m_convention=m_convention)
    theta = _theta_from_half_vartheta(constants, half)
    varphi2 = _varphi2(params, constants, delta, theta, sign, phi2_0)
    return _strip_origin(theta, t), _strip_origin(varphi2, t)


def exact_solution_librating(
    params: RobotParams,
    constants: ReducedConstants,
    delta: float,
    theta0: float,
    sign: int,
    t,
    phi2_0: float = 0.0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Same as :func:`exact_solution` for extremals with ``A > E``.
    """

    times = _with_origin(t)
    vartheta, rate_sign = pendulum_angle_librating(constants, theta0, sign, times)
    theta = _theta_from_half_vartheta(constants, 0.5 * vartheta)
    varphi2 = _varphi2(params, constants, delta, theta, rate_sign, phi2_0)
    return _strip_origin(theta, t), _strip_origin(varphi2, t)


def exact_extremal(
    params: RobotParams, state: PMPState, t, m_convention: str = "parameter"
) -> Tuple[np.ndarray, np.ndarray, ReducedConstants]:
    """
    Closed-form ``(theta, varphi2)`` from an initial extremal state on whichever pendulum
    branch it lies.
    """

    constants = reduced_constants(params, state)
    delta, theta0, sign = initial_angles(params, state)
    phi2_0 = state.phi1 - state.phi2
    if constants.circulating:
        theta, varphi2 = exact_solution(
            params, constants, delta, theta0, sign, t, m_convention=m_convention, phi2_0=phi2_0
        )
    else:
        theta, varphi2 = exact_solution_librating(
            params, constants, delta, theta0, sign, t, phi2_0=phi2_0
        )

    return theta, varphi2, constants


def theta_along(params: RobotParams, states: np.ndarray) -> np.ndarray:
    """``theta`` extracted from sampled extremal states, unwrapped."""
    y = np.asarray(states, dtype=float).T
    angle = params.c * (y[0] - y[1])
    drift = params.r * params.lever * (y[6] * np.sin(angle) - y[7] * np.cos(angle))
    u1, u2 = y[4] - drift, y[5] - drift
    return np.unwrap(np.arctan2(u1 - u2, u1 + u2))


def reconstruct_by_quadrature(
    params: RobotParams,
    theta,
    constants: ReducedConstants,
    x0,
    phi0,
    T: float,
    dt: float,
) -> ShapeTrajectory:
    """
    Recover ``phi`` and ``x`` from ``theta`` sampled on the grid of ``T`` and ``dt`` by
    composite Simpson quadrature of ``varphi_dot = 2 sqrt(H) (cos theta, sin theta)`` and
    of the center velocity.
    """

    grid = time_grid(T, dt)
    theta = np.asarray(theta, dtype=float)
    if theta.shape != grid.shape:
        raise ValueError(f"theta has {theta.shape} samples, grid has {grid.shape}.")

    phi0 = np.asarray(phi0, dtype=float)
    speed = 2 * constants.sqrt_H
    varphi1 = (phi0[0] + phi0[1]) + _cumulative(speed * np.cos(theta), grid)
    varphi2 = (phi0[0] - phi0[1]) + _cumulative(speed * np.sin(theta), grid)
    angle = params.c * varphi2
    forward = params.r * params.lever * speed * np.cos(theta)
    x = np.asarray(x0, dtype=float) + np.stack(
        [
            _cumulative(-forward * np.sin(angle), grid),
            _cumulative(forward * np.cos(angle), grid),
        ],
        axis=1,
    )
    phi = 0.5 * np.stack([varphi1 + varphi2, varphi1 - varphi2], axis=1)
    return ShapeTrajectory(t=grid, phi=phi, x=x)


def _cumulative(values: np.ndarray, grid: np.ndarray) -> np.ndarray:
    if len(grid) < 2:
        return np.zeros_like(grid)

    elif len(grid) == 2:
        return sp_integrate.cumulative_trapezoid(values, x=grid, initial=0)

    return sp_integrate.cumulative_simpson(values, x=grid, initial=0)
