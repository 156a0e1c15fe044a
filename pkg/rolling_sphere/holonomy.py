"""
Geometric phases of closed loops in the wheel-angle plane.

Translations follow the area rule, the negative integral of the ``R^2`` curvature over the
enclosed region. Rotations along the diagonal rectangle are products of one exponential
per edge, later edges multiplying on the left.
"""
from typing import Sequence

import numpy as np
from scipy import integrate as sp_integrate

from rolling_sphere.config import RobotParams
from rolling_sphere.connection import curvature_at
from rolling_sphere.exceptions import DegenerateParamsError, OpenLoopError
from rolling_sphere.geometry import E3, rot_exp
from rolling_sphere.kinematics import integrate_piecewise
from rolling_sphere.logging import logger
from rolling_sphere.types import (
    PiecewiseControl,
    Pose,
    RectLoopDiag,
    RectLoopXY,
    ShapeState,
    Trajectory,
)

_CLOSURE_TOLERANCE = 1e-9


def translational_holonomy_rect(params: RobotParams, loop: RectLoopXY) -> np.ndarray:
    c = params.c
    alpha, beta = loop.alpha, loop.beta
    scale = params.r * params.rho / (c * params.h)
    return scale * np.array(
        [
            np.cos(c * alpha) + np.cos(c * beta) - np.cos(c * (alpha - beta)) - 1,
            np.sin(c * alpha) - np.sin(c * beta) - np.sin(c * (alpha - beta)),
        ]
    )


def translational_holonomy_diag(params: RobotParams, loop: RectLoopDiag) -> np.ndarray:
    """
    Only the two forward legs move the center; the counter-rotating legs spin in place.
    """

    c_beta = params.c * loop.beta
    return params.r * params.lever * loop.alpha * np.array([np.sin(c_beta), 1 - np.cos(c_beta)])


def rect_xy_control(loop: RectLoopXY, speed: float = 1.0) -> PiecewiseControl:
    alpha, beta = loop.alpha / speed, loop.beta / speed
    return PiecewiseControl(
        segments=[
            (alpha, speed, 0.0),
            (beta, 0.0, speed),
            (alpha, -speed, 0.0),
            (beta, 0.0, -speed),
        ]
    )


def rect_loop_control(loop: RectLoopDiag) -> PiecewiseControl:
    return PiecewiseControl(
        segments=[
            (loop.alpha, 0.5, 0.5),
            (loop.beta, 0.5, -0.5),
            (loop.alpha, -0.5, -0.5),
            (loop.beta, -0.5, 0.5),
        ]
    )


def polygon_control(vertices: Sequence[Sequence[float]], speed: float = 1.0) -> PiecewiseControl:
    """
    Traverse the closed polygon through ``vertices`` in order, at constant shape speed.
    """

    points = np.asarray(vertices, dtype=float)
    segments = []
    for start, end in zip(points, np.roll(points, -1, axis=0)):
        edge = end - start
        length = float(np.linalg.norm(edge))
        if length == 0:
            continue

        duration = length / speed
        segments.append((duration, *(edge / duration)))

    return PiecewiseControl(segments=segments)


def _loop_trajectory(
    params: RobotParams, control: PiecewiseControl, dt: float, phi0=(0.0, 0.0)
) -> Trajectory:
    gap = float(np.linalg.norm(control.shape_at(control.duration, phi0) - np.asarray(phi0)))
    if gap > _CLOSURE_TOLERANCE * max(1.0, control.duration):
        raise OpenLoopError(gap)

    start = (ShapeState.from_array(phi0), Pose.identity())
    return integrate_piecewise(params, start, control, dt)


def translational_holonomy_numeric(
    params: RobotParams, control: PiecewiseControl, dt: float = 1e-4, phi0=(0.0, 0.0)
) -> np.ndarray:
    """
    Net center displacement from integrating the rolling constraint around a closed loop.
    """

    trajectory = _loop_trajectory(params, control, dt, phi0)
    logger.debug(f"Loop integrated with {len(trajectory) - 1} step(s).")
    return trajectory.displacement


def rotational_holonomy_numeric(
    params: RobotParams, control: PiecewiseControl, dt: float = 1e-4, phi0=(0.0, 0.0)
) -> np.ndarray:
    return _loop_trajectory(params, control, dt, phi0).R[-1]


def rotational_holonomy_rect(params: RobotParams, loop: RectLoopDiag) -> np.ndarray:
    """
    Rotation reached from ``R = I`` after one traversal of the diagonal rectangle.
    """

    spin = params.c * params.j_ratio
    c_beta = params.c * loop.beta
    roll = loop.alpha * params.lever
    first = rot_exp(-roll * np.array([1.0, 0.0, 0.0]))
    second = rot_exp(-loop.beta * spin * E3)
    third = rot_exp(roll * np.array([np.cos(c_beta), np.sin(c_beta), 0.0]))
    fourth = rot_exp(loop.beta * spin * E3)
    return fourth @ third @ second @ first


def pure_rotation_beta(params: RobotParams) -> float:
    """
    Counter-rotation leg length that makes the diagonal loop's translation vanish.

    Raises:
        :class:`~rolling_sphere.exceptions.DegenerateParamsError`: When ``c = 0``.
    """

    if params.c == 0:
        raise DegenerateParamsError("Pure rotation loop undefined when c = 0.")

    return 2 * np.pi / params.c


def area_rule_quadrature(
    params: RobotParams, polygon: Sequence[Sequence[float]], tolerance: float = 1e-12
) -> np.ndarray:
    """
    ``-∬ B^{R^2}`` over a simple polygon in the wheel-angle plane, orientation included,
    integrated triangle by triangle over a fan from the first vertex.
    """

    points = np.asarray(polygon, dtype=float)
    total = np.zeros(2)
    for left, right in zip(points[1:-1], points[2:]):
        edge1, edge2 = left - points[0], right - points[0]
        jacobian = edge1[0] * edge2[1] - edge1[1] * edge2[0]
        if jacobian == 0:
            continue

        for component in range(2):

            def integrand(t: float, s: float, index: int = component) -> float:
                phi = points[0] + s * edge1 + t * edge2
                return float(curvature_at(params, phi).B_r2[index])

            value, _ = sp_integrate.dblquad(
                integrand, 0, 1, 0, lambda s: 1 - s, epsabs=tolerance, epsrel=tolerance
            )
            total[component] -= jacobian * value

    return total
