"""
Local principal connection forms ``A_i(phi)``, their curvature ``B(phi)`` and the span
certificate for fiber controllability. Everything here depends on ``phi`` only through
``phi1 - phi2``.
"""
from typing import Tuple

import numpy as np

from rolling_sphere.config import RobotParams
from rolling_sphere.types import (
    ConnectionLocal,
    ControllabilityReport,
    CurvatureLocal,
    shape_array,
)

RANK_TOLERANCE = 1e-10


def _forms(params: RobotParams, delta):
    """Vectorized connection and curvature columns for an array of ``phi1 - phi2``."""
    angle = params.c * np.asarray(delta, dtype=float)
    cos, sin = np.cos(angle), np.sin(angle)
    spin = np.full_like(angle, params.c * params.j_ratio)
    zero = np.zeros_like(angle)
    lever = params.lever

    A_so3_1 = np.stack([lever * cos, lever * sin, spin], axis=-1)
    A_so3_2 = np.stack([lever * cos, lever * sin, -spin], axis=-1)
    A_r2 = params.r * lever * np.stack([sin, -cos], axis=-1)
    B_so3 = params.rho**2 / (2 * params.h * params.w) * np.stack([-sin, cos, zero], axis=-1)
    B_r2 = params.c * params.r * params.rho / params.h * np.stack([cos, sin], axis=-1)
    return A_so3_1, A_so3_2, A_r2, B_so3, B_r2


def connection_at(params: RobotParams, phi) -> ConnectionLocal:
    phi1, phi2 = shape_array(phi)
    A_so3_1, A_so3_2, A_r2, _, _ = _forms(params, phi1 - phi2)
    return ConnectionLocal(A_so3_1=A_so3_1, A_so3_2=A_so3_2, A_r2_1=A_r2, A_r2_2=A_r2)


def curvature_at(params: RobotParams, phi) -> CurvatureLocal:
    """
    Curvature of the connection, ``dA + [A_1, A_2]`` in the trivialization. The bracket enters
    with a plus sign since the group acts on the right.
    """

    phi1, phi2 = shape_array(phi)
    _, _, _, B_so3, B_r2 = _forms(params, phi1 - phi2)
    return CurvatureLocal(B_so3=B_so3, B_r2=B_r2)


def _span_singular_values(params: RobotParams, delta) -> Tuple[np.ndarray, np.ndarray]:
    A_so3_1, A_so3_2, A_r2, B_so3, B_r2 = _forms(params, delta)
    so3_block = np.stack([A_so3_1, A_so3_2, B_so3], axis=-1)
    r2_block = np.stack([A_r2, A_r2, B_r2], axis=-1)
    return (
        np.linalg.svd(so3_block, compute_uv=False),
        np.linalg.svd(r2_block, compute_uv=False),
    )


def _spans(singular_values: np.ndarray, rank: int) -> np.ndarray:
    largest = singular_values[..., 0]
    return (largest > 0) & (singular_values[..., rank - 1] > RANK_TOLERANCE * largest)


def fiber_controllability_certificate(params: RobotParams, phi) -> ControllabilityReport:
    """
    Check that the connection together with its curvature spans ``so(3)`` and ``R^2``
    separately at ``phi``.
    """

    phi1, phi2 = shape_array(phi)
    s_so3, s_r2 = _span_singular_values(params, phi1 - phi2)
    controllable = bool(_spans(s_so3, 3) and _spans(s_r2, 2))
    return ControllabilityReport(
        controllable=controllable, so3_singular_values=s_so3, r2_singular_values=s_r2
    )


def certificate_grid(params: RobotParams, points: int = 100) -> Tuple[bool, float]:
    """
    Evaluate the certificate on a ``points x points`` grid over one period of ``phi1 - phi2``.
    Returns whether it holds everywhere and the smallest relevant singular value.
    """

    if params.c == 0:
        return False, 0.0

    period = 2 * np.pi / params.c
    phi1, phi2 = np.meshgrid(*(np.arange(points) * period / points,) * 2, indexing="ij")
    s_so3, s_r2 = _span_singular_values(params, (phi1 - phi2).ravel())
    holds = bool(np.all(_spans(s_so3, 3) & _spans(s_r2, 2)))
    return holds, float(min(s_so3[:, 2].min(), s_r2[:, 1].min()))
