"""
Rotation and ``so(3)`` primitives. Rotations are plain ``3 x 3`` arrays.
"""
from typing import Tuple

import numpy as np

from rolling_sphere.exceptions import DegenerateRotationError, NotSkewError
from rolling_sphere.utils import ORTHOGONALITY_TOLERANCE, SMALL_ANGLE

_POLAR_TOLERANCE = 1e-14
_POLAR_MAX_ITERATIONS = 100
E3 = np.array([0.0, 0.0, 1.0])


def hat(v) -> np.ndarray:
    """
    Map a 3-vector to the skew matrix with ``hat(v) @ w == cross(v, w)``.
    """

    v1, v2, v3 = np.asarray(v, dtype=float)
    return np.array([[0.0, -v3, v2], [v3, 0.0, -v1], [-v2, v1, 0.0]])


def unhat(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    asymmetry = float(np.linalg.norm(M + M.T))
    if asymmetry > ORTHOGONALITY_TOLERANCE:
        raise NotSkewError(asymmetry)

    skew = 0.5 * (M - M.T)
    return np.array([skew[2, 1], skew[0, 2], skew[1, 0]])


def rot_exp(v) -> np.ndarray:
    """
    Rodrigues' formula for ``exp(hat(v))``.
    """

    v = np.asarray(v, dtype=float)
    angle = float(np.linalg.norm(v))
    K = hat(v)
    if angle < SMALL_ANGLE:
        # Second order Taylor expansion of sin and versine.
        return np.eye(3) + K + 0.5 * K @ K

    return np.eye(3) + (np.sin(angle) / angle) * K + ((1 - np.cos(angle)) / angle**2) * K @ K


def project_rotation(M) -> np.ndarray:
    """
    Nearest rotation to ``M`` (the orthogonal polar factor), found by iterating
    ``M <- (M + M^{-T}) / 2``.

    Raises:
        :class:`~rolling_sphere.exceptions.DegenerateRotationError`: When ``det M <= 0``.
    """

    M = np.array(M, dtype=float)
    if not np.linalg.det(M) > 0:
        raise DegenerateRotationError(f"Cannot project matrix with det {np.linalg.det(M):.3e}.")

    for _ in range(_POLAR_MAX_ITERATIONS):
        updated = 0.5 * (M + np.linalg.inv(M).T)
        change = np.max(np.abs(updated - M))
        M = updated
        if change < _POLAR_TOLERANCE:
            break

    return M


def axis_angle(R) -> Tuple[np.ndarray, float]:
    """
    Unit axis and angle in ``[0, pi]`` of a rotation. The identity reports ``e3``.
    """

    R = np.asarray(R, dtype=float)
    cos_angle = np.clip(0.5 * (np.trace(R) - 1), -1.0, 1.0)
    angle = float(np.arccos(cos_angle))
    if angle < 1e-10:
        return E3.copy(), 0.0

    elif np.pi - angle > 1e-6:
        axis = unhat(0.5 * (R - R.T)) / np.sin(angle)
        return axis / np.linalg.norm(axis), angle

    # Near a half turn: R = 2 n n^T - I.
    S = 0.5 * (R + np.eye(3))
    column = int(np.argmax(np.diag(S)))
    axis = S[:, column] / np.sqrt(S[column, column])
    if np.linalg.norm(0.5 * (R - R.T)) > 0:
        if np.dot(unhat(0.5 * (R - R.T)), axis) < 0:
            axis = -axis

    return axis / np.linalg.norm(axis), angle
