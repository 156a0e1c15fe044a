import math
import re
from typing import Union

import numpy as np

ORTHOGONALITY_TOLERANCE = 1e-9
SMALL_ANGLE = 1e-12
_PI_LITERAL = re.compile(r"^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?(?:[eE][+-]?\d+)?)\s*\*?\s*pi\s*$")


def parse_angle(value: Union[str, float, int]) -> float:
    """
    Parse an angle in radians, accepting ``pi``-suffixed literals such as ``7pi``,
    ``-0.5pi``, ``3*pi`` or ``pi``.
    """

    if isinstance(value, (int, float)):
        return float(value)

    text = value.strip().lower()
    match = _PI_LITERAL.match(text)
    if match:
        factor = match.group(1)
        if factor in ("", "+"):
            return math.pi

        elif factor == "-":
            return -math.pi

        return float(factor) * math.pi

    return float(text)


def is_rotation(R: np.ndarray, tol: float = ORTHOGONALITY_TOLERANCE) -> bool:
    R = np.asarray(R, dtype=float)
    if R.shape[-2:] != (3, 3):
        return False

    gram = np.swapaxes(R, -1, -2) @ R
    orthogonal = np.all(np.abs(gram - np.eye(3)) <= tol)
    return bool(orthogonal and np.all(np.abs(np.linalg.det(R) - 1) <= tol))


def wrap_to_pi(angle):
    """Wrap angle(s) into ``(-pi, pi]``."""
    wrapped = np.mod(np.asarray(angle) + np.pi, 2 * np.pi) - np.pi
    return np.where(wrapped == -np.pi, np.pi, wrapped)


__all__ = [
    "ORTHOGONALITY_TOLERANCE",
    "SMALL_ANGLE",
    "is_rotation",
    "parse_angle",
    "wrap_to_pi",
]
