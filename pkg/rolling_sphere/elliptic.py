"""
Incomplete elliptic integral of the first kind and the Jacobi amplitude and ``sn``.

The parameter ``m`` multiplies ``sin^2`` directly::

    F(m, theta) = ∫_0^theta dt / sqrt(1 - m sin^2 t)

so ``m`` is the square of the modulus. Both directions use the arithmetic-geometric mean
scale: Gauss' doubling of the amplitude for ``F`` and descending Landen for ``am``.
"""
import math
from typing import List, Tuple, Union

import numpy as np

from rolling_sphere.exceptions import DomainError

ArrayLike = Union[float, np.ndarray]

AGM_TOLERANCE = 1e-15
_MAX_STEPS = 40


def _check_parameter(m: float):
    if not 0 <= m < 1:
        raise DomainError(f"Elliptic parameter must satisfy 0 <= m < 1, got m={m}.")


def _agm_sequence(m: float) -> Tuple[List[float], List[float], List[float]]:
    a, b, c = [1.0], [math.sqrt(1 - m)], [math.sqrt(m)]
    while abs(c[-1]) > AGM_TOLERANCE and len(a) <= _MAX_STEPS:
        a.append(0.5 * (a[-1] + b[-1]))
        c.append(0.5 * (a[-2] - b[-1]))
        b.append(math.sqrt(a[-2] * b[-1]))

    return a, b, c


def _unwrap_scalar(value: np.ndarray) -> ArrayLike:
    return float(value) if value.ndim == 0 else value


def complete_K(m: float) -> float:
    _check_parameter(m)
    a, _, _ = _agm_sequence(m)
    return math.pi / (2 * a[-1])


def elliptic_F(m: float, theta: ArrayLike) -> ArrayLike:
    """
    Incomplete integral ``F(m, theta)`` for any real ``theta``; odd in ``theta`` and
    satisfying ``F(m, theta + pi) = F(m, theta) + 2 K(m)``.

    Raises:
        :class:`~rolling_sphere.exceptions.DomainError`: Unless ``0 <= m < 1``.
    """

    _check_parameter(m)
    a, b, _ = _agm_sequence(m)
    phi = np.array(theta, dtype=float)
    for a_n, b_n in zip(a[:-1], b[:-1]):
        sin, cos = np.sin(phi), np.cos(phi)
        phi = 2 * phi + np.arctan2((b_n - a_n) * sin * cos, a_n * cos**2 + b_n * sin**2)

    steps = len(a) - 1
    return _unwrap_scalar(phi / (2**steps * a[-1]))


def jacobi_am(m: float, u: ArrayLike) -> ArrayLike:
    """
    Amplitude ``am(m, u)``, the continuous inverse of ``F(m, .)`` on the whole real line.
    """

    _check_parameter(m)
    a, _, c = _agm_sequence(m)
    steps = len(a) - 1
    phi = 2**steps * a[-1] * np.array(u, dtype=float)
    for n in range(steps, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c[n] / a[n] * np.sin(phi)))

    return _unwrap_scalar(phi)


def jacobi_sn(m: float, u: ArrayLike) -> ArrayLike:
    """
    Jacobi elliptic sine, ``sn(m, F(m, theta)) = sin(theta)``.

    Raises:
        :class:`~rolling_sphere.exceptions.DomainError`: Unless ``0 <= m < 1``.
    """

    return _unwrap_scalar(np.sin(np.asarray(jacobi_am(m, u))))
