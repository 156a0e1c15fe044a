import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rolling_sphere.exceptions import DegenerateRotationError, NotSkewError
from rolling_sphere.geometry import axis_angle, hat, project_rotation, rot_exp, unhat
from rolling_sphere.utils import is_rotation

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)
vectors = st.tuples(finite, finite, finite)


def series_exp(v, terms: int = 30) -> np.ndarray:
    K = hat(v)
    total, term = np.eye(3), np.eye(3)
    for n in range(1, terms):
        term = term @ K / n
        total = total + term

    return total


def test_hat_zero():
    assert np.array_equal(hat((0, 0, 0)), np.zeros((3, 3)))


def test_hat_e1():
    expected = np.array([[0, 0, 0], [0, 0, -1], [0, 1, 0]])
    assert np.array_equal(hat((1, 0, 0)), expected)


def test_hat_is_cross_product(rng):
    for _ in range(100):
        a, b = rng.normal(size=3), rng.normal(size=3)
        np.testing.assert_allclose(hat(a) @ b, np.cross(a, b), atol=1e-14)
        np.testing.assert_allclose(hat(a) @ b, -hat(b) @ a, atol=1e-14)


@pytest.mark.fuzzing
@given(vectors)
def test_hat_is_skew(v):
    M = hat(v)
    assert np.array_equal(M.T, -M)
    np.testing.assert_array_equal(unhat(M), np.array(v, dtype=float))


def test_unhat():
    assert np.array_equal(unhat(np.zeros((3, 3))), np.zeros(3))
    assert np.array_equal(unhat(hat((1, 2, 3))), np.array([1.0, 2.0, 3.0]))


def test_unhat_rejects_non_skew():
    with pytest.raises(NotSkewError):
        unhat(np.eye(3))


def test_rot_exp_zero():
    np.testing.assert_allclose(rot_exp((0, 0, 0)), np.eye(3), atol=1e-15)


def test_rot_exp_quarter_turn():
    R = rot_exp((0, 0, math.pi / 2))
    np.testing.assert_allclose(R @ [1, 0, 0], [0, 1, 0], atol=1e-15)


def test_rot_exp_matches_series(rng):
    for _ in range(50):
        v = rng.normal(size=3)
        v *= rng.uniform(0, math.pi) / np.linalg.norm(v)
        np.testing.assert_allclose(rot_exp(v), series_exp(v), atol=1e-12)


@pytest.mark.fuzzing
@settings(max_examples=200)
@given(vectors)
def test_rot_exp_is_rotation(v):
    R = rot_exp(v)
    np.testing.assert_allclose(R.T @ R, np.eye(3), atol=1e-12)
    assert abs(np.linalg.det(R) - 1) < 1e-12


def test_project_rotation_fixed_point(rotation):
    np.testing.assert_allclose(project_rotation(rotation), rotation, atol=1e-14)


def test_project_rotation_perturbation(rng, rotation):
    R = rotation
    projected = project_rotation(R + 1e-6 * rng.uniform(-0.5, 0.5, size=(3, 3)))
    assert is_rotation(projected)
    assert np.max(np.abs(projected - R)) < 2e-6


def test_project_rotation_scaled_identity():
    np.testing.assert_allclose(project_rotation(1.001 * np.eye(3)), np.eye(3), atol=1e-14)


def test_project_rotation_rejects_reflection():
    with pytest.raises(DegenerateRotationError):
        project_rotation(np.diag([1.0, 1.0, -1.0]))


def test_axis_angle_identity():
    axis, angle = axis_angle(np.eye(3))
    assert angle == 0
    assert np.array_equal(axis, [0, 0, 1])


@pytest.mark.parametrize("angle", (0.3, 2.0, math.pi - 1e-3, math.pi))
def test_axis_angle_recovers_rotation(angle):
    axis = np.array([1.0, -2.0, 0.5]) / np.linalg.norm([1.0, -2.0, 0.5])
    found_axis, found_angle = axis_angle(rot_exp(angle * axis))
    assert found_angle == pytest.approx(angle, abs=1e-7)
    np.testing.assert_allclose(rot_exp(found_angle * found_axis), rot_exp(angle * axis), atol=1e-7)
