import math

import numpy as np
import pydantic
import pytest

from rolling_sphere.config import DEFAULT_PARAMS, RobotParams
from rolling_sphere.connection import curvature_at
from rolling_sphere.exceptions import DegenerateParamsError, OpenLoopError
from rolling_sphere.geometry import rot_exp
from rolling_sphere.holonomy import (
    area_rule_quadrature,
    polygon_control,
    pure_rotation_beta,
    rect_loop_control,
    rect_xy_control,
    rotational_holonomy_numeric,
    rotational_holonomy_rect,
    translational_holonomy_diag,
    translational_holonomy_numeric,
    translational_holonomy_rect,
)
from rolling_sphere.types import PiecewiseControl, RectLoopDiag, RectLoopXY

EXAMPLE_LOOP = RectLoopXY(alpha=7 * math.pi, beta=6 * math.pi)
EXAMPLE_DISPLACEMENT = (-5.001020, -0.245684)


def test_rect_closed_form(params):
    displacement = translational_holonomy_rect(params, EXAMPLE_LOOP)
    np.testing.assert_allclose(displacement, EXAMPLE_DISPLACEMENT, atol=1e-5)


def test_rect_closed_form_matches_integration(params):
    closed_form = translational_holonomy_rect(params, EXAMPLE_LOOP)
    numeric = translational_holonomy_numeric(params, rect_xy_control(EXAMPLE_LOOP), dt=0.05)
    np.testing.assert_allclose(numeric, closed_form, atol=1e-6)


def test_rect_closed_form_matches_area_rule(params):
    closed_form = translational_holonomy_rect(params, EXAMPLE_LOOP)
    quadrature = area_rule_quadrature(params, EXAMPLE_LOOP.vertices())
    np.testing.assert_allclose(quadrature, closed_form, atol=1e-9)


def test_area_rule_orientation(params):
    vertices = [[0, 0], [2, 0.5], [1, 3]]
    forward = area_rule_quadrature(params, vertices)
    backward = area_rule_quadrature(params, vertices[::-1])
    np.testing.assert_allclose(backward, -forward, atol=1e-10)


def test_area_rule_polygon_matches_integration(params):
    vertices = [[0, 0], [4, 1], [5, 6], [1, 4]]
    numeric = translational_holonomy_numeric(params, polygon_control(vertices), dt=0.05)
    np.testing.assert_allclose(area_rule_quadrature(params, vertices), numeric, atol=1e-7)


def test_small_loop_follows_curvature(params):
    loop = RectLoopXY(alpha=1e-2, beta=1e-2)
    expected = -curvature_at(params, (0, 0)).B_r2 * loop.alpha * loop.beta
    displacement = translational_holonomy_rect(params, loop)
    np.testing.assert_allclose(displacement, expected, rtol=1e-2, atol=1e-9)


def test_holonomy_ignores_parametrization(params):
    control = rect_xy_control(RectLoopXY(alpha=3.0, beta=2.0))
    slow = translational_holonomy_numeric(params, control, dt=0.02)
    fast = translational_holonomy_numeric(params, control.time_scaled(4.0), dt=0.005)
    np.testing.assert_allclose(fast, slow, atol=1e-9)


def test_polygon_control_matches_rect_control(params):
    loop = RectLoopXY(alpha=3.0, beta=2.0)
    polygon = polygon_control(loop.vertices())
    by_polygon = translational_holonomy_numeric(params, polygon, dt=0.05)
    by_rect = translational_holonomy_numeric(params, rect_xy_control(loop), dt=0.05)
    np.testing.assert_allclose(by_polygon, by_rect, atol=1e-12)


def test_open_loop():
    control = PiecewiseControl(segments=[(1.0, 1.0, 0.0)])
    with pytest.raises(OpenLoopError):
        translational_holonomy_numeric(RobotParams.default(), control, dt=0.1)


@pytest.mark.parametrize("alpha,beta", [(2.0, 3.0), (5 * math.pi, 4 * math.pi)])
def test_diag_loop(params, alpha, beta):
    loop = RectLoopDiag(alpha=alpha, beta=beta)
    control = rect_loop_control(loop)
    np.testing.assert_allclose(
        translational_holonomy_numeric(params, control, dt=0.05),
        translational_holonomy_diag(params, loop),
        atol=1e-9,
    )
    np.testing.assert_allclose(
        rotational_holonomy_numeric(params, control, dt=0.05),
        rotational_holonomy_rect(params, loop),
        atol=1e-8,
    )


def test_diag_loop_closed_form(params):
    loop = RectLoopDiag(alpha=2.0, beta=3.0)
    c_beta = params.c * loop.beta
    expected = params.r * params.lever * loop.alpha * np.array(
        [math.sin(c_beta), 1 - math.cos(c_beta)]
    )
    np.testing.assert_allclose(translational_holonomy_diag(params, loop), expected)


def test_short_forward_legs_rotate_little(params):
    loop = RectLoopDiag(alpha=1e-9, beta=3.0)
    np.testing.assert_allclose(rotational_holonomy_rect(params, loop), np.eye(3), atol=1e-9)


def test_pure_rotation(params):
    beta = pure_rotation_beta(params)
    assert beta == pytest.approx(2 * math.pi / params.c)
    loop = RectLoopDiag(alpha=math.pi, beta=beta)
    np.testing.assert_allclose(translational_holonomy_diag(params, loop), [0, 0], atol=1e-12)

    control = rect_loop_control(loop)
    np.testing.assert_allclose(
        translational_holonomy_numeric(params, control, dt=0.1), [0, 0], atol=1e-9
    )


def test_pure_rotation_half_turn_spin():
    # A half-integer inertia ratio turns the spin legs into half turns about e3.
    params = RobotParams(**{**DEFAULT_PARAMS, "j_ratio": 4.5})
    loop = RectLoopDiag(alpha=math.pi, beta=pure_rotation_beta(params))
    roll = loop.alpha * params.lever
    np.testing.assert_allclose(
        rotational_holonomy_rect(params, loop), rot_exp([-2 * roll, 0, 0]), atol=1e-12
    )



def test_pure_rotation_without_coupling():
    params = RobotParams.construct(**{**DEFAULT_PARAMS, "rho": 0.0})
    with pytest.raises(DegenerateParamsError):
        pure_rotation_beta(params)


def test_rotational_holonomy_is_edge_product(params):
    loop = RectLoopDiag(alpha=2.0, beta=3.0)
    spin = params.c * params.j_ratio
    roll = loop.alpha * params.lever
    c_beta = params.c * loop.beta
    expected = (
        rot_exp(loop.beta * spin * np.array([0, 0, 1.0]))
        @ rot_exp(roll * np.array([math.cos(c_beta), math.sin(c_beta), 0.0]))
        @ rot_exp(-loop.beta * spin * np.array([0, 0, 1.0]))
        @ rot_exp([-roll, 0.0, 0.0])
    )
    np.testing.assert_allclose(rotational_holonomy_rect(params, loop), expected, atol=1e-14)


def test_rotational_holonomy_quarter_turn_loop(params):
    loop = RectLoopDiag(alpha=math.pi, beta=1.5 * math.pi)
    control = rect_loop_control(loop)
    numeric = rotational_holonomy_numeric(params, control, dt=0.01)
    assert np.linalg.norm(numeric - rotational_holonomy_rect(params, loop)) < 1e-6

    faster = rotational_holonomy_numeric(params, control.time_scaled(3.0), dt=0.01 / 3)
    assert np.linalg.norm(faster - numeric) < 1e-8


def test_reversed_loop_inverts_holonomy(params):
    control = rect_loop_control(RectLoopDiag(alpha=math.pi, beta=1.5 * math.pi))
    forward = rotational_holonomy_numeric(params, control, dt=0.01)
    backward = rotational_holonomy_numeric(params, control.reversed(), dt=0.01)
    np.testing.assert_allclose(backward, forward.T, atol=1e-6)

    shift = translational_holonomy_numeric(params, control, dt=0.01)
    back_shift = translational_holonomy_numeric(params, control.reversed(), dt=0.01)
    np.testing.assert_allclose(back_shift, -shift, atol=1e-6)


def test_loop_then_reverse_is_trivial(params):
    control = polygon_control([[0, 0], [3, 1], [1, 4]], speed=2.0)
    round_trip = control.then(control.reversed())
    np.testing.assert_allclose(
        rotational_holonomy_numeric(params, round_trip, dt=0.01), np.eye(3), atol=1e-6
    )
    np.testing.assert_allclose(
        translational_holonomy_numeric(params, round_trip, dt=0.01), [0, 0], atol=1e-6
    )


@pytest.mark.parametrize("vertices", [[[0, 0], [0, 0]], [[1, 2]]])
def test_degenerate_polygon(vertices):
    with pytest.raises(pydantic.ValidationError):
        polygon_control(vertices)
