from typing import List, Optional, Union

import click
import numpy as np
import pydantic

from rolling_sphere.config import RobotParams
from rolling_sphere.connection import certificate_grid, fiber_controllability_certificate
from rolling_sphere.geometry import axis_angle
from rolling_sphere.holonomy import (
    pure_rotation_beta,
    rect_loop_control,
    rect_xy_control,
    rotational_holonomy_numeric,
    rotational_holonomy_rect,
    translational_holonomy_diag,
    translational_holonomy_numeric,
    translational_holonomy_rect,
)
from rolling_sphere.kinematics import integrate, no_slip_residual, vertical_momentum
from rolling_sphere.logging import logger
from rolling_sphere.optimal_control._cli import ocp
from rolling_sphere.options import (
    ANGLE,
    PAIR,
    RollingSphereGroup,
    format_matrix,
    format_vector,
    out_option,
    params_option,
    verbosity_option,
)
from rolling_sphere.trajectory_io import write_trajectory
from rolling_sphere.types import Pose, RectLoopDiag, RectLoopXY, ShapeState


@click.group(cls=RollingSphereGroup)
@verbosity_option()
def cli():
    """Kinematic control of a two-wheel-driven rolling sphere"""


@cli.command(short_help="Integrate the rolling constraint under constant wheel rates")
@params_option()
@click.option("--u1", type=float, default=1.0, show_default=True, help="Left wheel rate.")
@click.option("--u2", type=float, default=1.0, show_default=True, help="Right wheel rate.")
@click.option("--T", "horizon", type=float, default=1.0, show_default=True, help="Final time.")
@click.option("--dt", type=float, default=1e-3, show_default=True, help="RK4 step.")
@click.option("--phi0", type=PAIR, default="0,0", show_default=True, help="Initial wheel angles.")
@click.option("--x0", type=PAIR, default="0,0", show_default=True, help="Initial center.")
@out_option("Write the trajectory CSV here.")
def simulate(params: RobotParams, u1, u2, horizon, dt, phi0, x0, out):
    start = (ShapeState.from_array(phi0), Pose(R=np.eye(3), x=np.array(x0)))
    trajectory = integrate(params, start, (u1, u2), horizon, dt)
    shape, pose = trajectory.final
    axis, angle = axis_angle(pose.R)
    gram = np.swapaxes(trajectory.R, -1, -2) @ trajectory.R - np.eye(3)

    click.echo(f"phi(T) = {format_vector(shape.as_array())}")
    click.echo(f"x(T) = {format_vector(pose.x)}")
    click.echo(f"R(T) =\n{format_matrix(pose.R)}")
    click.echo(f"axis-angle = {format_vector(axis)}, {angle:.10g} rad")
    click.echo(f"max orthogonality error = {np.max(np.abs(gram)):.3e}")
    if len(trajectory) > 2:
        slip = np.max(np.abs(no_slip_residual(params, trajectory)))
        click.echo(f"max no-slip residual = {slip:.3e}")
        click.echo(
            f"max vertical momentum = {np.max(np.abs(vertical_momentum(params, trajectory))):.3e}"
        )

    if out:
        write_trajectory(trajectory, out)
        logger.success(f"Wrote {len(trajectory)} samples to '{out}'.")


@cli.command(short_help="Geometric phase of a rectangular shape loop")
@click.argument("loop", type=click.Choice(["rect-xy", "rect-diag"]))
@params_option()
@click.option("--alpha", type=ANGLE, required=True, help="First side (radians or 'Npi').")
@click.option("--beta", type=ANGLE, help="Second side (radians or 'Npi').")
@click.option(
    "--pure-rotation",
    is_flag=True,
    help="Use beta = 2pi/c so the diagonal loop only rotates the sphere.",
)
@click.option("--numeric", "dt", type=float, help="Also integrate the loop with this step.")
def holonomy(loop: str, params: RobotParams, alpha, beta, pure_rotation, dt):
    if pure_rotation:
        if loop != "rect-diag":
            raise click.BadOptionUsage("--pure-rotation", "Only applies to 'rect-diag'.")

        beta = pure_rotation_beta(params)
        logger.info(f"beta = 2pi/c = {beta:.10g}")

    elif beta is None:
        raise click.MissingParameter(param_hint="'--beta'", param_type="option")

    rect: Union[RectLoopXY, RectLoopDiag]
    try:
        rect = (RectLoopXY if loop == "rect-xy" else RectLoopDiag)(alpha=alpha, beta=beta)
    except pydantic.ValidationError as err:
        raise click.BadParameter(err.errors()[0]["msg"], param_hint="'--alpha' / '--beta'")

    if isinstance(rect, RectLoopXY):
        control = rect_xy_control(rect)
        click.echo(f"dx (area rule) = {format_vector(translational_holonomy_rect(params, rect))}")
        rotation = None
    else:
        control = rect_loop_control(rect)
        click.echo(f"dx (closed form) = {format_vector(translational_holonomy_diag(params, rect))}")
        rotation = rotational_holonomy_rect(params, rect)
        _echo_rotation("R (exponential product)", rotation)

    if dt is not None:
        displacement = translational_holonomy_numeric(params, control, dt)
        click.echo(f"dx (numeric) = {format_vector(displacement)}")
        numeric = rotational_holonomy_numeric(params, control, dt)
        _echo_rotation("R (numeric)", numeric)
        if rotation is not None:
            click.echo(f"|R - R_numeric| = {np.linalg.norm(rotation - numeric):.3e}")


def _echo_rotation(label: str, R):
    axis, angle = axis_angle(R)
    click.echo(f"{label} =\n{format_matrix(R)}")
    click.echo(f"axis-angle = {format_vector(axis)}, {angle:.10g} rad")


@cli.command(short_help="Check that connection and curvature span the fiber algebra")
@params_option()
@click.option("--phi", type=PAIR, default="0,0", show_default=True, help="Shape to certify.")
@click.option("--grid", type=click.IntRange(min=1), default=100, show_default=True)
def controllability(params: RobotParams, phi, grid):
    report = fiber_controllability_certificate(params, phi)
    click.echo(f"controllable at phi = {format_vector(phi)}: {report.controllable}")
    click.echo(f"so(3) singular values = {format_vector(report.so3_singular_values)}")
    click.echo(f"R^2 singular values = {format_vector(report.r2_singular_values)}")
    holds, smallest = certificate_grid(params, grid)
    click.echo(f"controllable on {grid}x{grid} grid: {holds}")
    click.echo(f"min singular value on grid = {smallest:.6e}")
    if holds:
        logger.success("Fiber controllable.")
    else:
        logger.warning("Certificate fails.")


cli.add_command(ocp)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the CLI and return its exit code: 0 on success, 1 on a library error, 2 on a usage
    error.
    """

    try:
        result = cli.main(args=argv, prog_name="rolling-sphere", standalone_mode=False)
    except click.exceptions.Exit as err:
        return err.exit_code
    except click.ClickException as err:
        err.show()
        return err.exit_code
    except click.Abort:
        return 1

    # Without standalone mode, click returns the code of ctx.exit() instead of raising.
    return result if isinstance(result, int) else 0
