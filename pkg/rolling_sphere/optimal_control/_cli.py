import math

import click
import numpy as np
import pydantic

from rolling_sphere.config import RobotParams
from rolling_sphere.exceptions import RollingSphereError
from rolling_sphere.logging import logger
from rolling_sphere.optimal_control.pmp import (
    control_cost,
    first_integral_drift,
    integrate_pmp_pose,
)
from rolling_sphere.optimal_control.reduction import (
    M_CONVENTIONS,
    exact_extremal,
    reconstruct_by_quadrature,
    theta_along,
)
from rolling_sphere.optimal_control.shooting import (
    RESTARTS,
    BoundaryValueProblem,
    ShootingResult,
    branch_report,
    explore_extremals,
    solve_bvp,
)
from rolling_sphere.options import PAIR, format_vector, out_option, params_option
from rolling_sphere.trajectory_io import write_trajectory
from rolling_sphere.utils import wrap_to_pi


def _guess_callback(ctx, param, value):
    if value is None:
        return None

    try:
        guess = [float(v) for v in value.split(",")]
    except ValueError:
        raise click.BadParameter("Expected four comma-separated numbers.")

    if len(guess) != 4 or not all(math.isfinite(v) for v in guess):
        raise click.BadParameter("Expected four comma-separated numbers.")

    return guess


@click.command(short_help="Solve the energy-optimal maneuver by shooting")
@params_option()
@click.option("--x0", type=PAIR, default="0,0", show_default=True, help="Initial center.")
@click.option("--xT", "x_final", type=PAIR, default="1,1", show_default=True, help="Final center.")
@click.option("--phi0", type=PAIR, default="0,0", show_default=True, help="Initial wheel angles.")
@click.option(
    "--phiT",
    "phi_final",
    type=PAIR,
    default="10pi,10pi",
    show_default=True,
    help="Final wheel angles.",
)
@click.option("--T", "horizon", type=float, default=10.0, show_default=True, help="Final time.")
@click.option("--dt", type=float, default=1e-2, show_default=True, help="RK4 step.")
@click.option("--seed", type=int, help="Seed for restart sampling.")
@click.option("--restarts", type=click.IntRange(min=0), default=RESTARTS, show_default=True)
@click.option("--guess", callback=_guess_callback, help="Initial 'gamma1,gamma2,p1,p2'.")
@click.option(
    "--first",
    is_flag=True,
    help="Keep the first converged start instead of the cheapest distinct extremal.",
)
@click.option("--exact", is_flag=True, help="Compare against the elliptic-function solution.")
@click.option(
    "--m-convention",
    type=click.Choice(M_CONVENTIONS),
    default="parameter",
    show_default=True,
    help="Elliptic parameter passed to F and sn on the circulating branch.",
)
@out_option("Write the extremal (with costates) as CSV here.")
def ocp(
    params: RobotParams,
    x0,
    x_final,
    phi0,
    phi_final,
    horizon,
    dt,
    seed,
    restarts,
    guess,
    first,
    exact,
    m_convention,
    out,
):
    """
    Shoot for the costates of the energy-optimal extremal joining (phi0, x0) to (phiT, xT).
    """

    try:
        bvp = BoundaryValueProblem(x0=x0, phi0=phi0, xT=x_final, phiT=phi_final, T=horizon)
    except pydantic.ValidationError as err:
        raise click.BadParameter(str(err), param_hint="'--T'")

    options = dict(initial_guess=guess, dt=dt, seed=seed, restarts=restarts)
    if first:
        result = solve_bvp(params, bvp, select="first", **options)
    else:
        extremals = explore_extremals(params, bvp, **options)
        for extremal in extremals:
            logger.info(f"extremal {format_vector(extremal.unknowns)} cost {extremal.cost:.6f}")

        result = extremals[0]

    logger.success(f"Converged (residual {result.residual:.3e}, start {result.start}).")
    pmp_trajectory, pose_trajectory = integrate_pmp_pose(params, result.state, horizon, dt)
    _echo_summary(params, result, pmp_trajectory)

    if exact:
        _compare_exact(params, result, pmp_trajectory, horizon, dt, m_convention)

    if out:
        write_trajectory(pose_trajectory, out, costates=pmp_trajectory.states[:, 4:8])
        logger.success(f"Wrote {len(pose_trajectory)} samples to '{out}'.")


def _echo_summary(params: RobotParams, result: ShootingResult, pmp_trajectory):
    click.echo(f"initial costate (gamma1, gamma2, p1, p2) = {format_vector(result.unknowns)}")
    quadrature = control_cost(params, pmp_trajectory)
    click.echo(f"cost = {result.cost:.10g} (quadrature {quadrature:.10g})")
    click.echo(f"first integrals (H, gamma1+gamma2, p1, p2) = {format_vector(result.integrals)}")
    drift = first_integral_drift(params, pmp_trajectory)
    click.echo(f"first integral drift = {format_vector(drift)}")
    if result.constants is not None:
        constants = result.constants
        click.echo(
            f"reduced constants: H={constants.H:.10g} sigma1={constants.sigma1:.10g} "
            f"a={constants.a:.10g} E={constants.E:.10g} A={constants.A:.10g}"
        )
        click.echo(
            f"m literal = {constants.m_literal:.10g}, "
            f"m parameter = {constants.m_parameter:.10g}"
        )

    click.echo(f"branch: {branch_report(result)}")


def _compare_exact(params, result: ShootingResult, pmp_trajectory, horizon, dt, m_convention):
    if not result.exact_available:
        logger.warning("Closed form unavailable for this extremal; numerical integration only.")
        return

    conventions = [m_convention]
    if result.constants is not None and result.constants.circulating:
        conventions = list(M_CONVENTIONS)

    theta_ode = theta_along(params, pmp_trajectory.states)
    for convention in conventions:
        try:
            theta, _, constants = exact_extremal(
                params, result.state, pmp_trajectory.t, m_convention=convention
            )
        except RollingSphereError as err:
            logger.warning(f"Closed form ({convention}) failed: {err}")
            continue

        gap = float(np.max(np.abs(wrap_to_pi(theta - theta_ode))))
        label = convention if constants.circulating else "librating"
        click.echo(f"max |theta_exact - theta_ode| ({label}) = {gap:.3e}")
        if convention != m_convention and constants.circulating:
            continue

        x0, phi0 = pmp_trajectory.x[0], pmp_trajectory.phi[0]
        path = reconstruct_by_quadrature(params, theta, constants, x0, phi0, horizon, dt)
        phi_gap = np.max(np.abs(path.phi - pmp_trajectory.phi))
        x_gap = np.max(np.abs(path.x - pmp_trajectory.x))
        click.echo(f"max |phi_quad - phi_ode| = {phi_gap:.3e}")
        click.echo(f"max |x_quad - x_ode| = {x_gap:.3e}")
