import math
import re

import numpy as np
import pytest

from rolling_sphere._cli import main
from rolling_sphere.trajectory_io import COLUMNS, COSTATE_COLUMNS, read_trajectory

from ..conftest import EXAMPLE_COSTATE

NUMBER = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def values(output: str, label: str) -> np.ndarray:
    for line in output.splitlines():
        if line.startswith(label):
            _, _, rest = line.partition(" = ")
            return np.array([float(v) for v in NUMBER.findall(rest)])

    raise AssertionError(f"'{label}' not in output:\n{output}")


def test_simulate_straight_line(simulate):
    output = simulate.invoke("--u1", 1, "--u2", 1, "--T", 2, "--dt", 0.01)
    np.testing.assert_allclose(values(output, "phi(T)"), [2, 2], atol=1e-9)
    np.testing.assert_allclose(values(output, "x(T)"), [0, 0.8], atol=1e-9)
    axis_angle = values(output, "axis-angle")
    np.testing.assert_allclose(axis_angle, [-1, 0, 0, 0.8], atol=1e-9)
    assert values(output, "max orthogonality error")[0] < 1e-12
    assert values(output, "max no-slip residual")[0] < 1e-5


def test_simulate_writes_csv(simulate, tmp_path):
    path = tmp_path / "out.csv"
    output = simulate.invoke("--u1", 2, "--u2", "-1", "--T", 1, "--dt", 0.1, "--out", path)
    assert "SUCCESS: Wrote 11 samples" in output
    trajectory = read_trajectory(path)
    assert len(trajectory) == 11
    np.testing.assert_allclose(trajectory.phi[-1], [2, -1], atol=1e-12)


def test_simulate_is_deterministic(simulate):
    args = ("--u1", 0.3, "--u2", 1.7, "--T", 3, "--dt", 0.05, "--phi0", "pi,-pi")
    assert simulate.invoke(*args) == simulate.invoke(*args)


def test_simulate_invalid_step(simulate):
    result = simulate.run("--dt", 0)
    assert result.exit_code == 1
    assert "Step must be positive" in result.output


def test_params_file(simulate, params_file):
    output = simulate.invoke("--params", params_file, "--T", 0.1, "--dt", 0.1)
    assert "Parameters: r=1, rho=0.3, h=0.75, w=0.8, j_ratio=5 (c=0.03125)" in output


def test_invalid_params_file(simulate, tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("r = 1\nrho = 0\nh = 0.75\nw = 0.8\nj_ratio = 5\n")
    result = simulate.run("--params", path)
    assert result.exit_code == 1
    assert "Invalid 'rho'" in result.output


def test_malformed_params_file(simulate, tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("r = 1\nrho: 0.3\n")
    result = simulate.run("--params", path)
    assert result.exit_code == 1
    assert "Line 2" in result.output


def test_holonomy_rect_xy(holonomy):
    output = holonomy.invoke("rect-xy", "--alpha", "7pi", "--beta", "6pi")
    np.testing.assert_allclose(values(output, "dx (area rule)"), [-5.001020, -0.245684], atol=1e-5)


def test_holonomy_rect_xy_numeric(holonomy):
    output = holonomy.invoke("rect-xy", "--alpha", "2pi", "--beta", "pi", "--numeric", 0.05)
    np.testing.assert_allclose(
        values(output, "dx (numeric)"), values(output, "dx (area rule)"), atol=1e-8
    )


def test_holonomy_rect_diag(holonomy):
    output = holonomy.invoke("rect-diag", "--alpha", 2, "--beta", 3, "--numeric", 0.05)
    np.testing.assert_allclose(
        values(output, "dx (numeric)"), values(output, "dx (closed form)"), atol=1e-8
    )
    assert values(output, "|R - R_numeric|")[0] < 1e-8


def test_holonomy_pure_rotation(holonomy):
    output = holonomy.invoke("rect-diag", "--alpha", "pi", "--pure-rotation")
    assert values(output, "beta = 2pi/c")[-1] == pytest.approx(64 * math.pi)
    np.testing.assert_allclose(values(output, "dx (closed form)"), [0, 0], atol=1e-12)


def test_holonomy_pure_rotation_needs_diag(holonomy):
    result = holonomy.run("rect-xy", "--alpha", 1, "--pure-rotation")
    assert result.exit_code == 2


def test_holonomy_missing_beta(holonomy):
    assert holonomy.run("rect-xy", "--alpha", 1).exit_code == 2


def test_holonomy_bad_angle(holonomy):
    result = holonomy.run("rect-xy", "--alpha", "sevenpi", "--beta", 1)
    assert result.exit_code == 2
    assert "not a number or pi multiple" in result.output


def test_holonomy_non_positive_side(holonomy):
    result = holonomy.run("rect-xy", "--alpha", 0, "--beta", 1)
    assert result.exit_code == 2
    assert "side lengths must be positive" in result.output


def test_controllability(controllability):
    output = controllability.invoke("--phi", "1,2", "--grid", 10)
    assert "controllable at phi = (1, 2): True" in output
    assert "controllable on 10x10 grid: True" in output
    assert "SUCCESS: Fiber controllable." in output


def test_controllability_fails_without_inertia(controllability, tmp_path):
    path = tmp_path / "no-inertia.cfg"
    path.write_text("r = 1\nrho = 0.3\nh = 0.75\nw = 0.8\nj_ratio = 0\n")
    output = controllability.invoke("--params", path, "--grid", 5)
    assert "controllable on 5x5 grid: False" in output
    assert "WARNING: Certificate fails." in output


def test_verbosity(controllability):
    output = controllability.invoke("--grid", 5)
    assert "Parameters:" in output
    quiet = controllability.runner.invoke(
        controllability._cli, ["--verbosity", "WARNING", "controllability", "--grid", 5]
    )
    assert quiet.exit_code == 0
    assert "Parameters:" not in quiet.output
    assert "SUCCESS" not in quiet.output


def test_unknown_command(root):
    assert root.run("roll").exit_code == 2


def test_ocp_example(ocp, tmp_path):
    path = tmp_path / "extremal.csv"
    guess = ",".join(str(v) for v in EXAMPLE_COSTATE)
    output = ocp.invoke("--guess", guess, "--restarts", 0, "--exact", "--out", path)
    assert "SUCCESS: Converged" in output
    assert values(output, "cost")[0] == pytest.approx(1289.392413, abs=1e-3)
    assert "branch: librating pendulum (A > E" in output
    assert values(output, "max |theta_exact - theta_ode| (librating)")[0] < 1e-6
    assert values(output, "max |x_quad - x_ode|")[0] < 1e-3

    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(COLUMNS + COSTATE_COLUMNS)
    assert len(lines) == 1002
    final = np.array([float(v) for v in lines[-1].split(",")])
    np.testing.assert_allclose(final[[1, 2]], [10 * math.pi, 10 * math.pi], atol=1e-7)
    np.testing.assert_allclose(final[[12, 13]], [1, 1], atol=1e-7)


def test_ocp_trivial(ocp):
    output = ocp.invoke("--xT", "0,0", "--phiT", "0,0", "--T", 1, "--exact")
    assert "branch: p = 0" in output
    assert "Closed form unavailable" in output


def test_ocp_bad_guess(ocp):
    result = ocp.run("--guess", "1,2,3")
    assert result.exit_code == 2
    assert "four comma-separated numbers" in result.output


@pytest.mark.parametrize("guess", ["nan,1,2,3", "1,inf,2,3"])
def test_ocp_non_finite_guess(ocp, guess):
    result = ocp.run("--guess", guess)
    assert result.exit_code == 2
    assert "four comma-separated numbers" in result.output


def test_ocp_first(ocp):
    guess = ",".join(str(v) for v in EXAMPLE_COSTATE)
    output = ocp.invoke("--guess", guess, "--restarts", 0, "--first")
    assert "start 0" in output
    assert values(output, "cost")[0] == pytest.approx(1289.392413, abs=1e-3)


@pytest.mark.slow
def test_ocp_default_starts(ocp):
    output = ocp.invoke("--xT", "0,0.8", "--phiT", "2,2", "--T", 2, "--seed", 0)
    assert "SUCCESS: Converged" in output
    costs = [float(line.rsplit(" ", 1)[-1]) for line in output.splitlines() if " cost " in line]
    assert values(output, "cost")[0] == pytest.approx(min(costs), abs=1e-6)


def test_ocp_non_positive_horizon(ocp):
    assert ocp.run("--T", 0).exit_code == 2


def test_main_exit_codes(params_file, tmp_path):
    assert main(["holonomy", "rect-xy", "--alpha", "1", "--beta", "1"]) == 0
    assert main(["--help"]) == 0
    assert main(["roll"]) == 2

    bad = tmp_path / "bad.cfg"
    bad.write_text("r = -1\n")
    assert main(["simulate", "--params", str(bad)]) == 1


def test_non_finite_arguments():
    assert main(["simulate", "--phi0", "nan,0", "--T", "0.1", "--dt", "0.1"]) == 2
    assert main(["simulate", "--x0", "0,inf", "--T", "0.1", "--dt", "0.1"]) == 2
    assert main(["holonomy", "rect-xy", "--alpha", "nan", "--beta", "1"]) == 2
    assert main(["ocp", "--guess", "nan,1,2,3"]) == 2


def test_holonomy_non_finite_angle(holonomy):
    result = holonomy.run("rect-xy", "--alpha", "inf", "--beta", 1)
    assert result.exit_code == 2
    assert "is not finite" in result.output
