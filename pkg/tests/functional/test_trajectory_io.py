import numpy as np
import pytest

from rolling_sphere.exceptions import SchemaError, TrajectoryIOError
from rolling_sphere.kinematics import integrate
from rolling_sphere.trajectory_io import (
    COLUMNS,
    COSTATE_COLUMNS,
    read_trajectory,
    read_trajectory_with_costates,
    write_trajectory,
)
from rolling_sphere.types import Pose, ShapeState, Trajectory


@pytest.fixture(scope="module")
def trajectory(params):
    start = (ShapeState(phi1=0.1, phi2=-0.2), Pose.identity())
    return integrate(params, start, (1.3, -0.7), 1.0, 0.1)


@pytest.fixture
def csv_path(tmp_path):
    return tmp_path / "trajectory.csv"


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n")
    return path


def test_header(trajectory, csv_path):
    write_trajectory(trajectory, csv_path)
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "t,phi1,phi2,R00,R01,R02,R10,R11,R12,R20,R21,R22,x1,x2"
    assert len(lines) == len(trajectory) + 1


def test_values_survive_exactly(trajectory, csv_path):
    loaded = read_trajectory(write_trajectory(trajectory, csv_path))
    assert np.array_equal(loaded.t, trajectory.t)
    assert np.array_equal(loaded.phi, trajectory.phi)
    assert np.array_equal(loaded.R, trajectory.R)
    assert np.array_equal(loaded.x, trajectory.x)
    assert loaded.u is None


def test_costate_columns(trajectory, csv_path):
    costates = np.arange(4 * len(trajectory), dtype=float).reshape(-1, 4)
    write_trajectory(trajectory, csv_path, costates=costates)
    assert csv_path.read_text().splitlines()[0].endswith(",gamma1,gamma2,p1,p2")
    _, loaded = read_trajectory_with_costates(csv_path)
    assert np.array_equal(loaded, costates)


def test_costate_shape_mismatch(trajectory, csv_path):
    with pytest.raises(SchemaError):
        write_trajectory(trajectory, csv_path, costates=np.zeros((2, 4)))


def test_empty_trajectory(csv_path):
    write_trajectory(Trajectory.empty(), csv_path)
    assert len(read_trajectory(csv_path)) == 0


def test_bad_header(csv_path):
    write_lines(csv_path, [",".join(COLUMNS[::-1])])
    with pytest.raises(SchemaError) as err:
        read_trajectory(csv_path)

    assert err.value.row == 0


def test_missing_header(csv_path):
    csv_path.write_text("")
    with pytest.raises(SchemaError):
        read_trajectory(csv_path)


def test_short_row(csv_path):
    row = ["0"] * len(COLUMNS)
    write_lines(csv_path, [",".join(COLUMNS), ",".join(row), ",".join(row[:-1])])
    with pytest.raises(SchemaError) as err:
        read_trajectory(csv_path)

    assert err.value.row == 2


def test_non_numeric_value(csv_path):
    row = ["0"] * len(COLUMNS + COSTATE_COLUMNS)
    row[-1] = "abc"
    write_lines(csv_path, [",".join(COLUMNS + COSTATE_COLUMNS), ",".join(row)])
    with pytest.raises(SchemaError) as err:
        read_trajectory(csv_path)

    assert err.value.row == 1
    assert str(err.value).startswith("Row 1:")


def test_invalid_rotation(csv_path):
    # All-zero rotation block.
    write_lines(csv_path, [",".join(COLUMNS), ",".join(["0"] * len(COLUMNS))])
    with pytest.raises(SchemaError):
        read_trajectory(csv_path)


def test_missing_file(tmp_path):
    with pytest.raises(TrajectoryIOError):
        read_trajectory(tmp_path / "missing.csv")


def test_unwritable_path(trajectory, tmp_path):
    with pytest.raises(TrajectoryIOError):
        write_trajectory(trajectory, tmp_path / "missing" / "trajectory.csv")
