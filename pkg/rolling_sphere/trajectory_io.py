"""
CSV persistence for trajectories: ``t, phi1, phi2, R00 .. R22, x1, x2`` plus optional
costate columns, one header row, 17 significant digits.
"""
import csv
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from rolling_sphere.exceptions import SchemaError, TrajectoryIOError
from rolling_sphere.types import Trajectory

ROTATION_COLUMNS = [f"R{i}{j}" for i in range(3) for j in range(3)]
COLUMNS = ["t", "phi1", "phi2", *ROTATION_COLUMNS, "x1", "x2"]
COSTATE_COLUMNS = ["gamma1", "gamma2", "p1", "p2"]

PathLike = Union[str, Path]


def _format(value: float) -> str:
    return f"{value:.17g}"


def format_rows(trajectory: Trajectory, costates: Optional[np.ndarray] = None) -> List[List[str]]:
    n = len(trajectory)
    columns = [
        trajectory.t[:, None],
        trajectory.phi,
        trajectory.R.reshape(n, 9),
        trajectory.x,
    ]
    if costates is not None:
        if np.shape(costates) != (n, 4):
            raise SchemaError(f"Expected {n} costate rows of 4 values, got {np.shape(costates)}.")

        columns.append(np.asarray(costates, dtype=float))

    table = np.hstack(columns) if n else np.zeros((0, len(COLUMNS)))
    return [[_format(v) for v in row] for row in table]


def write_trajectory(
    trajectory: Trajectory, path: PathLike, costates: Optional[np.ndarray] = None
) -> Path:
    path = Path(path)
    header = COLUMNS + (COSTATE_COLUMNS if costates is not None else [])
    rows = format_rows(trajectory, costates)
    try:
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as err:
        raise TrajectoryIOError(path, err) from err

    return path


def read_trajectory_with_costates(path: PathLike) -> Tuple[Trajectory, Optional[np.ndarray]]:
    """
    Raises:
        :class:`~rolling_sphere.exceptions.SchemaError`: On a header or row mismatch.
        :class:`~rolling_sphere.exceptions.TrajectoryIOError`: When the file cannot be read.
    """

    path = Path(path)
    try:
        with path.open(newline="") as handle:
            lines = list(csv.reader(handle))
    except OSError as err:
        raise TrajectoryIOError(path, err) from err

    if not lines:
        raise SchemaError("Missing header row.")

    header = lines[0]
    if header not in (COLUMNS, COLUMNS + COSTATE_COLUMNS):
        raise SchemaError(f"Unexpected columns {header}.", row=0)

    values = np.empty((len(lines) - 1, len(header)))
    for index, row in enumerate(lines[1:], start=1):
        if len(row) != len(header):
            raise SchemaError(f"Expected {len(header)} values, got {len(row)}.", row=index)

        try:
            values[index - 1] = [float(v) for v in row]
        except ValueError as err:
            raise SchemaError(f"Non-numeric value ({err}).", row=index) from err

    n = len(values)
    try:
        trajectory = Trajectory(
            t=values[:, 0],
            phi=values[:, 1:3],
            R=values[:, 3:12].reshape(n, 3, 3),
            x=values[:, 12:14],
        )
    except ValueError as err:
        raise SchemaError(f"Invalid trajectory ({err}).") from err

    costates = values[:, 14:18] if len(header) > len(COLUMNS) else None
    return trajectory, costates


def read_trajectory(path: PathLike) -> Trajectory:
    trajectory, _ = read_trajectory_with_costates(path)
    return trajectory
