from rolling_sphere.config import RobotParams, load_params
from rolling_sphere.connection import (
    connection_at,
    curvature_at,
    fiber_controllability_certificate,
)
from rolling_sphere.elliptic import elliptic_F, jacobi_am, jacobi_sn
from rolling_sphere.geometry import hat, project_rotation, rot_exp, unhat
from rolling_sphere.holonomy import (
    pure_rotation_beta,
    rect_loop_control,
    rotational_holonomy_rect,
    translational_holonomy_numeric,
    translational_holonomy_rect,
)
from rolling_sphere.kinematics import (
    center_velocity,
    horizontal_lift,
    integrate,
    psi,
    spatial_angular_velocity,
)
from rolling_sphere.trajectory_io import read_trajectory, write_trajectory
from rolling_sphere.types import (
    Costate,
    PiecewiseControl,
    PMPState,
    Pose,
    RectLoopDiag,
    RectLoopXY,
    ShapeState,
    Trajectory,
)

__all__ = [
    "Costate",
    "PMPState",
    "PiecewiseControl",
    "Pose",
    "RectLoopDiag",
    "RectLoopXY",
    "RobotParams",
    "ShapeState",
    "Trajectory",
    "center_velocity",
    "connection_at",
    "curvature_at",
    "elliptic_F",
    "fiber_controllability_certificate",
    "hat",
    "horizontal_lift",
    "integrate",
    "jacobi_am",
    "jacobi_sn",
    "load_params",
    "project_rotation",
    "psi",
    "pure_rotation_beta",
    "read_trajectory",
    "rect_loop_control",
    "rot_exp",
    "rotational_holonomy_rect",
    "spatial_angular_velocity",
    "translational_holonomy_numeric",
    "translational_holonomy_rect",
    "unhat",
    "write_trajectory",
]
