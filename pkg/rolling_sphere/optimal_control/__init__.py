from rolling_sphere.optimal_control.pmp import (
    control_cost,
    first_integral_drift,
    first_integrals,
    hamiltonian,
    integrate_pmp,
    integrate_pmp_pose,
    optimal_control_law,
    pmp_rhs,
    poisson_bracket,
)
from rolling_sphere.optimal_control.reduction import (
    exact_extremal,
    exact_solution,
    exact_solution_librating,
    initial_angles,
    pendulum_angle,
    pendulum_angle_librating,
    reconstruct_by_quadrature,
    reduced_constants,
    theta_along,
)
from rolling_sphere.optimal_control.shooting import (
    BoundaryValueProblem,
    ShootingResult,
    branch_report,
    explore_extremals,
    is_local_minimum,
    solve_bvp,
)

__all__ = [
    "BoundaryValueProblem",
    "ShootingResult",
    "branch_report",
    "control_cost",
    "exact_extremal",
    "exact_solution",
    "exact_solution_librating",
    "explore_extremals",
    "first_integral_drift",
    "first_integrals",
    "hamiltonian",
    "initial_angles",
    "integrate_pmp",
    "integrate_pmp_pose",
    "is_local_minimum",
    "optimal_control_law",
    "pendulum_angle",
    "pendulum_angle_librating",
    "pmp_rhs",
    "poisson_bracket",
    "reconstruct_by_quadrature",
    "reduced_constants",
    "solve_bvp",
    "theta_along",
]
