from pathlib import Path

import numpy as np
import pytest

from rolling_sphere.config import RobotParams
from rolling_sphere.geometry import rot_exp
from rolling_sphere.types import PMPState

DEFAULT_PARAMS_TEXT = """# reference robot
r = 1
rho = 0.3
h = 0.75
w = 0.8
j_ratio = 5  # J / I_s
"""

# Costate of the cheapest extremal found for (0, 0) -> (1, 1), phi -> (10pi, 10pi), T = 10
EXAMPLE_COSTATE = (25.9715163916, 3.4631181103, -66.0330391125, -66.0330391091)
EXAMPLE_COST = 1289.392413

# An extremal with A < E: H = 1/4, sigma1 = 0, a = 2.
CIRCULATING_STATE = PMPState(
    phi1=0.0, phi2=0.0, x1=0.0, x2=0.0, gamma1=0.5, gamma2=-0.5, p1=5.0, p2=0.0
)


@pytest.fixture(scope="session")
def params() -> RobotParams:
    return RobotParams.default()


@pytest.fixture
def rng():
    return np.random.default_rng(1729)


@pytest.fixture(scope="session")
def params_file(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("params") / "robot.cfg"
    path.write_text(DEFAULT_PARAMS_TEXT)
    return path


@pytest.fixture(scope="session")
def example_state() -> PMPState:
    return PMPState.from_array([0.0, 0.0, 0.0, 0.0, *EXAMPLE_COSTATE])


@pytest.fixture(scope="session")
def circulating_state() -> PMPState:
    return CIRCULATING_STATE


@pytest.fixture
def rotation(rng) -> np.ndarray:
    axis = rng.normal(size=3)
    return rot_exp(axis / np.linalg.norm(axis) * rng.uniform(0, np.pi))
