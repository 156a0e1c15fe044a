import math
from typing import Iterator, List, Optional, Tuple

import numpy as np
from pydantic import root_validator, validator

from rolling_sphere.utils import is_rotation
from rolling_sphere.utils.basemodel import RollingSphereModel, as_float_array

Segment = Tuple[float, float, float]
"""A ``(duration, u1, u2)`` piece of a piecewise-constant control."""


class ShapeState(RollingSphereModel):
    """
    Wheel angles, unwrapped on the covering space.
    """

    phi1: float = 0.0
    phi2: float = 0.0

    @validator("phi1", "phi2")
    def check_finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("wheel angle must be finite")

        return value

    def as_array(self) -> np.ndarray:
        return np.array([self.phi1, self.phi2])

    @classmethod
    def from_array(cls, values) -> "ShapeState":
        phi1, phi2 = (float(v) for v in values)
        return cls(phi1=phi1, phi2=phi2)


def shape_array(phi) -> np.ndarray:
    if isinstance(phi, ShapeState):
        return phi.as_array()

    return np.asarray(phi, dtype=float)


class Pose(RollingSphereModel):
    """
    A fiber element ``(R, x)`` of ``SO(3) x R^2``.
    """

    R: np.ndarray
    x: np.ndarray

    @validator("R", pre=True)
    def check_rotation(cls, value) -> np.ndarray:
        matrix = as_float_array(value, (3, 3))
        if not is_rotation(matrix):
            raise ValueError("R is not a rotation matrix")

        return matrix

    @validator("x", pre=True)
    def check_position(cls, value) -> np.ndarray:
        return as_float_array(value, (2,))

    @classmethod
    def identity(cls) -> "Pose":
        return cls(R=np.eye(3), x=np.zeros(2))

    def right_translate(self, other: "Pose") -> "Pose":
        """Right action of ``other`` on this pose."""
        return Pose(R=self.R @ other.R, x=self.x + other.x)


class Trajectory(RollingSphereModel):
    """
    Samples of ``(t, phi, R, x)`` on a strictly increasing time grid, plus the
    controls applied at each sample when known.
    """

    t: np.ndarray
    phi: np.ndarray
    R: np.ndarray
    x: np.ndarray
    u: Optional[np.ndarray] = None

    @validator("t", "phi", "R", "x", "u", pre=True)
    def to_array(cls, value):
        if value is None:
            return None

        array = np.array(value, dtype=float)
        array.setflags(write=False)
        return array

    @root_validator(skip_on_failure=True)
    def check_samples(cls, values):
        t, phi, R, x, u = (values.get(k) for k in ("t", "phi", "R", "x", "u"))
        n = len(t)
        if t.ndim != 1:
            raise ValueError("t must be one-dimensional")

        elif phi.shape != (n, 2) or R.shape != (n, 3, 3) or x.shape != (n, 2):
            raise ValueError("sample arrays disagree with the time grid")

        elif u is not None and u.shape != (n, 2):
            raise ValueError("control samples disagree with the time grid")

        elif n > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("time grid must be strictly increasing")

        elif n and not is_rotation(R):
            raise ValueError("trajectory contains an invalid rotation")

        return values

    @classmethod
    def empty(cls) -> "Trajectory":
        return cls(t=np.zeros(0), phi=np.zeros((0, 2)), R=np.zeros((0, 3, 3)), x=np.zeros((0, 2)))

    def __len__(self) -> int:
        return len(self.t)

    def samples(self) -> Iterator[Tuple[float, ShapeState, Pose]]:
        for i in range(len(self)):
            yield self.sample(i)

    def sample(self, index: int) -> Tuple[float, ShapeState, Pose]:
        return (
            float(self.t[index]),
            ShapeState.from_array(self.phi[index]),
            Pose(R=self.R[index], x=self.x[index]),
        )

    @property
    def final(self) -> Tuple[ShapeState, Pose]:
        _, shape, pose = self.sample(-1)
        return shape, pose

    @property
    def displacement(self) -> np.ndarray:
        return self.x[-1] - self.x[0]


class RectLoopXY(RollingSphereModel):
    """
    The rectangle ``[0, alpha] x [0, beta]`` in the ``(phi1, phi2)`` plane, counterclockwise.
    """

    alpha: float
    beta: float

    @validator("alpha", "beta")
    def check_positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("side lengths must be positive")

        return value

    def vertices(self) -> np.ndarray:
        return np.array([[0, 0], [self.alpha, 0], [self.alpha, self.beta], [0, self.beta]])


class RectLoopDiag(RollingSphereModel):
    """
    The rectangle with legs ``alpha`` (both wheels forward) and ``beta`` (counter-rotating
    wheels), axis-aligned in ``(phi1 + phi2, phi1 - phi2)``.
    """

    alpha: float
    beta: float

    @validator("alpha", "beta")
    def check_positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("leg lengths must be positive")

        return value

    def vertices(self) -> np.ndarray:
        a, b = self.alpha, self.beta
        return np.array([[0, 0], [a / 2, a / 2], [(a + b) / 2, (a - b) / 2], [b / 2, -b / 2]])


class PiecewiseControl(RollingSphereModel):
    segments: List[Segment]

    @validator("segments")
    def check_durations(cls, value: List[Segment]) -> List[Segment]:
        if not value:
            raise ValueError("at least one segment is required")

        for index, (duration, u1, u2) in enumerate(value):
            if not duration > 0:
                raise ValueError(f"segment {index} has non-positive duration {duration}")

            elif not (math.isfinite(u1) and math.isfinite(u2)):
                raise ValueError(f"segment {index} has a non-finite rate")

        return value

    @property
    def duration(self) -> float:
        return float(sum(d for d, _, _ in self.segments))

    def boundaries(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum([d for d, _, _ in self.segments])])

    def __call__(self, t: float) -> np.ndarray:
        ends = self.boundaries()[1:]
        index = min(int(np.searchsorted(ends, t, side="right")), len(self.segments) - 1)
        _, u1, u2 = self.segments[index]
        return np.array([u1, u2])

    def shape_at(self, t: float, phi0=(0.0, 0.0)) -> np.ndarray:
        """Exact wheel angles reached at time ``t``."""
        phi = np.array(phi0, dtype=float)
        elapsed = 0.0
        for duration, u1, u2 in self.segments:
            step = min(duration, max(t - elapsed, 0.0))
            phi += step * np.array([u1, u2])
            elapsed += duration

        return phi

    def time_scaled(self, factor: float) -> "PiecewiseControl":
        """The same shape-space path traversed ``factor`` times faster."""
        return PiecewiseControl(
            segments=[(d / factor, u1 * factor, u2 * factor) for d, u1, u2 in self.segments]
        )

    def reversed(self) -> "PiecewiseControl":
        return PiecewiseControl(segments=[(d, -u1, -u2) for d, u1, u2 in self.segments[::-1]])

    def then(self, other: "PiecewiseControl") -> "PiecewiseControl":
        return PiecewiseControl(segments=[*self.segments, *other.segments])


class Costate(RollingSphereModel):
    gamma1: float
    gamma2: float
    p1: float
    p2: float

    @property
    def p_norm(self) -> float:
        return math.hypot(self.p1, self.p2)

    @property
    def delta(self) -> float:
        """Polar angle of ``p`` in ``(-pi, pi]``."""
        return math.atan2(self.p2, self.p1)

    def as_array(self) -> np.ndarray:
        return np.array([self.gamma1, self.gamma2, self.p1, self.p2])


class PMPState(RollingSphereModel):
    """
    A point ``(phi, x, gamma, p)`` of the extremal flow.
    """

    phi1: float
    phi2: float
    x1: float
    x2: float
    gamma1: float
    gamma2: float
    p1: float
    p2: float

    @root_validator(skip_on_failure=True)
    def check_finite(cls, values):
        if not all(math.isfinite(v) for v in values.values()):
            raise ValueError("state must be finite")

        return values

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in PMP_FIELDS])

    @classmethod
    def from_array(cls, values) -> "PMPState":
        return cls(**{name: float(v) for name, v in zip(PMP_FIELDS, values)})

    @classmethod
    def from_parts(cls, phi, x, costate: Costate) -> "PMPState":
        return cls.from_array(np.concatenate([phi, x, costate.as_array()]))

    @property
    def costate(self) -> Costate:
        return Costate(gamma1=self.gamma1, gamma2=self.gamma2, p1=self.p1, p2=self.p2)

    @property
    def shape(self) -> ShapeState:
        return ShapeState(phi1=self.phi1, phi2=self.phi2)


PMP_FIELDS = ("phi1", "phi2", "x1", "x2", "gamma1", "gamma2", "p1", "p2")


class PMPTrajectory(RollingSphereModel):
    t: np.ndarray
    states: np.ndarray

    @validator("t", "states", pre=True)
    def to_array(cls, value):
        array = np.array(value, dtype=float)
        array.setflags(write=False)
        return array

    @root_validator(skip_on_failure=True)
    def check_grid(cls, values):
        t, states = values["t"], values["states"]
        if states.shape != (len(t), 8):
            raise ValueError("states must have one row of 8 components per sample")

        elif len(t) > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("time grid must be strictly increasing")

        return values

    def __len__(self) -> int:
        return len(self.t)

    @property
    def phi(self) -> np.ndarray:
        return self.states[:, 0:2]

    @property
    def x(self) -> np.ndarray:
        return self.states[:, 2:4]

    @property
    def gamma(self) -> np.ndarray:
        return self.states[:, 4:6]

    @property
    def p(self) -> np.ndarray:
        return self.states[:, 6:8]

    @property
    def initial(self) -> PMPState:
        return PMPState.from_array(self.states[0])

    @property
    def final(self) -> PMPState:
        return PMPState.from_array(self.states[-1])


class ReducedConstants(RollingSphereModel):
    """
    Constants of the pendulum reduction of an extremal.
    """

    H: float
    sigma1: float
    a: float
    E: float
    A: float

    @property
    def sqrt_H(self) -> float:
        return math.sqrt(self.H)

    @property
    def m_literal(self) -> float:
        """``sqrt(2A / (E + A))``, the modulus of the pendulum integral."""
        return math.sqrt(self.m_parameter)

    @property
    def m_parameter(self) -> float:
        """``2A / (E + A)``, the parameter entering ``1 - m sin^2``."""
        return 2 * self.A / (self.E + self.A)

    @property
    def circulating(self) -> bool:
        return self.A < self.E

    @property
    def P(self) -> float:
        return self.a + 2 * (self.sqrt_H + self.sigma1)

    @property
    def Q(self) -> float:
        """``a - 2(sqrt(H) - sigma1)``, positive whenever the pendulum variable exists."""
        return self.a - 2 * (self.sqrt_H - self.sigma1)

    @property
    def branch(self) -> str:
        return "circulating" if self.circulating else "librating"


class ConnectionLocal(RollingSphereModel):
    """
    Local connection forms over a shape, in vector form: ``A^{so(3)}_i = hat(A_so3_i)``.
    """

    A_so3_1: np.ndarray
    A_so3_2: np.ndarray
    A_r2_1: np.ndarray
    A_r2_2: np.ndarray

    @validator("A_so3_1", "A_so3_2", pre=True)
    def check_so3(cls, value) -> np.ndarray:
        return as_float_array(value, (3,))

    @validator("A_r2_1", "A_r2_2", pre=True)
    def check_r2(cls, value) -> np.ndarray:
        return as_float_array(value, (2,))


class CurvatureLocal(RollingSphereModel):
    B_so3: np.ndarray
    B_r2: np.ndarray

    @validator("B_so3", pre=True)
    def check_so3(cls, value) -> np.ndarray:
        return as_float_array(value, (3,))

    @validator("B_r2", pre=True)
    def check_r2(cls, value) -> np.ndarray:
        return as_float_array(value, (2,))


class ControllabilityReport(RollingSphereModel):
    controllable: bool
    so3_singular_values: np.ndarray
    r2_singular_values: np.ndarray

    @property
    def min_singular_value(self) -> float:
        """Smallest singular value that must be non-zero for each block to span."""
        return float(min(self.so3_singular_values[2], self.r2_singular_values[1]))


class ShapeTrajectory(RollingSphereModel):
    """
    Wheel angles and center position on a time grid, without orientation.
    """

    t: np.ndarray
    phi: np.ndarray
    x: np.ndarray

    @validator("t", "phi", "x", pre=True)
    def to_array(cls, value):
        array = np.array(value, dtype=float)
        array.setflags(write=False)
        return array

    @root_validator(skip_on_failure=True)
    def check_grid(cls, values):
        n = len(values["t"])
        if values["phi"].shape != (n, 2) or values["x"].shape != (n, 2):
            raise ValueError("sample arrays disagree with the time grid")

        return values
