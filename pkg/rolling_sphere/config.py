import re
from pathlib import Path
from typing import Dict, Union

import pydantic
from pydantic import BaseModel, validator

from rolling_sphere.exceptions import ParseError, ValidationError

PARAMETER_KEYS = ("r", "rho", "h", "w", "j_ratio")
_LINE_PATTERN = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+)\s*$")


class RobotParams(BaseModel):
    """
    Physical constants of the two-wheel-driven sphere.
    """

    r: float
    """Sphere radius."""

    rho: float
    """Wheel radius."""

    h: float
    """Distance from the sphere center to the wheel plane."""

    w: float
    """Half the track width between the two wheels."""

    j_ratio: float
    """Inertia ratio ``J / I_s`` of the internal unit over the sphere shell."""

    class Config:
        frozen = True

    @validator("r", "rho", "h", "w")
    def check_positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("must be strictly positive")

        return value

    @validator("j_ratio")
    def check_non_negative(cls, value: float) -> float:
        if not value >= 0:
            raise ValueError("must be non-negative")

        return value

    @property
    def c(self) -> float:
        """Ratio between the internal yaw angle and the wheel angle difference."""
        return self.rho / (2 * self.w * (1 + self.j_ratio))

    @property
    def lever(self) -> float:
        """``rho / 2h``, the factor shared by every rolling term."""
        return self.rho / (2 * self.h)

    @classmethod
    def default(cls) -> "RobotParams":
        return cls(**DEFAULT_PARAMS)

    def summary(self) -> str:
        values = ", ".join(f"{k}={getattr(self, k):g}" for k in PARAMETER_KEYS)
        return f"{values} (c={self.c:.10g})"


DEFAULT_PARAMS: Dict[str, float] = {"r": 1.0, "rho": 0.3, "h": 0.75, "w": 0.8, "j_ratio": 5.0}


def parse_params(text: str) -> Dict[str, float]:
    values: Dict[str, float] = {}
    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue

        match = _LINE_PATTERN.match(line)
        if not match:
            raise ParseError(line_number, f"expected 'key = value', got '{raw_line.strip()}'")

        key, raw_value = match.groups()
        if key not in PARAMETER_KEYS:
            raise ParseError(line_number, f"unknown key '{key}'")

        elif key in values:
            raise ParseError(line_number, f"duplicate key '{key}'")

        try:
            values[key] = float(raw_value)
        except ValueError as err:
            raise ParseError(line_number, f"'{raw_value}' is not a number") from err

    return values


def load_params(path: Union[str, Path]) -> RobotParams:
    """
    Load :class:`RobotParams` from a flat ``key = value`` file.

    Raises:
        :class:`~rolling_sphere.exceptions.ParseError`: When a line cannot be parsed.
        :class:`~rolling_sphere.exceptions.ValidationError`: When a key is missing or invalid.
    """

    values = parse_params(Path(path).read_text())
    for key in PARAMETER_KEYS:
        if key not in values:
            raise ValidationError(key)

    try:
        return RobotParams(**values)
    except pydantic.ValidationError as err:
        first = err.errors()[0]
        raise ValidationError(str(first["loc"][0]), first["msg"]) from err
