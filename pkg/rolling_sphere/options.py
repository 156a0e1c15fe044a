import math
from typing import Optional, Tuple

import click
import numpy as np

from rolling_sphere.config import RobotParams, load_params
from rolling_sphere.exceptions import RollingSphereError
from rolling_sphere.logging import logger
from rolling_sphere.utils import parse_angle


class AngleType(click.ParamType):
    """Radians, or a multiple of pi written like ``7pi``."""

    name = "angle"

    def convert(self, value, param, ctx) -> float:
        try:
            angle = value if isinstance(value, float) else parse_angle(value)
        except ValueError:
            self.fail(f"'{value}' is not a number or pi multiple.", param, ctx)

        if not math.isfinite(angle):
            self.fail(f"'{value}' is not finite.", param, ctx)

        return angle


class PairType(click.ParamType):
    """Two comma-separated numbers, each optionally a pi multiple."""

    name = "pair"

    def convert(self, value, param, ctx) -> Tuple[float, float]:
        if isinstance(value, tuple):
            return value

        parts = [p for p in str(value).split(",")]
        if len(parts) != 2:
            self.fail(f"Expected two comma-separated values, got '{value}'.", param, ctx)

        try:
            first, second = (parse_angle(p) for p in parts)
        except ValueError:
            self.fail(f"'{value}' contains a non-numeric entry.", param, ctx)

        if not (math.isfinite(first) and math.isfinite(second)):
            self.fail(f"'{value}' contains a non-finite entry.", param, ctx)

        return first, second


ANGLE = AngleType()
PAIR = PairType()


class RollingSphereGroup(click.Group):
    """Reports library errors as ordinary failures (exit code 1)."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except RollingSphereError as err:
            raise click.ClickException(str(err)) from err


def _load_params(ctx, param, value: Optional[str]) -> RobotParams:
    params = RobotParams.default() if value is None else load_params(value)
    logger.info(f"Parameters: {params.summary()}")
    return params


def params_option():
    return click.option(
        "--params",
        "params",
        type=click.Path(exists=True, dir_okay=False),
        callback=_load_params,
        help="Flat 'key = value' parameters file (r, rho, h, w, j_ratio).",
    )


def verbosity_option():
    def callback(ctx, param, value: str):
        logger.set_level(value)
        return value

    return click.option(
        "-v",
        "--verbosity",
        type=click.Choice(["DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR"], case_sensitive=False),
        default="INFO",
        expose_value=False,
        is_eager=True,
        callback=callback,
        help="Logging level.",
    )


def out_option(help: str):
    return click.option("--out", type=click.Path(dir_okay=False, writable=True), help=help)


def format_vector(values) -> str:
    return "(" + ", ".join(f"{v:.10g}" for v in np.ravel(values)) + ")"


def format_matrix(matrix) -> str:
    return "\n".join("  [" + ", ".join(f"{v: .10f}" for v in row) + "]" for row in matrix)
