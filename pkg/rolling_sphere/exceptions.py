from typing import Optional


class RollingSphereError(Exception):
    """
    A general error raised by the rolling-sphere library.
    """


class NotSkewError(RollingSphereError):
    """
    An error raised when a matrix expected to be skew-symmetric is not.
    """

    def __init__(self, asymmetry: float):
        super().__init__(f"Matrix is not skew-symmetric (|M + M^T| = {asymmetry:.3e}).")


class DegenerateRotationError(RollingSphereError):
    """
    An error raised when a matrix cannot be projected onto SO(3).
    """


class InvalidStepError(RollingSphereError):
    """
    An error raised when an integrator receives a bad step or horizon.
    """


class DegenerateParamsError(RollingSphereError):
    """
    An error raised when robot parameters make an operation meaningless, e.g. ``c = 0``.
    """


class DomainError(RollingSphereError):
    """
    An error raised when a special function is evaluated outside its domain.
    """


class BranchError(RollingSphereError):
    """
    An error raised when the reduced constants are on the wrong pendulum regime.
    """


class ConditionError(RollingSphereError):
    """
    An error raised when the change of variables to the pendulum angle is not defined.
    """


class NoConvergenceError(RollingSphereError):
    """
    An error raised when shooting fails to meet the boundary conditions.
    """

    def __init__(self, best_residual: float, attempts: int):
        self.best_residual = best_residual
        super().__init__(
            f"Shooting did not converge after {attempts} start(s) "
            f"(best residual {best_residual:.3e})."
        )


class ParseError(RollingSphereError):
    """
    An error raised when a parameters file is malformed.
    """

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"Line {line_number}: {message}")


class ValidationError(RollingSphereError):
    """
    An error raised when a parameter value is missing or invalid.
    """

    def __init__(self, key: str, message: Optional[str] = None):
        self.key = key
        super().__init__(f"Invalid '{key}': {message or 'missing value'}")


class SchemaError(RollingSphereError):
    """
    An error raised when a trajectory file does not match the expected columns.
    """

    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        prefix = f"Row {row}: " if row is not None else ""
        super().__init__(f"{prefix}{message}")


class OpenLoopError(RollingSphereError):
    """
    An error raised when a holonomy is requested for a shape path that does not close.
    """

    def __init__(self, gap: float):
        super().__init__(f"Shape path does not close (gap {gap:.3e} rad).")


class TrajectoryIOError(RollingSphereError):
    """
    An error raised when a trajectory file cannot be read or written.
    """

    def __init__(self, path, reason: Exception):
        super().__init__(f"Cannot access '{path}': {reason}")
