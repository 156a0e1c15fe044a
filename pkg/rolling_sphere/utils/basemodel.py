import numpy as np
from pydantic import BaseModel


class RollingSphereModel(BaseModel):
    """
    Base model for the immutable value types of the library.
    """

    class Config:
        allow_mutation = False
        arbitrary_types_allowed = True
        json_encoders = {np.ndarray: lambda a: a.tolist()}


def as_float_array(value, shape) -> np.ndarray:
    array = np.array(value, dtype=float)
    if array.shape != shape:
        raise ValueError(f"expected shape {shape}, got {array.shape}")

    elif not np.all(np.isfinite(array)):
        raise ValueError("non-finite component")

    array.setflags(write=False)
    return array
