import numpy as np
import pydantic


class BaseModel(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(
        arbitrary_types_allowed=True, frozen=True, populate_by_name=True
    )

    def __repr__(self):
        return f"{self.__class__.__name__}({self.model_dump_json(indent=4)})"


def frozen_array(value, shape: tuple, dtype=float) -> np.ndarray:
    """Copies ``value`` into a read-only array of the given shape."""
    array = np.array(value, dtype=dtype)
    if array.shape != shape:
        raise ValueError(f"expected an array of shape {shape}, got {array.shape}")
    array.setflags(write=False)
    return array
