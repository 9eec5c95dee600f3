"""
Parameter initializers. All randomness comes from an explicit ``numpy.random.Generator``.
"""
from typing import Tuple

import numpy as np

from .tensor import Parameter


def xavier_uniform(rng: np.random.Generator, shape: Tuple[int, int], name: str = "") -> Parameter:
    """Uniform in ±sqrt(6 / (fan_in + fan_out))."""
    fan_in, fan_out = shape
    bound = float(np.sqrt(6.0 / (fan_in + fan_out)))
    return Parameter(rng.uniform(-bound, bound, size=shape), name=name)


def normal(rng: np.random.Generator, shape: Tuple[int, ...], std: float = 0.02, name: str = "") -> Parameter:
    return Parameter(rng.normal(0.0, std, size=shape), name=name)


def zeros(shape: Tuple[int, ...], name: str = "") -> Parameter:
    return Parameter(np.zeros(shape), name=name)
