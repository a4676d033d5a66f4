"""Random variates for the fog and jitter laws (numpy Generator backed)."""
from __future__ import annotations

import numpy as np

from .errors import DomainError


def gamma_variate(shape: float, scale: float, rng: np.random.Generator, size=None):
    if not (shape > 0 and scale > 0):
        raise DomainError(f"gamma_variate needs positive shape/scale, got {shape}, {scale}")
    return rng.gamma(shape, scale, size)


def rayleigh_variate(sigma: float, rng: np.random.Generator, size=None):
    if not sigma > 0:
        raise DomainError(f"rayleigh_variate needs sigma > 0, got {sigma}")
    return rng.rayleigh(sigma, size)
