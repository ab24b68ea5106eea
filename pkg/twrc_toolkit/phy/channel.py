"""
Additive Gaussian superposition channel at the relay.

Usage:
    from twrc_toolkit.phy import NoiseModel, superimpose_and_noise

    nm = NoiseModel(seed=7)
    y = superimpose_and_noise(x1, x2, nm)              # x1 + x2 + n, n ~ N(0, 1)
    y = superimpose_and_noise(x1, x2, nm, rng=shard_rng)
    y = superimpose_and_noise(x1, x2, NoiseModel.noiseless())
"""

from dataclasses import dataclass

import numpy as np
from django.core.exceptions import ValidationError


@dataclass(frozen=True)
class NoiseModel:
    """Real unit-variance Gaussian noise with an explicit seed."""

    seed: int = 0
    variance: float = 1.0

    def __post_init__(self):
        if self.variance not in (0.0, 1.0):
            raise ValidationError(
                f"Noise variance is pinned to 1 (0 for noiseless tests), got {self.variance}",
                code='invalid_noise',
            )

    @classmethod
    def noiseless(cls, seed=0):
        return cls(seed=seed, variance=0.0)

    def generator(self):
        return np.random.default_rng(self.seed)

    def sample(self, shape, rng):
        if self.variance == 0.0:
            return np.zeros(shape)
        return rng.standard_normal(shape)


def superimpose_and_noise(x1, x2, nm, rng=None):
    """
    Received baseband signal y = x1 + x2 + n.

    Args:
        x1, x2: Equal-shape real amplitude arrays.
        nm: NoiseModel.
        rng: numpy Generator to draw from; a fresh one seeded by nm.seed if omitted.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape != x2.shape:
        raise ValidationError(
            f"Length mismatch: {x1.shape} vs {x2.shape}",
            code='length_mismatch',
        )
    rng = nm.generator() if rng is None else rng
    return x1 + x2 + nm.sample(x1.shape, rng)
