"""Reward-perturbation models with a uniform variance bound."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .objectives import ObjectiveSpec
from .rng import RandomStream

GAUSSIAN = "gaussian"
UNIFORM_BOUNDED = "uniform-bounded"
NONE = "none"

_KINDS = (GAUSSIAN, UNIFORM_BOUNDED, NONE)


@dataclass(frozen=True)
class NoiseModel:
    """Zero-mean reward noise with variance at most ``sigma2``.

    * ``gaussian``: N(0, sigma2), variance exactly sigma2.
    * ``uniform-bounded``: uniform on [-w, w] with w = sqrt(3*sigma2),
      variance exactly sigma2 and bounded support.
    * ``none``: no perturbation (sigma2 must be 0).

    Every draw consumes a fixed number of generator values (1 per sample
    for the stochastic kinds, 0 for ``none``), so replaying a stream
    reproduces a trajectory exactly.
    """

    kind: str
    sigma2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "sigma2", float(self.sigma2))
        if self.kind not in _KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}; expected one of {_KINDS}")
        if self.sigma2 < 0 or not np.isfinite(self.sigma2):
            raise ValueError(f"sigma2 must be a finite value >= 0, got {self.sigma2}")
        if self.kind == NONE and self.sigma2 != 0.0:
            raise ValueError(f"noise kind 'none' requires sigma2 = 0, got {self.sigma2}")
        if self.kind == UNIFORM_BOUNDED and self.sigma2 == 0.0:
            raise ValueError("uniform-bounded noise requires sigma2 > 0")

    @classmethod
    def gaussian(cls, sigma2: float) -> "NoiseModel":
        return cls(GAUSSIAN, sigma2)

    @classmethod
    def uniform_bounded(cls, sigma2: float) -> "NoiseModel":
        return cls(UNIFORM_BOUNDED, sigma2)

    @classmethod
    def none(cls) -> "NoiseModel":
        return cls(NONE, 0.0)

    @property
    def support_half_width(self) -> float:
        """Half-width of the support ([-w, w]); inf for gaussian, 0 for none."""
        if self.kind == UNIFORM_BOUNDED:
            return float(np.sqrt(3.0 * self.sigma2))
        return 0.0 if self.kind == NONE else float("inf")

    def sigma_tilde2(self, dimension: int) -> float:
        """Aggregated variance constant 4 * d * sigma2 used by the bounds."""
        if dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {dimension}")
        return 4.0 * dimension * self.sigma2

    def draw(self, rng: RandomStream, size=None):
        """Noise sample(s); the stream is advanced identically whether
        values are drawn one at a time or as a block."""
        if self.kind == NONE:
            return 0.0 if size is None else np.zeros(size)
        if self.kind == GAUSSIAN:
            return rng.normal(0.0, np.sqrt(self.sigma2), size)
        w = self.support_half_width
        return rng.uniform(-w, w, size)


def sample_reward(noise: NoiseModel, objective: ObjectiveSpec, x, rng: RandomStream) -> float:
    """One noisy reward f(x) + xi with E[xi] = 0 and Var[xi] <= sigma2."""
    value = objective.evaluate(x)
    return float(value + noise.draw(rng))
