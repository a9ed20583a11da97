"""Central-difference gradient estimation from paired noisy rewards."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .noise import NoiseModel, sample_reward
from .objectives import ObjectiveSpec
from .rng import RandomStream


@dataclass(frozen=True)
class GradientEstimate:
    """Componentwise central differences of paired reward samples.

    ``y[i] = (plus_samples[i] - minus_samples[i]) / (2 * c_used)`` exactly;
    ``boundary_contact`` records whether any sample point had to be clamped
    into the domain.
    """

    plus_samples: tuple[float, ...]
    minus_samples: tuple[float, ...]
    c_used: float
    boundary_contact: bool = False
    y: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "plus_samples", tuple(float(v) for v in self.plus_samples))
        object.__setattr__(self, "minus_samples", tuple(float(v) for v in self.minus_samples))
        object.__setattr__(self, "c_used", float(self.c_used))
        if self.c_used <= 0:
            raise ValueError(f"c_used must be > 0, got {self.c_used}")
        if len(self.plus_samples) != len(self.minus_samples):
            raise ValueError("plus_samples and minus_samples must have equal length")
        derived = tuple((p - m) / (2.0 * self.c_used) for p, m in zip(self.plus_samples, self.minus_samples))
        if self.y == ():
            object.__setattr__(self, "y", derived)
        else:
            supplied = tuple(float(v) for v in self.y)
            if supplied != derived:
                raise ValueError("y must equal (plus_samples - minus_samples) / (2 * c_used) exactly")
            object.__setattr__(self, "y", supplied)

    @property
    def dimension(self) -> int:
        return len(self.y)

    @cached_property
    def y_array(self) -> np.ndarray:
        a = np.array(self.y, dtype=float)
        a.flags.writeable = False
        return a

    @classmethod
    def from_vector(cls, y, c: float, boundary_contact: bool = False) -> "GradientEstimate":
        """Estimate with a given difference vector (testing/replay helper);
        samples are synthesized as +/- c*y so the defining identity holds."""
        y = tuple(float(v) for v in y)
        return cls(
            plus_samples=tuple(c * v for v in y),
            minus_samples=tuple(-c * v for v in y),
            c_used=c,
            boundary_contact=boundary_contact,
        )


def estimate_gradient(
    objective: ObjectiveSpec,
    noise: NoiseModel,
    x,
    c: float,
    rng: RandomStream,
) -> GradientEstimate:
    """Estimate grad f(x) from 2d noisy rewards at x +/- c*e(i).

    Sample points falling outside the box are clamped back in (and the
    estimate flagged), so every query is feasible.  Per axis the stream is
    consumed in the order plus-then-minus.
    """
    if c <= 0:
        raise ValueError(f"perturbation c must be > 0, got {c}")
    domain = objective.domain
    point = np.asarray(x, dtype=float)
    domain.require_inside(point, what="estimation point")

    plus: list[float] = []
    minus: list[float] = []
    contact = False
    for i in range(domain.dimension):
        xp = point.copy()
        xp[i] += c
        xm = point.copy()
        xm[i] -= c
        xp_in = domain.project(xp)
        xm_in = domain.project(xm)
        contact = contact or bool(np.any(xp_in != xp) or np.any(xm_in != xm))
        plus.append(sample_reward(noise, objective, xp_in, rng))
        minus.append(sample_reward(noise, objective, xm_in, rng))
    return GradientEstimate(
        plus_samples=tuple(plus), minus_samples=tuple(minus), c_used=float(c), boundary_contact=contact
    )
