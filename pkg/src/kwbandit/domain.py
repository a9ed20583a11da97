"""Axis-aligned box domains and Euclidean projection."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import DomainViolationError


@dataclass(frozen=True)
class Domain:
    """Axis-aligned box in R^d with nonempty interior.

    ``diameter`` is the Euclidean norm of ``upper - lower``; projection is
    the componentwise clamp, which is the Euclidean projection onto a box.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lower)
        hi = tuple(float(v) for v in self.upper)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if len(lo) != len(hi):
            raise ValueError(f"lower has {len(lo)} components, upper has {len(hi)}")
        if len(lo) < 1:
            raise ValueError("domain must have dimension >= 1")
        for i, (a, b) in enumerate(zip(lo, hi)):
            if not (np.isfinite(a) and np.isfinite(b)):
                raise ValueError(f"axis {i}: bounds must be finite, got [{a}, {b}]")
            if not a < b:
                raise ValueError(f"axis {i}: lower must be < upper, got [{a}, {b}]")

    @property
    def dimension(self) -> int:
        return len(self.lower)

    @cached_property
    def lower_array(self) -> np.ndarray:
        a = np.array(self.lower, dtype=float)
        a.flags.writeable = False
        return a

    @cached_property
    def upper_array(self) -> np.ndarray:
        a = np.array(self.upper, dtype=float)
        a.flags.writeable = False
        return a

    @cached_property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.upper_array - self.lower_array))

    @property
    def midpoint(self) -> tuple[float, ...]:
        return tuple(0.5 * (a + b) for a, b in zip(self.lower, self.upper))

    def contains(self, x) -> bool:
        arr = np.asarray(x, dtype=float)
        return bool(np.all(arr >= self.lower_array) and np.all(arr <= self.upper_array))

    def require_inside(self, x, what: str = "point") -> None:
        arr = np.asarray(x, dtype=float)
        if arr.shape[-1] != self.dimension:
            raise DomainViolationError(
                f"{what} has dimension {arr.shape[-1]}, domain has dimension {self.dimension}"
            )
        if np.any(arr < self.lower_array) or np.any(arr > self.upper_array):
            raise DomainViolationError(f"{what} {arr.tolist()} lies outside the box {self.lower}..{self.upper}")

    def project(self, x) -> np.ndarray:
        """Componentwise clamp into the box; identity on interior points."""
        arr = np.asarray(x, dtype=float)
        return np.clip(arr, self.lower_array, self.upper_array)

    def max_distance_from(self, point) -> float:
        """Largest Euclidean distance from ``point`` to any point of the box.

        Attained at a corner: per axis the farther of the two endpoints.
        """
        p = np.asarray(point, dtype=float)
        per_axis = np.maximum(np.abs(p - self.lower_array), np.abs(self.upper_array - p))
        return float(np.linalg.norm(per_axis))


def project(domain: Domain, x) -> np.ndarray:
    """Euclidean projection of ``x`` onto ``domain`` (componentwise clamp)."""
    return domain.project(x)
