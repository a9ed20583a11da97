"""Allocation rules: decaying-step, fixed-step, and windowed ascent.

All three share the same measurement primitive (central differences) and
keep every iterate inside the domain by Euclidean projection, which is
nonexpansive on a box and therefore preserves every distance argument
the tuning formulas rest on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .domain import Domain
from .gradient import GradientEstimate
from .objectives import ClassConstants
from .tuning import contraction_factor

VANILLA = "vanilla"
FIXED_STEP = "fixed-step"
SLIDING_WINDOW = "sliding-window"

RESTART = "restart"
EVICT_OLDEST = "evict-oldest"


def vanilla_step_size(step: int) -> float:
    """Decaying learning rate step**(-1/2) of the classic schedule."""
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    return float(step) ** -0.5


def vanilla_perturbation(step: int) -> float:
    """Decaying perturbation step**(-1/4) of the classic schedule."""
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    return float(step) ** -0.25


@dataclass(frozen=True)
class FixedStepConfig:
    """Constant learning rate ``beta`` and perturbation ``c``.

    Construction rejects any (beta, constants) pair whose contraction
    factor is not below one: a fixed step that large cannot shrink the
    expected squared distance.  ``alpha`` records the exponent coupling
    beta to c (beta = c**(2/(1-alpha))); the coupled constructor derives
    beta from c, the plain constructor just stores alpha.
    """

    beta: float
    c: float
    constants: ClassConstants
    alpha: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "alpha", float(self.alpha))
        if self.beta <= 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if self.c <= 0:
            raise ValueError(f"c must be > 0, got {self.c}")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        # Raises ContractionViolationError when beta is too large.
        contraction_factor(self.beta, self.constants.k1, self.constants.k2)

    @classmethod
    def coupled(cls, c: float, alpha: float, constants: ClassConstants) -> "FixedStepConfig":
        """beta = c**(2/(1-alpha)) for alpha in (0, 1)."""
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"the coupled constructor requires alpha in (0, 1), got {alpha}")
        return cls(beta=float(c) ** (2.0 / (1.0 - alpha)), c=c, constants=constants, alpha=alpha)

    @property
    def gamma(self) -> float:
        return contraction_factor(self.beta, self.constants.k1, self.constants.k2)


@dataclass(frozen=True)
class SlidingWindowConfig:
    """Finite-memory rule: at most ``window`` recent estimates shape the
    action, re-anchored at ``x0``.

    The action applies weights n**(-1/2) to the buffered estimates,
    oldest first, and projects:

        action = project(x0 + sum_n n**(-1/2) * y_(n))

    ``refresh`` selects how the buffer evolves once full:

    * ``restart`` (default): the buffer empties after ``window`` estimates
      and the rule restarts from the anchor.  This keeps the realized
      measurements identical to the restarted run they are weighted as,
      which is what makes the expected squared distance decay like
      1/sqrt(window).
    * ``evict-oldest``: the oldest estimate is dropped one at a time.
      Kept for completeness; re-weighting old measurements taken at
      actions they themselves produced feeds back on itself and does not
      settle, so its measured distances stay O(1) instead of decaying.

    ``c`` is the perturbation used for every window measurement (an
    estimate cannot retroactively change its c, so it is shared); the
    default window**(-1/4) matches the terminal value of the decaying
    schedule, but an L-independent c keeps the calibrated steady-distance
    constant flat across window lengths.
    """

    window: int
    x0: tuple[float, ...]
    c: float | None = None
    refresh: str = RESTART

    def __post_init__(self):
        object.__setattr__(self, "window", int(self.window))
        object.__setattr__(self, "x0", tuple(float(v) for v in self.x0))
        if self.window < 1:
            raise ValueError(f"window must be >= 1, got {self.window}")
        if self.refresh not in (RESTART, EVICT_OLDEST):
            raise ValueError(f"refresh must be {RESTART!r} or {EVICT_OLDEST!r}, got {self.refresh!r}")
        c = float(self.window) ** -0.25 if self.c is None else float(self.c)
        object.__setattr__(self, "c", c)
        if c <= 0:
            raise ValueError(f"c must be > 0, got {c}")

    @cached_property
    def weights(self) -> np.ndarray:
        """Strictly decreasing weights n**(-1/2), n = 1..window."""
        w = np.arange(1, self.window + 1, dtype=float) ** -0.5
        w.flags.writeable = False
        return w

    @cached_property
    def x0_array(self) -> np.ndarray:
        a = np.array(self.x0, dtype=float)
        a.flags.writeable = False
        return a


@dataclass(frozen=True)
class AlgorithmState:
    """Immutable per-trajectory state; step ops return a new state."""

    variant: str
    domain: Domain
    x: tuple[float, ...]
    step_count: int = 0
    window_buffer: tuple[GradientEstimate, ...] = field(default=())

    def __post_init__(self):
        if self.variant not in (VANILLA, FIXED_STEP, SLIDING_WINDOW):
            raise ValueError(f"unknown variant {self.variant!r}")
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if not self.domain.contains(self.x):
            raise ValueError(f"iterate {self.x} lies outside the domain")
        if self.step_count < 0:
            raise ValueError(f"step_count must be >= 0, got {self.step_count}")

    @property
    def x_array(self) -> np.ndarray:
        return np.array(self.x, dtype=float)

    @property
    def next_step(self) -> int:
        """1-based index of the upcoming update."""
        return self.step_count + 1


def initial_state(variant: str, domain: Domain, x0) -> AlgorithmState:
    return AlgorithmState(variant=variant, domain=domain, x=tuple(float(v) for v in np.atleast_1d(np.asarray(x0, dtype=float))))


def step_vanilla(state: AlgorithmState, estimate: GradientEstimate) -> AlgorithmState:
    """x <- project(x + s**(-1/2) * y) at update index s = step_count + 1."""
    if state.variant != VANILLA:
        raise ValueError(f"step_vanilla requires a vanilla state, got {state.variant!r}")
    s = state.next_step
    new_x = state.domain.project(state.x_array + vanilla_step_size(s) * estimate.y_array)
    return AlgorithmState(variant=VANILLA, domain=state.domain, x=tuple(new_x), step_count=s)


def step_fixed(state: AlgorithmState, estimate: GradientEstimate, config: FixedStepConfig) -> AlgorithmState:
    """x <- project(x + beta * y)."""
    if state.variant != FIXED_STEP:
        raise ValueError(f"step_fixed requires a fixed-step state, got {state.variant!r}")
    new_x = state.domain.project(state.x_array + config.beta * estimate.y_array)
    return AlgorithmState(variant=FIXED_STEP, domain=state.domain, x=tuple(new_x), step_count=state.next_step)


def sliding_window_action(
    config: SlidingWindowConfig, buffer: tuple[GradientEstimate, ...], domain: Domain
) -> np.ndarray:
    """project(x0 + sum_n n**(-1/2) * y_(n)), oldest estimate first."""
    m = len(buffer)
    if m > config.window:
        raise ValueError(f"buffer holds {m} estimates, window is {config.window}")
    # Left-to-right accumulation, oldest first; the batch engine reproduces
    # this order exactly, so replaying a stored buffer is bit-for-bit.
    acc = np.zeros(domain.dimension)
    for k, est in enumerate(buffer):
        acc = acc + config.weights[k] * est.y_array
    return domain.project(config.x0_array + acc)


def sliding_window_advance(
    state: AlgorithmState, estimate: GradientEstimate, config: SlidingWindowConfig
) -> AlgorithmState:
    """Absorb one estimate per the config's refresh mode and recompute the
    action from the buffer."""
    if state.variant != SLIDING_WINDOW:
        raise ValueError(f"sliding_window_advance requires a sliding-window state, got {state.variant!r}")
    buffer = state.window_buffer
    if len(buffer) >= config.window:
        buffer = () if config.refresh == RESTART else buffer[1:]
    buffer = buffer + (estimate,)
    new_x = sliding_window_action(config, buffer, state.domain)
    return AlgorithmState(
        variant=SLIDING_WINDOW,
        domain=state.domain,
        x=tuple(new_x),
        step_count=state.next_step,
        window_buffer=buffer,
    )
