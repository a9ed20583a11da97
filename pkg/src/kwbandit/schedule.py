"""Piecewise-constant objective schedules.

A schedule serves one objective per episode.  Change times are the FIRST
step of their episode: with change_times = (1, 51) and horizon 100,
steps 1..50 see objective 0 and steps 51..100 see objective 1.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

from .objectives import ClassConstants, ObjectiveSpec


@dataclass(frozen=True)
class EnvironmentSchedule:
    """Objectives served over steps 1..horizon, constant within episodes."""

    horizon: int
    change_times: tuple[int, ...]
    objectives: tuple[ObjectiveSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "horizon", int(self.horizon))
        object.__setattr__(self, "change_times", tuple(int(t) for t in self.change_times))
        object.__setattr__(self, "objectives", tuple(self.objectives))
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        times = self.change_times
        if not times:
            raise ValueError("change_times must contain at least the start time 1")
        if times[0] != 1:
            raise ValueError(f"the first change time must be 1 (start of the first episode), got {times[0]}")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError(f"change_times must be strictly increasing, got {times}")
        if times[-1] > self.horizon:
            raise ValueError(f"change times must lie in [1, horizon={self.horizon}], got {times}")
        if len(self.objectives) != len(times):
            raise ValueError(
                f"need one objective per episode: {len(times)} episodes but {len(self.objectives)} objectives"
            )
        domain = self.objectives[0].domain
        for i, obj in enumerate(self.objectives):
            if obj.domain != domain:
                raise ValueError(f"objective {i} uses a different domain than objective 0")
        for i, (a, b) in enumerate(zip(self.objectives, self.objectives[1:])):
            if a == b:
                raise ValueError(f"episodes {i + 1} and {i + 2} serve identical objectives; a change must change f")

    @property
    def domain(self):
        return self.objectives[0].domain

    @property
    def num_episodes(self) -> int:
        """Number of episodes up to the horizon (Delta_T)."""
        return len(self.change_times)

    @property
    def episode_lengths(self) -> tuple[int, ...]:
        ends = self.change_times[1:] + (self.horizon + 1,)
        return tuple(e - s for s, e in zip(self.change_times, ends))

    def episode_index(self, step: int) -> int:
        """1-based episode index of a step in [1, horizon]."""
        self._require_step(step)
        return bisect_right(self.change_times, step)

    def objective_at(self, step: int) -> ObjectiveSpec:
        """Objective served at a step; constant on each episode."""
        return self.objectives[self.episode_index(step) - 1]

    def combined_constants(self) -> ClassConstants:
        """Constants valid for every episode objective."""
        return ClassConstants.combine([o.constants for o in self.objectives])

    def max_mean_value_offset(self, c: float) -> float:
        """Gradient-offset radius valid for every episode objective."""
        return max(o.mean_value_offset(c) for o in self.objectives)

    def _require_step(self, step: int) -> None:
        if not 1 <= step <= self.horizon:
            raise ValueError(f"step must lie in [1, {self.horizon}], got {step}")

    @classmethod
    def stationary(cls, horizon: int, objective: ObjectiveSpec) -> "EnvironmentSchedule":
        """Single-episode schedule serving one objective throughout."""
        return cls(horizon=horizon, change_times=(1,), objectives=(objective,))

    @classmethod
    def evenly_spaced(
        cls, horizon: int, num_episodes: int, objectives: list[ObjectiveSpec]
    ) -> "EnvironmentSchedule":
        """``num_episodes`` episodes of near-equal length, cycling through
        ``objectives`` in order (so two alternating objectives give maximal
        back-and-forth jumps)."""
        if num_episodes < 1:
            raise ValueError(f"num_episodes must be >= 1, got {num_episodes}")
        if num_episodes > horizon:
            raise ValueError(f"cannot fit {num_episodes} episodes into horizon {horizon}")
        if not objectives:
            raise ValueError("need at least one objective")
        times = tuple(1 + (i * horizon) // num_episodes for i in range(num_episodes))
        served = tuple(objectives[i % len(objectives)] for i in range(num_episodes))
        return cls(horizon=horizon, change_times=times, objectives=served)

    @classmethod
    def packed(
        cls,
        horizon: int,
        num_episodes: int,
        objectives: list[ObjectiveSpec],
        where: str = "early",
        min_length: int = 1,
    ) -> "EnvironmentSchedule":
        """Adversarial layout: changes packed at the start or the end of the
        horizon, each packed episode ``min_length`` steps long."""
        if where not in ("early", "late"):
            raise ValueError(f"where must be 'early' or 'late', got {where!r}")
        if num_episodes < 1:
            raise ValueError(f"num_episodes must be >= 1, got {num_episodes}")
        if min_length < 1:
            raise ValueError(f"min_length must be >= 1, got {min_length}")
        packed_span = (num_episodes - 1) * min_length
        if packed_span + 1 > horizon:
            raise ValueError(f"cannot pack {num_episodes} episodes of {min_length} steps into horizon {horizon}")
        if where == "early":
            times = tuple(1 + i * min_length for i in range(num_episodes))
        else:
            times = (1,) + tuple(
                horizon - (num_episodes - k) * min_length + 1 for k in range(1, num_episodes)
            )
        served = tuple(objectives[i % len(objectives)] for i in range(num_episodes))
        return cls(horizon=horizon, change_times=times, objectives=served)


def objective_at(env: EnvironmentSchedule, step: int) -> ObjectiveSpec:
    """Module-level alias for :meth:`EnvironmentSchedule.objective_at`."""
    return env.objective_at(step)


def adversarial_corpus(
    horizon: int, num_episodes: int, objectives: list[ObjectiveSpec], min_length: int = 1
) -> list[EnvironmentSchedule]:
    """Finite corpus approximating the worst case over schedules: maximal
    objective jumps with change times evenly spaced, packed early, and
    packed late."""
    corpus = [EnvironmentSchedule.evenly_spaced(horizon, num_episodes, objectives)]
    if num_episodes > 1:
        corpus.append(EnvironmentSchedule.packed(horizon, num_episodes, objectives, "early", min_length))
        corpus.append(EnvironmentSchedule.packed(horizon, num_episodes, objectives, "late", min_length))
    return corpus
