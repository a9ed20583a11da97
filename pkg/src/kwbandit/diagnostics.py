"""Monte-Carlo diagnostics: the one-step distance recursion check and the
calibration of the windowed rule's steady-distance constant."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algorithms import FixedStepConfig, SlidingWindowConfig
from .montecarlo import regret_samples
from .noise import NoiseModel
from .objectives import ObjectiveSpec
from .schedule import EnvironmentSchedule
from .trajectory import FixedStepPolicy, SlidingWindowPolicy
from .tuning import error_floor


@dataclass(frozen=True)
class RecursionCheckReport:
    """Empirical one-step inequality for the fixed-step rule.

    Checks, at probe step s, whether

        est E||X_{s+1} - theta||^2 <= gamma * est E||X_s - theta||^2
                                      + H(beta) + 3 * SE

    where SE is the standard error of the paired per-replication statistic
    ||X_{s+1}-theta||^2 - gamma*||X_s-theta||^2 (replications are paired,
    so the combined error is measured on the difference directly).
    """

    probe_step: int
    replications: int
    estimate_s: float
    estimate_s_next: float
    gamma: float
    floor: float
    paired_mean: float
    paired_stderr: float
    holds: bool

    @property
    def slack(self) -> float:
        """How far below the allowance the paired mean sits (>= 0 iff holds)."""
        return self.floor + 3.0 * self.paired_stderr - self.paired_mean


def distance_recursion_check(
    config: FixedStepConfig,
    objective: ObjectiveSpec,
    noise: NoiseModel,
    x0,
    probe_step: int,
    replications: int,
    base_seed: int,
    seed_path: tuple[int, ...] = (),
) -> RecursionCheckReport:
    """Estimate both sides of the one-step squared-distance recursion on a
    stationary objective by independent replications."""
    if probe_step < 1:
        raise ValueError(f"probe_step must be >= 1, got {probe_step}")
    if replications < 2:
        raise ValueError(f"replications must be >= 2, got {replications}")
    env = EnvironmentSchedule.stationary(horizon=probe_step, objective=objective)
    policy = FixedStepPolicy(config=config, x0=tuple(np.atleast_1d(np.asarray(x0, dtype=float))))
    _, probes, _ = regret_samples(
        policy,
        env,
        noise,
        replications,
        base_seed,
        seed_path=seed_path,
        probe_steps=(probe_step, probe_step + 1),
    )
    dist_s = probes[probe_step]
    dist_next = probes[probe_step + 1]
    gamma = config.gamma
    epsilon = objective.mean_value_offset(config.c)
    floor = error_floor(
        config.beta,
        config.c,
        noise.sigma_tilde2(objective.domain.dimension),
        objective.domain.diameter,
        objective.constants.k4,
        objective.constants.k2,
        epsilon,
    )
    paired = dist_next - gamma * dist_s
    paired_mean = float(np.mean(paired))
    paired_stderr = float(np.std(paired, ddof=1) / np.sqrt(replications))
    return RecursionCheckReport(
        probe_step=probe_step,
        replications=replications,
        estimate_s=float(np.mean(dist_s)),
        estimate_s_next=float(np.mean(dist_next)),
        gamma=gamma,
        floor=floor,
        paired_mean=paired_mean,
        paired_stderr=paired_stderr,
        holds=paired_mean <= floor + 3.0 * paired_stderr,
    )


def calibrate_window_constant(
    objective: ObjectiveSpec,
    noise: NoiseModel,
    x0,
    windows: tuple[int, ...],
    replications: int,
    base_seed: int,
    c: float | None = None,
    epochs: int = 3,
) -> float:
    """Fit the steady-distance constant of the windowed rule.

    For each window length L, runs the stationary rule past its first
    window and measures the average squared distance over a full later
    window of steps; the constant is the largest sqrt(L) * average over
    the probe grid.  Freeze the result before using it in bounds or
    window tuning.

    ``c`` applies to every window length (keeping the constant comparable
    across the grid); it defaults to the objective-independent value 0.5.
    """
    if not windows:
        raise ValueError("need at least one window length to calibrate")
    if replications < 2:
        raise ValueError(f"replications must be >= 2, got {replications}")
    if epochs < 2:
        raise ValueError(f"epochs must be >= 2 (the first window is warm-up), got {epochs}")
    c_used = 0.5 if c is None else float(c)
    x0 = tuple(np.atleast_1d(np.asarray(x0, dtype=float)))
    best = 0.0
    for index, window in enumerate(sorted(set(int(w) for w in windows))):
        if window < 1:
            raise ValueError(f"window lengths must be >= 1, got {window}")
        horizon = window * epochs
        env = EnvironmentSchedule.stationary(horizon=horizon, objective=objective)
        policy = SlidingWindowPolicy(config=SlidingWindowConfig(window=window, x0=x0, c=c_used))
        probe_steps = tuple(range(window + 1, horizon + 1))
        _, probes, _ = regret_samples(
            policy,
            env,
            noise,
            replications,
            base_seed,
            seed_path=(index,),
            probe_steps=probe_steps,
        )
        average = float(np.mean([np.mean(probes[s]) for s in probe_steps]))
        best = max(best, float(np.sqrt(window)) * average)
    return best
