"""Finite-difference stochastic-approximation bandit simulator.

A library and CLI for running derivative-free ascent rules (decaying-step,
fixed-step, and finite-memory windowed variants) against synthetic
piecewise-stationary objectives, measuring regret by Monte-Carlo
replication, and evaluating the matching theoretical bounds and tuning
formulas.
"""

from .algorithms import (
    AlgorithmState,
    FixedStepConfig,
    SlidingWindowConfig,
    initial_state,
    sliding_window_action,
    sliding_window_advance,
    step_fixed,
    step_vanilla,
    vanilla_perturbation,
    vanilla_step_size,
)
from .bounds import (
    BoundReport,
    expected_distance_bound,
    fixed_step_normalized_bound,
    fixed_step_regret_bound,
    sliding_window_episode_bound,
    sliding_window_normalized_bound,
    sliding_window_regret_bound,
)
from .conditions import ConditionReport, verify_conditions
from .config import ExperimentConfig, SweepSpec, parse_config, parse_sweep
from .diagnostics import RecursionCheckReport, calibrate_window_constant, distance_recursion_check
from .domain import Domain, project
from .exceptions import (
    ConfigValidationError,
    ContractionViolationError,
    DomainViolationError,
    KWBanditError,
    MeanValueConditionError,
)
from .gradient import GradientEstimate, estimate_gradient
from .montecarlo import MonteCarloEstimate, monte_carlo_regret, regret_samples
from .noise import NoiseModel, sample_reward
from .objectives import ClassConstants, ObjectiveSpec, QuadraticBowl, QuarticPerturbedBowl
from .rng import RandomStream, replication_stream, replication_streams
from .runner import run_experiment, run_sweep
from .scaling import fit_scaling_exponent
from .schedule import EnvironmentSchedule, adversarial_corpus, objective_at
from .trajectory import (
    FixedStepPolicy,
    OraclePolicy,
    RegretTrace,
    SlidingWindowPolicy,
    StaticPolicy,
    VanillaPolicy,
    run_trajectory,
    simulate_batch,
)
from .tuning import (
    contraction_factor,
    coupled_perturbation,
    error_floor,
    optimal_step_size,
    optimal_window,
)

__version__ = "0.1.0"

__all__ = [
    "AlgorithmState",
    "BoundReport",
    "ClassConstants",
    "ConditionReport",
    "ConfigValidationError",
    "ContractionViolationError",
    "Domain",
    "DomainViolationError",
    "EnvironmentSchedule",
    "ExperimentConfig",
    "FixedStepConfig",
    "FixedStepPolicy",
    "GradientEstimate",
    "KWBanditError",
    "MeanValueConditionError",
    "MonteCarloEstimate",
    "NoiseModel",
    "ObjectiveSpec",
    "OraclePolicy",
    "QuadraticBowl",
    "QuarticPerturbedBowl",
    "RandomStream",
    "RecursionCheckReport",
    "RegretTrace",
    "SlidingWindowConfig",
    "SlidingWindowPolicy",
    "StaticPolicy",
    "SweepSpec",
    "VanillaPolicy",
    "adversarial_corpus",
    "calibrate_window_constant",
    "contraction_factor",
    "coupled_perturbation",
    "distance_recursion_check",
    "error_floor",
    "estimate_gradient",
    "expected_distance_bound",
    "fit_scaling_exponent",
    "fixed_step_normalized_bound",
    "fixed_step_regret_bound",
    "initial_state",
    "monte_carlo_regret",
    "objective_at",
    "optimal_step_size",
    "optimal_window",
    "parse_config",
    "parse_sweep",
    "project",
    "regret_samples",
    "replication_stream",
    "replication_streams",
    "run_experiment",
    "run_sweep",
    "run_trajectory",
    "sample_reward",
    "simulate_batch",
    "sliding_window_action",
    "sliding_window_advance",
    "sliding_window_episode_bound",
    "sliding_window_normalized_bound",
    "sliding_window_regret_bound",
    "step_fixed",
    "step_vanilla",
    "vanilla_perturbation",
    "vanilla_step_size",
    "verify_conditions",
]
