"""Experiment and sweep drivers: policy resolution (including auto
tuning), Monte-Carlo execution, and CSV emission.

Output bytes are a pure function of (config document, seed): floats are
written with repr (full round-trip precision), rows are emitted in a
fixed order, and the thread count only changes scheduling, never stream
assignment or aggregation order.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .algorithms import FIXED_STEP, SLIDING_WINDOW, VANILLA, FixedStepConfig, SlidingWindowConfig
from .bounds import BoundReport, fixed_step_regret_bound, sliding_window_regret_bound
from .config import AUTO, ORACLE, STATIC, ExperimentConfig, SweepSpec
from .exceptions import ConfigValidationError
from .montecarlo import regret_samples
from .scaling import fit_scaling_exponent
from .trajectory import (
    FixedStepPolicy,
    OraclePolicy,
    Policy,
    RegretTrace,
    SlidingWindowPolicy,
    StaticPolicy,
    VanillaPolicy,
)
from .tuning import coupled_perturbation, error_floor, optimal_step_size, optimal_window

TRACE_COLUMNS_FIXED = ["step", "episode", "inst_regret", "cum_regret", "boundary_contact"]
SUMMARY_COLUMNS = [
    "variant",
    "tuning",
    "horizon",
    "delta_T",
    "dimension",
    "replications",
    "base_seed",
    "beta",
    "c",
    "alpha",
    "window",
    "refresh",
    "epsilon",
    "gamma",
    "error_floor",
    "k5",
    "mean_regret",
    "stderr_regret",
    "bound_name",
    "bound_value",
]
SWEEP_COLUMNS = [
    "axis",
    "value",
    "scale",
    "horizon",
    "delta_T",
    "variant",
    "tuning",
    "beta",
    "c",
    "window",
    "replications",
    "base_seed",
    "mean_regret",
    "stderr_regret",
    "normalized_regret",
    "bound_name",
    "bound_value",
]
EXPONENT_COLUMNS = ["axis", "n_points", "slope", "r_squared"]


@dataclass(frozen=True)
class ResolvedExperiment:
    """A config turned into runnable pieces, with tuning values echoed."""

    config: ExperimentConfig
    policy: Policy
    echo: dict
    bound: BoundReport | None

    @property
    def env(self):
        return self.config.build_schedule()

    @property
    def noise(self):
        return self.config.build_noise()


def resolve_experiment(cfg: ExperimentConfig) -> ResolvedExperiment:
    """Build domain/schedule/noise/policy from a validated config; auto
    tuning computes the rate or window from the schedule's change rate and
    echoes the values used."""
    domain = cfg.build_domain()
    env = cfg.build_schedule()
    noise = cfg.build_noise()
    constants = env.combined_constants()
    alg = cfg.algorithm
    episodes = env.num_episodes
    echo: dict = {
        "variant": alg.variant,
        "tuning": alg.tuning if alg.variant in (FIXED_STEP, SLIDING_WINDOW) else "",
        "horizon": cfg.horizon,
        "delta_T": episodes,
        "dimension": domain.dimension,
        "beta": None,
        "c": None,
        "alpha": None,
        "window": None,
        "refresh": "",
        "epsilon": None,
        "gamma": None,
        "error_floor": None,
        "k5": None,
    }
    bound = None

    if alg.variant == ORACLE:
        policy: Policy = OraclePolicy()
    elif alg.variant == STATIC:
        policy = StaticPolicy(x0=alg.x0)
    elif alg.variant == VANILLA:
        policy = VanillaPolicy(x0=alg.x0)
    elif alg.variant == FIXED_STEP:
        if alg.tuning == AUTO:
            try:
                beta = optimal_step_size(
                    domain.diameter, noise.sigma_tilde2(domain.dimension), alg.alpha, cfg.horizon, episodes
                )
            except ValueError as exc:
                raise ConfigValidationError([f"algorithm: auto tuning failed: {exc}"]) from exc
            c = coupled_perturbation(beta, alg.alpha)
        else:
            beta, c = alg.beta, alg.c
        fs = FixedStepConfig(beta=beta, c=c, constants=constants, alpha=alg.alpha)
        policy = FixedStepPolicy(config=fs, x0=alg.x0)
        epsilon = env.max_mean_value_offset(c)
        sigma_tilde2 = noise.sigma_tilde2(domain.dimension)
        echo.update(
            beta=beta,
            c=c,
            alpha=alg.alpha,
            epsilon=epsilon,
            gamma=fs.gamma,
            error_floor=error_floor(beta, c, sigma_tilde2, domain.diameter, constants.k4, constants.k2, epsilon),
        )
        bound = fixed_step_regret_bound(
            constants, domain.diameter, sigma_tilde2, beta, c, epsilon, cfg.horizon, episodes
        )
    else:
        if alg.tuning == AUTO:
            window = optimal_window(constants.k5, domain.diameter, cfg.horizon, episodes)
        else:
            window = alg.window
        if window <= constants.s0:
            raise ConfigValidationError(
                [f"algorithm.window: window {window} must exceed the declared burn-in s0={constants.s0}"]
            )
        sw = SlidingWindowConfig(window=window, x0=alg.x0, c=alg.c, refresh=alg.refresh)
        policy = SlidingWindowPolicy(config=sw)
        echo.update(window=window, c=sw.c, refresh=alg.refresh, k5=constants.k5)
        bound = sliding_window_regret_bound(constants, domain.diameter, window, cfg.horizon, episodes)
    return ResolvedExperiment(config=cfg, policy=policy, echo=echo, bound=bound)


@dataclass(frozen=True)
class ExperimentResult:
    mean_regret: float
    stderr_regret: float
    bound: BoundReport | None
    trace: RegretTrace
    echo: dict
    trace_path: Path | None
    summary_path: Path | None


def _fmt(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def run_experiment(
    cfg: ExperimentConfig,
    out_dir: str | Path | None = None,
    seed: int | None = None,
    replications: int | None = None,
    threads: int = 1,
) -> ExperimentResult:
    """Execute a config: per-step trace CSV for replication 0 plus a
    one-row summary CSV with the Monte-Carlo estimate, the evaluated
    bound, and the tuning values used."""
    if seed is not None:
        cfg = replace(cfg, base_seed=int(seed))
    if replications is not None:
        cfg = replace(cfg, replications=int(replications))
    resolved = resolve_experiment(cfg)
    env = resolved.env
    noise = resolved.noise

    totals, _, trace = regret_samples(
        resolved.policy,
        env,
        noise,
        cfg.replications,
        cfg.base_seed,
        threads=threads,
        record_first_trace=True,
    )
    mean = float(np.mean(totals))
    stderr = 0.0 if cfg.replications < 2 else float(np.std(totals, ddof=1) / np.sqrt(cfg.replications))

    trace_path = summary_path = None
    if out_dir is not None:
        out = Path(out_dir)
        trace_path = out / "trace.csv"
        summary_path = out / "summary.csv"
        d = env.domain.dimension
        header = TRACE_COLUMNS_FIXED[:2] + [f"action_{i}" for i in range(d)] + TRACE_COLUMNS_FIXED[2:]
        rows = (
            [s + 1, int(trace.episode[s])]
            + [trace.actions[s, i] for i in range(d)]
            + [trace.inst_regret[s], trace.cum_regret[s], bool(trace.boundary_contact[s])]
            for s in range(env.horizon)
        )
        _write_csv(trace_path, header, rows)
        _write_csv(summary_path, SUMMARY_COLUMNS, [_summary_row(resolved, cfg, mean, stderr)])
    return ExperimentResult(
        mean_regret=mean,
        stderr_regret=stderr,
        bound=resolved.bound,
        trace=trace,
        echo=resolved.echo,
        trace_path=trace_path,
        summary_path=summary_path,
    )


def _summary_row(resolved: ResolvedExperiment, cfg: ExperimentConfig, mean: float, stderr: float) -> list:
    e = resolved.echo
    return [
        e["variant"],
        e["tuning"],
        e["horizon"],
        e["delta_T"],
        e["dimension"],
        cfg.replications,
        cfg.base_seed,
        e["beta"],
        e["c"],
        e["alpha"],
        e["window"],
        e["refresh"],
        e["epsilon"],
        e["gamma"],
        e["error_floor"],
        e["k5"],
        mean,
        stderr,
        resolved.bound.name if resolved.bound else "",
        resolved.bound.value if resolved.bound else None,
    ]


@dataclass(frozen=True)
class SweepPointResult:
    value: float
    scale: float
    mean_regret: float
    stderr_regret: float
    normalized_regret: float
    echo: dict
    bound: BoundReport | None


@dataclass(frozen=True)
class SweepResult:
    axis: str
    points: tuple[SweepPointResult, ...]
    slope: float
    r_squared: float
    summary_path: Path | None
    exponent_path: Path | None


def run_sweep(
    sweep: SweepSpec,
    out_dir: str | Path | None = None,
    seed: int | None = None,
    replications: int | None = None,
    threads: int = 1,
    value_source=None,
) -> SweepResult:
    """Run one experiment per sweep value and fit the power-law exponent of
    the normalized regret against the axis scale (the change rate
    episodes/horizon for the delta_T axis, the raw value otherwise).

    ``value_source`` is a testing hook: a callable
    ``(index, value, config) -> (mean, stderr)`` replacing simulation.
    """
    base = sweep.base
    if seed is not None:
        base = replace(base, base_seed=int(seed))
    if replications is not None:
        base = replace(base, replications=int(replications))

    def run_point(item):
        index, value = item
        cfg = replace(sweep, base=base).config_for(value)
        resolved = resolve_experiment(cfg)
        if value_source is not None:
            mean, stderr = value_source(index, value, cfg)
        else:
            totals, _, _ = regret_samples(
                resolved.policy,
                resolved.env,
                resolved.noise,
                cfg.replications,
                cfg.base_seed,
                seed_path=(index,),
            )
            mean = float(np.mean(totals))
            stderr = 0.0 if cfg.replications < 2 else float(np.std(totals, ddof=1) / np.sqrt(cfg.replications))
        scale = resolved.echo["delta_T"] / cfg.horizon if sweep.axis == "delta_T" else float(value)
        return SweepPointResult(
            value=float(value),
            scale=scale,
            mean_regret=mean,
            stderr_regret=stderr,
            normalized_regret=mean / cfg.horizon,
            echo=resolved.echo,
            bound=resolved.bound,
        )

    items = list(enumerate(sweep.values))
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            points = tuple(pool.map(run_point, items))
    else:
        points = tuple(run_point(item) for item in items)

    slope, r2 = fit_scaling_exponent([(p.scale, p.normalized_regret) for p in points])

    summary_path = exponent_path = None
    if out_dir is not None:
        out = Path(out_dir)
        summary_path = out / "sweep_summary.csv"
        exponent_path = out / "exponent_fit.csv"
        rows = [
            [
                sweep.axis,
                p.value,
                p.scale,
                p.echo["horizon"],
                p.echo["delta_T"],
                p.echo["variant"],
                p.echo["tuning"],
                p.echo["beta"],
                p.echo["c"],
                p.echo["window"],
                base.replications,
                base.base_seed,
                p.mean_regret,
                p.stderr_regret,
                p.normalized_regret,
                p.bound.name if p.bound else "",
                p.bound.value if p.bound else None,
            ]
            for p in points
        ]
        _write_csv(summary_path, SWEEP_COLUMNS, rows)
        _write_csv(exponent_path, EXPONENT_COLUMNS, [[sweep.axis, len(points), slope, r2]])
    return SweepResult(
        axis=sweep.axis,
        points=points,
        slope=slope,
        r_squared=r2,
        summary_path=summary_path,
        exponent_path=exponent_path,
    )
