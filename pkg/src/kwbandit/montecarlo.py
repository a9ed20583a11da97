"""Monte-Carlo estimation of expected total regret over replications."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .noise import NoiseModel
from .rng import replication_stream
from .schedule import EnvironmentSchedule
from .trajectory import Policy, RegretTrace, simulate_batch

# Replications are grouped in fixed-size chunks regardless of thread count,
# so parallel execution cannot change which streams run together.
REPLICATION_CHUNK = 64


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Sample mean and standard error of the total regret."""

    mean: float
    standard_error: float
    replications: int
    base_seed: int

    def upper_confidence(self, z: float = 3.0) -> float:
        return self.mean + z * self.standard_error

    def lower_confidence(self, z: float = 3.0) -> float:
        return self.mean - z * self.standard_error


def regret_samples(
    policy: Policy,
    env: EnvironmentSchedule,
    noise: NoiseModel,
    replications: int,
    base_seed: int,
    seed_path: tuple[int, ...] = (),
    threads: int = 1,
    probe_steps: tuple[int, ...] = (),
    record_first_trace: bool = False,
) -> tuple[np.ndarray, dict[int, np.ndarray], RegretTrace | None]:
    """Total regret of every replication, ordered by replication index.

    Replication ``r`` draws from the stream keyed by
    ``(base_seed, *seed_path, r)``; results are a pure function of that
    key, so the chunking below is a throughput detail only.
    """
    if replications < 1:
        raise ValueError(f"replications must be >= 1, got {replications}")

    chunks = [
        range(start, min(start + REPLICATION_CHUNK, replications))
        for start in range(0, replications, REPLICATION_CHUNK)
    ]

    def run_chunk(chunk: range):
        rngs = [replication_stream(base_seed, *seed_path, r) for r in chunk]
        return simulate_batch(
            policy,
            env,
            noise,
            rngs,
            record_trace=record_first_trace and chunk.start == 0,
            probe_steps=probe_steps,
        )

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_chunk, chunks))
    else:
        results = [run_chunk(chunk) for chunk in chunks]

    totals = np.concatenate([res.total_regret for res in results])
    probes: dict[int, np.ndarray] = {}
    for s in probe_steps:
        probes[int(s)] = np.concatenate([res.distance_probes[int(s)] for res in results])
    trace = results[0].trace if record_first_trace else None
    return totals, probes, trace


def monte_carlo_regret(
    policy: Policy,
    env: EnvironmentSchedule,
    noise: NoiseModel,
    replications: int,
    base_seed: int,
    seed_path: tuple[int, ...] = (),
    threads: int = 1,
) -> MonteCarloEstimate:
    """Mean and standard error of total regret over independent replications."""
    if replications < 2:
        raise ValueError(f"monte_carlo_regret needs replications >= 2, got {replications}")
    totals, _, _ = regret_samples(
        policy, env, noise, replications, base_seed, seed_path=seed_path, threads=threads
    )
    mean = float(np.mean(totals))
    stderr = float(np.std(totals, ddof=1) / np.sqrt(replications))
    return MonteCarloEstimate(mean=mean, standard_error=stderr, replications=replications, base_seed=base_seed)
