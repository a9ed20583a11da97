import numpy as np
import pytest

from kwbandit import (
    EnvironmentSchedule,
    FixedStepConfig,
    FixedStepPolicy,
    NoiseModel,
    OraclePolicy,
    QuadraticBowl,
    SlidingWindowConfig,
    SlidingWindowPolicy,
    StaticPolicy,
    VanillaPolicy,
    estimate_gradient,
    initial_state,
    replication_stream,
    replication_streams,
    run_trajectory,
    simulate_batch,
    sliding_window_advance,
    step_fixed,
    step_vanilla,
    vanilla_perturbation,
)
from kwbandit.algorithms import EVICT_OLDEST, FIXED_STEP, RESTART, SLIDING_WINDOW, VANILLA


@pytest.fixture
def fixed_policy(bowl):
    return FixedStepPolicy(config=FixedStepConfig(beta=0.1, c=0.1, constants=bowl.constants), x0=(1.0,))


@pytest.fixture
def two_bowls(box1d):
    return (
        QuadraticBowl(domain=box1d, theta=(-0.5,), b=1.0),
        QuadraticBowl(domain=box1d, theta=(0.5,), b=1.0),
    )


class TestNoiselessTrace:
    def test_exact_geometric_recursion(self, bowl, fixed_policy, no_noise):
        env = EnvironmentSchedule.stationary(10, bowl)
        trace = run_trajectory(fixed_policy, env, no_noise, replication_stream(0, 0))
        assert trace.actions[0, 0] == 1.0
        assert trace.inst_regret[0] == pytest.approx(1.0, abs=1e-15)
        assert trace.actions[1, 0] == pytest.approx(0.8, abs=1e-13)
        assert trace.inst_regret[1] == pytest.approx(0.64, abs=1e-13)
        for s in range(10):
            assert trace.actions[s, 0] == pytest.approx(0.8**s, abs=1e-12)

    def test_start_at_maximizer_zero_regret(self, bowl, no_noise):
        policy = FixedStepPolicy(config=FixedStepConfig(beta=0.1, c=0.1, constants=bowl.constants), x0=(0.0,))
        env = EnvironmentSchedule.stationary(20, bowl)
        trace = run_trajectory(policy, env, no_noise, replication_stream(0, 0))
        assert np.all(trace.inst_regret == 0.0)
        assert trace.total_regret == 0.0

    def test_bookkeeping_identities(self, bowl, fixed_policy, no_noise):
        env = EnvironmentSchedule.stationary(25, bowl)
        trace = run_trajectory(fixed_policy, env, no_noise, replication_stream(0, 0))
        assert trace.horizon == 25
        assert trace.cum_regret[-1] == pytest.approx(np.sum(trace.inst_regret), rel=1e-14)
        assert np.all(np.diff(trace.cum_regret) >= 0)
        assert np.all(trace.inst_regret >= 0)


def test_oracle_has_zero_regret(two_bowls, box1d):
    env = EnvironmentSchedule(horizon=50, change_times=(1, 20), objectives=two_bowls)
    trace = run_trajectory(OraclePolicy(), env, NoiseModel.gaussian(1.0), replication_stream(0, 0))
    assert np.all(trace.inst_regret == 0.0)
    assert np.array_equal(trace.actions[:19, 0], np.full(19, -0.5))
    assert np.array_equal(trace.actions[19:, 0], np.full(31, 0.5))


def test_static_policy_constant_action(bowl, no_noise):
    env = EnvironmentSchedule.stationary(10, bowl)
    trace = run_trajectory(StaticPolicy(x0=(1.0,)), env, no_noise, replication_stream(0, 0))
    assert np.all(trace.actions == 1.0)
    assert trace.total_regret == pytest.approx(10.0, abs=1e-12)


def test_iterates_stay_inside_domain(two_bowls, box1d):
    env = EnvironmentSchedule(horizon=200, change_times=(1, 101), objectives=two_bowls)
    noise = NoiseModel.gaussian(4.0)
    policy = FixedStepPolicy(
        config=FixedStepConfig(beta=0.2, c=0.05, constants=two_bowls[0].constants), x0=(1.9,)
    )
    trace = run_trajectory(policy, env, noise, replication_stream(3, 0))
    assert np.all(trace.actions >= -2.0) and np.all(trace.actions <= 2.0)
    assert trace.boundary_contact.any()  # big noise near the wall must clamp sometimes


def test_episode_column_matches_schedule(two_bowls):
    env = EnvironmentSchedule(horizon=10, change_times=(1, 4), objectives=two_bowls)
    trace = run_trajectory(StaticPolicy(x0=(0.0,)), env, NoiseModel.none(), replication_stream(0, 0))
    assert list(trace.episode) == [1, 1, 1, 2, 2, 2, 2, 2, 2, 2]
    totals = trace.episode_regret_totals()
    assert totals.shape == (2,)
    assert np.sum(totals) == pytest.approx(trace.total_regret, rel=1e-14)


def test_per_episode_totals_sum_to_cumulative(two_bowls):
    env = EnvironmentSchedule(horizon=137, change_times=(1, 31, 90), objectives=two_bowls + (two_bowls[0],))
    policy = FixedStepPolicy(config=FixedStepConfig(beta=0.1, c=0.2, constants=two_bowls[0].constants), x0=(0.9,))
    trace = run_trajectory(policy, env, NoiseModel.gaussian(1.0), replication_stream(5, 0))
    assert np.sum(trace.episode_regret_totals()) == pytest.approx(trace.total_regret, rel=1e-12)


class TestEngineMatchesReferenceOps:
    """The batched engine must reproduce the step-by-step reference ops
    bit for bit, including the stream consumption order."""

    def test_fixed_step(self, bowl, box1d):
        noise = NoiseModel.gaussian(1.0)
        cfg = FixedStepConfig(beta=0.1, c=0.2, constants=bowl.constants)
        env = EnvironmentSchedule.stationary(40, bowl)
        trace = run_trajectory(FixedStepPolicy(config=cfg, x0=(1.0,)), env, noise, replication_stream(11, 0))

        rng = replication_stream(11, 0)
        state = initial_state(FIXED_STEP, box1d, (1.0,))
        for s in range(1, 41):
            assert np.array_equal(trace.actions[s - 1], state.x_array)
            e = estimate_gradient(bowl, noise, state.x_array, cfg.c, rng)
            assert trace.boundary_contact[s - 1] == e.boundary_contact
            state = step_fixed(state, e, cfg)
        assert np.array_equal(trace.final_x, state.x_array)

    def test_vanilla(self, bowl, box1d):
        noise = NoiseModel.uniform_bounded(0.5)
        env = EnvironmentSchedule.stationary(30, bowl)
        trace = run_trajectory(VanillaPolicy(x0=(1.5,)), env, noise, replication_stream(13, 0))

        rng = replication_stream(13, 0)
        state = initial_state(VANILLA, box1d, (1.5,))
        for s in range(1, 31):
            assert np.array_equal(trace.actions[s - 1], state.x_array)
            e = estimate_gradient(bowl, noise, state.x_array, vanilla_perturbation(s), rng)
            state = step_vanilla(state, e)
        assert np.array_equal(trace.final_x, state.x_array)

    @pytest.mark.parametrize("refresh", [RESTART, EVICT_OLDEST])
    def test_sliding_window(self, bowl, box1d, refresh):
        noise = NoiseModel.gaussian(0.5)
        cfg = SlidingWindowConfig(window=4, x0=(1.0,), c=0.3, refresh=refresh)
        env = EnvironmentSchedule.stationary(25, bowl)
        trace = run_trajectory(SlidingWindowPolicy(config=cfg), env, noise, replication_stream(17, 0))

        rng = replication_stream(17, 0)
        state = initial_state(SLIDING_WINDOW, box1d, (1.0,))
        for s in range(1, 26):
            assert np.array_equal(trace.actions[s - 1], state.x_array)
            e = estimate_gradient(bowl, noise, state.x_array, cfg.c, rng)
            state = sliding_window_advance(state, e, cfg)
        assert np.array_equal(trace.final_x, state.x_array)

    def test_2d_fixed_step(self, box2d):
        f = QuadraticBowl(domain=box2d, theta=(0.5, -0.3), b=0.8)
        noise = NoiseModel.gaussian(1.0)
        cfg = FixedStepConfig(beta=0.15, c=0.25, constants=f.constants)
        env = EnvironmentSchedule.stationary(20, f)
        trace = run_trajectory(FixedStepPolicy(config=cfg, x0=(1.0, 1.0)), env, noise, replication_stream(19, 0))

        rng = replication_stream(19, 0)
        state = initial_state(FIXED_STEP, box2d, (1.0, 1.0))
        for s in range(1, 21):
            assert np.array_equal(trace.actions[s - 1], state.x_array)
            e = estimate_gradient(f, noise, state.x_array, cfg.c, rng)
            state = step_fixed(state, e, cfg)
        assert np.array_equal(trace.final_x, state.x_array)

    def test_2d_sliding_window(self, box2d):
        f = QuadraticBowl(domain=box2d, theta=(0.5, -0.3), b=0.8)
        noise = NoiseModel.gaussian(0.25)
        cfg = SlidingWindowConfig(window=3, x0=(1.0, -1.0), c=0.4)
        env = EnvironmentSchedule.stationary(17, f)
        trace = run_trajectory(SlidingWindowPolicy(config=cfg), env, noise, replication_stream(23, 0))

        rng = replication_stream(23, 0)
        state = initial_state(SLIDING_WINDOW, box2d, (1.0, -1.0))
        for s in range(1, 18):
            assert np.array_equal(trace.actions[s - 1], state.x_array)
            e = estimate_gradient(f, noise, state.x_array, cfg.c, rng)
            state = sliding_window_advance(state, e, cfg)
        assert np.array_equal(trace.final_x, state.x_array)


class TestBatchSemantics:
    def test_batch_replications_match_individual_runs(self, bowl, fixed_policy):
        noise = NoiseModel.gaussian(1.0)
        env = EnvironmentSchedule.stationary(30, bowl)
        batch = simulate_batch(fixed_policy, env, noise, replication_streams(7, 5))
        for r in range(5):
            solo = run_trajectory(fixed_policy, env, noise, replication_stream(7, r))
            assert solo.total_regret == batch.total_regret[r]

    def test_block_size_does_not_change_results(self, bowl, fixed_policy, monkeypatch):
        noise = NoiseModel.gaussian(1.0)
        env = EnvironmentSchedule.stationary(50, bowl)
        full = simulate_batch(fixed_policy, env, noise, replication_streams(7, 3)).total_regret
        import kwbandit.trajectory as traj

        monkeypatch.setattr(traj, "_NOISE_BLOCK_VALUES", 10)
        tiny = simulate_batch(fixed_policy, env, noise, replication_streams(7, 3)).total_regret
        assert np.array_equal(full, tiny)

    def test_distance_probes(self, bowl, fixed_policy, no_noise):
        env = EnvironmentSchedule.stationary(5, bowl)
        result = simulate_batch(fixed_policy, env, no_noise, replication_streams(0, 2), probe_steps=(1, 3, 6))
        # X_1 = 1, X_3 = 0.64, X_6 = 0.8^5 (probe horizon+1 hits the final iterate)
        assert result.distance_probes[1] == pytest.approx([1.0, 1.0], abs=0.0)
        assert result.distance_probes[3] == pytest.approx([0.64**2] * 2, abs=1e-12)
        assert result.distance_probes[6] == pytest.approx([(0.8**5) ** 2] * 2, abs=1e-12)

    def test_probe_out_of_range_rejected(self, bowl, fixed_policy, no_noise):
        env = EnvironmentSchedule.stationary(5, bowl)
        with pytest.raises(ValueError, match="probe steps"):
            simulate_batch(fixed_policy, env, no_noise, replication_streams(0, 1), probe_steps=(7,))
