import math

import pytest
from helpers import hit_probability_within

import driftlab as dl


def test_window_invariants():
    win = dl.DriftWindow(0.0, 10.0)
    assert win.ell == 10.0
    with pytest.raises(ValueError):
        dl.DriftWindow(5.0, 5.0)
    with pytest.raises(ValueError):
        dl.DriftWindow(7.0, 2.0)


def test_budget_validation():
    with pytest.raises(ValueError):
        dl.SimulationBudget(0, 10, 1)
    with pytest.raises(ValueError):
        dl.SimulationBudget(10, 0, 1)
    with pytest.raises(ValueError):
        dl.SimulationBudget(10, 10, -1)


def test_trajectory_exactly_one_terminal_state():
    with pytest.raises(ValueError):
        dl.Trajectory((5.0,), hit_time=3, truncated=True)
    with pytest.raises(ValueError):
        dl.Trajectory((5.0,), hit_time=None, truncated=False)
    dl.Trajectory((5.0,), hit_time=None, truncated=True)
    dl.Trajectory((5.0, 0.0), hit_time=1, truncated=False)


def test_constant_zero_step_truncates():
    # a process that never moves exhausts the budget without hitting
    win = dl.DriftWindow(0.0, 5.0)
    traj = dl.run_trial(dl.constant_walk(0.0, 5.0), win, max_steps=50, seed=1)
    assert traj.truncated and traj.hit_time is None


def test_forced_descent_hits_at_window_length():
    win = dl.DriftWindow(0.0, 5.0)
    traj = dl.run_trial(dl.constant_walk(-1.0, 5.0), win, max_steps=100, seed=1, record=True)
    assert traj.hit_time == 5
    assert traj.potentials == (5.0, 4.0, 3.0, 2.0, 1.0, 0.0)


def test_run_trial_rejects_zero_budget_and_low_start():
    win = dl.DriftWindow(0.0, 5.0)
    with pytest.raises(ValueError):
        dl.run_trial(dl.constant_walk(-1.0, 5.0), win, max_steps=0, seed=1)
    with pytest.raises(ValueError):
        dl.run_trial(dl.constant_walk(-1.0, 3.0), win, max_steps=10, seed=1)


def test_counterexample_hits_in_exactly_n_steps_for_almost_every_seed():
    n = 10
    process = dl.counterexample_chain(n)
    win = dl.DriftWindow(0.0, float(n))
    hit_times = [
        dl.run_trial(process, win, max_steps=100, seed=seed).hit_time for seed in range(200)
    ]
    hits = [t for t in hit_times if t is not None]
    # hits can only happen via n consecutive unit steps
    assert set(hits) == {n}
    assert len(hits) >= 198


def test_stopping_correctness_no_early_crossing():
    process = dl.geometric_drift_walk(0.2, 1.0, start=6.0)
    win = dl.DriftWindow(0.0, 6.0)
    for seed in range(300):
        traj = dl.run_trial(process, win, max_steps=40, seed=seed, record=True)
        if traj.hit_time is not None:
            assert traj.potentials[traj.hit_time] <= win.a
            assert all(x > win.a for x in traj.potentials[: traj.hit_time])
        else:
            assert all(x > win.a for x in traj.potentials)


def test_lean_mode_keeps_only_start():
    process = dl.constant_walk(-1.0, 5.0)
    traj = dl.run_trial(process, dl.DriftWindow(0.0, 5.0), max_steps=10, seed=0)
    assert traj.potentials == (5.0,)
    assert traj.hit_time == 5


def test_estimator_deterministic_walks():
    win = dl.DriftWindow(0.0, 5.0)
    budget = dl.SimulationBudget(100, 1000, master_seed=11)
    est = dl.estimate_hitting_probability(dl.constant_walk(-1.0, 5.0), win, budget, horizon=5)
    assert est.point == 1.0 and est.hits == 100
    est = dl.estimate_hitting_probability(dl.constant_walk(1.0, 5.0), win, budget, horizon=1000)
    assert est.point == 0.0 and est.hits == 0


def test_estimator_counterexample_matches_closed_form():
    n = 15
    process = dl.counterexample_chain(n)
    win = dl.DriftWindow(0.0, float(n))
    budget = dl.SimulationBudget(2000, 100, master_seed=5)
    est = dl.estimate_hitting_probability(process, win, budget, horizon=n)
    oracle = (1.0 - math.exp(-n)) ** n
    assert est.point >= 0.999
    assert est.ci_low <= oracle <= est.ci_high or est.point == 1.0


def test_estimator_validation():
    win = dl.DriftWindow(0.0, 5.0)
    budget = dl.SimulationBudget(10, 100, master_seed=1)
    with pytest.raises(ValueError):
        dl.estimate_hitting_probability(dl.constant_walk(-1.0, 5.0), win, budget, horizon=0)
    with pytest.raises(ValueError):
        dl.estimate_hitting_probability(dl.constant_walk(-1.0, 5.0), win, budget, horizon=101)


def test_monotone_horizon_on_shared_seed_set():
    process = dl.geometric_drift_walk(0.2, 1.0, start=5.0)
    win = dl.DriftWindow(0.0, 5.0)
    points = []
    for horizon in (1, 2, 5, 10, 50):
        budget = dl.SimulationBudget(300, 50, master_seed=99)
        points.append(dl.estimate_hitting_probability(process, win, budget, horizon).point)
    assert points == sorted(points)


def test_empirical_hit_probability_matches_dp_oracle():
    eps, delta, ell, horizon = 0.2, 1.0, 6, 12
    exact = hit_probability_within(eps, delta, ell, horizon)
    process = dl.geometric_drift_walk(eps, delta, start=float(ell))
    win = dl.DriftWindow(0.0, float(ell))
    budget = dl.SimulationBudget(4000, 100, master_seed=20260809)
    est = dl.estimate_hitting_probability(process, win, budget, horizon=horizon)
    assert est.ci_low <= exact <= est.ci_high


def test_run_trials_deterministic_and_order_stable():
    process = dl.counterexample_chain(8)
    win = dl.DriftWindow(0.0, 8.0)
    a = dl.run_trials(process, win, 500, 20, master_seed=77)
    b = dl.run_trials(process, win, 500, 20, master_seed=77)
    assert a == b
    assert [o.index for o in a] == list(range(500))


def test_run_trials_worker_count_does_not_change_results():
    # enough work to actually engage the pool
    process = dl.geometric_drift_walk(0.2, 1.0, start=30.0)
    win = dl.DriftWindow(0.0, 30.0)
    serial = dl.run_trials(process, win, 180, 12_000, master_seed=13, workers=1)
    parallel = dl.run_trials(process, win, 180, 12_000, master_seed=13, workers=3)
    assert serial == parallel
