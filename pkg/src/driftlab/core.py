"""Seeded simulation of stochastic processes over a drift window.

A trial starts at a potential at or above the window's start threshold b and
runs until the potential first drops to the target threshold a or the step
budget is exhausted. Trials are pure functions of (process, window, seed), so
they can be distributed across workers without affecting results.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .rng import MASK64, generator, trial_seed
from .stats import wilson_interval


@dataclass(frozen=True)
class DriftWindow:
    """Potential interval [a, b]: a is the target threshold, b the start threshold."""

    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"drift window requires a < b, got a={self.a}, b={self.b}")

    @property
    def ell(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class SimulationBudget:
    """Trial count, per-trial step cap, and the master seed all trials derive from."""

    trials: int
    max_steps: int
    master_seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be positive, got {self.max_steps}")
        if not 0 <= self.master_seed <= MASK64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class Trajectory:
    """One simulated run.

    `potentials` holds the full path only when recording was requested; lean
    runs keep just the start value, which bounds memory for very long horizons.
    """

    potentials: tuple[float, ...]
    hit_time: Optional[int]
    truncated: bool

    def __post_init__(self):
        if not self.potentials:
            raise ValueError("trajectory must contain at least the start potential")
        if (self.hit_time is None) != self.truncated:
            raise ValueError("exactly one of hit_time / truncated must be set")
        if self.hit_time is not None and self.hit_time < 1:
            raise ValueError("hit_time must be a positive step index")

    @property
    def start_potential(self) -> float:
        return self.potentials[0]


@dataclass(frozen=True)
class TrialOutcome:
    """Lean per-trial record used for aggregation and CSV rows."""

    index: int
    start_potential: float
    hit_time: Optional[int]
    truncated: bool


@dataclass(frozen=True)
class HittingEstimate:
    """Fraction of trials that hit the target within the horizon, with 95% Wilson CI."""

    hits: int
    trials: int
    point: float
    ci_low: float
    ci_high: float

    def __post_init__(self):
        if not 0.0 <= self.ci_low <= self.point <= self.ci_high <= 1.0:
            raise ValueError("estimate must satisfy 0 <= ci_low <= point <= ci_high <= 1")


def run_trial(process, window: DriftWindow, max_steps: int, seed: int, record: bool = False) -> Trajectory:
    """Simulate one trial until the potential first reaches <= window.a.

    Rejects max_steps < 1 and processes whose initial potential lies below the
    start threshold b (a misconfigured experiment, not a hit).
    """
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    rng = generator(seed)
    state = process.initial_state(rng)
    x = process.potential(state)
    if x < window.b:
        raise ValueError(
            f"initial potential {x} is below the start threshold b={window.b}; "
            "the window does not match the process configuration"
        )
    x0 = x
    path = [x0]
    hit_time = None
    for t in range(1, max_steps + 1):
        state = process.step(state, rng)
        x = process.potential(state)
        if record:
            path.append(x)
        if x <= window.a:
            hit_time = t
            break
    potentials = tuple(path) if record else (x0,)
    return Trajectory(potentials, hit_time, hit_time is None)


def _run_outcome(process, window: DriftWindow, max_steps: int, master_seed: int, index: int) -> TrialOutcome:
    rng = generator(trial_seed(master_seed, index))
    state = process.initial_state(rng)
    x0 = process.potential(state)
    if x0 < window.b:
        raise ValueError(
            f"initial potential {x0} is below the start threshold b={window.b}"
        )
    hit_time = None
    for t in range(1, max_steps + 1):
        state = process.step(state, rng)
        if process.potential(state) <= window.a:
            hit_time = t
            break
    return TrialOutcome(index, x0, hit_time, hit_time is None)


def _run_chunk(args) -> list[TrialOutcome]:
    process, window, max_steps, master_seed, lo, hi = args
    return [_run_outcome(process, window, max_steps, master_seed, i) for i in range(lo, hi)]


def run_trials(
    process,
    window: DriftWindow,
    trials: int,
    max_steps: int,
    master_seed: int,
    workers: int = 1,
) -> list[TrialOutcome]:
    """Run independent trials with per-index seeds; output is ordered by index.

    The worker count never changes the outcomes: trial i always uses
    trial_seed(master_seed, i).
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    workers = max(1, int(workers))
    # Parallel dispatch only pays off for substantial work; small jobs stay serial.
    if workers == 1 or trials < 4 * workers or trials * max_steps < 2_000_000:
        return _run_chunk((process, window, max_steps, master_seed, 0, trials))
    n_chunks = min(trials, 4 * workers)
    bounds = [round(k * trials / n_chunks) for k in range(n_chunks + 1)]
    tasks = [
        (process, window, max_steps, master_seed, lo, hi)
        for lo, hi in zip(bounds[:-1], bounds[1:])
        if hi > lo
    ]
    outcomes: list[TrialOutcome] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for chunk in pool.map(_run_chunk, tasks):
            outcomes.extend(chunk)
    outcomes.sort(key=lambda o: o.index)
    return outcomes


def estimate_hitting_probability(
    process,
    window: DriftWindow,
    budget: SimulationBudget,
    horizon: int,
    workers: int = 1,
) -> HittingEstimate:
    """Estimate P(hit the target within `horizon` steps) over budget.trials trials.

    Each trial is simulated for exactly `horizon` steps (hitting later than the
    horizon cannot be observed and does not count), so horizon must not exceed
    budget.max_steps.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if horizon > budget.max_steps:
        raise ValueError(f"horizon {horizon} exceeds budget.max_steps {budget.max_steps}")
    outcomes = run_trials(process, window, budget.trials, horizon, budget.master_seed, workers)
    hits = sum(1 for o in outcomes if o.hit_time is not None)
    lo, hi = wilson_interval(hits, budget.trials)
    return HittingEstimate(hits, budget.trials, hits / budget.trials, lo, hi)


def default_workers() -> int:
    return os.cpu_count() or 1
