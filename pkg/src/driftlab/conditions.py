"""Checks of the drift condition and the exponential jump-tail condition.

Two tail variants are implemented: the two-sided form bounds P(|step| >= j)
and the one-sided form bounds only P(step <= -j), the jumps toward the target.
The one-sided form is strictly weaker; the counterexample chain passes it while
failing the two-sided form, which is exactly the difference the laboratory
exists to exhibit.

Conditioning domains differ by condition: drift samples come from steps taken
at potentials strictly inside the window (a < X < b), tail samples from every
step taken above the target threshold (a < X).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .jumps import NORMALIZATION_TOL, JumpDistribution
from .rng import trial_generator
from .stats import mean_t_interval, wilson_interval

TWO_SIDED = "two_sided"
ONE_SIDED = "one_sided"
VARIANTS = (TWO_SIDED, ONE_SIDED)

MIN_SAMPLES = 100

# Exact tables hold floats, and designed witness processes sit exactly on the
# bound (tail == r/(1+delta)^j), so exact-mode comparisons allow relative
# rounding dust; anything beyond this is a genuine violation.
FLOAT_SLACK = 1e-9


@dataclass(frozen=True)
class ConditionParams:
    """Parameters (ε, δ, r) of the drift and tail conditions.

    j_max is the largest tail index checked on the regular grid; exact tables
    additionally get checked at every support magnitude beyond it. Bound
    comparisons run in log space, so indices past the underflow point of
    r/(1+δ)^j still resolve correctly.
    """

    eps: float
    delta: float
    r: float
    j_max: int = 64

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.r < 1.0:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if self.j_max < 1:
            raise ValueError(f"j_max must be >= 1, got {self.j_max}")

    def log_bound(self, j: float) -> float:
        """log of r / (1+delta)^j."""
        return math.log(self.r) - j * math.log1p(self.delta)

    def bound(self, j: float) -> float:
        """r / (1+delta)^j; underflows to 0.0 for very large j."""
        try:
            return math.exp(self.log_bound(j))
        except OverflowError:
            return math.inf


@dataclass(frozen=True)
class TailCheck:
    """Verdict for one tail index j."""

    j: float
    tail: float
    bound: float
    verdict: str
    count: Optional[int] = None
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None


@dataclass(frozen=True)
class ConditionReport:
    variant: str
    mode: str  # "exact" or "empirical"
    params: ConditionParams
    drift: float
    drift_verdict: str
    tails: tuple[TailCheck, ...]
    drift_ci: Optional[tuple[float, float]] = None
    n_drift_samples: Optional[int] = None
    n_tail_samples: Optional[int] = None

    def tail_failures(self) -> list[TailCheck]:
        return [t for t in self.tails if t.verdict == "fail"]

    def overall(self) -> str:
        if self.drift_verdict == "fail" or self.tail_failures():
            return "fail"
        if self.drift_verdict == "pass":
            return "pass"
        return "inconclusive"

    def passed(self) -> bool:
        return self.overall() == "pass"


def _require_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def check_conditions_exact(
    jump: JumpDistribution, params: ConditionParams, variant: str = TWO_SIDED
) -> ConditionReport:
    """Check both conditions exactly from a normalized jump table.

    Drift is the exact expectation; tails are exact suffix sums compared
    strictly against r/(1+delta)^j in log space. Checked indices are the grid
    0..j_max plus every support magnitude beyond it, so isolated huge jumps are
    never missed.
    """
    _require_variant(variant)
    total = float(np.sum(jump.probs))
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"jump table is not normalized: total probability {total!r}")
    drift = jump.drift()
    drift_ok = drift >= params.eps or math.isclose(drift, params.eps, rel_tol=FLOAT_SLACK)
    drift_verdict = "pass" if drift_ok else "fail"
    indices = sorted(
        set(range(params.j_max + 1))
        | {float(m) for m in jump.support_magnitudes() if m > params.j_max}
    )
    tails = []
    for j in indices:
        tail = jump.tail_abs(j) if variant == TWO_SIDED else jump.tail_down(j)
        ok = tail <= 0.0 or math.log(tail) <= params.log_bound(j) + FLOAT_SLACK
        tails.append(TailCheck(float(j), tail, params.bound(j), "pass" if ok else "fail"))
    return ConditionReport(
        variant=variant,
        mode="exact",
        params=params,
        drift=drift,
        drift_verdict=drift_verdict,
        tails=tuple(tails),
    )


def check_conditions_empirical(
    drift_samples,
    tail_samples,
    params: ConditionParams,
    variant: str = TWO_SIDED,
) -> ConditionReport:
    """Check both conditions statistically from harvested step samples.

    The drift verdict uses a 95% t-interval around the sample mean; each tail
    verdict uses the Wilson interval of the exceedance frequency. A verdict is
    only "pass" or "fail" when the whole interval lies on one side of the
    bound. Indices with zero observed exceedances are always "inconclusive":
    the absence of observed large jumps cannot certify an exponential tail.
    """
    _require_variant(variant)
    drift_arr = np.asarray(drift_samples, dtype=float)
    tail_arr = np.asarray(tail_samples, dtype=float)
    if drift_arr.size < MIN_SAMPLES or tail_arr.size < MIN_SAMPLES:
        raise ValueError(
            f"need at least {MIN_SAMPLES} drift and tail samples, "
            f"got {drift_arr.size} and {tail_arr.size}"
        )
    mean, lo, hi = mean_t_interval(drift_arr)
    if lo >= params.eps:
        drift_verdict = "pass"
    elif hi < params.eps:
        drift_verdict = "fail"
    else:
        drift_verdict = "inconclusive"

    magnitudes = np.abs(tail_arr) if variant == TWO_SIDED else -tail_arr
    n = magnitudes.size
    indices = sorted(
        set(range(params.j_max + 1))
        | {float(m) for m in np.unique(magnitudes) if m > params.j_max}
    )
    tails = []
    for j in indices:
        count = int(np.count_nonzero(magnitudes >= j))
        w_lo, w_hi = wilson_interval(count, n)
        log_bound = params.log_bound(j)
        if count == 0:
            verdict = "inconclusive"
        elif math.log(w_hi) <= log_bound:
            verdict = "pass"
        elif w_lo > 0.0 and math.log(w_lo) > log_bound:
            verdict = "fail"
        else:
            verdict = "inconclusive"
        tails.append(
            TailCheck(float(j), count / n, params.bound(j), verdict, count, w_lo, w_hi)
        )
    return ConditionReport(
        variant=variant,
        mode="empirical",
        params=params,
        drift=mean,
        drift_verdict=drift_verdict,
        tails=tuple(tails),
        drift_ci=(lo, hi),
        n_drift_samples=int(drift_arr.size),
        n_tail_samples=int(tail_arr.size),
    )


def harvest_step_samples(
    process,
    window,
    trials: int,
    steps_per_trial: int,
    master_seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Collect step samples (X_{t+1} - X_t) from free-running trajectories.

    Trajectories restart from a fresh initial state whenever the process
    reports an absorbing state, so absorbed self-loops never pollute the
    samples. Returns (drift_samples, tail_samples) filtered to their
    conditioning domains a < X < b and a < X.
    """
    if trials < 1 or steps_per_trial < 1:
        raise ValueError("trials and steps_per_trial must be positive")
    drift_samples: list[float] = []
    tail_samples: list[float] = []
    a, b = window.a, window.b
    for trial in range(trials):
        rng = trial_generator(master_seed, trial)
        state = process.initial_state(rng)
        for _ in range(steps_per_trial):
            if process.absorbed(state):
                state = _fresh_state(process, rng)
            x = process.potential(state)
            state = process.step(state, rng)
            dx = process.potential(state) - x
            if a < x < b:
                drift_samples.append(dx)
            if a < x:
                tail_samples.append(dx)
    return np.asarray(drift_samples), np.asarray(tail_samples)


def _fresh_state(process, rng, attempts: int = 100):
    for _ in range(attempts):
        state = process.initial_state(rng)
        if not process.absorbed(state):
            return state
    raise RuntimeError(f"process {process.name} keeps starting in absorbing states")
