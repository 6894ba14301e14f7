"""Closed-form cycle time and throughput, and their Monte Carlo counterparts."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .blocking import blocking_cycle_time_with_error, run_blocking_recursion
from .bounds import MomentSummary, theorem7_sandwich
from .core import last_departures
from .distributions import DependenceMode, sample_realization
from .errors import ParameterError, UndefinedThroughputError
from .system import Discipline, SystemSpec

__all__ = [
    "CycleTimeEstimate",
    "ConvergenceRow",
    "closed_form_gamma",
    "closed_form_gamma_with_error",
    "throughput",
    "final_departures",
    "estimate_gamma",
    "convergence_study",
    "sandwich_for",
]

Z95 = 1.96


@dataclass(frozen=True)
class CycleTimeEstimate:
    """Across-replication estimate of the mean cycle time at a fixed n."""

    point: float
    half_width: float
    n: int
    replications: int
    seed: int
    std: float

    @property
    def interval(self) -> tuple[float, float]:
        return self.point - self.half_width, self.point + self.half_width

    def covers(self, value: float) -> bool:
        lo, hi = self.interval
        return lo <= value <= hi

    def to_dict(self) -> dict:
        return asdict(self)


class ConvergenceRow(NamedTuple):
    n: int
    mean_abs_error: float
    sandwich_width: float


def closed_form_gamma_with_error(spec: SystemSpec, **mc) -> tuple[float, float]:
    """Limit of D_M(n)/n and a standard error (nonzero only for a sampled E max)."""
    if spec.discipline is Discipline.INFINITE:
        return max(spec.means()), 0.0
    return blocking_cycle_time_with_error(spec, **mc)


def closed_form_gamma(spec: SystemSpec, **mc) -> float:
    """Mean cycle time of ``spec``.

    Infinite buffers give the largest mean; manufacturing blocking gives
    max(E t0, E max(t1, t2)); communication blocking max(E t0, E t1 + E t2).
    """
    return closed_form_gamma_with_error(spec, **mc)[0]


def throughput(spec: SystemSpec, **mc) -> float:
    if max(spec.means()) <= 0:
        raise UndefinedThroughputError("every mean time is zero; the cycle time vanishes")
    return 1.0 / closed_form_gamma(spec, **mc)


def final_departures(spec: SystemSpec, tau) -> np.ndarray:
    """D_M(1..N) for the realization under the spec's discipline."""
    if spec.discipline is Discipline.INFINITE:
        return last_departures(tau)
    return run_blocking_recursion(tau, spec.discipline.value)[2, 1:]


def _check_run(n, replications):
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    if int(replications) != replications or replications < 2:
        raise ParameterError(f"replications must be an integer >= 2, got {replications}")
    return int(n), int(replications)


def estimate_gamma(
    spec: SystemSpec, n: int = 10**5, replications: int = 20, seed: int = 0
) -> CycleTimeEstimate:
    """Average D_M(n)/n over independent replications with a 95% normal CI.

    Replication ``r`` draws its realization from the streams keyed by
    ``(seed, r)``.
    """
    n, replications = _check_run(n, replications)
    values = np.empty(replications)
    for r in range(replications):
        tau = sample_realization(spec, n, seed, replication=r)
        values[r] = final_departures(spec, tau)[-1] / n
    std = float(values.std(ddof=1))
    return CycleTimeEstimate(
        point=float(values.mean()),
        half_width=Z95 * std / math.sqrt(replications),
        n=n,
        replications=replications,
        seed=seed,
        std=std,
    )


def sandwich_for(spec: SystemSpec, n: int):
    """The finite-n bracket on E[D_M(n)]/n, or None where it does not apply.

    The bracket needs infinite buffers and mutually independent streams.
    """
    if spec.discipline is not Discipline.INFINITE or spec.mode is not DependenceMode.INDEPENDENT:
        return None
    return theorem7_sandwich(n, [MomentSummary.of(s) for s in spec.stations])


def convergence_study(
    spec: SystemSpec, grid: Sequence[int], replications: int = 20, seed: int = 0
) -> list[ConvergenceRow]:
    """Mean |D_M(n)/n - gamma| and the analytic bracket width over ``grid``.

    Each replication is a single trajectory of length ``max(grid)`` read off
    at every grid point, so rows share randomness.  The width is NaN where
    :func:`sandwich_for` gives no bracket.
    """
    grid = sorted({int(g) for g in grid})
    if not grid or grid[0] < 1:
        raise ParameterError(f"grid must hold positive customer counts, got {grid}")
    n_max, replications = _check_run(grid[-1], replications)
    gamma_ = closed_form_gamma(spec)
    idx = np.asarray(grid) - 1
    errors = np.empty((replications, len(grid)))
    for r in range(replications):
        tau = sample_realization(spec, n_max, seed, replication=r)
        d = final_departures(spec, tau)[idx]
        errors[r] = np.abs(d / np.asarray(grid) - gamma_)
    rows = []
    for j, n in enumerate(grid):
        report = sandwich_for(spec, n)
        width = report.width if report is not None else math.nan
        rows.append(ConvergenceRow(n, float(errors[:, j].mean()), width))
    return rows
