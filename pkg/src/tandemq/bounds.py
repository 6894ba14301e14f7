"""Moment bounds on maxima of sums and the finite-n sandwich on E[D_M(n)]/n.

All functions here are plain arithmetic on means and variances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ParameterError

__all__ = [
    "MomentSummary",
    "BoundReport",
    "lemma4_bound",
    "lemma5_bound",
    "lemma6_bound",
    "window_coefficient",
    "theorem7_sandwich",
]


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.variance)):
            raise ParameterError(f"moments must be finite, got {self}")
        if self.variance < 0:
            raise ParameterError(f"variance must be >= 0, got {self.variance}")

    @classmethod
    def of(cls, dist) -> MomentSummary:
        return cls(dist.mean(), dist.variance())


@dataclass(frozen=True)
class BoundReport:
    """Bracket ``lower <= E[D_M(n)]/n <= upper`` with the pieces of ``upper``.

    ``components`` splits the bound on E[mu] (``upper - lower`` times n) into
    ``mean_sum``, ``window_terms`` and ``bottleneck_max_term``.
    """

    n: int
    lower: float
    upper: float
    bottleneck: int
    components: dict = field(default_factory=dict)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "lower": self.lower,
            "upper": self.upper,
            "width": self.width,
            "bottleneck": self.bottleneck,
            "components": dict(self.components),
        }


def _check_n(n):
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    return int(n)


def _check_variance(variance):
    if not math.isfinite(variance) or variance < 0:
        raise ParameterError(f"variance must be finite and >= 0, got {variance}")


def _max_coefficient(n: int) -> float:
    return (n - 1) / math.sqrt(2 * n - 1)


def window_coefficient(n: int) -> float:
    """Multiplier of the standard deviation in the window-maximum bound."""
    n = _check_n(n)
    return 4.0 * math.sqrt(2 * (2 * n - 1)) + _max_coefficient(n)


def lemma4_bound(n: int, second_moments) -> float:
    """Upper bound on E[max_k (xi_1 + ... + xi_k)] for independent zero-mean xi.

    ``second_moments`` holds E[xi_k^2] for k = 1..n; a scalar means the
    i.i.d. case.
    """
    n = _check_n(n)
    sm = np.asarray(second_moments, dtype=float)
    if sm.ndim == 0:
        sm = np.full(n, float(sm))
    if sm.shape != (n,):
        raise ParameterError(f"expected {n} second moments, got shape {sm.shape}")
    if np.any(sm < 0) or not np.all(np.isfinite(sm)):
        raise ParameterError("second moments must be finite and >= 0")
    return 2.0 * math.sqrt(2.0 * (2 * n - 1) / n) * math.sqrt(float(sm.sum()))


def lemma5_bound(n: int, mean: float, variance: float) -> float:
    """Upper bound on E[max of n i.i.d. variables]."""
    n = _check_n(n)
    _check_variance(variance)
    return mean + _max_coefficient(n) * math.sqrt(variance)


def lemma6_bound(n: int, mean: float, variance: float) -> float:
    """Upper bound on E[max_{l<=k} (xi_l + ... + xi_k)] for i.i.d. xi with mean <= 0."""
    n = _check_n(n)
    _check_variance(variance)
    if mean > 0:
        raise ParameterError(f"window-maximum bound needs mean <= 0, got {mean}")
    return mean + window_coefficient(n) * math.sqrt(variance)


def theorem7_sandwich(n: int, stations: Sequence[MomentSummary]) -> BoundReport:
    """Bracket E[D_M(n)]/n for independent i.i.d. interarrival/service streams.

    ``stations[0]`` describes interarrival times, ``stations[i]`` server i.
    The lower end is the bottleneck mean (first maximizer on ties); the
    upper end adds B(n)/n with

        B(n) = sum_{i != m} mean_i
             + window_coefficient(n) * sum_{i != m} sqrt(var_i + var_m)
             + M * (n - 1) / sqrt(2n - 1) * sqrt(var_m).
    """
    n = _check_n(n)
    stations = [s if isinstance(s, MomentSummary) else MomentSummary(*s) for s in stations]
    if len(stations) < 2:
        raise ParameterError("need the arrival stream and at least one server")
    means = [s.mean for s in stations]
    if min(means) < 0:
        raise ParameterError("means must be >= 0")
    M = len(stations) - 1
    m = int(np.argmax(means))
    var_m = stations[m].variance
    others = [s for i, s in enumerate(stations) if i != m]
    mean_sum = math.fsum(s.mean for s in others)
    window_terms = window_coefficient(n) * math.fsum(
        math.sqrt(s.variance + var_m) for s in others
    )
    bottleneck_term = M * _max_coefficient(n) * math.sqrt(var_m)
    mu_bound = mean_sum + window_terms + bottleneck_term
    lower = means[m]
    return BoundReport(
        n=n,
        lower=lower,
        upper=lower + mu_bound / n,
        bottleneck=m,
        components={
            "mean_sum": mean_sum,
            "window_terms": window_terms,
            "bottleneck_max_term": bottleneck_term,
            "mu_bound": mu_bound,
        },
    )
