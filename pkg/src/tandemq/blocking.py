"""Two-server tandem with a zero-capacity buffer in front of server 2.

Server 1 has an infinite buffer.  Under manufacturing blocking a customer
that finishes at server 1 while server 2 is busy stays on server 1 until
server 2 frees up; under communication blocking server 1 does not start a
service until server 2 is free.  Realizations and schedules use the layout
of :mod:`tandemq.core` with exactly three rows.
"""
from __future__ import annotations

import enum

import numpy as np

from .core import check_realization
from .distributions import DependenceMode, exact_mean_pairwise_max, sample_realization
from .errors import OutOfScopeError, RealizationIndexError
from .system import Discipline, SystemSpec

__all__ = [
    "BlockingRule",
    "run_blocking_recursion",
    "manufacturing_explicit_D1",
    "sandwich_D1",
    "communication_explicit_D2",
    "expected_service_max",
    "blocking_cycle_time",
    "blocking_cycle_time_with_error",
]

MC_SAMPLES = 10**6
# Replication slot reserved for moment estimation, disjoint from simulation runs.
_MOMENT_REPLICATION = 2**32 - 1


class BlockingRule(str, enum.Enum):
    MANUFACTURING = "manufacturing"
    COMMUNICATION = "communication"


def _two_server(tau) -> np.ndarray:
    tau = check_realization(tau)
    if tau.shape[0] != 3:
        raise OutOfScopeError(
            f"blocking is defined for exactly 2 servers, realization has {tau.shape[0] - 1}"
        )
    return tau


def _shifted(row: np.ndarray) -> np.ndarray:
    """row[n-1] aligned at n, with a zero for the missing predecessor of customer 1."""
    return np.concatenate(([0.0], row[:-1]))


def run_blocking_recursion(tau, rule: BlockingRule | str) -> np.ndarray:
    """Departure schedule ``(3, N + 1)`` under the given blocking rule.

    Manufacturing:  D1(n) = max(max(D0(n), D1(n-1)) + t1n, D2(n-1)),
                    D2(n) = max(D1(n), D2(n-1)) + t2n = D1(n) + t2n.
    Communication:  D1(n) = max(D0(n), D1(n-1), D2(n-1)) + t1n,
                    D2(n) = max(D1(n), D2(n-1)) + t2n.

    Both are evaluated through their one-variable reductions
    (manufacturing: D1(n) = max(D0(n) + t1n, D1(n-1) + max(t1n, t2,n-1));
    communication: D2(n) = max(D0(n), D2(n-1)) + t1n + t2n), each solved
    with a running maximum.
    """
    tau = _two_server(tau)
    rule = BlockingRule(rule)
    n = tau.shape[1]
    D = np.zeros((3, n + 1))
    D[0, 1:] = d0 = np.cumsum(tau[0])
    if rule is BlockingRule.MANUFACTURING:
        step = np.maximum(tau[1], _shifted(tau[2]))
        c = np.cumsum(step)
        D[1, 1:] = c + np.maximum.accumulate(d0 + tau[1] - c)
        D[2, 1:] = D[1, 1:] + tau[2]
    else:
        s = np.cumsum(tau[1] + tau[2])
        D[2, 1:] = s + np.maximum.accumulate(d0 - (s - tau[1] - tau[2]))
        D[1, 1:] = np.maximum(d0, D[2, :-1]) + tau[1]
    return D


def _check_n(n, available, need=0):
    if not 1 <= n <= available - need:
        extra = f" (needs customer n+{need})" if need else ""
        raise RealizationIndexError(f"n={n} out of range for {available} customers{extra}")


def manufacturing_explicit_D1(tau, n: int) -> float:
    """max over k of sum_{j<=k} t0j + t1k + sum_{j=k}^{n-1} max(t1,j+1, t2j)."""
    tau = _two_server(tau)
    _check_n(n, tau.shape[1])
    t0, t1, t2 = tau[0, :n], tau[1, :n], tau[2, :n]
    best = -np.inf
    for k in range(1, n + 1):
        path = t0[:k].sum() + t1[k - 1] + np.maximum(t1[k:n], t2[k - 1 : n - 1]).sum()
        best = max(best, path)
    return float(best)


def sandwich_D1(tau, n: int) -> tuple[float, float]:
    """Lower and upper bounds on the manufacturing D1(n).

    lower = L(n) - max(t1,n+1, t2n) and upper = U(n), with

        L(n) = max_k { sum_{j<=k} t0j + sum_{j=k}^{n} max(t1,j+1, t2j) }
        U(n) = max_k { sum_{j<=k} t0j + sum_{j=k}^{n} max(t1j, t2,j-1) }

    and the missing t2,0 taken as 0.  Needs customer n + 1 in ``tau``.
    """
    tau = _two_server(tau)
    _check_n(n, tau.shape[1], need=1)
    t0, t1, t2 = tau[0], tau[1], tau[2]
    s0 = np.cumsum(t0[:n])
    ahead = np.maximum(t1[1 : n + 1], t2[:n])  # index j-1 holds max(t1,j+1, t2j)
    behind = np.maximum(t1[:n], _shifted(t2)[:n])  # index j-1 holds max(t1j, t2,j-1)
    tail_ahead = np.cumsum(ahead[::-1])[::-1]
    tail_behind = np.cumsum(behind[::-1])[::-1]
    L = np.max(s0 + tail_ahead)
    U = np.max(s0 + tail_behind)
    return float(L - ahead[n - 1]), float(U)


def communication_explicit_D2(tau, n: int) -> float:
    """max over k of sum_{j<=k} t0j + sum_{j=k}^{n} (t1j + t2j)."""
    tau = _two_server(tau)
    _check_n(n, tau.shape[1])
    t0, both = tau[0, :n], tau[1, :n] + tau[2, :n]
    best = -np.inf
    for k in range(1, n + 1):
        best = max(best, t0[:k].sum() + both[k - 1 :].sum())
    return float(best)


def expected_service_max(
    spec: SystemSpec, *, mc_samples: int = MC_SAMPLES, seed: int = 0
) -> tuple[float, float]:
    """E max(t11, t21) and its standard error (0 when exact)."""
    if spec.M != 2:
        raise OutOfScopeError(f"needs exactly 2 servers, got {spec.M}")
    a, b = spec.stations[1], spec.stations[2]
    if spec.mode is DependenceMode.IDENTICAL_SERVICE:
        return a.mean(), 0.0
    if spec.mode is DependenceMode.INDEPENDENT:
        exact = exact_mean_pairwise_max(a, b)
        if exact is not None:
            return exact, 0.0
    tau = sample_realization(spec, mc_samples, seed, replication=_MOMENT_REPLICATION)
    m = np.maximum(tau[1], tau[2])
    return float(m.mean()), float(m.std(ddof=1) / np.sqrt(m.size))


def blocking_cycle_time_with_error(
    spec: SystemSpec, rule: BlockingRule | str | None = None, **mc
) -> tuple[float, float]:
    """Cycle time under blocking, with the Monte Carlo error of E max when used."""
    if rule is None:
        if spec.discipline is Discipline.INFINITE:
            raise OutOfScopeError("system has no blocking discipline")
        rule = spec.discipline.value
    rule = BlockingRule(rule)
    if spec.M != 2:
        raise OutOfScopeError(f"blocking is defined for exactly 2 servers, got {spec.M}")
    mean0 = spec.stations[0].mean()
    if rule is BlockingRule.COMMUNICATION:
        return max(mean0, spec.stations[1].mean() + spec.stations[2].mean()), 0.0
    emax, err = expected_service_max(spec, **mc)
    if mean0 >= emax:
        return mean0, 0.0
    return emax, err


def blocking_cycle_time(spec: SystemSpec, rule: BlockingRule | str | None = None, **mc) -> float:
    return blocking_cycle_time_with_error(spec, rule, **mc)[0]
