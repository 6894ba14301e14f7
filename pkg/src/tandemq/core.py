"""Departure epochs of M-station tandems with infinite buffers.

A realization ``tau`` is an ``(M + 1, N)`` array: ``tau[0, j]`` is the time
between the arrivals of customers ``j`` and ``j + 1`` (1-based customers,
0-based columns) and ``tau[i, j]`` the service time of customer ``j + 1`` at
server ``i``.  Departure schedules are ``(M + 1, N + 1)`` arrays with
``D[i, n]`` the n-th departure epoch from station ``i`` (arrival epochs for
``i = 0``) and ``D[:, 0] == 0``.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import BudgetError, ParameterError, RealizationIndexError

__all__ = [
    "DEFAULT_TUPLE_BUDGET",
    "check_realization",
    "run_recursion",
    "last_departures",
    "explicit_solution",
    "zeta",
    "zeta_table",
    "cycle_time_trace",
]

DEFAULT_TUPLE_BUDGET = 10**7


def check_realization(tau, *, min_rows: int = 2) -> np.ndarray:
    tau = np.asarray(tau, dtype=float)
    if tau.ndim != 2:
        raise ParameterError(f"realization must be 2-D (stations x customers), got shape {tau.shape}")
    if tau.shape[0] < min_rows or tau.shape[1] < 1:
        raise ParameterError(f"realization needs >= {min_rows} rows and >= 1 customer, got {tau.shape}")
    if not np.all(np.isfinite(tau)) or np.any(tau < 0):
        raise ParameterError("realization entries must be finite and nonnegative")
    return tau


def _station_pass(upstream: np.ndarray, service: np.ndarray) -> np.ndarray:
    """Solve D(n) = max(upstream(n), D(n-1)) + service(n) with D(0) = 0.

    Unrolled, D(n) = S(n) + max_{k<=n} (upstream(k) - S(k-1)) where S is the
    running sum of service times; ``upstream`` is indexed from n = 1.
    """
    s = np.cumsum(service)
    s_before = s - service
    return s + np.maximum.accumulate(upstream - s_before)


def run_recursion(tau) -> np.ndarray:
    """Full departure schedule ``D`` of shape ``(M + 1, N + 1)``."""
    tau = check_realization(tau)
    rows, n = tau.shape
    D = np.zeros((rows, n + 1))
    D[0, 1:] = np.cumsum(tau[0])
    for m in range(1, rows):
        D[m, 1:] = _station_pass(D[m - 1, 1:], tau[m])
    return D


def last_departures(tau) -> np.ndarray:
    """``D_M(1..N)`` only, keeping one station row alive at a time."""
    tau = check_realization(tau)
    d = np.cumsum(tau[0])
    for m in range(1, tau.shape[0]):
        d = _station_pass(d, tau[m])
    return d


def explicit_solution(tau, m: int, n: int, *, budget: int = DEFAULT_TUPLE_BUDGET) -> float:
    """Brute-force D_m(n) as the best path sum over index tuples.

    Enumerates every ``1 <= k_1 <= ... <= k_m <= n`` and takes the largest
    ``sum_{j<=k_1} tau_0j + sum_{k_1<=j<=k_2} tau_1j + ... + sum_{k_m<=j<=n} tau_mj``.
    Neighbouring sums share their boundary index.  Deliberately naive: it is
    the reference the recursion is checked against.
    """
    tau = check_realization(tau)
    M, N = tau.shape[0] - 1, tau.shape[1]
    if not 1 <= m <= M:
        raise RealizationIndexError(f"station m must be in 1..{M}, got {m}")
    if not 1 <= n <= N:
        raise RealizationIndexError(f"customer n must be in 1..{N}, got {n}")
    count = math.comb(n + m - 1, m)
    if count > budget:
        raise BudgetError(f"{count} index tuples exceed the budget of {budget}")

    rows = tau.tolist()
    best = -math.inf

    def descend(i, k, acc):
        # acc covers stations 0..i-1; station i starts at customer k
        nonlocal best
        if i == m:
            total = acc + sum(rows[m][k - 1 : n])
            if total > best:
                best = total
            return
        for k_next in range(k, n + 1):
            descend(i + 1, k_next, acc + sum(rows[i][k - 1 : k_next]))

    for k1 in range(1, n + 1):
        descend(1, k1, sum(rows[0][:k1]))
    return best


def zeta(tau, l: int, n: int) -> float:
    """Completion time of the last server for customers ``l+1..n`` alone.

    The system is restarted empty at customer ``l + 1``; ``zeta(tau, 0, n)``
    is D_M(n).
    """
    tau = check_realization(tau)
    N = tau.shape[1]
    if not 0 <= l < n <= N:
        raise RealizationIndexError(f"need 0 <= l < n <= {N}, got l={l}, n={n}")
    return float(last_departures(tau[:, l:n])[-1])


def zeta_table(tau) -> np.ndarray:
    """``Z[l, n] = zeta(tau, l, n)`` for all ``0 <= l < n <= N``; NaN elsewhere."""
    tau = check_realization(tau)
    N = tau.shape[1]
    Z = np.full((N + 1, N + 1), np.nan)
    for l in range(N):
        Z[l, l + 1 :] = last_departures(tau[:, l:])
    return Z


def cycle_time_trace(tau) -> tuple[np.ndarray, np.ndarray]:
    """Customer counts ``n = 1..N`` and the empirical cycle times D_M(n)/n."""
    d = last_departures(tau)
    n = np.arange(1, d.size + 1)
    return n, d / n
