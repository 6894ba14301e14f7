"""Shared fixtures and plain-loop reference recursions.

The ``literal_*`` helpers evaluate the departure recursions exactly as
written, one customer at a time, with no reductions.  They are a second
reference next to the brute-force explicit solutions in the package.
"""
import numpy as np
import pytest

ACCEPTANCE_LINES = []


def literal_tandem(tau):
    tau = np.asarray(tau, dtype=float)
    rows, n = tau.shape
    D = [[0.0] * (n + 1) for _ in range(rows)]
    for k in range(1, n + 1):
        D[0][k] = D[0][k - 1] + tau[0, k - 1]
        for m in range(1, rows):
            D[m][k] = max(D[m - 1][k], D[m][k - 1]) + tau[m, k - 1]
    return np.array(D)


def literal_manufacturing(tau):
    tau = np.asarray(tau, dtype=float)
    n = tau.shape[1]
    D = [[0.0] * (n + 1) for _ in range(3)]
    for k in range(1, n + 1):
        t0, t1, t2 = tau[:, k - 1]
        D[0][k] = D[0][k - 1] + t0
        D[1][k] = max(max(D[0][k], D[1][k - 1]) + t1, D[2][k - 1])
        D[2][k] = max(D[1][k], D[2][k - 1]) + t2
    return np.array(D)


def literal_communication(tau):
    tau = np.asarray(tau, dtype=float)
    n = tau.shape[1]
    D = [[0.0] * (n + 1) for _ in range(3)]
    for k in range(1, n + 1):
        t0, t1, t2 = tau[:, k - 1]
        D[0][k] = D[0][k - 1] + t0
        D[1][k] = max(D[0][k], D[1][k - 1], D[2][k - 1]) + t1
        D[2][k] = max(D[1][k], D[2][k - 1]) + t2
    return np.array(D)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion():
    """Record a one-line acceptance verdict for the terminal summary."""

    def record(label, passed, detail=""):
        line = f"{'PASS' if passed else 'FAIL'}  {label}"
        if detail:
            line += f"  [{detail}]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
