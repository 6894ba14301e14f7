"""Random-variate sources for interarrival and service times.

Every variate is addressed by ``(seed, replication, station, index)``.  The
address maps onto a Philox-4x64 key and counter, so the value at a given
address does not depend on how many other variates were drawn before it, on
the order stations are sampled in, or on the number of stations in the
system.  Uniforms are turned into variates by inverse-CDF, which keeps the
shared-draw dependence mode a one-uniform-per-customer affair.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy import special

from .errors import ParameterError

if TYPE_CHECKING:
    from .system import SystemSpec

__all__ = [
    "FAMILIES",
    "DependenceMode",
    "DistributionSpec",
    "StreamState",
    "deterministic",
    "exponential",
    "uniform",
    "gamma",
    "bernoulli_scaled",
    "exact_mean",
    "exact_variance",
    "exact_mean_pairwise_max",
    "stream_uniforms",
    "sample_realization",
]

# Parameter names per family, in positional order.
FAMILIES = {
    "deterministic": ("value",),
    "exponential": ("rate",),
    "uniform": ("low", "high"),
    "gamma": ("shape", "scale"),
    "bernoulli-scaled": ("p", "scale"),
}

# Station id reserved for the per-customer draw of the shared-draw mode.
SHARED_STREAM = 0xFFFF_FFFF
_WORDS_PER_BLOCK = 4  # Philox4x64 emits four 64-bit words per counter step


class DependenceMode(str, enum.Enum):
    INDEPENDENT = "independent"
    SHARED_DRAW = "shared-draw"
    IDENTICAL_SERVICE = "identical-service"


@dataclass(frozen=True)
class DistributionSpec:
    """A nonnegative distribution from one of the supported families.

    ``params`` holds the family parameters in the order listed in
    :data:`FAMILIES`.  Construction validates them, so an existing spec
    always has finite mean and variance.
    """

    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(
                f"unknown family {self.family!r}; expected one of {sorted(FAMILIES)}"
            )
        names = FAMILIES[self.family]
        params = tuple(float(p) for p in self.params)
        if len(params) != len(names):
            raise ParameterError(
                f"{self.family} takes parameters {names}, got {len(params)} values"
            )
        if not all(math.isfinite(p) for p in params):
            raise ParameterError(f"{self.family} parameters must be finite: {params}")
        object.__setattr__(self, "params", params)
        _validate(self.family, params)

    @property
    def kwargs(self) -> dict[str, float]:
        return dict(zip(FAMILIES[self.family], self.params))

    def mean(self) -> float:
        return exact_mean(self)

    def variance(self) -> float:
        return exact_variance(self)

    def ppf(self, u):
        """Inverse CDF evaluated at uniforms ``u`` in [0, 1)."""
        u = np.asarray(u, dtype=float)
        f, p = self.family, self.params
        if f == "deterministic":
            return np.full_like(u, p[0])
        if f == "exponential":
            return -np.log1p(-u) / p[0]
        if f == "uniform":
            return p[0] + (p[1] - p[0]) * u
        if f == "gamma":
            return special.gammaincinv(p[0], u) * p[1]
        # bernoulli-scaled: mass 1-p at 0, mass p at `scale`
        return np.where(u >= 1.0 - p[0], p[1], 0.0)

    def to_dict(self) -> dict:
        return {"family": self.family, **self.kwargs}


def _validate(family, params):
    if family == "deterministic":
        if params[0] < 0:
            raise ParameterError(f"deterministic value must be >= 0, got {params[0]}")
    elif family == "exponential":
        if params[0] <= 0:
            raise ParameterError(f"exponential rate must be > 0, got {params[0]}")
    elif family == "uniform":
        low, high = params
        if low < 0 or high < low:
            raise ParameterError(f"uniform needs 0 <= low <= high, got ({low}, {high})")
    elif family == "gamma":
        if params[0] <= 0 or params[1] <= 0:
            raise ParameterError(f"gamma shape and scale must be > 0, got {params}")
    elif family == "bernoulli-scaled":
        p, scale = params
        if not 0.0 <= p <= 1.0 or scale < 0:
            raise ParameterError(f"bernoulli-scaled needs 0 <= p <= 1, scale >= 0, got {params}")


def deterministic(value: float) -> DistributionSpec:
    return DistributionSpec("deterministic", (value,))


def exponential(rate: float | None = None, *, mean: float | None = None) -> DistributionSpec:
    """Exponential law given either its ``rate`` or its ``mean``."""
    if (rate is None) == (mean is None):
        raise ParameterError("exponential needs exactly one of rate or mean")
    if mean is not None:
        if mean <= 0:
            raise ParameterError(f"exponential mean must be > 0, got {mean}")
        rate = 1.0 / mean
    return DistributionSpec("exponential", (rate,))


def uniform(low: float, high: float) -> DistributionSpec:
    return DistributionSpec("uniform", (low, high))


def gamma(shape: float, scale: float) -> DistributionSpec:
    return DistributionSpec("gamma", (shape, scale))


def bernoulli_scaled(p: float, scale: float) -> DistributionSpec:
    return DistributionSpec("bernoulli-scaled", (p, scale))


def exact_mean(spec: DistributionSpec) -> float:
    f, p = spec.family, spec.params
    if f == "deterministic":
        return p[0]
    if f == "exponential":
        return 1.0 / p[0]
    if f == "uniform":
        return 0.5 * (p[0] + p[1])
    if f == "gamma":
        return p[0] * p[1]
    return p[0] * p[1]


def exact_variance(spec: DistributionSpec) -> float:
    f, p = spec.family, spec.params
    if f == "deterministic":
        return 0.0
    if f == "exponential":
        return 1.0 / p[0] ** 2
    if f == "uniform":
        return (p[1] - p[0]) ** 2 / 12.0
    if f == "gamma":
        return p[0] * p[1] ** 2
    return p[1] ** 2 * p[0] * (1.0 - p[0])


def _mean_max_with_constant(c: float, y: DistributionSpec) -> float:
    """E[max(c, Y)] = c + E[(Y - c)+] for a constant c >= 0."""
    f, p = y.family, y.params
    if f == "deterministic":
        return max(c, p[0])
    if f == "exponential":
        return c + math.exp(-p[0] * c) / p[0]
    if f == "uniform":
        low, high = p
        if c <= low:
            return exact_mean(y)
        if c >= high:
            return c
        return c + (high - c) ** 2 / (2.0 * (high - low))
    if f == "gamma":
        k, theta = p
        x = c / theta
        return c + k * theta * special.gammaincc(k + 1.0, x) - c * special.gammaincc(k, x)
    prob, scale = p
    return prob * max(c, scale) + (1.0 - prob) * c


def exact_mean_pairwise_max(a: DistributionSpec, b: DistributionSpec) -> float | None:
    """E[max(X, Y)] for independent X ~ a, Y ~ b, or None without a closed form.

    Closed forms cover exponential pairs, a deterministic member paired with
    any family, and two uniforms on the same support.
    """
    if a.family == "deterministic":
        return float(_mean_max_with_constant(a.params[0], b))
    if b.family == "deterministic":
        return float(_mean_max_with_constant(b.params[0], a))
    if a.family == b.family == "exponential":
        la, lb = a.params[0], b.params[0]
        return 1.0 / la + 1.0 / lb - 1.0 / (la + lb)
    if a.family == b.family == "uniform" and a.params == b.params:
        low, high = a.params
        return low + 2.0 * (high - low) / 3.0
    return None


@dataclass(frozen=True)
class StreamState:
    """Address of a variate stream position.

    ``counter`` is the zero-based customer index of the next variate.
    """

    seed: int
    station: int
    counter: int = 0
    replication: int = 0

    def key(self) -> np.ndarray:
        if not 0 <= self.replication < 2**32 or not 0 <= self.station < 2**32:
            raise ParameterError("replication and station must fit in 32 bits")
        if self.counter < 0:
            raise ParameterError("stream counter must be >= 0")
        return np.array(
            [self.seed % 2**64, (self.replication << 32) | self.station], dtype=np.uint64
        )


def stream_uniforms(state: StreamState, count: int) -> np.ndarray:
    """Uniforms on [0, 1) at positions ``counter .. counter + count - 1``."""
    bitgen = np.random.Philox(key=state.key())
    block, offset = divmod(state.counter, _WORDS_PER_BLOCK)
    if block:
        bitgen.advance(block)
    u = np.random.Generator(bitgen).random(offset + count)
    return u[offset:]


def sample_realization(
    spec: SystemSpec, n: int, seed: int, *, replication: int = 0, start: int = 0
) -> np.ndarray:
    """Draw the ``(M + 1, n)`` matrix of interarrival (row 0) and service times.

    Column ``j`` holds customer ``start + j + 1``.  Rows are independent
    streams unless ``spec.mode`` asks for per-customer dependence.
    """
    n = int(n)
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    stations = spec.stations
    if len(stations) < 2:
        raise ParameterError("a system needs an arrival stream and at least one server")
    mode = DependenceMode(spec.mode)
    tau = np.empty((len(stations), n))

    def uniforms(station):
        return stream_uniforms(StreamState(seed, station, start, replication), n)

    if mode is DependenceMode.SHARED_DRAW:
        u = uniforms(SHARED_STREAM)
        for i, dist in enumerate(stations):
            tau[i] = dist.ppf(u)
    elif mode is DependenceMode.IDENTICAL_SERVICE:
        tau[0] = stations[0].ppf(uniforms(0))
        tau[1:] = stations[1].ppf(uniforms(1))
    else:
        for i, dist in enumerate(stations):
            tau[i] = dist.ppf(uniforms(i))
    return tau
