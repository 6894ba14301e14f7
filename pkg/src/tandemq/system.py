"""System description shared by the simulation and analysis layers."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .distributions import DependenceMode, DistributionSpec
from .errors import OutOfScopeError, ParameterError

__all__ = ["Discipline", "SystemSpec"]


class Discipline(str, enum.Enum):
    INFINITE = "infinite"
    MANUFACTURING = "manufacturing"
    COMMUNICATION = "communication"


@dataclass(frozen=True)
class SystemSpec:
    """A tandem of ``M`` single-server stations fed by one arrival stream.

    ``stations[0]`` is the interarrival law, ``stations[i]`` the service law
    at server ``i``.  Blocking disciplines are defined only for two servers
    with a zero-capacity buffer in front of the second.
    """

    stations: tuple[DistributionSpec, ...]
    mode: DependenceMode = DependenceMode.INDEPENDENT
    discipline: Discipline = Discipline.INFINITE
    buffer_capacity: int | None = field(default=None)

    def __post_init__(self):
        stations = tuple(self.stations)
        object.__setattr__(self, "stations", stations)
        object.__setattr__(self, "mode", DependenceMode(self.mode))
        object.__setattr__(self, "discipline", Discipline(self.discipline))
        if len(stations) < 2:
            raise ParameterError("a system needs an arrival stream and at least one server")
        for s in stations:
            if not isinstance(s, DistributionSpec):
                raise ParameterError(f"station entries must be DistributionSpec, got {s!r}")
        if self.discipline is not Discipline.INFINITE:
            if self.M != 2:
                raise OutOfScopeError(
                    f"{self.discipline.value} blocking is defined for exactly 2 servers, got {self.M}"
                )
            if self.buffer_capacity not in (None, 0):
                raise OutOfScopeError(
                    f"only buffer capacity 0 is supported under blocking, got {self.buffer_capacity}"
                )
        elif self.buffer_capacity is not None:
            raise OutOfScopeError("buffer_capacity applies only to blocking disciplines")
        if self.mode is DependenceMode.IDENTICAL_SERVICE and len(set(stations[1:])) > 1:
            raise ParameterError("identical-service mode needs one service law for all servers")

    @classmethod
    def of(cls, stations: Sequence[DistributionSpec], **kwargs) -> SystemSpec:
        return cls(tuple(stations), **kwargs)

    @property
    def M(self) -> int:
        return len(self.stations) - 1

    def means(self) -> list[float]:
        return [s.mean() for s in self.stations]

    def variances(self) -> list[float]:
        return [s.variance() for s in self.stations]

    def to_dict(self) -> dict:
        return {
            "stations": [s.to_dict() for s in self.stations],
            "mode": self.mode.value,
            "discipline": self.discipline.value,
        }
