"""YAML experiment configuration.

Schema (all keys except ``stations`` optional)::

    stations:                  # index 0 = interarrival law, then servers 1..M
      - {family: exponential, mean: 1.0}     # or rate: 1.0
      - {family: uniform, low: 0.0, high: 2.0}
      - {family: gamma, shape: 2.0, scale: 0.5}
      - {family: deterministic, value: 1.0}
      - {family: bernoulli-scaled, p: 0.5, scale: 2.0}
    discipline: infinite       # infinite | manufacturing | communication
    mode: independent          # independent | shared-draw | identical-service
    seed: 0
    n: 100000                  # customers per replication
    replications: 20
    grid: [100, 1000, 10000]   # customer counts for bounds / converge
    realizations: 100          # random realizations checked by verify
    verify_n: 8                # customers per verify realization
    format: json               # json | csv
    out: null                  # output path, stdout when null
    trace: null                # simulate: CSV path for the D_M(n)/n trace
"""
from __future__ import annotations

from dataclasses import dataclass

import yaml

from .distributions import FAMILIES, DependenceMode, DistributionSpec, exponential
from .errors import ConfigError, ParameterError, TandemError
from .system import Discipline, SystemSpec

__all__ = ["DEFAULTS", "ExperimentConfig", "parse_config", "load_config"]

DEFAULTS = {
    "discipline": "infinite",
    "mode": "independent",
    "seed": 0,
    "n": 100_000,
    "replications": 20,
    "grid": [100, 1_000, 10_000, 100_000],
    "realizations": 100,
    "verify_n": 8,
    "format": "json",
    "out": None,
    "trace": None,
}
KEYS = {"stations", *DEFAULTS}


@dataclass(frozen=True)
class ExperimentConfig:
    system: SystemSpec
    seed: int
    n: int
    replications: int
    grid: tuple[int, ...]
    realizations: int
    verify_n: int
    format: str
    out: str | None
    trace: str | None

    def to_dict(self) -> dict:
        """Fully resolved configuration, suitable for echoing into outputs."""
        d = self.system.to_dict()
        d.update(
            seed=self.seed,
            n=self.n,
            replications=self.replications,
            grid=list(self.grid),
            realizations=self.realizations,
            verify_n=self.verify_n,
            format=self.format,
            out=self.out,
            trace=self.trace,
        )
        return d


def _key_lines(node) -> dict:
    """Map top-level keys (and ``stations[i]``) to 1-based source lines."""
    lines = {}
    if not isinstance(node, yaml.MappingNode):
        return lines
    for key_node, value_node in node.value:
        key = key_node.value
        lines[key] = key_node.start_mark.line + 1
        if key == "stations" and isinstance(value_node, yaml.SequenceNode):
            for i, item in enumerate(value_node.value):
                lines[f"stations[{i}]"] = item.start_mark.line + 1
    return lines


def _station(entry, where, line) -> DistributionSpec:
    if not isinstance(entry, dict):
        raise ConfigError("station must be a mapping with a 'family' key", key=where, line=line)
    entry = dict(entry)
    family = entry.pop("family", None)
    if family not in FAMILIES:
        raise ConfigError(
            f"unknown or missing family {family!r}; expected one of {sorted(FAMILIES)}",
            key=where,
            line=line,
        )
    try:
        if family == "exponential":
            unknown = set(entry) - {"rate", "mean"}
            if unknown:
                raise ConfigError(f"unknown keys {sorted(unknown)}", key=where, line=line)
            return exponential(entry.get("rate"), mean=entry.get("mean"))
        names = FAMILIES[family]
        unknown = set(entry) - set(names)
        missing = [k for k in names if k not in entry]
        if unknown or missing:
            raise ConfigError(
                f"{family} takes keys {list(names)}; unknown {sorted(unknown)}, missing {missing}",
                key=where,
                line=line,
            )
        return DistributionSpec(family, tuple(entry[k] for k in names))
    except ConfigError:
        raise
    except TandemError as exc:
        raise type(exc)(f"{exc} (key {where!r}, line {line})") from exc
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"invalid station parameters: {exc} (key {where!r}, line {line})") from exc


def _int(raw, key, lines, minimum):
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f"must be an integer >= {minimum}, got {value!r}", key=key, line=lines.get(key))
    return value


def _build(raw: dict, lines: dict) -> ExperimentConfig:
    unknown = sorted(set(raw) - KEYS)
    if unknown:
        raise ConfigError(f"unknown keys {unknown}", key=unknown[0], line=lines.get(unknown[0]))
    if "stations" not in raw:
        raise ConfigError("missing required key", key="stations")
    stations = raw["stations"]
    if not isinstance(stations, list) or len(stations) < 2:
        raise ConfigError(
            "need a list of >= 2 stations (arrivals first, then servers)",
            key="stations",
            line=lines.get("stations"),
        )
    merged = {**DEFAULTS, **raw}
    specs = [
        _station(entry, f"stations[{i}]", lines.get(f"stations[{i}]"))
        for i, entry in enumerate(stations)
    ]
    for key, enum_type in (("discipline", Discipline), ("mode", DependenceMode)):
        try:
            enum_type(merged[key])
        except ValueError:
            choices = [e.value for e in enum_type]
            raise ConfigError(
                f"must be one of {choices}, got {merged[key]!r}", key=key, line=lines.get(key)
            ) from None
    try:
        system = SystemSpec(tuple(specs), mode=merged["mode"], discipline=merged["discipline"])
    except TandemError as exc:
        # same error class, so the code names the violated rule; add location
        raise type(exc)(f"{exc} (key 'discipline', line {lines.get('discipline')})") from exc
    grid = merged["grid"]
    if (
        not isinstance(grid, list)
        or not grid
        or any(isinstance(g, bool) or not isinstance(g, int) or g < 1 for g in grid)
    ):
        raise ConfigError(f"must be a nonempty list of positive integers, got {grid!r}", key="grid", line=lines.get("grid"))
    if merged["format"] not in ("json", "csv"):
        raise ConfigError(f"must be 'json' or 'csv', got {merged['format']!r}", key="format", line=lines.get("format"))
    for key in ("out", "trace"):
        if merged[key] is not None and not isinstance(merged[key], str):
            raise ConfigError("must be a path string or null", key=key, line=lines.get(key))
    seed = merged["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ConfigError(f"must be an integer in [0, 2**64), got {seed!r}", key="seed", line=lines.get("seed"))
    return ExperimentConfig(
        system=system,
        seed=seed,
        n=_int(merged, "n", lines, 1),
        replications=_int(merged, "replications", lines, 2),
        grid=tuple(sorted(set(grid))),
        realizations=_int(merged, "realizations", lines, 1),
        verify_n=_int(merged, "verify_n", lines, 1),
        format=merged["format"],
        out=merged["out"],
        trace=merged["trace"],
    )


def parse_config(text: str, **overrides) -> ExperimentConfig:
    """Parse and validate a YAML document; non-None ``overrides`` win over file values."""
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigError(f"malformed YAML: {getattr(exc, 'problem', exc)}", line=line) from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("top level must be a mapping", line=1)
    overrides = {k: v for k, v in overrides.items() if v is not None}
    raw.update(overrides)
    lines = {k: v for k, v in _key_lines(node).items() if k not in overrides}
    return _build(raw, lines)


def load_config(path, **overrides) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), **overrides)
