"""Command-line front end: ``tandemq {simulate,verify,bounds,converge,formula}``.

Every run prints one JSON object (or a CSV table) that embeds the resolved
configuration.  Failures print ``{"error": {...}}`` to stderr and exit
nonzero with the code of the underlying error class.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .analysis import (
    closed_form_gamma_with_error,
    convergence_study,
    estimate_gamma,
    final_departures,
    sandwich_for,
    throughput,
)
from .blocking import (
    communication_explicit_D2,
    manufacturing_explicit_D1,
    run_blocking_recursion,
    sandwich_D1,
)
from .config import ExperimentConfig, load_config
from .core import explicit_solution, run_recursion
from .distributions import sample_realization
from .errors import ConfigError, OutOfScopeError, TandemError, VerificationError
from .system import Discipline

__all__ = ["COMMANDS", "SCHEMA_VERSION", "CommandResult", "run_command", "main"]

SCHEMA_VERSION = 1
VERIFY_TOLERANCE = 1e-9
COMMANDS = ("simulate", "verify", "bounds", "converge", "formula")


@dataclass
class CommandResult:
    """Outcome of one command: exit status, JSON payload and CSV table."""

    status: int
    result: dict
    header: list[str]
    rows: list[list]
    artifacts: dict = field(default_factory=dict)


def _simulate(cfg: ExperimentConfig) -> CommandResult:
    system = cfg.system
    est = estimate_gamma(system, cfg.n, cfg.replications, cfg.seed)
    gamma, gamma_err = closed_form_gamma_with_error(system)
    result = {
        "estimate": est.to_dict(),
        "ci": list(est.interval),
        "closed_form_gamma": gamma,
        "closed_form_gamma_stderr": gamma_err,
    }
    report = sandwich_for(system, cfg.n)
    result["sandwich"] = report.to_dict() if report is not None else None
    artifacts = {}
    if cfg.trace:
        tau = sample_realization(system, cfg.n, cfg.seed, replication=0)
        n = np.arange(1, cfg.n + 1)
        gamma_hat = final_departures(system, tau) / n
        header = ["n", "gamma_hat"]
        if system.discipline is not Discipline.INFINITE:
            header.append("rule")
            rows = [[int(k), float(g), system.discipline.value] for k, g in zip(n, gamma_hat)]
        else:
            rows = [[int(k), float(g)] for k, g in zip(n, gamma_hat)]
        artifacts[cfg.trace] = (header, rows)
        result["trace"] = cfg.trace
    header = ["point", "half_width", "n", "replications", "seed", "closed_form_gamma"]
    row = [est.point, est.half_width, est.n, est.replications, est.seed, gamma]
    return CommandResult(0, result, header, [row], artifacts)


def _verify(cfg: ExperimentConfig) -> CommandResult:
    system, N = cfg.system, cfg.verify_n
    checks: dict[str, dict] = {}

    def record(name, deviation=0.0, violation=False):
        c = checks.setdefault(name, {"max_abs_deviation": 0.0, "violations": 0})
        c["max_abs_deviation"] = max(c["max_abs_deviation"], float(deviation))
        c["violations"] += int(violation or deviation > VERIFY_TOLERANCE)

    for r in range(cfg.realizations):
        if system.discipline is Discipline.INFINITE:
            tau = sample_realization(system, N, cfg.seed, replication=r)
            D = run_recursion(tau)
            for m in range(1, system.M + 1):
                for n in range(1, N + 1):
                    record("recursion_vs_explicit", abs(D[m, n] - explicit_solution(tau, m, n)))
        elif system.discipline is Discipline.MANUFACTURING:
            tau = sample_realization(system, N + 1, cfg.seed, replication=r)
            D = run_blocking_recursion(tau, "manufacturing")
            for n in range(1, N + 1):
                record("recursion_vs_explicit_D1", abs(D[1, n] - manufacturing_explicit_D1(tau, n)))
                record("reduction_identity", abs(D[2, n] - D[1, n] - tau[2, n - 1]))
                lo, hi = sandwich_D1(tau, n)
                record("sandwich", violation=not lo - VERIFY_TOLERANCE <= D[1, n] <= hi + VERIFY_TOLERANCE)
        else:
            tau = sample_realization(system, N, cfg.seed, replication=r)
            D = run_blocking_recursion(tau, "communication")
            for n in range(1, N + 1):
                record("recursion_vs_explicit_D2", abs(D[2, n] - communication_explicit_D2(tau, n)))

    passed = all(c["violations"] == 0 for c in checks.values())
    result = {
        "checks": checks,
        "tolerance": VERIFY_TOLERANCE,
        "realizations": cfg.realizations,
        "n": N,
        "max_abs_deviation": max(c["max_abs_deviation"] for c in checks.values()),
        "passed": passed,
    }
    header = ["check", "realizations", "n", "max_abs_deviation", "violations", "passed"]
    rows = [
        [name, cfg.realizations, N, c["max_abs_deviation"], c["violations"], c["violations"] == 0]
        for name, c in checks.items()
    ]
    return CommandResult(0 if passed else VerificationError.exit_status, result, header, rows)


def _bounds(cfg: ExperimentConfig) -> CommandResult:
    reports = [sandwich_for(cfg.system, n) for n in cfg.grid]
    if reports[0] is None:
        raise OutOfScopeError("bounds need infinite buffers and independent streams")
    header = ["n", "lower", "upper", "width", "bottleneck",
              "mean_sum", "window_terms", "bottleneck_max_term", "mu_bound"]
    rows = []
    for rep in reports:
        c = rep.components
        rows.append([rep.n, rep.lower, rep.upper, rep.width, rep.bottleneck,
                     c["mean_sum"], c["window_terms"], c["bottleneck_max_term"], c["mu_bound"]])
    return CommandResult(0, {"reports": [r.to_dict() for r in reports]}, header, rows)


def _converge(cfg: ExperimentConfig) -> CommandResult:
    table = convergence_study(cfg.system, cfg.grid, cfg.replications, cfg.seed)
    header = ["n", "mean_abs_error", "sandwich_width"]
    rows = [[row.n, row.mean_abs_error, row.sandwich_width] for row in table]
    gamma, _ = closed_form_gamma_with_error(cfg.system)
    result = {"gamma": gamma, "rows": [dict(zip(header, r)) for r in rows]}
    return CommandResult(0, result, header, rows)


def _formula(cfg: ExperimentConfig) -> CommandResult:
    gamma, err = closed_form_gamma_with_error(cfg.system)
    pi = throughput(cfg.system)
    result = {"gamma": gamma, "gamma_stderr": err, "throughput": pi}
    return CommandResult(0, result, ["gamma", "gamma_stderr", "throughput"], [[gamma, err, pi]])


_DISPATCH = {
    "simulate": _simulate,
    "verify": _verify,
    "bounds": _bounds,
    "converge": _converge,
    "formula": _formula,
}


def run_command(cmd: str, cfg: ExperimentConfig) -> CommandResult:
    if cmd not in _DISPATCH:
        raise ConfigError(f"unknown command {cmd!r}; expected one of {list(COMMANDS)}")
    return _DISPATCH[cmd](cfg)


def _json_safe(obj):
    if isinstance(obj, float) and obj != obj:
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def render_json(cmd, cfg, res: CommandResult, timing=None) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": cmd,
        "config": cfg.to_dict(),
        "status": res.status,
        "result": res.result,
    }
    if timing is not None:
        doc["timing"] = timing
    return json.dumps(_json_safe(doc), indent=2, sort_keys=True) + "\n"


def render_csv(header, rows, cfg=None, cmd=None) -> str:
    buf = io.StringIO()
    if cfg is not None:
        meta = {"schema_version": SCHEMA_VERSION, "command": cmd, "config": cfg.to_dict()}
        buf.write("# " + json.dumps(meta, sort_keys=True, separators=(",", ":")) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if isinstance(v, float) and v != v else v for v in row])
    return buf.getvalue()


def _grid(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be comma-separated integers, got {text!r}")
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        err = {"code": "usage_error", "message": message, "exit_status": 2}
        sys.stderr.write(json.dumps({"error": err}, sort_keys=True) + "\n")
        sys.exit(2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tandemq", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, metavar="PATH", help="YAML config file")
        p.add_argument("--n", type=int, help="customers (verify: customers per realization)")
        p.add_argument("--replications", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--grid", type=_grid, help="comma-separated customer counts")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--format", choices=("json", "csv"))
        p.add_argument("--trace", metavar="PATH", help="simulate: write the D_M(n)/n trace CSV")
        p.add_argument("--timing", action="store_true", help="add a wall-clock timing field")
    return parser


def _emit_error(exc: TandemError) -> int:
    err = {"code": exc.code, "message": str(exc), "exit_status": exc.exit_status}
    if isinstance(exc, ConfigError):
        err.update(key=exc.key, line=exc.line)
    sys.stderr.write(json.dumps({"error": err}, sort_keys=True) + "\n")
    return exc.exit_status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        "replications": args.replications,
        "seed": args.seed,
        "grid": args.grid,
        "out": args.out,
        "format": args.format,
        "trace": args.trace,
        ("verify_n" if args.command == "verify" else "n"): args.n,
    }
    try:
        cfg = load_config(args.config, **overrides)
        started = time.perf_counter()
        res = run_command(args.command, cfg)
        timing = {"seconds": time.perf_counter() - started} if args.timing else None
        if cfg.format == "json":
            text = render_json(args.command, cfg, res, timing)
        else:
            text = render_csv(res.header, res.rows, cfg, args.command)
        for path, (header, rows) in res.artifacts.items():
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(render_csv(header, rows, cfg, args.command))
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        if res.status:
            _emit_error(VerificationError(
                f"deviation above {VERIFY_TOLERANCE} or bound violation; see report"))
        return res.status
    except OSError as exc:
        return _emit_error(ConfigError(f"cannot read or write file: {exc}"))
    except TandemError as exc:
        return _emit_error(exc)


if __name__ == "__main__":
    sys.exit(main())
