"""Exception hierarchy with stable machine-readable codes."""


class TandemError(Exception):
    """Base class; ``code`` is part of the CLI error interface."""

    code = "tandem_error"
    exit_status = 1


class ParameterError(TandemError, ValueError):
    code = "parameter_error"
    exit_status = 2


class OutOfScopeError(TandemError, ValueError):
    code = "out_of_scope"
    exit_status = 3


class ConfigError(TandemError, ValueError):
    code = "config_error"
    exit_status = 4

    def __init__(self, message, *, key=None, line=None):
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.key = key
        self.line = line


class BudgetError(ParameterError):
    code = "tuple_budget_exceeded"


class UndefinedThroughputError(TandemError, ValueError):
    code = "undefined_throughput"
    exit_status = 2


class RealizationIndexError(TandemError, IndexError):
    code = "index_error"
    exit_status = 2


class VerificationError(TandemError):
    code = "verification_failed"
    exit_status = 5
