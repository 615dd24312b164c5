"""Exception types shared across the workbench.

Precondition violations raise DomainError (CLI exit code 2); evaluations
that cannot reach their stated accuracy raise ConvergenceError (exit code 3).
"""


class DomainError(ValueError):
    """An input fails a documented precondition (wrong parity, pole, ...)."""


class ConvergenceError(RuntimeError):
    """A numerical routine could not certify its result within budget."""
