"""Shared exception types.

Every failure mode that a caller can sensibly react to gets its own class;
the CLI maps each to a distinct exit code.
"""


class EquitreeError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(EquitreeError):
    """Malformed textual input (s-expression files).

    Carries the 1-based line/column of the offending token when known.
    """

    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"{message} (line {line}, col {col})"
        super().__init__(message)
        self.line = line
        self.col = col


class ValidationError(EquitreeError):
    """A value violates a structural invariant (bad vocabulary, infeasible tree...)."""


class PreconditionError(EquitreeError):
    """An operation was called on arguments outside its contract."""


class VocabularyMismatch(PreconditionError):
    """Two structures that must share a vocabulary do not."""


class BudgetExceeded(EquitreeError):
    """A computation would exceed its configured cost budget.

    Never silently truncates: the caller decides whether to shrink the
    instance or raise the budget.
    """

    def __init__(self, message, cost=None, limit=None):
        if cost is not None:
            message = f"{message} (cost {cost} > limit {limit})"
        super().__init__(message)
        self.cost = cost
        self.limit = limit


class CompositionConflict(EquitreeError):
    """A learned composition table received two different values for one key.

    This is a falsifying event for the composition property the kernel
    algorithms rely on; it aborts the run and reports both witnessing
    contexts.
    """

    def __init__(self, key, old_value, new_value, old_context=None, new_context=None):
        super().__init__(
            f"composition table conflict at key {key!r}: "
            f"{old_value} (from {old_context}) vs {new_value} (from {new_context})"
        )
        self.key = key
        self.old_value = old_value
        self.new_value = new_value
        self.old_context = old_context
        self.new_context = new_context
