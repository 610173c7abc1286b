"""Exception taxonomy shared across the package.

CLI exit-code mapping: parse/validation/internal failures are usage-level
errors (exit 1), infeasible preconditions exit 2, budget refusals exit 3.
"""


class MajorityColorError(Exception):
    """Base class for all package errors."""


class ParseError(MajorityColorError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(MajorityColorError):
    """A structural invariant does not hold (self-loop, asymmetry, ...)."""


class PartialColoringError(MajorityColorError):
    """An operation that needs a total coloring met an uncolored vertex."""


class InfeasibleError(MajorityColorError):
    """A solver precondition fails for the given instance."""


class AcyclicityError(InfeasibleError):
    def __init__(self, cycle):
        super().__init__("digraph contains a cycle: " + " -> ".join(map(str, cycle)))
        self.cycle = tuple(cycle)


class BudgetExceededError(MajorityColorError):
    """Refusal: the requested computation exceeds the configured budget."""


class SolverError(MajorityColorError):
    """A solver failed its own postcondition; indicates a bug or a bad input."""
