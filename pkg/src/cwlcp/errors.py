"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed graph file or expression file."""


class BudgetExceeded(RuntimeError):
    """Brute-force enumeration would exceed the configured budget."""


class InternalCheckError(AssertionError):
    """A self-verification step failed; indicates a bug, not bad input."""
