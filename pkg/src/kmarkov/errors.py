"""Exception types shared across the package."""


class KMarkovError(Exception):
    pass


class UsageError(KMarkovError, ValueError):
    """Bad input: malformed values or violated preconditions."""


class UnsupportedFeature(KMarkovError):
    """Input that is well formed but outside what the library handles."""


class InvariantViolation(KMarkovError, AssertionError):
    """Two computations that must agree did not."""
