"""Error types shared across the package."""


class InputError(ValueError):
    """Malformed or unsupported input (CLI exit code 2)."""


class StructuralError(RuntimeError):
    """An internal consistency assertion failed (a bug or an inconsistent model)."""


class CheckFailure(AssertionError):
    """A verified identity did not hold (CLI exit code 1)."""
