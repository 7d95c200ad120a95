"""Error hierarchy shared by the library and the CLI exit-code mapping."""


class WonderError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class InputError(WonderError):
    """Malformed or inconsistent input data (files, diagrams, arguments)."""

    exit_code = 1


class ComputationError(WonderError):
    """A computation gave up (e.g. the rewrite step cap was exceeded)."""

    exit_code = 2


class InvariantViolation(WonderError):
    """An internal theorem-backed invariant failed; always a bug or bad data
    that slipped past validation."""

    exit_code = 3
