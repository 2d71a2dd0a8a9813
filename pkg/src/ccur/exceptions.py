"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class CcurError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 3

    def __init__(self, message, stage=None):
        self.stage = stage
        if stage:
            message = f"{stage}: {message}"
        super().__init__(message)

    def with_stage(self, stage):
        """Return a copy of this error prefixed with the failing stage name."""
        err = type(self)(str(self), stage=stage)
        err.__cause__ = self
        return err


class DimensionError(CcurError, ValueError):
    """A size argument (k, c, r, ...) is incompatible with the data shape."""

    exit_code = 1


class InputError(CcurError, ValueError):
    """Malformed input file or matrix contents."""

    exit_code = 2


class NumericError(CcurError, ValueError):
    """Non-finite values or a numerically degenerate problem."""

    exit_code = 3


class DegenerateError(NumericError):
    """The requested quantity is not well defined for this input."""
