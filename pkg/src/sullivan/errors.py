"""Exception types shared across the package."""


class SullivanError(Exception):
    """Base class for every error raised by this package."""


class InputError(SullivanError, ValueError):
    """Malformed or inconsistent input (shape mismatch, unknown generator, ...)."""


class BoundError(SullivanError):
    """A computation needs degrees beyond the certified bound of a model."""


class PreconditionError(SullivanError):
    """An operation was called on data outside its documented domain."""


class UnsupportedInputError(PreconditionError):
    """Input of a kind the construction deliberately does not handle."""


class InternalError(SullivanError):
    """A post-condition guaranteed by the mathematics failed to hold.

    Seeing this means there is a bug, not bad input.
    """


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
