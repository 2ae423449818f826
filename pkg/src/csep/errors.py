"""Exception hierarchy shared by every module."""


class CsepError(Exception):
    """Base class for all toolkit errors."""


class InputError(CsepError, ValueError):
    """Malformed input: bad ids, broken preconditions, unparsable files."""


class ClassAssumptionError(CsepError):
    """The input graph is outside the class a pipeline was built for.

    ``witness`` carries whatever evidence was found (a pattern embedding,
    an offending prime atom, a hole with its stem ...).
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EnumerationOverflow(CsepError):
    """An enumeration exceeded its cap."""


class GenerationError(CsepError):
    """A random generator ran out of its retry budget."""
