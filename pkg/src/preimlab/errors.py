"""Exception types raised across the package."""


class PreimlabError(Exception):
    """Base class for all errors raised by preimlab."""


class DomainError(PreimlabError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class OutOfRangeError(PreimlabError, ValueError):
    """A value falls outside the range covered by the sieve."""


class ResourceError(PreimlabError, MemoryError):
    """A requested table would exceed the configured memory budget."""


class SieveFormatError(PreimlabError, ValueError):
    """A sieve cache file is malformed or truncated."""


class TruncationError(PreimlabError):
    """A preimage enumeration hit its size cap.

    ``partial`` holds whatever was collected before the cap was hit; it is
    never a complete answer.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
