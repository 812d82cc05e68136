"""Exception types raised by the library.

Every error derives from :class:`TripleError` so callers (the CLI in
particular) can separate malformed input from a failed mathematical check.
"""


class TripleError(Exception):
    """Base class for all library errors."""


class NotHermitian(TripleError):
    pass


class DimensionMismatch(TripleError):
    pass


class BadSign(TripleError):
    """Odd-rep sign given for even n, or missing for odd n."""


class NotScalar(TripleError):
    """Product of all gammas is not a multiple of the identity."""


class ParityMismatch(TripleError):
    pass


class ParityRecipeMismatch(ParityMismatch):
    """Product recipe not legal for the parities of the two factors."""


class NoSuchJ(TripleError):
    """Requested charge conjugation does not exist in this odd dimension."""


class NotASignature(TripleError):
    """J, D, chi do not satisfy sign relations with a consistent sign."""


class NoTableEntryError(TripleError):
    """Product requested for a blank cell of the KO product tables."""

    def __init__(self, entry):
        super().__init__(str(entry))
        self.entry = entry


class AsymmetricSpectrum(TripleError):
    pass


class MissingKernelSplit(TripleError):
    pass


class DegreeZero(TripleError):
    pass


class CapExceeded(TripleError):
    pass


class WrongDimension(TripleError):
    pass


class ParseError(TripleError):
    pass


class InvariantViolation(TripleError):
    pass
