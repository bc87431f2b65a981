"""Exception hierarchy. Every error is a ValueError so callers can catch broadly."""


class InfoDivError(ValueError):
    """Base class for all package errors."""


class NegativeMass(InfoDivError):
    """A probability entry is below -1e-12."""


class NotNormalized(InfoDivError):
    """Total probability mass differs from 1 by more than 1e-9."""


class EmptySample(InfoDivError):
    """No observations were supplied."""


class DegenerateEntropy(InfoDivError):
    """A quantity is undefined because an entropy is (numerically) zero."""


class WeightMismatch(InfoDivError):
    """Weights and child specs disagree in length, sign or total."""


class InvalidSpec(InfoDivError):
    """A complexity specification is malformed or out of range."""


class InvalidTheta(InfoDivError):
    """An entropy interval is invalid or unsupported for the requested constants."""


class InvalidGamma(InfoDivError):
    """Entropy ratio bounds are invalid."""


class UnsupportedKind(InfoDivError):
    """No constant is available for this complexity kind."""


class DomainViolation(InfoDivError):
    """Inputs fall outside the domain where a bound applies."""


class UnknownColumn(InfoDivError, KeyError):
    """A column name is not present in the dataset."""

    def __str__(self):
        return ValueError.__str__(self)


class NotARefinement(InfoDivError):
    """The coarse column is not a function of the fine column."""


class DataFormatError(InfoDivError):
    """Input data could not be parsed."""
