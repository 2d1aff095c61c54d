"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`FusionError`,
so callers (and the CLI) can catch the family with one clause.
"""


class FusionError(Exception):
    """Base class for all fusionkit errors."""


class ZeroSubspace(FusionError, ValueError):
    """All columns of a spanning set are numerically zero."""


class DimensionMismatch(FusionError, ValueError):
    """Objects live in ambient spaces of different dimension."""


class ShapeMismatch(FusionError, ValueError):
    """Array shapes or member counts do not conform."""


class DimMismatchPerMember(ShapeMismatch):
    """Paired members have different subspace dimensions."""


class NonpositiveWeight(FusionError, ValueError):
    """A fusion weight is zero, negative or not finite."""


class NotAFrame(FusionError):
    """The system does not satisfy a lower frame bound."""


class NotFBasis(FusionError):
    """The system is not a fusion basis (no unique decomposition)."""


class NotMinimal(FusionError):
    """Some member meets the span of the others nontrivially."""


class NotOrthonormalSystem(FusionError):
    """Members are not mutually orthogonal."""


class NotRiesz(FusionError):
    """A Riesz certificate was required but the system is not Riesz."""


class NotBiorthogonal(FusionError):
    """An operator family fails the biorthogonality relations."""


class SingularOperator(FusionError):
    """An operator required to be invertible is numerically singular."""


class TooManyMembers(FusionError):
    """Exhaustive subset enumeration refused because of the member cap."""


class BadParams(FusionError, ValueError):
    """Generator parameters are inconsistent."""


class MalformedFile(FusionError, ValueError):
    """Input file does not follow the schema.

    Parameters
    ----------
    message : str
        What is wrong.
    locus : str, optional
        Field path (``subspaces[1].basis[0]``) or ``line N, column M``.
    """

    def __init__(self, message, locus=None):
        self.locus = locus
        if locus:
            message = f"{locus}: {message}"
        super().__init__(message)


class InternalConsistencyError(FusionError, RuntimeError):
    """Two independent routes to the same answer disagree."""
