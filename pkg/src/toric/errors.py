"""Exception types raised by the toric package.

Everything derives from :class:`ToricError`, itself a :class:`ValueError`,
so callers that only care about "bad input" can catch ``ValueError``.
"""


class ToricError(ValueError):
    pass


class InvalidSizeError(ToricError):
    pass


class InvalidPairError(ToricError):
    pass


class InvalidTriangulationError(ToricError):
    pass


class SizeMismatchError(ToricError):
    pass


class AdmissibilityError(ToricError):
    """Raised for a tree weighting that fails parity or a triangle inequality.

    ``vertex`` is the first offending internal vertex of the tree.
    """

    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class GluingError(ToricError):
    pass


class StructureError(ToricError):
    """A structural theorem failed to hold (e.g. a non-binomial initial form)."""


class NotClosedError(ToricError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateInputError(ToricError):
    pass


class UndefinedBendError(ToricError):
    pass


class InfeasibleError(ToricError):
    pass


class NormalizationError(ToricError):
    pass
