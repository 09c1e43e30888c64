"""Exception types shared across the package."""


class SpectralTwinsError(Exception):
    """Base class for every error raised by this package."""


class GraphError(SpectralTwinsError, ValueError):
    pass


class LoopEdge(GraphError):
    pass


class NonPositiveWeight(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class BadVertexId(GraphError):
    pass


class NotThreeColored(GraphError):
    pass


class TooManyLabels(GraphError):
    pass


class NotGeneralizedLaplacian(GraphError):
    pass


class NumericalError(SpectralTwinsError, ArithmeticError):
    pass


class NoConvergence(NumericalError):
    pass


class SingularT(NumericalError):
    pass


class DimensionMismatch(SpectralTwinsError, ValueError):
    pass


class LengthMismatch(SpectralTwinsError, ValueError):
    pass


class ZeroEntry(SpectralTwinsError, ValueError):
    """An eigenvector has a (numerically) vanishing entry under strong counting.

    ``index`` is the 1-based eigenvalue index when raised from a sequence
    computation, ``vertices`` the 0-based offending vertices.
    """

    def __init__(self, message, index=None, vertices=()):
        super().__init__(message)
        self.index = index
        self.vertices = tuple(vertices)


class ZeroEigenvalue(SpectralTwinsError, ValueError):
    pass


class AtPole(NumericalError):
    """The edge ansatz is singular: ``sin(k L_e)`` (or a cos factor) vanishes."""

    def __init__(self, message, edges=()):
        super().__init__(message)
        self.edges = tuple(edges)


class EdgePole(AtPole):
    pass


class BadRange(SpectralTwinsError, ValueError):
    pass
