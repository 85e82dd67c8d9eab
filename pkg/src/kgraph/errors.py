"""Exception hierarchy.

Every error raised on bad input derives from :class:`KGraphError`; the CLI maps
the subclasses onto exit codes through the ``exit_code`` attribute.
"""

from __future__ import annotations


class KGraphError(Exception):
    """Base class for all package errors."""

    exit_code = 1


# --- input / validation -----------------------------------------------------


class ValidationError(KGraphError):
    """A skeleton or set of factorisation rules is not a valid k-graph."""


class MalformedSkeleton(ValidationError):
    pass


class MissingColorEdge(ValidationError):
    def __init__(self, vertex, color, direction):
        self.vertex, self.color, self.direction = vertex, color, direction
        super().__init__(
            f"vertex {vertex!r} has no {direction} edge of color {color}"
        )


class NotStronglyConnected(ValidationError):
    def __init__(self, start, unreachable):
        self.pair = (start, unreachable)
        super().__init__(f"no path between {start!r} and {unreachable!r}")


class InvalidSquare(ValidationError):
    """A square entry refers to unknown edges or has mismatched endpoints."""


class NonBijectiveSquares(ValidationError):
    def __init__(self, pair, witness, reason="not a bijection"):
        self.pair, self.witness = pair, witness
        super().__init__(f"squares for colors {pair} {reason}: {witness}")


class CubeFailure(ValidationError):
    def __init__(self, triple, first, second):
        self.triple = triple
        super().__init__(
            f"cube condition fails on {triple}: {first} != {second}"
        )


class ParseError(KGraphError):
    def __init__(self, location, message):
        self.location = location
        super().__init__(f"{location}: {message}")


class NotFiniteIndex(KGraphError):
    pass


class InvalidPermutationRules(KGraphError):
    pass


class SearchSpaceTooLarge(KGraphError):
    def __init__(self, size, limit):
        self.size, self.limit = size, limit
        super().__init__(f"{size} candidate rule sets exceed the limit {limit}")


# --- path algebra -----------------------------------------------------------


class NotComposable(KGraphError):
    pass


class OutOfRange(KGraphError):
    pass


class SourceMismatch(KGraphError):
    pass


class NotAPeriod(KGraphError):
    pass


class VertexNotInClass(KGraphError):
    pass


# --- numerics / search ------------------------------------------------------


class PrecisionNotReached(KGraphError):
    exit_code = 2

    def __init__(self, max_iterations, gap):
        self.max_iterations, self.gap = max_iterations, gap
        super().__init__(
            f"power iteration did not converge in {max_iterations} steps "
            f"(bracket width {gap})"
        )


class InconclusivePrecision(KGraphError):
    exit_code = 2


class SearchExhausted(KGraphError):
    exit_code = 2

    def __init__(self, bound, diagnostics):
        self.bound, self.diagnostics = bound, diagnostics
        super().__init__(f"no positive period within bound {bound}: {diagnostics}")


class SubcriticalParameters(KGraphError):
    pass


class SimplexViolation(KGraphError):
    pass


class NoKMSState(KGraphError):
    pass


# --- internal consistency ---------------------------------------------------


class InternalInconsistency(KGraphError):
    """A computed object breaks a structural identity; indicates a bug."""

    exit_code = 3


class EigenvectorVerificationFailed(InternalInconsistency):
    def __init__(self, color, residual):
        self.color, self.residual = color, residual
        super().__init__(f"common eigenvector fails for color {color}: residual {residual}")


class BlockNotPositive(InternalInconsistency):
    pass
