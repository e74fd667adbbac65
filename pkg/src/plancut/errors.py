"""Shared exception types for plancut."""

from __future__ import annotations


class PlancutError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(PlancutError):
    """Malformed graph data: bad indices, bad rotation, unknown fields."""


class NotPlanarEmbedding(PlancutError):
    """Rotation system does not describe a genus-zero embedding."""


class DisconnectedGraph(PlancutError):
    """Operation requires a connected graph."""


class NotSimpleCut(PlancutError):
    """Edge set is not a simple cut (a side is empty or disconnected)."""


class NotSimpleCycle(PlancutError):
    """Edge sequence is not a simple cycle in the dual."""


class NoDemand(PlancutError):
    """Instance carries no positive demand."""


class PreconditionViolated(PlancutError):
    """A documented operation precondition does not hold."""


class CapExceeded(PlancutError):
    """A configured size cap was hit in strict mode."""


class CycleBudgetExceeded(PlancutError):
    """Simple cycle enumeration exceeded its budget."""


class MissingProfiles(PlancutError):
    """A partition node has no enumerated profile set."""


class NotAmenable(PlancutError):
    """Cycle fails the crossing bounds needed for an integral encoding."""


class InfeasibleModel(PlancutError):
    """LP is infeasible (typically: alpha above the reachable demand)."""


class UnboundedModel(PlancutError):
    """LP is unbounded; should not happen for well-formed models."""


class NumericalFailure(PlancutError):
    """Floating-point solve ended without a trustworthy status."""


class DegenerateMass(PlancutError):
    """Rounding reached a state whose conditional mass is inconsistent."""


class NotOnSimplex(PlancutError):
    """Probability four-tuple is negative or does not sum to one."""


class AllInfinite(PlancutError):
    """Every rounding sample produced a cut with zero separated demand."""


class OracleLimitExceeded(PlancutError):
    """Instance is larger than the brute-force oracle allows."""


class InvalidParams(PlancutError):
    """Instance generator parameters are out of range."""


class SuiteFailed(PlancutError):
    """A verification suite found a violated invariant."""
