"""Exception hierarchy shared by all paramlp modules."""


class ParamLPError(Exception):
    """Base class for all package errors."""


class ScalarModeError(ParamLPError):
    """A scalar does not fit the requested arithmetic mode."""


class DimensionMismatchError(ParamLPError, ValueError):
    pass


class EmptyProblemError(ParamLPError, ValueError):
    pass


class InconsistentRowsError(ParamLPError):
    """Dependent rows of A carry incompatible right-hand sides (LP infeasible)."""


class SingularBasisError(ParamLPError):
    pass


class OrthogonalityError(ParamLPError, ValueError):
    """Rows that must be mutually orthogonal are not."""


class RankDeficientError(ParamLPError, ValueError):
    pass


class AnchorError(ParamLPError, ValueError):
    """The anchor vector d does not satisfy A d = b."""


class NoParametricDirectionError(ParamLPError, ValueError):
    """The construction leaves no free direction (r = 0)."""


class DomainError(ParamLPError, ValueError):
    """A parameter lies outside the projection interval of the map."""


class InternalInconsistencyError(ParamLPError):
    """A result contradicts a duality argument; indicates a bug or bad tolerances."""


class IterationLimitError(ParamLPError):
    """The simplex iteration limit was hit (suspected cycling)."""


class SizeGuardError(ParamLPError, ValueError):
    pass


class SchemaError(ParamLPError, ValueError):
    """Malformed JSON document."""


class UnverifiedReportError(ParamLPError, ValueError):
    pass


class InfeasibleError(ParamLPError):
    """The LP has no feasible point."""
