"""Exception hierarchy.

Every error a caller can trigger through bad input derives from
:class:`EquiangularError`; the CLI maps those to exit status 2.
"""


class EquiangularError(ValueError):
    """Base class for validation failures raised by this package."""


class InputError(EquiangularError):
    """Malformed argument (shape, non-finite entries, non-unit vector, ...)."""


class DimensionMismatch(InputError):
    pass


class NonConvergence(EquiangularError):
    """An iterative solver hit its iteration cap."""


class SingularMatrix(EquiangularError):
    pass


class AngleInfeasible(EquiangularError):
    """cos(theta) is at or below -1/(n-1): no n equiangular vectors exist."""


class DegenerateAngle(EquiangularError):
    """cos(theta) == 1, every vector would coincide."""


class AlphaOutOfRange(EquiangularError):
    pass


class NotEquiangular(EquiangularError):
    pass


class RankDeficient(EquiangularError):
    pass


class LinearlyDependent(RankDeficient):
    """Raised by the generator; ``column`` is the offending input column."""

    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"column {column} is linearly dependent on the previous columns")


class DimensionTooLarge(EquiangularError):
    pass


class NotSPD(EquiangularError):
    pass


class WrongSpectrumShape(EquiangularError):
    pass


class ZeroEigenvalue(EquiangularError):
    pass


class RootsNotReal(EquiangularError):
    """g(x) has non-real roots, so no real diagonal factor exists at this alpha."""

    def __init__(self, message, roots=None):
        self.roots = roots
        super().__init__(message)


class EigsNotDistinct(EquiangularError):
    pass


class SpectrumMismatch(EquiangularError):
    pass


class HypothesisViolated(EquiangularError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)
