"""Exception types shared across the package."""


class NonPositiveHbar(ValueError):
    pass


class NonPositiveWidth(ValueError):
    pass


class AmbiguouslyDegenerate(ValueError):
    """hbar^2 - calB*theta is nonzero but inside the classification band."""


class DegenerateLabel(ValueError):
    """Group labels with rho*alpha = 0 do not define deformation parameters."""


class DegenerateParamsError(ValueError):
    """Operation defined only for generic parameters was given degenerate ones."""


class ChartMismatch(ValueError):
    pass


# symbols-module alias for the same condition
WrongChart = ChartMismatch


class UnknownVariable(ValueError):
    pass


class SymbolSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DimensionMismatch(ValueError):
    pass


class BadNodeCount(ValueError):
    pass


class BadCutoff(ValueError):
    pass


class BasisMismatch(ValueError):
    pass


class KindMismatch(ValueError):
    pass


class NonDiracMeasure(ValueError):
    pass


class NotExpandable(ValueError):
    pass


class CutoffTooSmall(ValueError):
    pass


class VariantParamsMismatch(ValueError):
    pass
