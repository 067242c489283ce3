"""Exception types shared across the package."""


class SummabilityError(Exception):
    """Base class for all norsum errors."""


class InvalidSequence(SummabilityError):
    """A determining sequence violates p_n >= 0 or P_n > 0."""


class RangeExceeded(SummabilityError):
    """A sequence value or partial sum left the range representable in binary64."""


class PointOutsideDisk(SummabilityError):
    """A point expected in the closed unit disk lies outside it."""


class QuadratureNotConverged(SummabilityError):
    """Successive quadrature refinements did not agree within tolerance."""


class ConvergenceFailure(SummabilityError):
    """Power iteration hit its iteration cap before the Rayleigh quotient settled."""


class BoundInapplicable(SummabilityError):
    """A closed-form norm bound was requested outside its hypotheses."""


class ReferenceTooShort(SummabilityError):
    """The reference truncation is too short for the requested operator index."""


class DegenerateFit(SummabilityError):
    """Rate fitting received points that do not determine a slope."""


class ConfigError(SummabilityError):
    """An experiment configuration is malformed or inconsistent."""
