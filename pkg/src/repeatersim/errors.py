"""Exception types shared across the package."""


class RepeaterError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(RepeaterError):
    """An operand has a shape or dimension the operation cannot accept."""


class NotHermitian(RepeaterError):
    """A matrix that must be Hermitian is not, beyond tolerance."""


class ZeroProbabilityBranch(RepeaterError):
    """A projective-measurement branch has vanishing probability."""


class DegenerateFormulaPoint(RepeaterError):
    """A closed-form observable is 0/0 at this parameter point."""


class CutoffInsufficient(RepeaterError):
    """Population reached the Fock-space truncation boundary."""


class EngineMismatch(RepeaterError):
    """The closed-form and pipeline engines disagree beyond tolerance."""


class ConfigInvalid(RepeaterError):
    """A scan or oracle configuration failed validation."""
