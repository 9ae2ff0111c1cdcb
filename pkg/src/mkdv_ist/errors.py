"""Exception types.

Two families matter to callers: ``InputError`` (bad data or arguments, CLI
exit code 2) and ``NumericalError`` (a computation that cannot be trusted,
CLI exit code 3).  The narrower classes exist so tests can assert the
specific failure mode.
"""


class InputError(ValueError):
    pass


class NumericalError(ArithmeticError):
    pass


class GammaPoleError(InputError):
    pass


class PoleOnEndpointError(InputError):
    pass


class StepUnderflowError(NumericalError):
    pass


class NonDecayedPotentialError(InputError):
    pass


class RealAxisZeroError(NumericalError):
    pass


class WindingError(NumericalError):
    """Argument-principle count did not round cleanly to an integer."""


class MultipleZeroError(NumericalError):
    pass


class DependenceResidualError(NumericalError):
    pass


class SingularSystemError(NumericalError):
    pass


class PoleProximityError(InputError):
    pass


class BranchCutError(InputError):
    pass


class CoverageError(InputError):
    pass


class TieError(InputError):
    """A frame velocity coincides with a mode velocity (non-generic data)."""


class RegionMismatchError(InputError):
    pass


class BlowUpError(NumericalError):
    pass


class CFLError(InputError):
    pass


class SupportOverflowError(InputError):
    pass
