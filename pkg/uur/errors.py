"""Exception hierarchy for the uncertainty-bounds toolkit."""


class UncertaintyError(ValueError):
    """Base class for every validation or numerical error raised by uur."""


# matrix-core
class NotSquare(UncertaintyError):
    pass


class NotHermitian(UncertaintyError):
    pass


class NoConvergence(UncertaintyError):
    pass


class NotPSD(UncertaintyError):
    pass


class TooLarge(UncertaintyError):
    pass


# quantum-model
class NotUnitary(UncertaintyError):
    pass


class NotNormalized(UncertaintyError):
    pass


class NotDensity(UncertaintyError):
    pass


class BlochOutOfBall(UncertaintyError):
    pass


class DimMismatch(UncertaintyError):
    pass


# bounds-engine
class IndexOutOfRange(UncertaintyError):
    pass


class InvalidPermutation(UncertaintyError):
    pass


class ExhaustiveTooLarge(UncertaintyError):
    pass


class InvalidPairSet(UncertaintyError):
    pass


class TooManyOperators(UncertaintyError):
    pass


class NumericalInconsistency(UncertaintyError):
    pass


# repro-cli
class ScenarioError(UncertaintyError):
    """Invalid scenario definition; `field` names the offending entry."""

    def __init__(self, field, message):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")
