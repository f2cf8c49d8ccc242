"""Exception hierarchy shared by every module."""


class EaescError(Exception):
    """Base class for all library errors."""


class ComputationError(EaescError):
    """A construction or verification could not be completed."""


class NotFredholm(ComputationError):
    pass


class ShapeMismatch(ComputationError):
    pass


class BetaMismatch(ComputationError):
    pass


class NotRepresentable(ComputationError):
    """The requested object leaves the exactly computable operator class."""


class IndexObstruction(ComputationError):
    pass


class ZeroIndexInput(ComputationError):
    pass


class IndexMismatch(ComputationError):
    pass


class NotEAE(ComputationError):
    pass


class NotInvertible(ComputationError):
    pass


class DependentInput(ComputationError):
    pass


class BackendDisagreement(ComputationError):
    """The numeric backend gave different answers at its two window sizes."""


class SchemaError(EaescError):
    """A scenario file does not match the expected structure."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)
