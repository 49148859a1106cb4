"""Exception types raised across symucc."""


class SymuccError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class ParseError(SymuccError, ValueError):
    pass


class UnsupportedReference(SymuccError):
    """Open-shell or otherwise non closed-shell input."""


class ContractViolation(SymuccError, ValueError):
    pass


class DegenerateRotation(SymuccError, ValueError):
    """Rotation about the identity Pauli string (a global phase)."""


class CapacityError(SymuccError):
    pass


class OptimizerDiverged(SymuccError):
    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)
