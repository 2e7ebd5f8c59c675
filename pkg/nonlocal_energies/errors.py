"""Exception types raised by nonlocal_energies.

The command-line front end maps these onto exit codes, so every failure a
caller can act on has its own class.
"""


class NonlocalEnergiesError(Exception):
    """Base class for all package errors."""


class DomainError(NonlocalEnergiesError, ValueError):
    """A numeric parameter lies outside the domain of the operation."""


class PreconditionError(NonlocalEnergiesError, ValueError):
    """Input is well typed but violates an operation precondition."""


class MassMismatchError(DomainError):
    """Two measures that must carry equal mass do not."""


class BoundViolation(NonlocalEnergiesError, RuntimeError):
    """An asserted inequality failed.

    Args:
        message: Human readable description naming the failing case
        case: Mapping with the full case dump (parameters and computed sides)
    """

    def __init__(self, message: str, case: dict | None = None):
        super().__init__(message)
        self.case: dict = dict(case or {})


class ConvergenceError(NonlocalEnergiesError, RuntimeError):
    """An optimizer or adaptive quadrature did not reach its tolerance.

    Args:
        message: Human readable description
        diagnostics: Mapping with the best value found, iterations used, etc.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics: dict = dict(diagnostics or {})
