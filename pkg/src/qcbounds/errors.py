"""
Exception hierarchy shared by the library and the command-line front end.

Every error carries an exit code so the CLI can map failures without
inspecting messages: 2 for configuration/domain problems, 3 for numeric ones.
"""


class QCBoundsError(Exception):
    """Base class for all qcbounds errors."""

    exit_code = 1


class ConfigError(QCBoundsError):
    """Case configuration is malformed or inconsistent."""

    exit_code = 2


class DomainError(QCBoundsError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""

    exit_code = 2


class InvalidMatrixError(DomainError):
    """Coefficient matrix is not symmetric positive with det = 1."""


class EllipticityViolationError(DomainError):
    """Dilatation modulus reached 1 (uniform ellipticity lost)."""


class SingularPointError(DomainError):
    """Evaluation requested at a point of the singular set."""


class ConstantUndefinedError(DomainError):
    """A constant's defining expression is not positive/finite there."""


class InvalidDomainError(DomainError):
    """Domain descriptor is degenerate."""


class NumericError(QCBoundsError):
    """A numerical procedure failed."""

    exit_code = 3


class MeshError(NumericError):
    pass


class AssemblyError(NumericError):
    pass


class SingularSystemError(NumericError):
    pass


class ConvergenceError(NumericError):
    pass


class QuadratureError(NumericError):
    pass
