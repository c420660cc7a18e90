"""Exception types shared across the package."""


class QgvError(Exception):
    """Base class for all package errors."""


class ContractViolationError(QgvError, ValueError):
    """An operation was called with arguments violating its preconditions."""


class DimensionMismatchError(ContractViolationError):
    """Vectors of different dimension or metric index were combined."""


class SignatureError(QgvError):
    """A bilinear form does not have the signature an operation requires.

    Typically raised when an induced metric fails to be positive definite,
    i.e. the chart is not spacelike at the evaluation point.
    """


class NormalDegenerateError(QgvError):
    """The orthogonal complement of a tangent frame is not timelike."""


class DomainError(QgvError):
    """A finite-difference stencil would leave the map's domain box."""


class ConstraintError(QgvError):
    """A catalog entry's defining constraints fail on its grid."""


class DegenerateProfileError(QgvError):
    """A rotation profile left the validity region of its curvature formulas."""


class RegularityError(QgvError):
    """A curve has (numerically) vanishing speed and cannot be reparametrized."""


class JointDiagonalizationError(QgvError):
    """B and C failed to commute within tolerance; upstream numerics are bad."""


class EigenCrossingError(QgvError):
    """Angle branches could not be continued smoothly through a point."""


class ConfigError(QgvError):
    """Invalid run configuration."""


class UnknownSuiteError(ConfigError):
    """A suite name is not in the check registry."""


class ExprError(ConfigError):
    """A chart expression failed to parse or evaluate."""
