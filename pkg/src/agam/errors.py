class AgamError(Exception):
    """Base class of every error raised by this package."""


class SingularPositionError(AgamError, ValueError):
    """A state sits on (or numerically at) one of the primaries."""


class DomainError(AgamError, ValueError):
    """An argument lies outside the domain of a model."""


class LiftToDragRangeError(DomainError):
    """The requested |L/D| cannot be reached on the monotone branch of the
    Newtonian fit."""


class DegenerateLiftError(AgamError, ValueError):
    """The lift direction is undefined (no flow, or flow along the radius)."""


class NoSignChangeError(AgamError, ValueError):
    """An event bracket does not contain a sign change."""


class MissingSoiCrossingError(AgamError, ValueError):
    """The trajectory never entered the sphere of influence of the planet."""


class UnknownMetricError(AgamError, ValueError):
    pass


class ConfigError(AgamError, ValueError):
    """Invalid configuration document.

    Attributes:
        field: JSON path or field name of the offending value, if known.
        line: Line of the syntax error, if the document could not be parsed.
        column: Column of the syntax error, if the document could not be parsed.
    """

    def __init__(
        self,
        message: str,
        field: str | None = None,
        line: int | None = None,
        column: int | None = None,
    ):
        location = []
        if field is not None:
            location.append(f"field '{field}'")
        if line is not None:
            location.append(f"line {line}, column {column}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.field = field
        self.line = line
        self.column = column


class IntegrationError(AgamError, RuntimeError):
    """The propagation could not be carried to its end."""


class StepUnderflowError(IntegrationError):
    pass


class MaxStepsExceededError(IntegrationError):
    pass
