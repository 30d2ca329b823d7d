from enum import Enum


class ManeuverKind(Enum):
    GAM = "gam"
    AGAM = "agam"
    PAGAM = "pagam"

    @property
    def flies_in_atmosphere(self) -> bool:
        return self is not ManeuverKind.GAM


class PagamThrust(Enum):
    """Where the thrust of a powered maneuver cancels the drag."""

    ALL_REGIMES = "all_regimes"
    CONTINUUM_ONLY = "continuum_only"


class VelocitySense(Enum):
    """Rotation taking the pericenter radial direction to the velocity."""

    COUNTERCLOCKWISE = "+90"
    CLOCKWISE = "-90"

    @property
    def angle_deg(self) -> float:
        return 90.0 if self is VelocitySense.COUNTERCLOCKWISE else -90.0
