import math
from dataclasses import dataclass, field

from agam.errors import ConfigError, DomainError, LiftToDragRangeError
from agam.integrator_settings import IntegratorSettings
from agam.maneuver_kind import ManeuverKind, PagamThrust, VelocitySense
from agam.planet import PlanetModel
from agam.spacecraft import SpacecraftModel, ld_to_aoa, lift_to_drag

DEFAULT_PERICENTER_SPEED_VU = 0.5

# Bank angles flown: lift-up and inverted flight.
LIFT_UP_BANK_DEG = 0.0
LIFT_DOWN_BANK_DEG = 180.0


@dataclass(frozen=True)
class ManeuverConfig:
    """Everything needed to fly one swing-by.

    Attributes:
        planet: Secondary body, sets the canonical units.
        craft: Aerodynamic model of the spacecraft.
        kind: GAM, AGAM or PAGAM.
        psi_deg: Approach angle of the projected pericenter, counter-clockwise
                 from the Sun->planet direction.
        pericenter_altitude_km: Projected pericenter altitude. Values below the
                                analysis band are allowed and flagged later.
        pericenter_speed_vu: Speed at the projected pericenter, rotating frame.
        signed_ld: L/D flown during the whole passage, negative for inverted
                   flight. Ignored by GAM.
        velocity_sense: Rotation of the radial direction giving the pericenter
                        velocity.
        integrator: Propagation settings.
        pagam_thrust: Regimes where a powered maneuver cancels the drag.
        record_samples: Keep the forward-leg step points in the result.
    """

    planet: PlanetModel
    kind: ManeuverKind
    psi_deg: float
    pericenter_altitude_km: float
    signed_ld: float = 0.0
    craft: SpacecraftModel = field(default_factory=SpacecraftModel)
    pericenter_speed_vu: float = DEFAULT_PERICENTER_SPEED_VU
    velocity_sense: VelocitySense = VelocitySense.COUNTERCLOCKWISE
    integrator: IntegratorSettings = field(default_factory=IntegratorSettings)
    pagam_thrust: PagamThrust = PagamThrust.ALL_REGIMES
    record_samples: bool = True

    def __post_init__(self):
        for name in ("psi_deg", "pericenter_altitude_km", "signed_ld"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} is not finite: {value}.", name)
        speed = self.pericenter_speed_vu
        if not (math.isfinite(speed) and speed > 0.0):
            raise ConfigError(
                f"Pericenter speed must be strictly positive: {speed}.",
                "pericenter_speed_vu",
            )
        if self.pericenter_altitude_km <= -self.planet.radius_km:
            raise ConfigError(
                f"Pericenter altitude {self.pericenter_altitude_km} km is below the "
                f"centre of {self.planet.name}.",
                "pericenter_altitude_km",
            )
        if self.kind.flies_in_atmosphere:
            try:
                ld_to_aoa(abs(self.signed_ld), self.craft)
            except LiftToDragRangeError as e:
                raise ConfigError(str(e), "signed_ld") from e

    @property
    def aoa_deg(self) -> float:
        return math.degrees(ld_to_aoa(abs(self.signed_ld), self.craft))

    @property
    def bank_deg(self) -> float:
        return LIFT_UP_BANK_DEG if self.signed_ld >= 0.0 else LIFT_DOWN_BANK_DEG

    @property
    def pericenter_radius_du(self) -> float:
        return (self.planet.radius_km + self.pericenter_altitude_km) / self.planet.du_km


def signed_ld_from_attitude(
    aoa_deg: float, bank_deg: float, craft: SpacecraftModel
) -> float:
    """Signed L/D of a fixed attitude: |L/D| from the continuum fit at aoa_deg,
    negative for a 180 deg bank.

    Raises:
        ConfigError: If the bank is neither 0 nor 180 deg, or the angle of attack is
                     outside the fit domain.
    """
    if bank_deg not in (LIFT_UP_BANK_DEG, LIFT_DOWN_BANK_DEG):
        raise ConfigError(
            f"Bank angle must be {LIFT_UP_BANK_DEG:g} or {LIFT_DOWN_BANK_DEG:g} deg, "
            f"got {bank_deg}.",
            "bank_deg",
        )
    try:
        ld = lift_to_drag(math.radians(aoa_deg), craft)
    except DomainError as e:
        raise ConfigError(str(e), "aoa_deg") from e
    return ld if bank_deg == LIFT_UP_BANK_DEG else -ld
