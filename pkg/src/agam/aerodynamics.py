import math
from typing import NamedTuple

from agam.atmosphere import density, mean_free_path
from agam.crtbp import Vector2
from agam.errors import DegenerateLiftError
from agam.flow_regime import FlowRegime, classify_regime
from agam.maneuver_kind import ManeuverKind, PagamThrust
from agam.planet import PlanetModel
from agam.rotating_state import RotatingState
from agam.spacecraft import SpacecraftModel, aero_coefficients, ld_to_aoa

# Below this density (kg/m^3) the aerodynamic acceleration is dropped: it is under
# the integration tolerance.
DENSITY_CUTOFF_KG_M3 = 1e-15

_DEGENERATE_SPEED_VU = 1e-12
_DEGENERATE_ALIGNMENT = 1e-12


class AeroAcceleration(NamedTuple):
    """Perturbation of one state.

    Values:
        perturbation: Net aerodynamic (and thrust) acceleration, DU/TU^2,
                      rotating axes.
        drag: Magnitude of the drag acceleration, DU/TU^2.
        thrust: Magnitude of the thrust cancelling the drag, DU/TU^2. Zero
                except for powered maneuvers.
    """

    perturbation: Vector2
    drag: float
    thrust: float


_ZERO = AeroAcceleration((0.0, 0.0), 0.0, 0.0)


class AeroModel:
    """Aerodynamic perturbation of one maneuver.

    The angle of attack and the bank are fixed along the trajectory: a single
    signed L/D sets both, |L/D| through the Newtonian fit and the sign through the
    bank (0 deg lift-up for positive, 180 deg lift-down for negative). Everything
    that does not depend on the state is computed once here.

    The atmosphere is static in the rotating frame, so the free-stream velocity is
    the rotating-frame velocity of the spacecraft.
    """

    def __init__(
        self,
        planet: PlanetModel,
        craft: SpacecraftModel,
        kind: ManeuverKind,
        signed_ld: float,
        thrust_mode: PagamThrust = PagamThrust.ALL_REGIMES,
    ):
        self.planet = planet
        self.craft = craft
        self.kind = kind
        self.signed_ld = signed_ld
        self.thrust_mode = thrust_mode

        self.aoa_rad = ld_to_aoa(abs(signed_ld), craft)
        self.lift_sign = 1.0 if signed_ld >= 0.0 else -1.0

        self._mu = planet.mass_ratio
        self._du_km = planet.du_km
        self._vu_m_s = planet.vu_km_s * 1000.0
        self._accel_unit = planet.accel_unit_m_s2
        if planet.has_atmosphere:
            self._cutoff_altitude_km = planet.scale_height_km * math.log(
                planet.surface_density_kg_m3 / DENSITY_CUTOFF_KG_M3
            )
        else:
            self._cutoff_altitude_km = -math.inf

    def acceleration(self, state: RotatingState) -> AeroAcceleration:
        return self.acceleration_at(state.x, state.y, state.vx, state.vy)

    def acceleration_at(
        self, x: float, y: float, vx: float, vy: float
    ) -> AeroAcceleration:
        """Acceleration for the raw state components.

        Raises:
            DegenerateLiftError: If lift is needed and its direction is undefined.
        """
        if self.kind is ManeuverKind.GAM:
            return _ZERO

        dx = x - 1.0 + self._mu
        r2 = math.hypot(dx, y)
        altitude_km = r2 * self._du_km - self.planet.radius_km
        if altitude_km > self._cutoff_altitude_km:
            return _ZERO

        rho = density(altitude_km, self.planet)
        speed = math.hypot(vx, vy)
        if speed < _DEGENERATE_SPEED_VU:
            raise DegenerateLiftError(f"No free-stream velocity at ({x}, {y}).")

        kn = mean_free_path(altitude_km, self.planet) / self.craft.reference_length_m
        lift_coefficient, drag_coefficient = aero_coefficients(
            kn, self.aoa_rad, self.craft
        )

        speed_m_s = speed * self._vu_m_s
        drag_m_s2 = (
            0.5 * drag_coefficient * self.craft.area_to_mass_m2_kg * rho * speed_m_s**2
        )
        drag = drag_m_s2 / self._accel_unit
        ux, uy = vx / speed, vy / speed

        if self.kind is ManeuverKind.PAGAM and (
            self.thrust_mode is PagamThrust.ALL_REGIMES
            or classify_regime(kn).regime is FlowRegime.CONTINUUM
        ):
            thrust = drag
            ax, ay = 0.0, 0.0
        else:
            thrust = 0.0
            ax, ay = -drag * ux, -drag * uy

        if lift_coefficient > 0.0:
            lift = drag * lift_coefficient / drag_coefficient
            # Normal to the flow, on the side of the local vertical for lift-up.
            nx, ny = -uy, ux
            alignment = (nx * dx + ny * y) / r2
            if abs(alignment) < _DEGENERATE_ALIGNMENT:
                raise DegenerateLiftError(
                    f"Free-stream velocity is radial at ({x}, {y}), "
                    "the lift direction is undefined."
                )
            side = self.lift_sign if alignment > 0.0 else -self.lift_sign
            ax += side * lift * nx
            ay += side * lift * ny

        return AeroAcceleration((ax, ay), drag, thrust)


def aero_acceleration(
    state: RotatingState,
    planet: PlanetModel,
    craft: SpacecraftModel,
    kind: ManeuverKind,
    signed_ld: float,
    thrust_mode: PagamThrust = PagamThrust.ALL_REGIMES,
) -> AeroAcceleration:
    """Aerodynamic perturbation of a single state.

    Drag is 1/2 C_D (A/m) rho V^2 against the free-stream velocity; lift is
    drag * C_L/C_D, orthogonal to the flow, pointing away from the planet for a
    positive signed_ld. A gravity assist has no perturbation; a powered maneuver
    cancels its drag with thrust (the drag magnitude is still reported).
    """
    return AeroModel(planet, craft, kind, signed_ld, thrust_mode).acceleration(state)
