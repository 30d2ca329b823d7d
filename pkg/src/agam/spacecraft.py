"""Spacecraft aerodynamic model.

In continuum flow the coefficients follow a Newtonian-flow fit of a lifting body,
    C_L = k sin^2(a) cos(a),    C_D = C_D0 + k sin^3(a),
valid for 0 <= a <= 20 deg. In free-molecular flow the drag coefficient is constant
and there is no lift. The transition regime bridges the drag coefficient between
the two, still without lift.
"""

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Any, Dict, List, NamedTuple, Tuple

from scipy.optimize import brentq, minimize_scalar

from agam.errors import ConfigError, DomainError, LiftToDragRangeError
from agam.flow_regime import (
    CONTINUUM_MAX_KN,
    FREE_MOLECULAR_MIN_KN,
    FlowRegime,
    classify_regime,
)

# Upper validity bound of the Newtonian fit.
FIT_MAX_AOA_DEG = 20.0

_AOA_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SpacecraftModel:
    """Aerodynamic constants of the spacecraft.

    Attributes:
        area_to_mass_m2_kg: Reference area over mass, A/m.
        reference_length_m: Characteristic length l of the Knudsen number.
        cd_free_molecular: Drag coefficient in free-molecular flow.
        newtonian_lift_constant: k of the Newtonian fit.
        newtonian_zero_drag: C_D0 of the Newtonian fit.
        max_aoa_deg: Largest angle of attack the vehicle flies.
    """

    area_to_mass_m2_kg: float = 0.02
    reference_length_m: float = 5.0
    cd_free_molecular: float = 1.0
    newtonian_lift_constant: float = 3.49
    newtonian_zero_drag: float = 0.046
    max_aoa_deg: float = 17.0

    def __post_init__(self):
        for name in (
            "area_to_mass_m2_kg",
            "reference_length_m",
            "cd_free_molecular",
            "newtonian_zero_drag",
        ):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ConfigError(f"{name} must be strictly positive: {value}.", name)
        k = self.newtonian_lift_constant
        if not (math.isfinite(k) and k >= 0.0):
            raise ConfigError(
                f"newtonian_lift_constant must be non-negative: {k}.",
                "newtonian_lift_constant",
            )
        if not 0.0 < self.max_aoa_deg <= FIT_MAX_AOA_DEG:
            raise ConfigError(
                f"max_aoa_deg must be in (0, {FIT_MAX_AOA_DEG}]: {self.max_aoa_deg}.",
                "max_aoa_deg",
            )

    @property
    def max_aoa_rad(self) -> float:
        return math.radians(self.max_aoa_deg)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class CoefficientRow(NamedTuple):
    aoa_deg: float
    lift_coefficient: float
    drag_coefficient: float
    lift_to_drag: float


def _check_aoa(aoa_rad: float, craft: SpacecraftModel):
    if not -_AOA_TOLERANCE <= aoa_rad <= craft.max_aoa_rad + _AOA_TOLERANCE:
        raise DomainError(
            f"Angle of attack {math.degrees(aoa_rad)} deg outside "
            f"[0, {craft.max_aoa_deg}] deg."
        )


def continuum_coefficients(
    aoa_rad: float, craft: SpacecraftModel
) -> Tuple[float, float]:
    """(C_L, C_D) of the Newtonian fit.

    Raises:
        DomainError: If the angle of attack is outside [0, max_aoa].
    """
    _check_aoa(aoa_rad, craft)
    s = math.sin(aoa_rad)
    k = craft.newtonian_lift_constant
    lift = k * s * s * math.cos(aoa_rad)
    drag = craft.newtonian_zero_drag + k * s**3
    return lift, drag


def lift_to_drag(aoa_rad: float, craft: SpacecraftModel) -> float:
    lift, drag = continuum_coefficients(aoa_rad, craft)
    return lift / drag


@lru_cache(maxsize=32)
def max_lift_to_drag(craft: SpacecraftModel) -> Tuple[float, float]:
    """Peak of L/D over [0, max_aoa], as (aoa_rad, L/D).

    L/D is strictly increasing from 0 up to this angle, which bounds the branch
    used to invert the fit.
    """
    upper = craft.max_aoa_rad
    result = minimize_scalar(
        lambda a: -lift_to_drag(a, craft),
        bounds=(0.0, upper),
        method="bounded",
        options={"xatol": 1e-12},
    )
    best_aoa = float(result.x)
    best_ld = lift_to_drag(best_aoa, craft)
    if lift_to_drag(upper, craft) >= best_ld:
        best_aoa, best_ld = upper, lift_to_drag(upper, craft)
    return best_aoa, best_ld


def ld_to_aoa(ld_abs: float, craft: SpacecraftModel) -> float:
    """Angle of attack (rad) flying a given |L/D| on the monotone branch.

    Raises:
        DomainError: If ld_abs is negative.
        LiftToDragRangeError: If ld_abs exceeds the achievable maximum.
    """
    if ld_abs < 0.0:
        raise DomainError(f"|L/D| must be non-negative, got {ld_abs}.")
    if ld_abs == 0.0:
        return 0.0

    peak_aoa, peak_ld = max_lift_to_drag(craft)
    if ld_abs > peak_ld:
        raise LiftToDragRangeError(
            f"|L/D| = {ld_abs} exceeds the achievable maximum {peak_ld:.6f} "
            f"(at {math.degrees(peak_aoa):.3f} deg)."
        )
    if ld_abs == peak_ld:
        return peak_aoa

    return brentq(
        lambda a: lift_to_drag(a, craft) - ld_abs,
        0.0,
        peak_aoa,
        xtol=1e-15,
        maxiter=200,
    )


def bridge_factor(kn: float) -> float:
    """Weight of the free-molecular value in the transition regime.

    B = sin^2(pi/2 * (log10(Kn) + 2) / 3): 0 at the continuum boundary (Kn = 0.01)
    and 1 at the free-molecular boundary (Kn = 10), monotone in between.
    """
    if kn <= CONTINUUM_MAX_KN:
        return 0.0
    if kn >= FREE_MOLECULAR_MIN_KN:
        return 1.0
    span = math.log10(FREE_MOLECULAR_MIN_KN) - math.log10(CONTINUUM_MAX_KN)
    fraction = (math.log10(kn) - math.log10(CONTINUUM_MAX_KN)) / span
    return math.sin(0.5 * math.pi * fraction) ** 2


def aero_coefficients(
    kn: float, aoa_rad: float, craft: SpacecraftModel
) -> Tuple[float, float]:
    """(C_L, C_D) for the flow regime of kn. The lift is zero outside continuum."""
    regime = classify_regime(kn).regime
    match regime:
        case FlowRegime.FREE_MOLECULAR:
            return 0.0, craft.cd_free_molecular
        case FlowRegime.CONTINUUM:
            return continuum_coefficients(aoa_rad, craft)
        case FlowRegime.TRANSITION:
            _, cd_continuum = continuum_coefficients(aoa_rad, craft)
            weight = bridge_factor(kn)
            return 0.0, cd_continuum + (craft.cd_free_molecular - cd_continuum) * weight
        case _:
            raise ValueError("Unknown FlowRegime.")


def drag_coefficient(kn: float, aoa_rad: float, craft: SpacecraftModel) -> float:
    return aero_coefficients(kn, aoa_rad, craft)[1]


def coefficient_table(
    craft: SpacecraftModel, aoa_step_deg: float = 1.0
) -> List[CoefficientRow]:
    if aoa_step_deg <= 0.0:
        raise DomainError(f"Angle step must be positive, got {aoa_step_deg}.")
    rows = []
    n_steps = int(math.floor(craft.max_aoa_deg / aoa_step_deg + 1e-9))
    for i in range(n_steps + 1):
        aoa_deg = i * aoa_step_deg
        lift, drag = continuum_coefficients(math.radians(aoa_deg), craft)
        rows.append(CoefficientRow(aoa_deg, lift, drag, lift / drag))
    return rows
