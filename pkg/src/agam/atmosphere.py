"""Isothermal exponential atmosphere and the gas-kinetic Knudsen number."""

import math
from typing import Iterable, List, NamedTuple, Tuple

from scipy.constants import Avogadro

from agam.errors import DomainError
from agam.flow_regime import (
    ANALYSIS_BAND_MAX_KN,
    ANALYSIS_BAND_MIN_KN,
    FlowRegime,
    classify_regime,
)
from agam.planet import PlanetModel
from agam.spacecraft import SpacecraftModel


class ProfileRow(NamedTuple):
    altitude_km: float
    density_kg_m3: float
    knudsen: float
    regime: FlowRegime
    in_analysis_band: bool


def density(altitude_km: float, planet: PlanetModel) -> float:
    """rho = rho_0 exp(-h / H), in kg/m^3. Negative altitudes are allowed."""
    return planet.surface_density_kg_m3 * math.exp(
        -altitude_km / planet.scale_height_km
    )


def _mean_free_path_density_product(planet: PlanetModel) -> float:
    """lambda * rho = M / (sqrt(2) pi d^2 N_A), in kg/m^2."""
    return planet.molecular_weight_kg_mol / (
        math.sqrt(2.0) * math.pi * planet.kinetic_diameter_m**2 * Avogadro
    )


def mean_free_path(altitude_km: float, planet: PlanetModel) -> float:
    """Mean free path of the gas molecules, in metres."""
    rho = density(altitude_km, planet)
    if rho <= 0.0:
        return math.inf
    return _mean_free_path_density_product(planet) / rho


def knudsen(altitude_km: float, planet: PlanetModel, craft: SpacecraftModel) -> float:
    """Kn = lambda / l with l the reference length of the spacecraft."""
    return mean_free_path(altitude_km, planet) / craft.reference_length_m


def altitude_at_knudsen(
    kn: float, planet: PlanetModel, craft: SpacecraftModel
) -> float:
    """Closed-form inverse of knudsen(): h = -H ln(rho(Kn) / rho_0)."""
    if kn <= 0.0:
        raise DomainError(f"Knudsen number must be positive, got {kn}.")
    if not planet.has_atmosphere:
        raise DomainError(f"{planet.name} has no atmosphere.")
    rho = _mean_free_path_density_product(planet) / (kn * craft.reference_length_m)
    return -planet.scale_height_km * math.log(rho / planet.surface_density_kg_m3)


def band_altitudes(planet: PlanetModel, craft: SpacecraftModel) -> Tuple[float, float]:
    """Altitudes (km) bounding the analysis band: (h at Kn=1e-3, h at Kn=1e-2)."""
    return (
        altitude_at_knudsen(ANALYSIS_BAND_MIN_KN, planet, craft),
        altitude_at_knudsen(ANALYSIS_BAND_MAX_KN, planet, craft),
    )


def atmosphere_profile(
    planet: PlanetModel, craft: SpacecraftModel, altitudes_km: Iterable[float]
) -> List[ProfileRow]:
    rows = []
    for altitude in altitudes_km:
        kn = knudsen(altitude, planet, craft)
        flow = classify_regime(kn)
        rows.append(
            ProfileRow(
                altitude,
                density(altitude, planet),
                kn,
                flow.regime,
                flow.in_analysis_band,
            )
        )
    return rows
