import json
import math
from dataclasses import asdict, dataclass, fields
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Dict

import jsonschema

from agam.errors import ConfigError

type PlanetId = str
type PlanetCatalog = Dict[PlanetId, "PlanetModel"]


@dataclass(frozen=True)
class PlanetModel:
    """Secondary body of the Sun-planet system, with its atmosphere.

    The canonical units of a system are fixed by its planet: 1 DU is the planet's
    semi-major axis, 1 TU is its orbital period over 2*pi, and the mass unit makes
    m_sun + m_planet = 1. The gravitational parameter of the planet is then the mass
    ratio itself.

    Attributes:
        name: Identifier of the planet in the catalog.
        mass_ratio: mu = m_planet / (m_sun + m_planet).
        semi_major_axis_km: Orbit radius, defines 1 DU.
        orbital_period_s: Sidereal period, defines 1 TU = period / 2pi.
        radius_km: Mean radius, reference of the altitudes.
        surface_density_kg_m3: Density at zero altitude of the isothermal
                               atmosphere. 0 means no atmosphere.
        scale_height_km: Scale height of the isothermal atmosphere.
        molecular_weight_kg_mol: Molar mass of the atmospheric gas.
        kinetic_diameter_m: Effective collision diameter of the gas molecules.
    """

    name: PlanetId
    mass_ratio: float
    semi_major_axis_km: float
    orbital_period_s: float
    radius_km: float
    surface_density_kg_m3: float
    scale_height_km: float
    molecular_weight_kg_mol: float
    kinetic_diameter_m: float

    def __post_init__(self):
        if not 0.0 < self.mass_ratio < 0.5:
            raise ConfigError(
                f"Mass ratio {self.mass_ratio} of {self.name} is not in (0, 0.5).",
                field="mass_ratio",
            )
        for field in fields(self):
            if field.name in ("name", "mass_ratio"):
                continue
            value = getattr(self, field.name)
            if not math.isfinite(value):
                raise ConfigError(
                    f"{field.name} of {self.name} is not finite: {value}.",
                    field=field.name,
                )
            if field.name == "surface_density_kg_m3":
                if value < 0.0:
                    raise ConfigError(
                        f"Negative surface density for {self.name}: {value}.",
                        field=field.name,
                    )
            elif value <= 0.0:
                raise ConfigError(
                    f"{field.name} of {self.name} must be strictly positive: {value}.",
                    field=field.name,
                )

    @property
    def du_km(self) -> float:
        return self.semi_major_axis_km

    @property
    def tu_s(self) -> float:
        return self.orbital_period_s / (2.0 * math.pi)

    @property
    def vu_km_s(self) -> float:
        return self.du_km / self.tu_s

    @property
    def accel_unit_m_s2(self) -> float:
        """One canonical acceleration unit (DU/TU^2) in m/s^2."""
        return self.du_km * 1000.0 / self.tu_s**2

    @property
    def gm_km3_s2(self) -> float:
        return self.mass_ratio * self.du_km**3 / self.tu_s**2

    @property
    def soi_radius_du(self) -> float:
        """Radius of the sphere of influence, a * (m_p / m_sun)^(2/5), in DU."""
        return (self.mass_ratio / (1.0 - self.mass_ratio)) ** 0.4

    @property
    def radius_du(self) -> float:
        return self.radius_km / self.du_km

    @property
    def has_atmosphere(self) -> bool:
        return self.surface_density_kg_m3 > 0.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


PLANET_RECORD_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "mass_ratio": {"type": "number"},
        "semi_major_axis_km": {"type": "number"},
        "orbital_period_s": {"type": "number"},
        "radius_km": {"type": "number"},
        "surface_density_kg_m3": {"type": "number"},
        "scale_height_km": {"type": "number"},
        "molecular_weight_kg_mol": {"type": "number"},
        "kinetic_diameter_m": {"type": "number"},
    },
    "required": [field.name for field in fields(PlanetModel)],
    "additionalProperties": False,
}

_CATALOG_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {
        "sources": {"type": "object", "additionalProperties": {"type": "string"}},
        "planets": {"type": "array", "items": PLANET_RECORD_SCHEMA, "minItems": 1},
    },
    "required": ["planets"],
    "additionalProperties": False,
}


def load_catalog(path: str | Path | None = None) -> PlanetCatalog:
    """Load a planet catalog.

    Args:
        path: JSON catalog to read. The catalog shipped with the package is used
              when None.

    Returns:
        The planets, keyed by name, in file order.

    Raises:
        ConfigError: If the file is not valid JSON, or does not follow the
                     catalog schema, or a record breaks a PlanetModel invariant.
    """
    if path is None:
        return dict(_default_catalog())
    return _read_catalog(Path(path).read_text(encoding="utf-8"), str(path))


def get_planet(name: PlanetId, catalog: PlanetCatalog | None = None) -> PlanetModel:
    catalog = catalog if catalog is not None else _default_catalog()
    key = name.lower()
    if key not in catalog:
        known = ", ".join(catalog)
        raise ConfigError(f"Unknown planet '{name}', known: {known}.", field="planet")
    return catalog[key]


@lru_cache(maxsize=1)
def _default_catalog() -> PlanetCatalog:
    text = resources.files("agam").joinpath("data/planets.json").read_text("utf-8")
    return _read_catalog(text, "planets.json")


def _read_catalog(text: str, origin: str) -> PlanetCatalog:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"Invalid JSON in {origin}: {e.msg}", line=e.lineno, column=e.colno
        ) from e

    try:
        jsonschema.validate(document, _CATALOG_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ConfigError(
            f"Invalid planet catalog {origin}: {e.message}", field=e.json_path
        ) from e

    catalog: PlanetCatalog = {}
    for record in document["planets"]:
        planet = PlanetModel(**record)
        if planet.name in catalog:
            raise ConfigError(f"Planet {planet.name} defined twice in {origin}.")
        catalog[planet.name] = planet
    return catalog
