"""JSON configuration of single runs and sweeps.

A single run names one pericenter:

    {"planet": "venus", "kind": "agam", "psi_deg": 90, "altitude_km": 250,
     "ld": -2.0}

A sweep gives ranges instead (every key optional but the planet):

    {"planet": "mars", "altitude_km": {"min": 70, "max": 100, "step": 1},
     "ld": {"min": -2, "max": 2, "count": 41}, "psi_list": [90, 270],
     "kinds": ["agam", "pagam"], "workers": 8}

Unknown keys are rejected. Defaults are applied here and nowhere else, and
config_to_dict() gives back a document that loads to the same object.
"""

import json
import math
import os
from dataclasses import fields
from pathlib import Path
from typing import Any, Dict, Tuple

import jsonschema
import numpy as np

from agam.atmosphere import band_altitudes
from agam.errors import ConfigError
from agam.integrator_settings import IntegratorSettings
from agam.maneuver_config import (
    DEFAULT_PERICENTER_SPEED_VU,
    ManeuverConfig,
    signed_ld_from_attitude,
)
from agam.maneuver_kind import ManeuverKind, PagamThrust, VelocitySense
from agam.planet import PLANET_RECORD_SCHEMA, PlanetModel, get_planet, load_catalog
from agam.spacecraft import SpacecraftModel
from agam.sweep import SWEEP_KINDS, AltitudeRange, SweepGrid

type ResolvedConfig = ManeuverConfig | SweepGrid

DEFAULT_SWEEP_LD = {"min": -2.0, "max": 2.0, "count": 41}
DEFAULT_PSI_LIST = (90.0, 270.0)
DEFAULT_ALTITUDE_STEP_KM = 1.0
# Default sweep windows are the analysis band rounded outward to this.
WINDOW_ROUNDING_KM = 10.0


def _object_of(type_name: str, cls) -> Dict[str, Any]:
    return {
        "type": "object",
        "properties": {f.name: {"type": type_name} for f in fields(cls)},
        "additionalProperties": False,
    }


_SPACECRAFT_SCHEMA = _object_of("number", SpacecraftModel)
_INTEGRATOR_SCHEMA = _object_of("number", IntegratorSettings)
_INTEGRATOR_SCHEMA["properties"]["max_steps"] = {"type": "integer"}
_INTEGRATOR_SCHEMA["properties"]["fixed_step"] = {"type": "boolean"}

_COMMON_PROPERTIES: Dict[str, Any] = {
    "planet": {"oneOf": [{"type": "string"}, PLANET_RECORD_SCHEMA]},
    "pericenter_speed_vu": {"type": "number"},
    "velocity_sense": {"enum": [s.value for s in VelocitySense]},
    "pagam_thrust": {"enum": [t.value for t in PagamThrust]},
    "spacecraft": _SPACECRAFT_SCHEMA,
    "integrator": _INTEGRATOR_SCHEMA,
}

SINGLE_RUN_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        **_COMMON_PROPERTIES,
        "kind": {"enum": [k.value for k in ManeuverKind]},
        "psi_deg": {"type": "number"},
        "pericenter_altitude_km": {"type": "number"},
        "altitude_km": {"type": "number"},
        "signed_ld": {"type": "number"},
        "ld": {"type": "number"},
        "aoa_deg": {"type": "number"},
        "bank_deg": {"type": "number"},
        "record_samples": {"type": "boolean"},
    },
    "required": ["planet", "kind", "psi_deg"],
    "oneOf": [
        {"required": ["pericenter_altitude_km"]},
        {"required": ["altitude_km"]},
    ],
    "not": {
        "anyOf": [
            {"required": ["signed_ld", "ld"]},
            {"required": ["signed_ld", "aoa_deg"]},
            {"required": ["ld", "aoa_deg"]},
        ]
    },
    "dependentRequired": {"aoa_deg": ["bank_deg"], "bank_deg": ["aoa_deg"]},
    "additionalProperties": False,
}

SWEEP_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        **_COMMON_PROPERTIES,
        "altitude_km": {
            "type": "object",
            "properties": {
                "min": {"type": "number"},
                "max": {"type": "number"},
                "step": {"type": "number"},
            },
            "required": ["min", "max"],
            "additionalProperties": False,
        },
        "ld": {
            "type": "object",
            "properties": {
                "min": {"type": "number"},
                "max": {"type": "number"},
                "count": {"type": "integer", "minimum": 1},
            },
            "required": ["min", "max", "count"],
            "additionalProperties": False,
        },
        "ld_list": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        "psi_list": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        "kinds": {
            "type": "array",
            "items": {"enum": [k.value for k in SWEEP_KINDS]},
            "minItems": 1,
            "uniqueItems": True,
        },
        "workers": {"type": "integer", "minimum": 1},
        "output_dir": {"type": "string"},
    },
    "required": ["planet"],
    "not": {"required": ["ld", "ld_list"]},
    "additionalProperties": False,
}

_SWEEP_ONLY_KEYS = frozenset({"ld_list", "psi_list", "kinds", "workers", "output_dir"})


def load_config(path: str | Path) -> ResolvedConfig:
    """Read and resolve a configuration file.

    Raises:
        ConfigError: With the line and column of a JSON syntax error, the path of
                     a schema violation, or the field breaking an invariant; also
                     when the file cannot be read.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read {path}: {e.strerror or e}") from e
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"Invalid JSON in {path}: {e.msg}", line=e.lineno, column=e.colno
        ) from e
    return parse_config(document)


def is_sweep_document(document: Dict[str, Any]) -> bool:
    if not isinstance(document, dict):
        return False
    if _SWEEP_ONLY_KEYS & document.keys():
        return True
    if isinstance(document.get("altitude_km"), dict) or isinstance(
        document.get("ld"), dict
    ):
        return True
    return "altitude_km" not in document and "pericenter_altitude_km" not in document


def parse_config(document: Any) -> ResolvedConfig:
    """Resolve an already parsed JSON document (single run or sweep)."""
    if is_sweep_document(document):
        _validate(document, SWEEP_SCHEMA)
        return _resolve_sweep(document)
    _validate(document, SINGLE_RUN_SCHEMA)
    return _resolve_single(document)


def _validate(document: Any, schema: Dict[str, Any]):
    try:
        jsonschema.validate(document, schema, cls=jsonschema.Draft202012Validator)
    except jsonschema.ValidationError as e:
        raise ConfigError(
            f"Invalid configuration: {e.message}", field=e.json_path
        ) from e


def _resolve_planet(value: str | Dict[str, Any]) -> PlanetModel:
    if isinstance(value, str):
        return get_planet(value)
    return PlanetModel(**value)


def _resolve_common(document: Dict[str, Any]) -> Dict[str, Any]:
    planet = _resolve_planet(document["planet"])
    return {
        "planet": planet,
        "craft": SpacecraftModel(**document.get("spacecraft", {})),
        "integrator": IntegratorSettings(**document.get("integrator", {})),
        "pericenter_speed_vu": float(
            document.get("pericenter_speed_vu", DEFAULT_PERICENTER_SPEED_VU)
        ),
        "velocity_sense": VelocitySense(document.get("velocity_sense", "+90")),
        "pagam_thrust": PagamThrust(document.get("pagam_thrust", "all_regimes")),
    }


def _resolve_single(document: Dict[str, Any]) -> ManeuverConfig:
    common = _resolve_common(document)
    altitude = document.get("pericenter_altitude_km", document.get("altitude_km"))
    if "aoa_deg" in document:
        signed_ld = signed_ld_from_attitude(
            document["aoa_deg"], document["bank_deg"], common["craft"]
        )
    else:
        signed_ld = document.get("signed_ld", document.get("ld", 0.0))
    return ManeuverConfig(
        kind=ManeuverKind(document["kind"]),
        psi_deg=float(document["psi_deg"]),
        pericenter_altitude_km=float(altitude),
        signed_ld=float(signed_ld),
        record_samples=document.get("record_samples", True),
        **common,
    )


def default_window(planet: PlanetModel, craft: SpacecraftModel) -> Tuple[float, float]:
    """Analysis band rounded outward to 10 km.

    Raises:
        ConfigError: If the planet has no atmosphere.
    """
    if not planet.has_atmosphere:
        raise ConfigError(
            f"{planet.name} has no atmosphere, give the altitude range explicitly.",
            "altitude_km",
        )
    floor_km, ceiling_km = band_altitudes(planet, craft)
    return (
        math.floor(floor_km / WINDOW_ROUNDING_KM) * WINDOW_ROUNDING_KM,
        math.ceil(ceiling_km / WINDOW_ROUNDING_KM) * WINDOW_ROUNDING_KM,
    )


def _resolve_sweep(document: Dict[str, Any]) -> SweepGrid:
    common = _resolve_common(document)

    if "altitude_km" in document:
        window = document["altitude_km"]
        altitudes = AltitudeRange(
            float(window["min"]),
            float(window["max"]),
            float(window.get("step", DEFAULT_ALTITUDE_STEP_KM)),
        )
    else:
        low, high = default_window(common["planet"], common["craft"])
        altitudes = AltitudeRange(low, high, DEFAULT_ALTITUDE_STEP_KM)

    if "ld_list" in document:
        ld_values = tuple(float(v) for v in document["ld_list"])
    else:
        ld = document.get("ld", DEFAULT_SWEEP_LD)
        ld_values = tuple(
            float(v) for v in np.linspace(ld["min"], ld["max"], ld["count"])
        )

    psi_list = tuple(float(v) for v in document.get("psi_list", DEFAULT_PSI_LIST))
    base = ManeuverConfig(
        kind=ManeuverKind.GAM,
        psi_deg=psi_list[0],
        pericenter_altitude_km=altitudes.min_km,
        record_samples=False,
        **common,
    )
    return SweepGrid(
        base=base,
        kinds=tuple(ManeuverKind(k) for k in document.get("kinds", ["agam", "pagam"])),
        psi_list=psi_list,
        altitudes=altitudes,
        ld_values=ld_values,
        workers=document.get("workers", os.cpu_count() or 1),
        output_dir=document.get("output_dir"),
    )


def _planet_to_json(planet: PlanetModel) -> str | Dict[str, Any]:
    catalog = load_catalog()
    if catalog.get(planet.name) == planet:
        return planet.name
    return planet.to_dict()


def _common_to_dict(config: ManeuverConfig) -> Dict[str, Any]:
    return {
        "planet": _planet_to_json(config.planet),
        "pericenter_speed_vu": config.pericenter_speed_vu,
        "velocity_sense": config.velocity_sense.value,
        "pagam_thrust": config.pagam_thrust.value,
        "spacecraft": config.craft.to_dict(),
        "integrator": config.integrator.to_dict(),
    }


def config_to_dict(config: ResolvedConfig) -> Dict[str, Any]:
    """Fully resolved document of a configuration; parse_config() of it gives back
    an equal object."""
    match config:
        case ManeuverConfig():
            return {
                **_common_to_dict(config),
                "kind": config.kind.value,
                "psi_deg": config.psi_deg,
                "pericenter_altitude_km": config.pericenter_altitude_km,
                "signed_ld": config.signed_ld,
                "record_samples": config.record_samples,
            }
        case SweepGrid():
            document = {
                **_common_to_dict(config.base),
                "altitude_km": {
                    "min": config.altitudes.min_km,
                    "max": config.altitudes.max_km,
                    "step": config.altitudes.step_km,
                },
                "ld_list": list(config.ld_values),
                "psi_list": list(config.psi_list),
                "kinds": [k.value for k in config.kinds],
                "workers": config.workers,
            }
            if config.output_dir is not None:
                document["output_dir"] = config.output_dir
            return document
        case _:
            raise TypeError(f"Not a configuration: {type(config).__name__}.")


def schema_help() -> str:
    """Short description of the two configuration shapes, for usage errors."""
    single = ", ".join(SINGLE_RUN_SCHEMA["properties"])
    sweep = ", ".join(SWEEP_SCHEMA["properties"])
    return (
        "Single-run config keys: "
        f"{single}.\n"
        "  Required: planet, kind, psi_deg, pericenter_altitude_km (or altitude_km).\n"
        f"Sweep config keys: {sweep}.\n"
        "  Required: planet. altitude_km is {min, max, step}, "
        "ld is {min, max, count} (or ld_list).\n"
    )
