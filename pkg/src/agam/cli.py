"""Command line entry point: single runs, sweeps and the model tables."""

import argparse
import csv
import hashlib
import json
import logging
import platform
import sys
from dataclasses import replace
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, List, Sequence

import matplotlib
import numpy as np
import scipy

from agam.atmosphere import atmosphere_profile, band_altitudes
from agam.config_loader import config_to_dict, load_config, schema_help
from agam.csv_export import write_csv
from agam.errors import AgamError, ConfigError
from agam.heatmap import HeatmapMetric, render_heatmap
from agam.maneuver import run_maneuver
from agam.maneuver_config import ManeuverConfig
from agam.planet import get_planet, load_catalog
from agam.spacecraft import SpacecraftModel, coefficient_table
from agam.sweep import SweepGrid, run_sweep
from agam.sweep_summary import summarize_sweep
from agam.trajectory_result import result_to_dict

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"
COLOR_NORMALIZATION = "per-figure min/max over the Ok cells"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

# Execution settings: they do not change any result, so they stay out of the
# manifest and its hash.
_EXECUTION_KEYS = ("workers", "output_dir")


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the config-error code and list the config keys."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n\n{schema_help()}")


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="agam",
        description="Gravity-assist and aero-gravity-assist maneuvers in the "
        "Sun-planet restricted three-body problem.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument(
        "-v", "--verbose", action="count", default=0, help="More logging (-vv: debug)"
    )
    verbosity.add_argument(
        "-q", "--quiet", action="store_true", help="Only log errors"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Fly a single trajectory")
    run.add_argument("--config", required=True, help="Single-run JSON config")
    run.add_argument("--out", help="JSON result file (default: stdout)")

    sweep = commands.add_parser("sweep", help="Fly an altitude x L/D grid")
    sweep.add_argument("--config", required=True, help="Sweep JSON config")
    sweep.add_argument("--out", help="Output directory (default: output_dir of config)")

    commands.add_parser("planets", help="Print the planet catalog")

    bands = commands.add_parser("bands", help="Print the analysis-band altitudes")
    bands.add_argument("--planet", required=True)
    bands.add_argument("--length-m", type=float, help="Reference length l of Kn")

    profile = commands.add_parser("profile", help="Density and Knudsen vs altitude")
    profile.add_argument("--planet", required=True)
    profile.add_argument("--min-km", type=float, default=0.0)
    profile.add_argument("--max-km", type=float, default=300.0)
    profile.add_argument("--step-km", type=float, default=10.0)
    profile.add_argument("--length-m", type=float, help="Reference length l of Kn")

    coefficients = commands.add_parser(
        "coefficients", help="Continuum C_L, C_D and L/D vs angle of attack"
    )
    coefficients.add_argument("--step-deg", type=float, default=1.0)

    return parser


def _configure_logging(args: argparse.Namespace):
    if args.quiet:
        level = logging.ERROR
    elif args.verbose >= 2:
        level = logging.DEBUG
    elif args.verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _craft(length_m: float | None) -> SpacecraftModel:
    craft = SpacecraftModel()
    if length_m is None:
        return craft
    return replace(craft, reference_length_m=length_m)


def _csv_writer():
    return csv.writer(sys.stdout, lineterminator="\n")


def _run(args: argparse.Namespace):
    config = load_config(args.config)
    if not isinstance(config, ManeuverConfig):
        raise ConfigError(f"{args.config} is a sweep config, use 'agam sweep'.")
    result = run_maneuver(config)
    logger.info("%s on %s: %s", config.kind.value, config.planet.name, result.status)

    document = {"config": config_to_dict(config), **result_to_dict(result)}
    text = json.dumps(document, indent=2)
    if args.out is None:
        print(text)
    else:
        Path(args.out).write_text(text + "\n", encoding="utf-8")


def _versions() -> Dict[str, str]:
    try:
        agam_version = metadata.version("agam")
    except metadata.PackageNotFoundError:
        agam_version = "unknown"
    return {
        "agam": agam_version,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "matplotlib": matplotlib.__version__,
    }


def build_manifest(
    grid: SweepGrid, summary: Dict[str, Any], files: List[str]
) -> Dict[str, Any]:
    """Reproducibility record of a sweep: the resolved config and its hash, the
    versions of the numerical stack, and the acceptance summary."""
    config = {
        k: v for k, v in config_to_dict(grid).items() if k not in _EXECUTION_KEYS
    }
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return {
        "config": config,
        "config_sha256": hashlib.sha256(canonical.encode("utf-8")).hexdigest(),
        "versions": _versions(),
        "color_normalization": COLOR_NORMALIZATION,
        "files": files,
        "summary": summary,
    }


def _sweep(args: argparse.Namespace):
    grid = load_config(args.config)
    if not isinstance(grid, SweepGrid):
        raise ConfigError(f"{args.config} is a single-run config, use 'agam run'.")
    out_dir = args.out if args.out is not None else grid.output_dir
    if out_dir is None:
        raise ConfigError("No output directory: pass --out or set output_dir.")

    table = run_sweep(grid)
    out = Path(out_dir)
    files = [write_csv(table, out).name]
    if table.kinds():
        for metric in HeatmapMetric:
            files.extend(p.name for p in render_heatmap(table, metric.value, out))

    manifest = build_manifest(grid, summarize_sweep(table), files)
    (out / MANIFEST_FILE).write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    logger.info("Wrote %d files in %s", len(files) + 1, out)


def _planets(args: argparse.Namespace):
    writer = _csv_writer()
    writer.writerow(
        (
            "name",
            "mass_ratio",
            "du_km",
            "tu_s",
            "vu_km_s",
            "radius_km",
            "surface_density_kg_m3",
            "scale_height_km",
            "soi_radius_du",
        )
    )
    for planet in load_catalog().values():
        writer.writerow(
            (
                planet.name,
                f"{planet.mass_ratio:.6e}",
                f"{planet.du_km:.6e}",
                f"{planet.tu_s:.6e}",
                f"{planet.vu_km_s:.6f}",
                f"{planet.radius_km:g}",
                f"{planet.surface_density_kg_m3:g}",
                f"{planet.scale_height_km:g}",
                f"{planet.soi_radius_du:.6e}",
            )
        )


def _bands(args: argparse.Namespace):
    planet = get_planet(args.planet)
    craft = _craft(args.length_m)
    floor, ceiling = band_altitudes(planet, craft)
    print(f"planet: {planet.name}")
    print(f"reference_length_m: {craft.reference_length_m:g}")
    print(f"floor_km (Kn=1e-3): {floor:.3f}")
    print(f"ceiling_km (Kn=1e-2): {ceiling:.3f}")


def _profile(args: argparse.Namespace):
    planet = get_planet(args.planet)
    if args.step_km <= 0.0 or args.max_km < args.min_km:
        raise ConfigError(
            f"Invalid altitude range [{args.min_km}, {args.max_km}] step "
            f"{args.step_km}.",
            "step_km",
        )
    count = int(np.floor((args.max_km - args.min_km) / args.step_km + 1e-9)) + 1
    altitudes = args.min_km + args.step_km * np.arange(count)
    writer = _csv_writer()
    writer.writerow(("altitude_km", "density_kg_m3", "knudsen", "regime", "in_band"))
    for row in atmosphere_profile(planet, _craft(args.length_m), altitudes.tolist()):
        writer.writerow(
            (
                f"{row.altitude_km:g}",
                f"{row.density_kg_m3:.6e}",
                f"{row.knudsen:.6e}",
                row.regime.name.lower(),
                str(row.in_analysis_band).lower(),
            )
        )


def _coefficients(args: argparse.Namespace):
    writer = _csv_writer()
    writer.writerow(("aoa_deg", "lift_coefficient", "drag_coefficient", "lift_to_drag"))
    for row in coefficient_table(SpacecraftModel(), args.step_deg):
        writer.writerow(
            (
                f"{row.aoa_deg:g}",
                f"{row.lift_coefficient:.6f}",
                f"{row.drag_coefficient:.6f}",
                f"{row.lift_to_drag:.6f}",
            )
        )


_COMMANDS = {
    "run": _run,
    "sweep": _sweep,
    "planets": _planets,
    "bands": _bands,
    "profile": _profile,
    "coefficients": _coefficients,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI.

    Returns:
        0 on success, 1 on a configuration or usage error, 2 on a runtime failure.
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_CONFIG
    _configure_logging(args)

    try:
        _COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"agam: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (AgamError, RuntimeError, OSError) as e:
        print(f"agam: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
