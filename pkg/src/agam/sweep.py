"""Altitude x L/D sweeps of maneuvers, with their GAM baselines."""

import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, Iterator, List, Tuple

from agam.errors import AgamError, ConfigError
from agam.maneuver import Contribution, contribution, run_maneuver
from agam.maneuver_config import ManeuverConfig
from agam.maneuver_kind import ManeuverKind
from agam.planet import PlanetModel
from agam.spacecraft import max_lift_to_drag
from agam.trajectory_result import TrajectoryResult, TrajectoryStatus

logger = logging.getLogger(__name__)

SWEEP_KINDS = (ManeuverKind.AGAM, ManeuverKind.PAGAM)


@dataclass(frozen=True)
class AltitudeRange:
    min_km: float
    max_km: float
    step_km: float

    def __post_init__(self):
        for name in ("min_km", "max_km", "step_km"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(
                    f"Altitude {name} is not finite.", f"altitude_km.{name}"
                )
        if self.step_km <= 0.0:
            raise ConfigError(
                f"Altitude step must be strictly positive: {self.step_km}.",
                "altitude_km.step",
            )
        if self.max_km < self.min_km:
            raise ConfigError(
                f"Altitude range is empty: [{self.min_km}, {self.max_km}].",
                "altitude_km.max",
            )

    def values(self) -> List[float]:
        """min, min + step, ... up to max (included when on the grid)."""
        n = int(math.floor((self.max_km - self.min_km) / self.step_km + 1e-9))
        return [self.min_km + i * self.step_km for i in range(n + 1)]


@dataclass(frozen=True)
class SweepGrid:
    """A sweep: every (altitude, L/D, psi, kind) combination of the grid.

    Attributes:
        base: Settings shared by every cell (planet, spacecraft, pericenter
              speed, velocity sense, integrator, thrust mode). Its kind, psi,
              altitude and L/D are replaced per cell.
        kinds: Atmospheric maneuvers to fly. The GAM baseline is always flown.
        psi_list: Approach angles, degrees.
        altitudes: Projected pericenter altitudes.
        ld_values: Signed L/D values.
        workers: Processes running the cells; 1 runs them in this process.
        output_dir: Where the CLI writes the results, if set by the config.
    """

    base: ManeuverConfig
    kinds: Tuple[ManeuverKind, ...]
    psi_list: Tuple[float, ...]
    altitudes: AltitudeRange
    ld_values: Tuple[float, ...]
    workers: int = 1
    output_dir: str | None = None

    def __post_init__(self):
        if not self.kinds:
            raise ConfigError("A sweep needs at least one maneuver kind.", "kinds")
        for kind in self.kinds:
            if kind not in SWEEP_KINDS:
                raise ConfigError(
                    f"Sweeps fly agam and/or pagam (the gam baseline is implicit), "
                    f"got {kind.value}.",
                    "kinds",
                )
        if not self.psi_list:
            raise ConfigError("A sweep needs at least one approach angle.", "psi_list")
        if not self.ld_values:
            raise ConfigError("A sweep needs at least one L/D value.", "ld")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}.", "workers")
        _, peak_ld = max_lift_to_drag(self.base.craft)
        for ld in self.ld_values:
            if not (math.isfinite(ld) and abs(ld) <= peak_ld):
                raise ConfigError(
                    f"|L/D| = {abs(ld)} exceeds the achievable maximum {peak_ld:.6f}.",
                    "ld",
                )

    @property
    def planet(self) -> PlanetModel:
        return self.base.planet

    def cell_config(
        self, kind: ManeuverKind, psi_deg: float, altitude_km: float, signed_ld: float
    ) -> ManeuverConfig:
        return replace(
            self.base,
            kind=kind,
            psi_deg=psi_deg,
            pericenter_altitude_km=altitude_km,
            signed_ld=signed_ld if kind.flies_in_atmosphere else 0.0,
            record_samples=False,
        )

    def configs(self) -> List[ManeuverConfig]:
        """Every trajectory of the sweep, in table order: per altitude, the GAM
        baselines by psi, then by L/D, psi and kind."""
        configs = []
        for altitude in self.altitudes.values():
            for psi in self.psi_list:
                configs.append(self.cell_config(ManeuverKind.GAM, psi, altitude, 0.0))
            for ld in self.ld_values:
                for psi in self.psi_list:
                    for kind in self.kinds:
                        configs.append(self.cell_config(kind, psi, altitude, ld))
        return configs


@dataclass(frozen=True)
class SweepCell:
    """One trajectory of a sweep. Baseline cells have no contribution."""

    config: ManeuverConfig
    result: TrajectoryResult
    contribution: Contribution | None = None

    @property
    def kind(self) -> ManeuverKind:
        return self.config.kind

    @property
    def psi_deg(self) -> float:
        return self.config.psi_deg

    @property
    def altitude_km(self) -> float:
        return self.config.pericenter_altitude_km

    @property
    def signed_ld(self) -> float:
        return self.config.signed_ld

    @property
    def is_baseline(self) -> bool:
        return self.kind is ManeuverKind.GAM


@dataclass
class SweepTable:
    planet: str
    cells: List[SweepCell]

    def __iter__(self) -> Iterator[SweepCell]:
        return iter(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def select(self, kind: ManeuverKind, psi_deg: float) -> List[SweepCell]:
        return [c for c in self.cells if c.kind is kind and c.psi_deg == psi_deg]

    def baseline(self, altitude_km: float, psi_deg: float) -> SweepCell | None:
        for cell in self.cells:
            if (
                cell.is_baseline
                and cell.altitude_km == altitude_km
                and cell.psi_deg == psi_deg
            ):
                return cell
        return None

    def kinds(self) -> List[ManeuverKind]:
        return list(dict.fromkeys(c.kind for c in self.cells if not c.is_baseline))

    def psi_values(self) -> List[float]:
        return list(dict.fromkeys(c.psi_deg for c in self.cells))


def _run_cell(config: ManeuverConfig) -> TrajectoryResult:
    try:
        return run_maneuver(config)
    except AgamError as e:
        logger.warning("Cell %s failed: %s", config, e)
        return TrajectoryResult(TrajectoryStatus.STEP_FAILURE, message=str(e))


def run_sweep(grid: SweepGrid) -> SweepTable:
    """Fly every cell of the grid.

    The table order depends on the grid only: with several workers the cells run
    in a process pool, and the results are assembled in grid order. A failing
    cell is recorded as StepFailure and never stops the sweep.
    """
    configs = grid.configs()
    logger.info(
        "Sweep on %s: %d trajectories, %d worker(s)",
        grid.planet.name,
        len(configs),
        grid.workers,
    )

    if grid.workers == 1:
        results = [_run_cell(config) for config in configs]
    else:
        chunk_size = max(1, len(configs) // (grid.workers * 4))
        with ProcessPoolExecutor(max_workers=grid.workers) as executor:
            results = list(executor.map(_run_cell, configs, chunksize=chunk_size))

    table = assemble_table(grid.planet.name, configs, results)
    statuses = Counter(cell.result.status.value for cell in table)
    logger.info("Sweep finished: %s", dict(sorted(statuses.items())))
    return table


def assemble_table(
    planet_name: str,
    configs: List[ManeuverConfig],
    results: List[TrajectoryResult],
) -> SweepTable:
    """Pair configs with their results, in order, and attach to every maneuver
    cell its contribution against the GAM flown at the same altitude and psi."""
    baselines: Dict[Tuple[float, float], TrajectoryResult] = {
        (config.pericenter_altitude_km, config.psi_deg): result
        for config, result in zip(configs, results)
        if config.kind is ManeuverKind.GAM
    }
    cells = []
    for config, result in zip(configs, results):
        if config.kind is ManeuverKind.GAM:
            cells.append(SweepCell(config, result))
        else:
            baseline = baselines[config.pericenter_altitude_km, config.psi_deg]
            cells.append(SweepCell(config, result, contribution(result, baseline)))
    return SweepTable(planet_name, cells)
