"""Long-format CSV of a sweep: one row per trajectory."""

import csv
from pathlib import Path
from typing import Dict, List, NamedTuple

from agam.sweep import SweepCell, SweepTable
from agam.trajectory_result import TrajectoryStatus

RESULTS_FILE = "results.csv"

COLUMNS = (
    "planet",
    "kind",
    "psi_deg",
    "altitude_km",
    "signed_ld",
    "aoa_deg",
    "bank_deg",
    "status",
    "voe_km2_s2",
    "turn_angle_deg",
    "tof_band_s",
    "actual_peri_alt_km",
    "actual_psi_deg",
    "delta_v_km_s",
    "voe_contrib_pct",
    "delta_contrib_pct",
)

_METRIC_COLUMNS = COLUMNS[COLUMNS.index("voe_km2_s2") :]
_NUMBER_COLUMNS = ("psi_deg", "altitude_km", "signed_ld", "aoa_deg", "bank_deg")


class CsvRow(NamedTuple):
    """One row of results.csv, read back. Empty cells are None."""

    planet: str
    kind: str
    status: TrajectoryStatus
    values: Dict[str, float | None]


def _number(value: float | None) -> str:
    return "" if value is None else format(value, ".16e")


def _row(planet: str, cell: SweepCell) -> List[str]:
    row = {
        "planet": planet,
        "kind": cell.kind.value,
        "status": cell.result.status.value,
    }
    row["psi_deg"] = _number(cell.psi_deg)
    row["altitude_km"] = _number(cell.altitude_km)
    if cell.is_baseline:
        row["signed_ld"] = row["aoa_deg"] = row["bank_deg"] = ""
    else:
        row["signed_ld"] = _number(cell.signed_ld)
        row["aoa_deg"] = _number(cell.config.aoa_deg)
        row["bank_deg"] = _number(cell.config.bank_deg)

    result = cell.result
    if result.status.is_ok:
        metrics = {
            "voe_km2_s2": result.voe_km2_s2,
            "turn_angle_deg": result.turn_angle_deg,
            "tof_band_s": result.tof_band_s,
            "actual_peri_alt_km": result.actual_pericenter_altitude_km,
            "actual_psi_deg": result.actual_approach_angle_deg,
            "delta_v_km_s": result.delta_v_km_s,
            "voe_contrib_pct": None,
            "delta_contrib_pct": None,
        }
        if cell.contribution is not None:
            metrics["voe_contrib_pct"] = cell.contribution.voe_pct
            metrics["delta_contrib_pct"] = cell.contribution.delta_pct
        row.update({name: _number(value) for name, value in metrics.items()})
    else:
        row.update({name: "" for name in _METRIC_COLUMNS})
    return [row[column] for column in COLUMNS]


def write_csv(table: SweepTable, out_dir: str | Path) -> Path:
    """Write results.csv in out_dir, UTF-8 with LF line endings.

    Numbers are written in scientific notation with 17 significant digits, which
    round-trips doubles exactly. Metric cells of non-Ok rows are empty.

    Raises:
        OSError: If the file cannot be written (the message names the path).
    """
    path = Path(out_dir) / RESULTS_FILE
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(COLUMNS)
            for cell in table:
                writer.writerow(_row(table.planet, cell))
    except OSError as e:
        raise OSError(f"Cannot write {path}: {e}") from e
    return path


def read_csv(path: str | Path) -> List[CsvRow]:
    """Rows of a results.csv written by write_csv()."""
    rows = []
    with Path(path).open(encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != COLUMNS:
            raise ValueError(f"{path} is not a results file: {reader.fieldnames}.")
        for record in reader:
            values = {
                name: float(record[name]) if record[name] != "" else None
                for name in _NUMBER_COLUMNS + _METRIC_COLUMNS
            }
            rows.append(
                CsvRow(
                    record["planet"],
                    record["kind"],
                    TrajectoryStatus(record["status"]),
                    values,
                )
            )
    return rows
