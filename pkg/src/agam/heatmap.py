"""Altitude x L/D color maps of a sweep, as SVG.

Colors follow a rainbow defined as an HSV hue sweep from 270 deg (violet, minimum)
down to 0 deg (red, maximum), at full saturation and value, linear in the metric
over the Ok cells of one figure. Cells without a value are white.
"""

from enum import Enum
from pathlib import Path
from typing import List, Sequence

import matplotlib
import seaborn
from matplotlib.colors import hsv_to_rgb, to_hex
from matplotlib.figure import Figure
from matplotlib.patches import Rectangle

from agam.errors import UnknownMetricError
from agam.maneuver_kind import ManeuverKind
from agam.sweep import SweepCell, SweepTable

INVALID_COLOR = "#ffffff"
HUE_MIN_DEG = 270.0
HUE_MAX_DEG = 0.0
COLOR_BAR_STEPS = 64

# Fixed salt so that the SVG ids, hence the bytes, do not change between runs.
_SVG_HASH_SALT = "agam-heatmap"


class HeatmapMetric(Enum):
    VOE = "voe"
    TURN_ANGLE = "turn_angle"
    TOF_BAND = "tof_band"
    DELTA_V = "delta_v"
    PERI_ALT_DEVIATION = "peri_alt_deviation"
    PSI_DEVIATION = "psi_deviation"
    VOE_CONTRIB = "voe_contrib"
    DELTA_CONTRIB = "delta_contrib"

    @classmethod
    def parse(cls, name: str) -> "HeatmapMetric":
        try:
            return cls(name)
        except ValueError:
            known = ", ".join(m.value for m in cls)
            raise UnknownMetricError(
                f"Unknown metric '{name}', known: {known}."
            ) from None

    @property
    def label(self) -> str:
        match self:
            case HeatmapMetric.VOE:
                return "VOE (km$^2$/s$^2$)"
            case HeatmapMetric.TURN_ANGLE:
                return "Turn angle (deg)"
            case HeatmapMetric.TOF_BAND:
                return "Time of flight in band (s)"
            case HeatmapMetric.DELTA_V:
                return "$\\Delta V$ (km/s)"
            case HeatmapMetric.PERI_ALT_DEVIATION:
                return "Pericenter altitude deviation (km)"
            case HeatmapMetric.PSI_DEVIATION:
                return "Approach angle deviation (deg)"
            case HeatmapMetric.VOE_CONTRIB:
                return "VOE contribution (%)"
            case HeatmapMetric.DELTA_CONTRIB:
                return "Turn angle contribution (%)"
            case _:
                raise ValueError("Unknown HeatmapMetric.")

    def value(self, cell: SweepCell) -> float | None:
        """Metric of a cell, None when the cell is not Ok or the metric undefined."""
        result = cell.result
        if not result.status.is_ok:
            return None
        contribution = cell.contribution
        match self:
            case HeatmapMetric.VOE:
                return result.voe_km2_s2
            case HeatmapMetric.TURN_ANGLE:
                return result.turn_angle_deg
            case HeatmapMetric.TOF_BAND:
                return result.tof_band_s
            case HeatmapMetric.DELTA_V:
                return result.delta_v_km_s
            case HeatmapMetric.PERI_ALT_DEVIATION:
                return result.pericenter_altitude_deviation_km
            case HeatmapMetric.PSI_DEVIATION:
                return result.approach_angle_deviation_deg
            case HeatmapMetric.VOE_CONTRIB:
                return contribution.voe_pct if contribution else None
            case HeatmapMetric.DELTA_CONTRIB:
                return contribution.delta_pct if contribution else None
            case _:
                raise ValueError("Unknown HeatmapMetric.")


def rainbow_color(value: float, vmin: float, vmax: float) -> str:
    """Hex color of a value: violet at vmin, red at vmax. A flat range maps to
    violet."""
    t = 0.0 if vmax == vmin else (value - vmin) / (vmax - vmin)
    hue_deg = HUE_MIN_DEG + (HUE_MAX_DEG - HUE_MIN_DEG) * t
    return to_hex(hsv_to_rgb((hue_deg / 360.0, 1.0, 1.0)))


def _edges(centers: Sequence[float]) -> List[float]:
    """Half-widths around each center, from the spacing of the grid."""
    if len(centers) == 1:
        return [0.5]
    spacing = min(b - a for a, b in zip(centers, centers[1:]))
    return [0.5 * spacing] * len(centers)


def heatmap_filename(metric: HeatmapMetric, psi_deg: float, kind: ManeuverKind) -> str:
    return f"heatmap_{metric.value}_{psi_deg:g}_{kind.value}.svg"


def _render_one(
    cells: List[SweepCell],
    metric: HeatmapMetric,
    title: str,
    path: Path,
):
    altitudes = sorted({c.altitude_km for c in cells})
    lds = sorted({c.signed_ld for c in cells})
    half_x, half_y = _edges(altitudes), _edges(lds)

    values = [metric.value(c) for c in cells]
    valid = [v for v in values if v is not None]
    vmin = min(valid) if valid else 0.0
    vmax = max(valid) if valid else 0.0

    with (
        seaborn.axes_style("white"),
        matplotlib.rc_context({"svg.hashsalt": _SVG_HASH_SALT, "svg.fonttype": "path"}),
    ):
        fig = Figure(figsize=(7.0, 5.0))
        ax = fig.add_axes((0.1, 0.12, 0.7, 0.78))
        bar = fig.add_axes((0.84, 0.12, 0.04, 0.78))

        for cell, value in zip(cells, values):
            i = altitudes.index(cell.altitude_km)
            j = lds.index(cell.signed_ld)
            color = INVALID_COLOR if value is None else rainbow_color(value, vmin, vmax)
            patch = Rectangle(
                (cell.altitude_km - half_x[i], cell.signed_ld - half_y[j]),
                2.0 * half_x[i],
                2.0 * half_y[j],
                facecolor=color,
                edgecolor="none",
                linewidth=0.0,
            )
            patch.set_gid(f"cell_{i}_{j}")
            ax.add_patch(patch)

        ax.set_xlim(altitudes[0] - half_x[0], altitudes[-1] + half_x[-1])
        ax.set_ylim(lds[0] - half_y[0], lds[-1] + half_y[-1])
        ax.set_xlabel("Projected pericenter altitude (km)")
        ax.set_ylabel("L/D")
        ax.set_title(title)
        seaborn.despine(ax=ax)

        for k in range(COLOR_BAR_STEPS):
            t = k / (COLOR_BAR_STEPS - 1)
            step = Rectangle(
                (0.0, k / COLOR_BAR_STEPS),
                1.0,
                1.0 / COLOR_BAR_STEPS,
                facecolor=rainbow_color(t, 0.0, 1.0),
                edgecolor="none",
                linewidth=0.0,
            )
            step.set_gid(f"colorbar_{k}")
            bar.add_patch(step)
        bar.set_xlim(0.0, 1.0)
        bar.set_ylim(0.0, 1.0)
        bar.set_xticks([])
        bar.set_yticks([])
        bar.text(0.5, -0.02, f"{vmin:.6g}", ha="center", va="top", gid="colorbar_min")
        bar.text(0.5, 1.02, f"{vmax:.6g}", ha="center", va="bottom", gid="colorbar_max")
        bar.set_title(metric.label, fontsize="small", pad=18)

        fig.savefig(path, format="svg", metadata={"Date": None})


def render_heatmap(table: SweepTable, metric: str, out_dir: str | Path) -> List[Path]:
    """Write one SVG per (psi, kind) of the table for a metric.

    The color range is the min/max of the metric over the Ok cells of each
    figure. Rendering the same table twice gives byte-identical files.

    Returns:
        The written paths, by psi then kind.

    Raises:
        UnknownMetricError: If metric is not one of the HeatmapMetric values.
        ValueError: If the table holds no maneuver cell.
    """
    chosen = HeatmapMetric.parse(metric)
    kinds = table.kinds()
    if not kinds:
        raise ValueError("Nothing to render: the table has no maneuver cell.")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for psi in table.psi_values():
        for kind in kinds:
            cells = table.select(kind, psi)
            if not cells:
                continue
            path = out / heatmap_filename(chosen, psi, kind)
            title = (
                f"{table.planet.capitalize()} {kind.value.upper()}, psi = {psi:g} deg"
            )
            _render_one(cells, chosen, title, path)
            paths.append(path)
    return paths
