import re

import pytest

from agam.csv_export import COLUMNS, RESULTS_FILE, read_csv, write_csv
from agam.errors import UnknownMetricError
from agam.heatmap import (
    INVALID_COLOR,
    HeatmapMetric,
    heatmap_filename,
    rainbow_color,
    render_heatmap,
)
from agam.maneuver_kind import ManeuverKind
from agam.sweep import SweepTable
from agam.sweep_summary import summarize_sweep
from agam.trajectory_result import TrajectoryStatus
from tests.synthetic_tables import build_table

CELL_FILL = re.compile(
    r'<g id="(cell_\d+_\d+)">\s*<path [^>]*style="fill: (#[0-9a-f]{6})'
)


class TestCsv:
    def test_rows(self, tmp_path):
        path = write_csv(build_table(failed_cell=1), tmp_path)
        assert path == tmp_path / RESULTS_FILE

        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == ",".join(COLUMNS)
        assert len(lines) == 1 + 6

        baseline = dict(zip(COLUMNS, lines[1].split(",")))
        assert baseline["kind"] == "gam"
        assert baseline["status"] == "Ok"
        assert baseline["signed_ld"] == ""
        assert baseline["voe_contrib_pct"] == ""
        assert float(baseline["voe_km2_s2"]) == pytest.approx(76.0)

        failed = dict(zip(COLUMNS, lines[2].split(",")))
        assert failed["status"] == "Collision"
        assert float(failed["signed_ld"]) == -1.0
        metrics = COLUMNS[COLUMNS.index("voe_km2_s2") :]
        assert all(failed[name] == "" for name in metrics)

    def test_line_endings(self, tmp_path):
        data = write_csv(build_table(), tmp_path).read_bytes()
        assert b"\r\n" not in data
        assert data.endswith(b"\n")

    def test_read_back(self, tmp_path):
        table = build_table((ManeuverKind.AGAM, ManeuverKind.PAGAM))
        rows = read_csv(write_csv(table, tmp_path))

        assert len(rows) == len(table)
        for row, cell in zip(rows, table):
            assert row.planet == "venus"
            assert row.kind == cell.kind.value
            assert row.status is cell.result.status
            # 17 significant digits give back the exact doubles.
            assert row.values["voe_km2_s2"] == cell.result.voe_km2_s2
            assert row.values["altitude_km"] == cell.altitude_km
            if cell.contribution is not None:
                assert row.values["delta_contrib_pct"] == cell.contribution.delta_pct

    def test_not_a_results_file(self, tmp_path):
        path = tmp_path / "other.csv"
        path.write_text("a,b\n1,2\n", encoding="utf-8")
        with pytest.raises(ValueError):
            read_csv(path)


class TestHeatmap:
    def test_rainbow_ends(self):
        assert rainbow_color(-3.0, -3.0, 5.0) == "#8000ff"
        assert rainbow_color(5.0, -3.0, 5.0) == "#ff0000"
        assert rainbow_color(1.0, 1.0, 1.0) == "#8000ff"

    def test_filename(self):
        name = heatmap_filename(HeatmapMetric.VOE, 270.0, ManeuverKind.AGAM)
        assert name == "heatmap_voe_270_agam.svg"

    def test_one_file_per_psi_and_kind(self, tmp_path):
        table = build_table((ManeuverKind.AGAM, ManeuverKind.PAGAM))
        paths = render_heatmap(table, "turn_angle", tmp_path)
        assert [p.name for p in paths] == [
            "heatmap_turn_angle_270_agam.svg",
            "heatmap_turn_angle_270_pagam.svg",
        ]
        assert all(p.exists() for p in paths)

    def test_rendering_is_reproducible(self, tmp_path):
        table = build_table()
        first = render_heatmap(table, "voe_contrib", tmp_path / "a")
        second = render_heatmap(table, "voe_contrib", tmp_path / "b")
        for a, b in zip(first, second, strict=True):
            assert a.read_bytes() == b.read_bytes()

    def test_failed_cell_is_white(self, tmp_path):
        (path,) = render_heatmap(build_table(failed_cell=1), "voe", tmp_path)
        fills = dict(CELL_FILL.findall(path.read_text(encoding="utf-8")))

        assert len(fills) == 4
        assert fills["cell_0_0"] == INVALID_COLOR
        assert list(fills.values()).count(INVALID_COLOR) == 1

    def test_colors_span_the_rainbow(self, tmp_path):
        (path,) = render_heatmap(build_table(), "voe", tmp_path)
        fills = dict(CELL_FILL.findall(path.read_text(encoding="utf-8")))
        # voe decreases with altitude and L/D: highest at (240, -1).
        assert fills["cell_0_0"] == "#ff0000"
        assert fills["cell_1_1"] == "#8000ff"

    def test_unknown_metric(self, tmp_path):
        with pytest.raises(UnknownMetricError):
            render_heatmap(build_table(), "heat_load", tmp_path)

    def test_nothing_to_render(self, tmp_path):
        table = build_table()
        baselines = SweepTable(table.planet, [c for c in table if c.is_baseline])
        with pytest.raises(ValueError):
            render_heatmap(baselines, "voe", tmp_path)

    def test_metric_of_a_failed_cell(self):
        cell = build_table(failed_cell=1).cells[1]
        assert cell.result.status is TrajectoryStatus.COLLISION
        for metric in HeatmapMetric:
            assert metric.value(cell) is None


class TestSummary:
    def test_synthetic_sweep(self):
        summary = summarize_sweep(build_table((ManeuverKind.AGAM, ManeuverKind.PAGAM)))

        assert summary["planet"] == "venus"
        assert summary["status_counts"] == {"Ok": 10}
        gain = summary["turn_angle_gain_psi_270"]
        assert gain["achieved"] == pytest.approx(2.0)
        assert gain["threshold"] == 10.0
        assert gain["passed"] is False
        assert summary["agam_voe_gain_psi_270"]["achieved"] == pytest.approx(5.0)
        assert summary["pagam_voe_gain_psi_270"]["achieved"] == pytest.approx(0.0)
        assert summary["energy_ordering_violations_psi_270"] == 0
        assert summary["max_tof_band_s"]["achieved"] == pytest.approx(350.0)
        ratio = summary["tof_ratio_min_to_max_ld"]
        assert ratio["achieved"] == pytest.approx(250.0 / 350.0)
        assert ratio["passed"] is False

    def test_missing_cells(self):
        summary = summarize_sweep(build_table(failed_cell=1))

        assert summary["status_counts"] == {"Collision": 1, "Ok": 5}
        assert summary["pagam_voe_gain_psi_270"] == {
            "achieved": None,
            "threshold": 4.0,
            "passed": None,
        }
        assert summary["max_psi_deviation_deg"]["achieved"] is None
        assert summary["low_ld_voe_contrib_pct"]["achieved"] is None
