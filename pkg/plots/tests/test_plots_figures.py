"""Figure rendering: table parsing, curve math, and the three figure kinds."""

import pytest

from beamshare_plots import figures
from beamshare_plots.figures import FigureSpec, PlotError

from conftest import BOUNDS_HEADER, RUNS_HEADER, SLOTS_HEADER, write_csv


def spec(inputs, kind, out, labels=()):
    return FigureSpec(inputs=tuple(inputs), kind=kind, out=out, labels=tuple(labels))


class TestReadTable:
    def test_reads_header_and_rows(self, slots_csv):
        header, rows = figures.read_table(slots_csv)
        assert header == tuple(SLOTS_HEADER)
        assert len(rows) == 22
        assert rows[0]["normalized_area"] == "0.2"

    def test_empty_file_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.touch()
        with pytest.raises(PlotError, match="empty csv"):
            figures.read_table(empty)

    def test_header_only_rejected(self, tmp_path):
        path = write_csv(tmp_path / "bare.csv", SLOTS_HEADER, [])
        with pytest.raises(PlotError, match="no data rows"):
            figures.read_table(path)

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(PlotError, match="cannot read"):
            figures.read_table(tmp_path / "nope.csv")

    def test_require_columns_names_missing(self, tmp_path):
        header = ("run", "slot", "vehicle")
        with pytest.raises(PlotError, match="normalized_area"):
            figures.require_columns(tmp_path / "x.csv", header, ("run", "normalized_area"))


class TestCurves:
    def test_mean_curve_values(self, slots_csv):
        _, rows = figures.read_table(slots_csv)
        curve = figures.mean_curve(rows)
        assert [t for t, _ in curve] == [0, 1, 2, 3]
        # run 1 stops after slot 2, so its final areas carry into slot 3
        expected = [1.2 / 6, 2.8 / 6, 4.5 / 6, 5.3 / 6]
        assert [a for _, a in curve] == pytest.approx(expected)

    def test_mean_curve_monotone_for_growing_series(self, slots_csv):
        _, rows = figures.read_table(slots_csv)
        areas = [a for _, a in figures.mean_curve(rows)]
        assert all(b >= a for a, b in zip(areas, areas[1:]))

    def test_final_areas(self, slots_csv):
        _, rows = figures.read_table(slots_csv)
        assert sorted(figures.final_areas(rows)) == pytest.approx(
            [0.7, 0.8, 0.9, 0.9, 1.0, 1.0]
        )

    def test_empirical_cdf_merges_ties(self):
        assert figures.empirical_cdf([18, 20, 18]) == [(18.0, 2 / 3), (20.0, 1.0)]
        assert figures.empirical_cdf([5]) == [(5.0, 1.0)]
        assert figures.empirical_cdf([]) == []

    def test_completion_slots_drop_disconnected(self, runs_csv):
        _, rows = figures.read_table(runs_csv)
        assert sorted(figures.completion_slots(rows)) == [18, 18, 20]

    def test_lower_bound_lines_filtered_to_seen_fleets(self):
        bounds = [
            {"nv": "10", "lower": "18", "upper": "90"},
            {"nv": "20", "lower": "38", "upper": "380"},
        ]
        assert figures.lower_bound_lines(bounds, {10}) == [18]
        assert figures.lower_bound_lines(bounds, {10, 20}) == [18, 38]
        # nothing matches: show every bound rather than none
        assert figures.lower_bound_lines(bounds, {7}) == [18, 38]


class TestRender:
    def test_area_vs_slot_renders(self, slots_csv, tmp_path):
        out = figures.render(spec([slots_csv], "area-vs-slot", tmp_path / "a.png"))
        assert out.is_file() and out.stat().st_size > 0

    def test_area_cdf_renders(self, slots_csv, tmp_path):
        out = figures.render(spec([slots_csv], "area-cdf", tmp_path / "b.png"))
        assert out.is_file() and out.stat().st_size > 0

    def test_tau_cdf_renders_with_bounds(self, runs_csv, bounds_csv, tmp_path):
        out = figures.render(spec([runs_csv, bounds_csv], "tau-cdf", tmp_path / "c.png"))
        assert out.is_file() and out.stat().st_size > 0
        # cdf of {18, 18, 20} starts exactly at the nv=10 lower bound
        _, rows = figures.read_table(runs_csv)
        points = figures.empirical_cdf(figures.completion_slots(rows))
        assert points[0] == (18.0, 2 / 3)

    def test_overlay_series_with_labels(self, slots_csv, tmp_path):
        other = tmp_path / "other.csv"
        other.write_bytes(slots_csv.read_bytes())
        out = figures.render(
            spec([slots_csv, other], "area-cdf", tmp_path / "d.png", ["mm", "conv"])
        )
        assert out.is_file() and out.stat().st_size > 0

    def test_svg_output(self, slots_csv, tmp_path):
        out = figures.render(spec([slots_csv], "area-vs-slot", tmp_path / "e.svg"))
        assert out.is_file() and out.stat().st_size > 0

    @pytest.mark.parametrize("suffix", [".png", ".svg"])
    def test_render_is_deterministic(self, slots_csv, tmp_path, suffix):
        first = figures.render(spec([slots_csv], "area-vs-slot", tmp_path / f"x{suffix}"))
        second = figures.render(spec([slots_csv], "area-vs-slot", tmp_path / f"y{suffix}"))
        assert first.read_bytes() == second.read_bytes()

    def test_tau_cdf_deterministic(self, runs_csv, bounds_csv, tmp_path):
        first = figures.render(spec([runs_csv, bounds_csv], "tau-cdf", tmp_path / "x.png"))
        second = figures.render(spec([runs_csv, bounds_csv], "tau-cdf", tmp_path / "y.png"))
        assert first.read_bytes() == second.read_bytes()


class TestRenderRejections:
    def test_unknown_kind(self, slots_csv, tmp_path):
        with pytest.raises(PlotError, match="unknown figure kind"):
            figures.render(spec([slots_csv], "pie", tmp_path / "z.png"))

    def test_no_inputs(self, tmp_path):
        with pytest.raises(PlotError, match="no input"):
            figures.render(spec([], "area-cdf", tmp_path / "z.png"))

    def test_empty_csv_writes_nothing(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.touch()
        out = tmp_path / "z.png"
        with pytest.raises(PlotError, match="empty csv"):
            figures.render(spec([empty], "area-vs-slot", out))
        assert not out.exists()

    def test_schema_mismatch_names_column(self, runs_csv, tmp_path):
        out = tmp_path / "z.png"
        # a runs table has no per-slot area column
        with pytest.raises(PlotError, match="normalized_area"):
            figures.render(spec([runs_csv], "area-vs-slot", out))
        assert not out.exists()

    def test_tau_cdf_requires_bounds_table(self, runs_csv, tmp_path):
        with pytest.raises(PlotError, match="bounds table"):
            figures.render(spec([runs_csv], "tau-cdf", tmp_path / "z.png"))

    def test_tau_cdf_requires_runs_table(self, bounds_csv, tmp_path):
        with pytest.raises(PlotError, match="runs csv"):
            figures.render(spec([bounds_csv], "tau-cdf", tmp_path / "z.png"))

    def test_tau_cdf_all_disconnected(self, bounds_csv, tmp_path):
        rows = [[0, 100, 10, 2, 0, 0, 4, 0, 0, 0, 3600.0]]
        runs = write_csv(tmp_path / "runs.csv", RUNS_HEADER, rows)
        with pytest.raises(PlotError, match="no connected runs"):
            figures.render(spec([runs, bounds_csv], "tau-cdf", tmp_path / "z.png"))

    def test_label_count_mismatch(self, slots_csv, tmp_path):
        with pytest.raises(PlotError, match="label"):
            figures.render(spec([slots_csv], "area-cdf", tmp_path / "z.png", ["a", "b"]))
