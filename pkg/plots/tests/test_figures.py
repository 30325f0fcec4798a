import json

import numpy as np
import pytest

from groupflow_plots import (
    EQUATION_NAMES,
    FIGURE_KINDS,
    KIND_COLORS,
    KIND_ORDER,
    FigureSpec,
    phase_figure,
    psstar_sweep_figure,
    render,
    trajectory_figure,
)
from groupflow_plots.cli import main

TRAJECTORY_HEADER = "t,w00,w01,w10,w11,z0,z1,beta0,beta1"


def spec_for(kind, inputs, out, **kw):
    return FigureSpec(kind=kind, inputs=tuple(str(p) for p in inputs),
                      out=str(out), **kw)


class TestFigureSpec:
    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="unknown figure kind"):
            spec_for("pie", ["a.csv"], tmp_path / "x.png")

    def test_needs_inputs(self, tmp_path):
        with pytest.raises(ValueError, match="at least one input"):
            spec_for("phase", [], tmp_path / "x.png")

    def test_rejects_unknown_output_format(self, tmp_path):
        with pytest.raises(ValueError, match="unsupported output format"):
            spec_for("phase", ["a.csv"], tmp_path / "x.pdf")

    def test_rejects_bad_dpi(self, tmp_path):
        with pytest.raises(ValueError, match="dpi"):
            spec_for("phase", ["a.csv"], tmp_path / "x.png", dpi=0)

    def test_kind_list_is_stable(self):
        assert FIGURE_KINDS == ("trajectory", "phase", "psstar-sweep")


class TestTrajectory:
    def test_curves_and_asymptotes(self, sim_dir, tmp_path):
        spec = spec_for("trajectory",
                        [sim_dir / "trajectory_r000.csv", sim_dir / "summary.json"],
                        tmp_path / "traj.png")
        fig, info = trajectory_figure(spec)
        # four measured curves plus four dashed predicted levels
        assert len(fig.axes[0].lines) == 8
        assert info["asymptotes"] == 4
        assert info["replicas"] == 1
        assert info["samples"] > 1

    def test_replicas_are_averaged(self, sim_dir, tmp_path):
        csvs = sorted(sim_dir.glob("trajectory_r*.csv"))
        assert len(csvs) == 2
        spec = spec_for("trajectory", [*csvs, sim_dir / "summary.json"],
                        tmp_path / "traj.png")
        fig, info = trajectory_figure(spec)
        assert info["replicas"] == 2
        assert len(fig.axes[0].lines) == 8

    def test_asymptotes_match_summary_prediction(self, sim_dir, tmp_path):
        spec = spec_for("trajectory",
                        [sim_dir / "trajectory_r000.csv", sim_dir / "summary.json"],
                        tmp_path / "traj.png")
        fig, _ = trajectory_figure(spec)
        predicted = json.loads((sim_dir / "summary.json").read_text())
        flat = [v for row in predicted["prediction"]["omega"] for v in row]
        levels = [line.get_ydata()[0] for line in fig.axes[0].lines[4:]]
        assert levels == pytest.approx(flat, abs=0)

    def test_missing_prediction_warns_and_draws_curves_only(self, sim_dir, tmp_path):
        spec = spec_for("trajectory", [sim_dir / "trajectory_r000.csv"],
                        tmp_path / "traj.png")
        with pytest.warns(UserWarning, match="measured curves only"):
            fig, info = trajectory_figure(spec)
        assert len(fig.axes[0].lines) == 4
        assert info["asymptotes"] == 0

    def test_empty_csv_is_an_error(self, tmp_path):
        empty = tmp_path / "trajectory_r000.csv"
        empty.write_text(TRAJECTORY_HEADER + "\n", encoding="utf-8")
        spec = spec_for("trajectory", [empty], tmp_path / "traj.png")
        with pytest.raises(ValueError, match="no samples"):
            trajectory_figure(spec)

    def test_wrong_columns_rejected(self, tmp_path):
        bad = tmp_path / "other.csv"
        bad.write_text("t,a,b\n0.0,1,2\n", encoding="utf-8")
        spec = spec_for("trajectory", [bad], tmp_path / "traj.png")
        with pytest.raises(ValueError, match="lacks trajectory columns"):
            trajectory_figure(spec)

    def test_mismatched_time_grids_rejected(self, sim_dir, tmp_path):
        other = tmp_path / "short.csv"
        lines = (sim_dir / "trajectory_r000.csv").read_text().splitlines()
        other.write_text("\n".join(lines[:-3]) + "\n", encoding="utf-8")
        spec = spec_for("trajectory",
                        [sim_dir / "trajectory_r000.csv", other],
                        tmp_path / "traj.png")
        with pytest.raises(ValueError, match="different time grid"):
            trajectory_figure(spec)

    def test_json_without_prediction_rejected(self, sim_dir, tmp_path):
        spec = spec_for("trajectory",
                        [sim_dir / "trajectory_r000.csv", sim_dir / "metadata.json"],
                        tmp_path / "traj.png")
        with pytest.raises(ValueError, match="no 2x2 omega prediction"):
            trajectory_figure(spec)


class TestPhase:
    def test_heatmap_with_boundaries(self, phase_dir, tmp_path):
        spec = spec_for("phase",
                        [phase_dir / "phase_ps1.csv", phase_dir / "boundaries_ps1.json"],
                        tmp_path / "phase.png")
        fig, info = phase_figure(spec)
        assert info["resolution"] == (41, 41)
        assert set(info["kinds"]) <= set(KIND_ORDER)
        assert len(info["kinds"]) >= 2
        assert info["boundary_polylines"] >= 1
        assert len(fig.axes[0].lines) == info["boundary_polylines"]

    def test_legend_always_lists_all_kinds(self, sb_phase_dir, tmp_path):
        spec = spec_for("phase", [sb_phase_dir / "phase_ps0.2.csv"],
                        tmp_path / "phase.png")
        fig, _ = phase_figure(spec)
        labels = [t.get_text() for t in fig.axes[0].get_legend().get_texts()]
        assert labels == list(KIND_ORDER)

    def test_single_phase_grid_is_one_color(self, sb_phase_dir, tmp_path):
        spec = spec_for("phase", [sb_phase_dir / "phase_ps0.2.csv"],
                        tmp_path / "phase.png")
        fig, info = phase_figure(spec)
        assert info["kinds"] == ["SB"]
        image = fig.axes[0].images[0]
        codes = np.unique(np.asarray(image.get_array()))
        assert codes.tolist() == [KIND_ORDER.index("SB")]

    def test_kind_colors_are_frozen(self):
        assert KIND_COLORS == {"A": "#4c72b0", "CP": "#dd8452", "D": "#55a868",
                               "SB": "#c44e52", "U": "#8c8c8c"}

    def test_needs_exactly_one_csv(self, phase_dir, tmp_path):
        spec = spec_for("phase", [phase_dir / "boundaries_ps1.json"],
                        tmp_path / "phase.png")
        with pytest.raises(ValueError, match="exactly one phase CSV"):
            phase_figure(spec)

    def test_partial_grid_rejected(self, phase_dir, tmp_path):
        lines = (phase_dir / "phase_ps1.csv").read_text().splitlines()
        broken = tmp_path / "phase.csv"
        broken.write_text("\n".join(lines[:-1]) + "\n", encoding="utf-8")
        spec = spec_for("phase", [broken], tmp_path / "phase.png")
        with pytest.raises(ValueError, match="full pa0 x pa1 grid"):
            phase_figure(spec)

    def test_unknown_kind_label_rejected(self, tmp_path):
        bad = tmp_path / "phase.csv"
        bad.write_text("pa0,pa1,kind,core,basin\n0.0,0.0,X,,\n", encoding="utf-8")
        spec = spec_for("phase", [bad], tmp_path / "phase.png")
        with pytest.raises(ValueError, match="unknown kind labels"):
            phase_figure(spec)

    def test_four_pixel_grid_renders(self, tmp_path):
        rows = ["pa0,pa1,kind,core,basin", "0.0,0.0,D,,", "0.0,1.0,CP,1,",
                "1.0,0.0,CP,0,", "1.0,1.0,A,,"]
        tiny = tmp_path / "phase.csv"
        tiny.write_text("\n".join(rows) + "\n", encoding="utf-8")
        _, info = phase_figure(spec_for("phase", [tiny], tmp_path / "phase.png"))
        assert info["resolution"] == (2, 2)
        assert info["kinds"] == ["A", "CP", "D"]


class TestPsstarSweep:
    def test_sweep_curves(self, sweep_dir, tmp_path):
        spec = spec_for("psstar-sweep", [sweep_dir / "psstar_sweep.json"],
                        tmp_path / "sweep.png")
        fig, info = psstar_sweep_figure(spec)
        assert info["points"] == 3
        assert info["with_root"] == 3
        assert info["c_values"] == [2.0]
        # one curve per boundary equation plus the bold minimum
        assert len(fig.axes[0].lines) == len(EQUATION_NAMES) + 1

    def test_single_point_file(self, sweep_dir, tmp_path):
        spec = spec_for("psstar-sweep", [sweep_dir / "psstar.json"],
                        tmp_path / "point.png")
        fig, info = psstar_sweep_figure(spec)
        assert info["points"] == 1
        # b=1, c=1 has no boundary roots at all; the figure must still render
        assert info["with_root"] == 0

    def test_sweep_and_point_files_combine(self, sweep_dir, tmp_path):
        spec = spec_for("psstar-sweep",
                        [sweep_dir / "psstar_sweep.json", sweep_dir / "psstar.json"],
                        tmp_path / "both.png")
        _, info = psstar_sweep_figure(spec)
        assert info["points"] == 4
        assert info["c_values"] == [1.0, 2.0]

    def test_rejects_csv_inputs(self, phase_dir, tmp_path):
        spec = spec_for("psstar-sweep", [phase_dir / "phase_ps1.csv"],
                        tmp_path / "sweep.png")
        with pytest.raises(ValueError, match="JSON inputs only"):
            psstar_sweep_figure(spec)

    def test_rejects_unrelated_json(self, sim_dir, tmp_path):
        spec = spec_for("psstar-sweep", [sim_dir / "metadata.json"],
                        tmp_path / "sweep.png")
        with pytest.raises(ValueError, match="not a critical-swap result"):
            psstar_sweep_figure(spec)


class TestRenderAndCli:
    def test_render_writes_png_and_svg_without_suffix(self, phase_dir, tmp_path):
        spec = spec_for("phase", [phase_dir / "phase_ps1.csv"], tmp_path / "phase")
        result = render(spec)
        assert [p.suffix for p in result.written] == [".png", ".svg"]
        for path in result.written:
            assert path.is_file() and path.stat().st_size > 0

    def test_render_single_format(self, phase_dir, tmp_path):
        result = render(spec_for("phase", [phase_dir / "phase_ps1.csv"],
                                 tmp_path / "phase.svg"))
        assert [p.name for p in result.written] == ["phase.svg"]
        assert result.written[0].stat().st_size > 0

    def test_cli_trajectory(self, sim_dir, tmp_path, capsys):
        out = tmp_path / "traj.png"
        rc = main(["trajectory", "--in", str(sim_dir / "trajectory_r000.csv"),
                   str(sim_dir / "summary.json"), "--out", str(out),
                   "--title", "demo run"])
        assert rc == 0
        assert out.is_file() and out.stat().st_size > 0
        assert capsys.readouterr().out.strip() == str(out)

    def test_cli_error_is_single_line(self, tmp_path, capsys):
        rc = main(["phase", "--in", str(tmp_path / "missing.csv"),
                   "--out", str(tmp_path / "x.png")])
        assert rc == 1
        err = capsys.readouterr().err
        assert err.startswith("error: ") and err.count("\n") == 1

    def test_cli_rejects_unknown_kind(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["pie", "--in", "a.csv", "--out", str(tmp_path / "x.png")])

    def test_rendering_leaves_inputs_alone_and_is_repeatable(self, phase_dir, tmp_path):
        source = phase_dir / "phase_ps1.csv"
        before = source.read_bytes()
        buffers = []
        for name in ("one.png", "two.png"):
            result = render(spec_for("phase", [source], tmp_path / name))
            result.figure.canvas.draw()
            buffers.append(bytes(result.figure.canvas.buffer_rgba()))
        assert source.read_bytes() == before
        assert buffers[0] == buffers[1]
