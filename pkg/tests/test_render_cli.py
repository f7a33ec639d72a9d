"""SVG emission, point files, figures, and the command-line surface."""

import json
import math

import numpy as np
import pytest

from mindiag.cli import main
from mindiag.errors import InputError
from mindiag.figures import (fig1_scene, fig2_scene, fig3_scene, fig6_frames,
                             smoothed_circle, FOUR_CROSSING_LEVEL,
                             FOUR_CROSSING_OFFSET, EXP_SQUARE_LEVELS)
from mindiag.geometry import (FunctionPair, LevelSet, Window,
                              crossing_report)
from mindiag.metric import (OriginAnchoredMetric, PlanarPoint,
                            smoothed_distance)
from mindiag.pointfile import parse_points
from mindiag.profiles import make_builtin
from mindiag.svg import (Marker, Polyline, RasterUnderlay, Scene,
                         label_color, render_svg)


class TestSvg:
    WIN = Window(0.0, 0.0, 4.0, 3.0)

    def test_empty_scene_is_valid(self):
        svg = render_svg(Scene(self.WIN), 400, 300)
        assert svg.startswith(b"<?xml")
        assert b"<svg" in svg and svg.rstrip().endswith(b"</svg>")
        assert svg.count(b"<rect") == 1  # background only

    def test_polyline_keeps_coordinate_count(self):
        sc = Scene(self.WIN, (Polyline(((0.5, 0.5), (1.5, 2.0), (3.5, 1.0))),))
        svg = render_svg(sc, 400, 300)
        assert svg.count(b"<path") == 1
        d = svg.split(b'd="')[1].split(b'"')[0]
        assert d.count(b"M") + d.count(b"L") == 3

    def test_repeated_render_is_identical(self):
        sc = Scene(self.WIN, (Polyline(((0.5, 0.5), (3.5, 2.5))),
                              Marker((2.0, 1.5))))
        assert render_svg(sc, 300, 200) == render_svg(sc, 300, 200)

    def test_y_axis_points_up(self):
        # higher mathematical y must give a smaller pixel y
        sc = Scene(self.WIN, (Marker((1.0, 0.5)), Marker((1.0, 2.5))))
        svg = render_svg(sc, 400, 300).decode()
        cys = [float(part.split('"')[1])
               for part in svg.split('cy=')[1:]]
        assert cys[0] > cys[1]

    def test_clipping_drops_outside_segments(self):
        far = Scene(self.WIN, (Polyline(((10.0, 10.0), (12.0, 11.0))),))
        assert b"<path" not in render_svg(far, 100, 100)
        crossing = Scene(self.WIN, (Polyline(((-2.0, 1.0), (6.0, 2.0))),))
        assert b"<path" in render_svg(crossing, 100, 100)

    def test_marker_outside_window_skipped(self):
        sc = Scene(self.WIN, (Marker((9.0, 9.0)),))
        assert b"<circle" not in render_svg(sc, 100, 100)

    def test_raster_underlay_rects(self):
        labels = np.full((4, 4), -1)
        labels[1:3, 1:3] = 0
        sc = Scene(self.WIN, (RasterUnderlay(self.WIN, labels),))
        svg = render_svg(sc, 100, 100)
        assert svg.count(b"<rect") == 3  # background + two label rows

    def test_bad_dimensions_rejected(self):
        with pytest.raises(InputError):
            render_svg(Scene(self.WIN), 0, 100)

    def test_palette_is_stable_and_distinct(self):
        assert label_color(3) == label_color(3)
        assert len({label_color(i) for i in range(64)}) == 64


class TestPointFile:
    def test_comments_and_blank_lines(self):
        pts = parse_points("# sites\n1 2\n\n 3,4 # trailing\n")
        assert pts == (PlanarPoint(1.0, 2.0), PlanarPoint(3.0, 4.0))

    def test_bad_line_reports_number(self):
        with pytest.raises(InputError) as err:
            parse_points("1 2\nnonsense\n")
        assert "line 2" in str(err.value)

    def test_wrong_arity_reports_number(self):
        with pytest.raises(InputError) as err:
            parse_points("1 2 3\n")
        assert "line 1" in str(err.value)

    def test_empty_file_rejected(self):
        with pytest.raises(InputError):
            parse_points("# nothing\n")


class TestSmoothedCircles:
    METRIC = OriginAnchoredMetric(PlanarPoint(0.0, 0.0))

    def test_points_lie_on_the_level_set(self):
        for r in (0.5, 0.8, 0.9):
            pts = smoothed_circle((1.0, 0.0), r, n=180)
            worst = max(abs(smoothed_distance(self.METRIC, (1, 0), tuple(q))
                            - r) for q in pts)
            assert worst < 1e-10

    def test_large_radius_curve_is_not_convex(self):
        pts = smoothed_circle((1.0, 0.0), 0.9, n=360)
        v = np.diff(np.vstack([pts, pts[:1]]), axis=0)
        cross = v[:-1, 0] * v[1:, 1] - v[:-1, 1] * v[1:, 0]
        signs = np.sign(cross[np.abs(cross) > 1e-12])
        assert np.any(signs > 0) and np.any(signs < 0)

    def test_small_radius_curve_is_convex(self):
        pts = smoothed_circle((1.0, 0.0), 0.5, n=360)
        v = np.diff(np.vstack([pts, pts[:1]]), axis=0)
        cross = v[:-1, 0] * v[1:, 1] - v[:-1, 1] * v[1:, 0]
        signs = np.sign(cross[np.abs(cross) > 1e-12])
        assert np.all(signs > 0) or np.all(signs < 0)

    def test_radius_out_of_range_rejected(self):
        with pytest.raises(InputError):
            smoothed_circle((1.0, 0.0), 1.0)

    def test_log_plane_route_agrees(self):
        # the transformed-plane level set mapped through exp lands on
        # the same curve: the exact cross-check for the ray heuristic
        from mindiag.geometry import sample_level_set
        from mindiag.metric import smoothed_to_f
        pair = FunctionPair(make_builtin("smoothed-g"),
                            make_builtin("smoothed-h"))
        for r in (0.5, 0.9):
            ls = LevelSet(pair, (0.0, 0.0), smoothed_to_f(r))
            for u, v in sample_level_set(ls, 64):
                q = (math.exp(u) * math.cos(v), math.exp(u) * math.sin(v))
                assert abs(smoothed_distance(self.METRIC, (1, 0), q)
                           - r) < 1e-10


class TestFigureScenes:
    def test_fig1_five_nested_closed_curves(self):
        sc = fig1_scene(n=180)
        curves = [el for el in sc.elements if isinstance(el, Polyline)]
        assert len(curves) == 5
        assert all(el.closed for el in curves)

    def test_fig2_curves_stay_inside_strip(self):
        sc = fig2_scene(n=180)
        for el in sc.elements:
            if isinstance(el, Polyline):
                assert max(abs(p[1]) for p in el.points) < math.pi

    def test_fig3_translated_curve_crosses_four_times(self):
        exps = make_builtin("exp-square")
        pair = FunctionPair(exps, exps)
        outer = LevelSet(pair, (0.0, 0.0), EXP_SQUARE_LEVELS[-1])
        moved = LevelSet(pair, FOUR_CROSSING_OFFSET, FOUR_CROSSING_LEVEL)
        rep = crossing_report(outer, moved, n=1024)
        assert rep.crossings == 4
        assert rep.tangencies == 0

    def test_fig6_small_config_frames(self):
        scenes, metrics = fig6_frames(seed=1, n=6, iterations=2,
                                      resolution=128, annulus=(1.0, 4.0))
        assert len(scenes) == 3
        obj = [row["objective"] for row in metrics["iterations"]]
        assert all(obj[k + 1] <= obj[k] + 1e-9 for k in range(2))
        filled = sum(isinstance(el, Marker) and el.fill == "#000000"
                     for el in scenes[0].elements)
        assert filled == 6


def run_cli(args, capsys=None):
    rc = main(args)
    if capsys is None:
        return rc, None
    out = capsys.readouterr().out
    return rc, out


class TestCli:
    @pytest.fixture
    def pts3(self, tmp_path):
        f = tmp_path / "pts.txt"
        f.write_text("0 0\n2 1\n-1 2\n")
        return str(f)

    @pytest.fixture
    def ring8(self, tmp_path):
        f = tmp_path / "ring.txt"
        rows = []
        for k in range(8):
            a = 2 * math.pi * k / 8
            rows.append(f"{2 * math.cos(a):.6f} {2 * math.sin(a):.6f}")
        f.write_text("\n".join(rows) + "\n")
        return str(f)

    def test_check_admissible_json(self, capsys):
        rc, out = run_cli(["check-admissible", "--gx", "quadratic",
                           "--hy", "smoothed-g"], capsys)
        assert rc == 0
        doc = json.loads(out)
        assert doc["gx"]["admissible"] and doc["hy"]["admissible"]
        assert doc["pair_admissible"]

    def test_check_admissible_flags_violation(self, capsys):
        rc, out = run_cli(["check-admissible", "--gx", "quadratic",
                           "--hy", "exp-square", "--range=-2,2"], capsys)
        assert rc == 0
        doc = json.loads(out)
        assert not doc["hy"]["admissible"]
        assert abs(doc["hy"]["first_violation"]) > 1 / math.sqrt(2) - 0.01

    def test_levelsets_json_and_svg(self, tmp_path, capsys):
        rc, out = run_cli(["levelsets", "--levels", "1,2", "--samples",
                           "64"], capsys)
        assert rc == 0
        doc = json.loads(out)
        assert len(doc["curves"]) == 2 and len(doc["curves"][0]) == 64
        svg = tmp_path / "ls.svg"
        rc, _ = run_cli(["levelsets", "--levels", "1", "--out", str(svg)])
        assert rc == 0
        assert svg.read_bytes().startswith(b"<?xml")

    def test_bisector_kinds(self, capsys):
        rc, out = run_cli(["bisector", "--sites", "0,0,2,0"], capsys)
        assert rc == 0
        assert json.loads(out)["kind"] == "vertical-line"
        rc, out = run_cli(["bisector", "--gx", "smoothed-g", "--hy",
                           "quadratic", "--sites", "0,0,2,1"], capsys)
        assert json.loads(out)["kind"] == "monotone-curve"

    def test_diagram_json_schema(self, pts3, capsys):
        rc, out = run_cli(["diagram", "--points", pts3, "--seed", "3"],
                          capsys)
        assert rc == 0
        doc = json.loads(out)
        assert set(doc) == {"sites", "vertices", "adjacency", "cells"}
        assert len(doc["cells"]) == 3
        assert len(doc["vertices"]) == 1
        assert sorted(doc["vertices"][0]["triple"]) == [0, 1, 2]

    def test_diagram_pgm(self, pts3, tmp_path):
        out = tmp_path / "d.pgm"
        rc, _ = run_cli(["diagram", "--points", pts3, "--resolution", "64",
                         "--out", str(out)])
        assert rc == 0
        assert out.read_bytes().startswith(b"P5\n64 64\n255\n")

    def test_smoothed_outputs(self, ring8, tmp_path, capsys):
        rc, out = run_cli(["smoothed", "--annulus", "0.5,3",
                           "--resolution", "128", "--points", ring8], capsys)
        assert rc == 0
        doc = json.loads(out)
        assert doc["angle_ok"] is True
        assert len(doc["cells"]) == 8
        assert [0, 1] in doc["adjacency"]
        svg = tmp_path / "s.svg"
        rc, _ = run_cli(["smoothed", "--annulus", "0.5,3", "--resolution",
                         "128", "--points", ring8, "--out", str(svg)])
        assert svg.read_bytes().count(b"<rect") > 50

    def test_dilation_methods_agree(self, ring8, capsys):
        rc, out = run_cli(["dilation", "--points", ring8], capsys)
        assert rc == 0
        brute = json.loads(out)
        rc, out = run_cli(["dilation", "--points", ring8, "--via-diagram"],
                          capsys)
        assert rc == 0
        via = json.loads(out)
        assert brute["pair"] == via["pair"]
        assert brute["value"] == pytest.approx(via["value"], abs=1e-12)
        assert {brute["method"], via["method"]} == {"brute-force",
                                                    "via-diagram"}

    def test_lloyd_writes_frames_and_metrics(self, tmp_path, capsys):
        out_dir = tmp_path / "frames"
        rc, out = run_cli(["lloyd", "--annulus", "1,4", "--n", "8",
                           "--iters", "2", "--seed", "1", "--resolution",
                           "128", "--out-dir", str(out_dir)], capsys)
        assert rc == 0
        written = json.loads(out)["written"]
        assert len(written) == 4  # 3 frames + metrics
        metrics = json.loads((out_dir / "metrics.json").read_text())
        obj = [row["objective"] for row in metrics["iterations"]]
        assert all(obj[k + 1] <= obj[k] + 1e-9 for k in range(2))

    def test_lloyd_seeded_rerun_is_byte_identical(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        for d in (a, b):
            rc, _ = run_cli(["lloyd", "--annulus", "1,4", "--n", "6",
                             "--iters", "1", "--seed", "9", "--resolution",
                             "128", "--out-dir", str(d)])
            assert rc == 0
        assert (a / "frame_01.svg").read_bytes() == \
            (b / "frame_01.svg").read_bytes()
        assert (a / "metrics.json").read_bytes() == \
            (b / "metrics.json").read_bytes()

    def test_figure_command(self, tmp_path, capsys):
        rc, out = run_cli(["figure", "fig2", "--out-dir", str(tmp_path)],
                          capsys)
        assert rc == 0
        files = json.loads(out)["written"]
        assert files == [str(tmp_path / "fig2.svg")]

    def test_unknown_figure_exits_1(self, tmp_path):
        rc, _ = run_cli(["figure", "fig9", "--out-dir", str(tmp_path)])
        assert rc == 1

    def test_input_error_exits_1(self):
        rc, _ = run_cli(["bisector", "--sites", "0,0,0,0"])
        assert rc == 1
        rc, _ = run_cli(["levelsets", "--levels", ""])
        assert rc == 1

    def test_degeneracy_exits_2(self, tmp_path):
        f = tmp_path / "square.txt"
        f.write_text("0 0\n2 0\n0 2\n2 2\n")
        rc, _ = run_cli(["diagram", "--points", str(f),
                         "--window=-3.1,-3.4,5.2,4.6"])
        assert rc == 2

    def test_missing_subcommand_exits_1(self):
        rc, _ = run_cli([])
        assert rc == 1
