"""Command-line surface.

Exit codes: 0 success, 1 input problem, 2 numeric or degeneracy
failure. JSON goes to stdout unless --out names a file; --out picks
the format by extension (.json, .svg, .pgm).
"""

import argparse
import json
import sys

import numpy as np

from .diagram import (build_incremental, build_raster, diagram_to_json,
                      raster_to_pgm)
from .errors import ComputationError, InputError, MindiagError
from .figures import figure_command
from .geometry import (Bisector, FunctionPair, LevelSet, Window,
                       classify_bisector, sample_level_set)
from .lloyd import AnnulusConfig, run_lloyd
from .metric import PlanarPoint
from .pointfile import load_points
from .profiles import check_admissible_on, make_builtin
from .smoothed import (StarNetwork, build_smoothed_voronoi,
                       check_angle_condition, max_dilation_pair_bruteforce,
                       max_dilation_pair_via_diagram, smoothed_to_json_dict)
from .svg import Marker, Polyline, RasterUnderlay, Scene, render_svg


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _parse_floats(text, n, what):
    parts = [t for t in text.replace(",", " ").split() if t]
    if len(parts) != n:
        raise InputError(f"{what} needs {n} comma-separated numbers")
    try:
        return tuple(float(t) for t in parts)
    except ValueError:
        raise InputError(f"could not parse {what} {text!r}")


def _window_arg(text):
    x0, y0, x1, y1 = _parse_floats(text, 4, "--window")
    if not (x0 < x1 and y0 < y1):
        raise InputError("--window needs x0 < x1 and y0 < y1")
    return Window(x0, y0, x1, y1)


def _pair_from(args):
    return FunctionPair(make_builtin(args.gx), make_builtin(args.hy))


def _emit(args, doc=None, svg=None, pgm=None):
    """Write whichever artifact the --out extension selects."""
    out = getattr(args, "out", None)
    if out is None:
        if doc is None:
            raise InputError("this command produces no JSON; use --out")
        json.dump(doc, sys.stdout, indent=1)
        sys.stdout.write("\n")
        return
    if out.endswith(".json"):
        if doc is None:
            raise InputError("no JSON output for this command")
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
    elif out.endswith(".svg"):
        if svg is None:
            raise InputError("no SVG output for this command")
        with open(out, "wb") as fh:
            fh.write(svg)
    elif out.endswith(".pgm"):
        if pgm is None:
            raise InputError("no PGM output for this command")
        with open(out, "wb") as fh:
            fh.write(pgm)
    else:
        raise InputError(f"unknown output extension on {out!r}")


def _scene_svg(scene, resolution):
    aspect = scene.window.height / scene.window.width
    return render_svg(scene, resolution, max(1, round(resolution * aspect)))


def _cmd_check_admissible(args):
    doc = {}
    for label, name in (("gx", args.gx), ("hy", args.hy)):
        profile = make_builtin(name)
        lo, hi = profile.domain
        if args.range:
            span = _parse_floats(args.range, 2, "--range")
        else:
            pad = 1e-6 * (min(hi, 4.0) - max(lo, -4.0))
            span = (max(lo + pad, -4.0), min(hi - pad, 4.0))
        rep = check_admissible_on(profile, span, args.samples)
        doc[label] = {
            "profile": name, "admissible": rep.admissible,
            "min_margin": rep.min_margin,
            "first_violation": rep.first_violation,
            "interval": [span[0], span[1]],
        }
    doc["pair_admissible"] = doc["gx"]["admissible"] and \
        doc["hy"]["admissible"]
    _emit(args, doc=doc)
    return 0


def _cmd_levelsets(args):
    pair = _pair_from(args)
    center = _parse_floats(args.center, 2, "--center")
    levels = [float(t) for t in args.levels.split(",") if t]
    if not levels:
        raise InputError("--levels needs at least one value")
    curves = [sample_level_set(LevelSet(pair, center, lv), args.samples)
              for lv in levels]
    doc = {"center": list(center), "levels": levels,
           "curves": [[[float(x), float(y)] for x, y in c] for c in curves]}
    pts = np.vstack(curves)
    window = args.window or Window.around(pts, inflate=0.05)
    elements = [Polyline(tuple(map(tuple, c)), closed=True)
                for c in curves]
    elements.append(Marker(tuple(center), radius=3.0))
    svg = _scene_svg(Scene(window, tuple(elements)), args.resolution)
    _emit(args, doc=doc, svg=svg)
    return 0


def _cmd_bisector(args):
    pair = _pair_from(args)
    x1, y1, x2, y2 = _parse_floats(args.sites, 4, "--sites")
    bis = classify_bisector(pair, (x1, y1), (x2, y2))
    window = args.window or Window.around(
        np.array([[x1, y1], [x2, y2]]), inflate=1.5)
    us, pts = bis.trace(window, n=args.samples)
    doc = {
        "kind": bis.kind,
        "sites": [[x1, y1], [x2, y2]],
        "axis_value": bis.axis_value,
        "param_axis": bis.param_axis if bis.kind == "monotone-curve" else None,
        "points": [[float(x), float(y)] for x, y in pts],
    }
    elements = [Polyline(tuple(map(tuple, pts))),
                Marker((x1, y1)), Marker((x2, y2))]
    svg = _scene_svg(Scene(window, tuple(elements)), args.resolution)
    _emit(args, doc=doc, svg=svg)
    return 0


def _cmd_diagram(args):
    pair = _pair_from(args)
    sites = load_points(args.points)
    window = args.window or Window.around(
        np.array([[p.x, p.y] for p in sites]), inflate=0.8)
    d = build_incremental(pair, sites, args.seed, window)
    doc = json.loads(diagram_to_json(d))
    svg = None
    pgm = None
    if args.out and args.out.endswith(".svg"):
        elements = []
        from .diagram import cell_boundary_points
        for i in range(len(sites)):
            pts = cell_boundary_points(d, i)
            elements.append(Polyline(tuple(map(tuple, pts)), closed=True))
        for p in sites:
            elements.append(Marker((p.x, p.y)))
        svg = _scene_svg(Scene(window, tuple(elements)), args.resolution)
    if args.out and args.out.endswith(".pgm"):
        raster = build_raster(pair, sites, window, args.resolution)
        pgm = raster_to_pgm(raster)
    _emit(args, doc=doc, svg=svg, pgm=pgm)
    return 0


def _cmd_smoothed(args):
    origin = _parse_floats(args.origin, 2, "--origin")
    r_in, r_out = _parse_floats(args.annulus, 2, "--annulus")
    leaves = load_points(args.points)
    net = StarNetwork(origin, leaves)
    d = build_smoothed_voronoi(net, (r_in, r_out), args.resolution)
    report = check_angle_condition(d)
    doc = smoothed_to_json_dict(d)
    doc["angle_ok"] = d.angle_ok
    doc["max_angle_per_cell"] = [c.max_angle for c in report.cells]
    elements = [RasterUnderlay(d.raster.window, d.raster.labels)]
    for p in net.leaves:
        elements.append(Marker((p.x, p.y)))
    elements.append(Marker(tuple(origin), radius=4.0, fill="#ffffff",
                           stroke="#000000"))
    svg = render_svg(Scene(d.raster.window, tuple(elements)),
                     min(args.resolution * 2, 1024),
                     min(args.resolution * 2, 1024))
    _emit(args, doc=doc, svg=svg)
    return 0


def _cmd_dilation(args):
    origin = _parse_floats(args.origin, 2, "--origin")
    leaves = load_points(args.points)
    net = StarNetwork(origin, leaves)
    if args.via_diagram:
        r_in, r_out = _annulus_for(net, args)
        d = build_smoothed_voronoi(net, (r_in, r_out), args.resolution)
        pair, value = max_dilation_pair_via_diagram(d)
        method = "via-diagram"
    else:
        pair, value = max_dilation_pair_bruteforce(net)
        method = "brute-force"
    _emit(args, doc={"pair": list(pair), "value": value, "method": method})
    return 0


def _annulus_for(net, args):
    if args.annulus:
        return _parse_floats(args.annulus, 2, "--annulus")
    radii = net.radii()
    return 0.9 * float(radii.min()), 1.1 * float(radii.max())


def _cmd_lloyd(args):
    import os
    r_in, r_out = _parse_floats(args.annulus, 2, "--annulus")
    cfg = AnnulusConfig(_parse_floats(args.origin, 2, "--origin"),
                        r_in, r_out, args.resolution)
    traj = run_lloyd(cfg, args.n, args.iters, args.seed, init=args.init)
    os.makedirs(args.out_dir, exist_ok=True)
    from .figures import _circle_polyline
    pad = 0.04 * cfg.outer
    window = Window(cfg.hub.x - cfg.outer - pad, cfg.hub.y - cfg.outer - pad,
                    cfg.hub.x + cfg.outer + pad, cfg.hub.y + cfg.outer + pad)
    rings = (_circle_polyline(cfg.hub, cfg.inner),
             _circle_polyline(cfg.hub, cfg.outer))
    written = []
    for k, state in enumerate(traj.states):
        elements = list(rings)
        if k + 1 < len(traj.states):
            for p in traj.states[k + 1].sites:
                elements.append(Marker((p.x, p.y), radius=2.0,
                                       fill="#ffffff", stroke="#555555"))
        for p in state.sites:
            elements.append(Marker((p.x, p.y), radius=3.2))
        path = os.path.join(args.out_dir, f"frame_{k:02d}.svg")
        with open(path, "wb") as fh:
            fh.write(render_svg(Scene(window, tuple(elements)), 900, 900))
        written.append(path)
    metrics = {
        "iterations": [
            {"iteration": s.iteration, "objective": s.objective,
             "spacing_cv": traj.spacing[k]}
            for k, s in enumerate(traj.states)],
        "seed": args.seed, "sites": args.n, "resolution": args.resolution,
        "annulus": [r_in, r_out], "init": args.init,
    }
    mpath = os.path.join(args.out_dir, "metrics.json")
    with open(mpath, "w", encoding="utf-8") as fh:
        json.dump(metrics, fh, indent=1)
    written.append(mpath)
    json.dump({"written": written}, sys.stdout, indent=1)
    sys.stdout.write("\n")
    return 0


def _cmd_figure(args):
    written = figure_command(args.name, args.out_dir, seed=args.seed,
                             resolution=args.resolution)
    json.dump({"written": written}, sys.stdout, indent=1)
    sys.stdout.write("\n")
    return 0


def build_parser():
    p = _Parser(prog="mindiag", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, gx=True, window=False, seed=False, resolution=512,
               out=True):
        if gx:
            sp.add_argument("--gx", default="quadratic")
            sp.add_argument("--hy", default="quadratic")
        if window:
            sp.add_argument("--window", type=_window_arg, default=None)
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--resolution", type=int, default=resolution)
        if out:
            sp.add_argument("--out", default=None)

    sp = sub.add_parser("check-admissible")
    sp.add_argument("--gx", default="quadratic")
    sp.add_argument("--hy", default="quadratic")
    sp.add_argument("--range", default=None)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=_cmd_check_admissible)

    sp = sub.add_parser("levelsets")
    common(sp, window=True)
    sp.add_argument("--center", default="0,0")
    sp.add_argument("--levels", required=True)
    sp.add_argument("--samples", type=int, default=512)
    sp.set_defaults(fn=_cmd_levelsets)

    sp = sub.add_parser("bisector")
    common(sp, window=True)
    sp.add_argument("--sites", required=True)
    sp.add_argument("--samples", type=int, default=512)
    sp.set_defaults(fn=_cmd_bisector)

    sp = sub.add_parser("diagram")
    common(sp, window=True, seed=True)
    sp.add_argument("--points", required=True)
    sp.set_defaults(fn=_cmd_diagram)

    sp = sub.add_parser("smoothed")
    common(sp, gx=False, resolution=256)
    sp.add_argument("--origin", default="0,0")
    sp.add_argument("--annulus", required=True)
    sp.add_argument("--points", required=True)
    sp.set_defaults(fn=_cmd_smoothed)

    sp = sub.add_parser("dilation")
    sp.add_argument("--origin", default="0,0")
    sp.add_argument("--points", required=True)
    sp.add_argument("--via-diagram", action="store_true")
    sp.add_argument("--annulus", default=None)
    sp.add_argument("--resolution", type=int, default=256)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=_cmd_dilation)

    sp = sub.add_parser("lloyd")
    sp.add_argument("--origin", default="0,0")
    sp.add_argument("--annulus", required=True)
    sp.add_argument("--n", type=int, default=128)
    sp.add_argument("--iters", type=int, default=16)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--resolution", type=int, default=512)
    sp.add_argument("--init", default="exponential",
                    choices=("exponential", "euclidean"))
    sp.add_argument("--out-dir", required=True)
    sp.set_defaults(fn=_cmd_lloyd)

    sp = sub.add_parser("figure")
    sp.add_argument("name")
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--resolution", type=int, default=512)
    sp.set_defaults(fn=_cmd_figure)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except ComputationError as err:
        print(f"numeric failure: {err}", file=sys.stderr)
        return 2
    except MindiagError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
