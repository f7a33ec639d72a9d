"""Reference figures: smoothed-distance circles, their log-plane
counterparts, the non-pseudocircle example, and Lloyd frames."""

import json
import math

import numpy as np

from .errors import InputError
from .geometry import FunctionPair, LevelSet, Window, sample_level_set
from .lloyd import AnnulusConfig, run_lloyd
from .metric import (OriginAnchoredMetric, PlanarPoint, smoothed_distance,
                     smoothed_to_f)
from .profiles import make_builtin
from .rootfind import bracketed_root
from .svg import Marker, Polyline, Scene, render_svg

SMOOTHED_CIRCLE_RADII = (0.5, 0.6, 0.7, 0.8, 0.9)
DELTA_CIRCLE_RADII = (0.5, 0.75, 0.9, 0.99, 0.999)
EXP_SQUARE_LEVELS = (2.5, 5.0, 10.0, 20.0, 40.0, 80.0, 160.0)
# inner level translated along the diagonal into the outer curve's
# corner region, where it enters and leaves twice
FOUR_CROSSING_LEVEL = 10.0
FOUR_CROSSING_OFFSET = (0.8, 0.8)

_STROKES = ("#1b6ca8", "#2a9d8f", "#e9c46a", "#ee8959", "#d62828",
            "#6a4c93", "#33415c")


def smoothed_circle(center, radius, origin=(0.0, 0.0), n=720):
    """Points q with d_o(center, q) = radius, one per ray from center.

    d_o grows from 0 along each ray near the center, so the first
    bracketed crossing exists; assembling per-ray points is a drawing
    heuristic (the log-plane level set mapped through exp is the exact
    reference) but every returned point lies on the level set.
    """
    if not 0.0 < radius < 1.0:
        raise InputError("smoothed-distance radius must be in (0, 1)")
    m = OriginAnchoredMetric(PlanarPoint(float(origin[0]), float(origin[1])))
    cx, cy = float(center[0]), float(center[1])
    pts = []
    for k in range(n):
        phi = 2.0 * math.pi * k / n
        ux, uy = math.cos(phi), math.sin(phi)

        def resid(t):
            return smoothed_distance(m, (cx, cy),
                                     (cx + t * ux, cy + t * uy)) - radius

        lo, hi = 0.0, 1e-6
        while resid(hi) < 0.0:
            lo = hi
            hi *= 2.0
            if hi > 1e9:
                raise InputError(
                    "radius not attained along a ray; it may exceed the "
                    "supremum for this direction")
        t = bracketed_root(resid, lo, hi, xtol=1e-14, ftol=1e-13)
        pts.append((cx + t * ux, cy + t * uy))
    return np.array(pts)


def fig1_scene(n=720):
    """Nested smoothed-distance circles around (1, 0) with hub (0, 0)."""
    curves = [smoothed_circle((1.0, 0.0), r, n=n)
              for r in SMOOTHED_CIRCLE_RADII]
    allpts = np.vstack(curves)
    window = Window.around(allpts, inflate=0.05)
    elements = [Polyline(tuple(map(tuple, c)), stroke=_STROKES[i], closed=True)
                for i, c in enumerate(curves)]
    elements.append(Marker((1.0, 0.0), radius=4.0))
    elements.append(Marker((0.0, 0.0), radius=4.0, fill="#ffffff",
                           stroke="#000000"))
    return Scene(window, tuple(elements))


def fig2_scene(n=720):
    """The same circles in the log plane, where they are level sets of
    the transformed separable function; all stay inside |y| < pi."""
    pair = FunctionPair(make_builtin("smoothed-g"), make_builtin("smoothed-h"))
    elements = []
    for i, r in enumerate(DELTA_CIRCLE_RADII):
        ls = LevelSet(pair, (0.0, 0.0), smoothed_to_f(r))
        pts = sample_level_set(ls, n)
        elements.append(Polyline(tuple(map(tuple, pts)),
                                 stroke=_STROKES[i], closed=True))
    elements.append(Marker((0.0, 0.0), radius=4.0))
    window = Window(-8.5, -math.pi, 8.5, math.pi)
    return Scene(window, tuple(elements))


def fig3_scene(n=720):
    """Level sets of the fast-growing pair, plus the translated curve
    that crosses the outermost one four times."""
    exps = make_builtin("exp-square")
    pair = FunctionPair(exps, exps)
    elements = []
    for i, lv in enumerate(EXP_SQUARE_LEVELS):
        pts = sample_level_set(LevelSet(pair, (0.0, 0.0), lv), n)
        elements.append(Polyline(tuple(map(tuple, pts)),
                                 stroke=_STROKES[i], closed=True, width=1.2))
    moved = sample_level_set(
        LevelSet(pair, FOUR_CROSSING_OFFSET, FOUR_CROSSING_LEVEL), n)
    elements.append(Polyline(tuple(map(tuple, moved)), stroke="#000000",
                             closed=True, width=2.0))
    window = Window.around(np.vstack([moved,
                                      elements[-2].points]), inflate=0.06)
    return Scene(window, tuple(elements))


def fig6_frames(seed=42, n=128, iterations=16, resolution=512,
                annulus=(1.0, 18.0)):
    """Lloyd frames: filled dots are the current sites, hollow dots the
    sites after the next step."""
    cfg = AnnulusConfig((0.0, 0.0), annulus[0], annulus[1], resolution)
    traj = run_lloyd(cfg, n, iterations, seed)
    pad = 0.04 * cfg.outer
    window = Window(cfg.hub.x - cfg.outer - pad, cfg.hub.y - cfg.outer - pad,
                    cfg.hub.x + cfg.outer + pad, cfg.hub.y + cfg.outer + pad)
    ring_in = _circle_polyline(cfg.hub, cfg.inner)
    ring_out = _circle_polyline(cfg.hub, cfg.outer)
    scenes = []
    for k, state in enumerate(traj.states):
        elements = [ring_in, ring_out]
        if k + 1 < len(traj.states):
            for p in traj.states[k + 1].sites:
                elements.append(Marker((p.x, p.y), radius=2.0,
                                       fill="#ffffff", stroke="#555555"))
        for p in state.sites:
            elements.append(Marker((p.x, p.y), radius=3.2))
        scenes.append(Scene(window, tuple(elements)))
    metrics = {
        "iterations": [
            {"iteration": s.iteration, "objective": s.objective,
             "spacing_cv": traj.spacing[k]}
            for k, s in enumerate(traj.states)],
        "seed": seed, "sites": n, "resolution": resolution,
        "annulus": list(annulus),
    }
    return scenes, metrics


def _circle_polyline(center, radius, n=256):
    ts = np.linspace(0.0, 2.0 * math.pi, n + 1)
    pts = tuple((center.x + radius * math.cos(t),
                 center.y + radius * math.sin(t)) for t in ts)
    return Polyline(pts, stroke="#888888", width=1.0)


def figure_command(name, out_dir, seed=42, resolution=512, size=900):
    """Write the named figure's files into out_dir; returns the paths."""
    import os
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if name in ("fig1", "fig2", "fig3"):
        scene = {"fig1": fig1_scene, "fig2": fig2_scene,
                 "fig3": fig3_scene}[name]()
        aspect = scene.window.height / scene.window.width
        path = os.path.join(out_dir, f"{name}.svg")
        with open(path, "wb") as fh:
            fh.write(render_svg(scene, size, max(1, round(size * aspect))))
        written.append(path)
    elif name == "fig6":
        scenes, metrics = fig6_frames(seed=seed, resolution=resolution)
        for k, scene in enumerate(scenes):
            path = os.path.join(out_dir, f"fig6_frame_{k:02d}.svg")
            with open(path, "wb") as fh:
                fh.write(render_svg(scene, size, size))
            written.append(path)
        mpath = os.path.join(out_dir, "fig6_metrics.json")
        with open(mpath, "w", encoding="utf-8") as fh:
            json.dump(metrics, fh, indent=1)
        written.append(mpath)
    else:
        raise InputError(f"unknown figure {name!r}; expected fig1, fig2, "
                         "fig3, or fig6")
    return written
