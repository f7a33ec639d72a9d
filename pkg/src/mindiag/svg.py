"""Deterministic SVG 1.1 emission for scenes of curves, markers, and
label rasters. Mathematical y points up; image y points down."""

import colorsys
import math
from dataclasses import dataclass, field

import numpy as np

from .diagram import OUT_OF_DOMAIN
from .errors import InputError
from .geometry import Window


@dataclass(frozen=True)
class Polyline:
    points: tuple  # ((x, y), ...)
    stroke: str = "#333333"
    width: float = 1.5
    closed: bool = False


@dataclass(frozen=True)
class Marker:
    point: tuple
    radius: float = 3.0  # pixels
    fill: str = "#000000"
    stroke: str = "none"
    stroke_width: float = 1.0


@dataclass(frozen=True)
class RasterUnderlay:
    window: Window
    labels: object  # integer array [iy, ix], iy=0 at window.y0


@dataclass(frozen=True)
class Scene:
    window: Window
    elements: tuple = ()
    background: str = "#ffffff"


def label_color(i: int) -> str:
    """Stable palette: hues spaced by the golden angle."""
    h = (i * 137.50776405003785) % 360.0
    r, g, b = colorsys.hls_to_rgb(h / 360.0, 0.72, 0.55)
    return "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255),
                                        round(b * 255))


def _clip_segment(w: Window, p, q):
    """Liang-Barsky; returns the clipped segment or None."""
    x0, y0 = p
    x1, y1 = q
    dx, dy = x1 - x0, y1 - y0
    t0, t1 = 0.0, 1.0
    for num, den in (((w.x0 - x0), dx), ((x0 - w.x1), -dx),
                     ((w.y0 - y0), dy), ((y0 - w.y1), -dy)):
        if den == 0:
            if num > 0:
                return None
            continue
        t = num / den
        if den > 0:
            if t > t1:
                return None
            t0 = max(t0, t)
        else:
            if t < t0:
                return None
            t1 = min(t1, t)
    if t0 > t1:
        return None
    return ((x0 + t0 * dx, y0 + t0 * dy), (x0 + t1 * dx, y0 + t1 * dy))


def _clip_polyline(w: Window, pts):
    """Clip to the window; a polyline may break into several runs."""
    runs = []
    cur = []
    for a, b in zip(pts[:-1], pts[1:]):
        seg = _clip_segment(w, a, b)
        if seg is None:
            if cur:
                runs.append(cur)
                cur = []
            continue
        ca, cb = seg
        if not cur:
            cur = [ca]
        elif math.hypot(cur[-1][0] - ca[0], cur[-1][1] - ca[1]) > 1e-12:
            runs.append(cur)
            cur = [ca]
        cur.append(cb)
    if cur:
        runs.append(cur)
    return runs


def render_svg(scene: Scene, width: int, height: int) -> bytes:
    if width < 1 or height < 1:
        raise InputError("image dimensions must be positive")
    w = scene.window
    if not (w.width > 0 and w.height > 0):
        raise InputError("scene window must have positive area")
    sx = width / w.width
    sy = height / w.height

    def to_px(pt):
        return ((pt[0] - w.x0) * sx, height - (pt[1] - w.y0) * sy)

    def fmt(v):
        return f"{v:.3f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" '
        f'fill="{scene.background}"/>',
    ]
    for el in scene.elements:
        if isinstance(el, RasterUnderlay):
            out.extend(_raster_rects(el, w, to_px))
        elif isinstance(el, Polyline):
            pts = list(el.points)
            if el.closed and len(pts) >= 2 and tuple(pts[0]) != tuple(pts[-1]):
                pts.append(pts[0])
            for run in _clip_polyline(w, pts):
                d = " ".join(
                    ("M" if k == 0 else "L") + fmt(px) + "," + fmt(py)
                    for k, (px, py) in enumerate(to_px(p) for p in run))
                out.append(f'<path d="{d}" fill="none" stroke="{el.stroke}" '
                           f'stroke-width="{el.width:g}"/>')
        elif isinstance(el, Marker):
            x, y = el.point
            if not w.contains((x, y)):
                continue
            px, py = to_px(el.point)
            extra = ""
            if el.stroke != "none":
                extra = (f' stroke="{el.stroke}"'
                         f' stroke-width="{el.stroke_width:g}"')
            out.append(f'<circle cx="{fmt(px)}" cy="{fmt(py)}" '
                       f'r="{el.radius:g}" fill="{el.fill}"{extra}/>')
        else:
            raise InputError(f"unknown scene element {type(el).__name__}")
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("ascii")


def _raster_rects(el: RasterUnderlay, window: Window, to_px):
    """Row run-length rectangles; unlabeled pixels are left transparent."""
    labels = np.asarray(el.labels)
    ny, nx = labels.shape
    rw = el.window
    px_w = rw.width / nx
    px_h = rw.height / ny
    rects = []
    for iy in range(ny):
        row = labels[iy]
        x_lo = 0
        while x_lo < nx:
            lab = row[x_lo]
            x_hi = x_lo + 1
            while x_hi < nx and row[x_hi] == lab:
                x_hi += 1
            if lab != OUT_OF_DOMAIN:
                x0 = rw.x0 + x_lo * px_w
                y0 = rw.y0 + iy * px_h
                p0 = to_px((x0, y0 + px_h))
                p1 = to_px((x0 + (x_hi - x_lo) * px_w, y0))
                rects.append(
                    f'<rect x="{p0[0]:.3f}" y="{p0[1]:.3f}" '
                    f'width="{p1[0] - p0[0]:.3f}" '
                    f'height="{p1[1] - p0[1]:.3f}" '
                    f'fill="{label_color(int(lab))}"/>')
            x_lo = x_hi
    return rects
