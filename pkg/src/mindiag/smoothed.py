"""Smoothed-distance Voronoi diagrams on an annulus around a hub.

A star network routes every pair through its hub o; the quality of a
detour is the smoothed distance between the leaves. The modified
distance D(p,q) = g(ln(d(p,o)/d(q,o))) + h(angle poq) is an increasing
transform of smoothed distance wherever the angle stays within a
quarter turn, so the argmin diagram of D over the leaves is the
smoothed-distance Voronoi diagram whenever each cell passes the angle
check. Wrapping the angle into [-pi, pi] stands in for the log-plane
periodic copies of the sites.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .diagram import OUT_OF_DOMAIN, RasterDiagram
from .errors import InputError, UndefinedPointError
from .geometry import Window
from .metric import OriginAnchoredMetric, PlanarPoint, dilation
from .profiles import make_builtin

_G = make_builtin("smoothed-g")
_H = make_builtin("extended-h")

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class StarNetwork:
    hub: PlanarPoint
    leaves: tuple

    def __init__(self, hub, leaves):
        hub = PlanarPoint(float(hub[0]), float(hub[1]))
        leaves = tuple(PlanarPoint(float(p[0]), float(p[1])) for p in leaves)
        if any(p == hub for p in leaves):
            raise InputError("a leaf coincides with the hub")
        if len(set(leaves)) != len(leaves):
            raise InputError("leaves must be pairwise distinct")
        object.__setattr__(self, "hub", hub)
        object.__setattr__(self, "leaves", leaves)

    def radii(self):
        o = self.hub
        return np.array([math.hypot(p.x - o.x, p.y - o.y)
                         for p in self.leaves])

    def angles(self):
        o = self.hub
        return np.array([math.atan2(p.y - o.y, p.x - o.x)
                         for p in self.leaves])


def _wrap_abs(a):
    """|angle| folded into [0, pi]."""
    return np.abs(np.mod(np.asarray(a, float) + math.pi, 2 * math.pi)
                  - math.pi)


def modified_distance(net: StarNetwork, p, q) -> float:
    """g(log radius ratio) + h(wrapped angle at the hub)."""
    o = net.hub
    dp = math.hypot(p[0] - o.x, p[1] - o.y)
    dq = math.hypot(q[0] - o.x, q[1] - o.y)
    if dp == 0.0 or dq == 0.0:
        raise UndefinedPointError("modified distance is undefined at the hub")
    ang = math.atan2(p[1] - o.y, p[0] - o.x) - math.atan2(q[1] - o.y,
                                                          q[0] - o.x)
    ang = abs(math.remainder(ang, math.tau))
    return float(_G.eval(math.log(dp / dq)) + _H.eval(ang))


class CellAngle(NamedTuple):
    site: int
    max_angle: float
    slack: float
    ok: bool


@dataclass(frozen=True)
class AngleReport:
    cells: tuple
    ok: bool


@dataclass(frozen=True)
class SmoothedDiagram:
    network: StarNetwork
    annulus: tuple  # (inner, outer)
    raster: RasterDiagram
    adjacency: frozenset
    angle_ok: bool


def _annulus_grids(net, annulus, resolution):
    r_in, r_out = annulus
    o = net.hub
    window = Window(o.x - r_out, o.y - r_out, o.x + r_out, o.y + r_out)
    step = window.width / resolution
    xs = window.x0 + (np.arange(resolution) + 0.5) * step
    ys = window.y0 + (np.arange(resolution) + 0.5) * step
    X, Y = np.meshgrid(xs, ys)
    D0 = np.hypot(X - o.x, Y - o.y)
    TH = np.arctan2(Y - o.y, X - o.x)
    inside = (D0 >= r_in) & (D0 <= r_out)
    return window, D0, TH, inside


def build_smoothed_voronoi(net: StarNetwork, annulus, resolution: int
                           ) -> SmoothedDiagram:
    """Label each annulus pixel with the nearest leaf under modified
    distance; ties go to the lowest leaf index."""
    r_in, r_out = float(annulus[0]), float(annulus[1])
    if not 0.0 < r_in < r_out:
        raise InputError("annulus needs 0 < inner < outer")
    if resolution < 2:
        raise InputError("resolution must be at least 2")
    radii = net.radii()
    if np.any(radii < r_in - 1e-12) or np.any(radii > r_out + 1e-12):
        raise InputError("every leaf must lie within the annulus")
    window, D0, TH, inside = _annulus_grids(net, (r_in, r_out), resolution)
    lnD0 = np.where(inside, np.log(np.where(inside, D0, 1.0)), 0.0)
    angles = net.angles()

    best = np.full(D0.shape, np.inf)
    labels = np.full(D0.shape, OUT_OF_DOMAIN, dtype=np.int32)
    for i, p in enumerate(net.leaves):
        v = (_G.grid_values(math.log(radii[i]) - lnD0)
             + _H.grid_values(_wrap_abs(angles[i] - TH)))
        take = inside & (v < best)
        best = np.where(take, v, best)
        labels[take] = i
    raster = RasterDiagram(window, resolution, labels, net.leaves)
    adjacency = _raster_adjacency(labels)
    diagram = SmoothedDiagram(net, (r_in, r_out), raster, adjacency, False)
    report = check_angle_condition(diagram)
    object.__setattr__(diagram, "angle_ok", report.ok)
    return diagram


def _raster_adjacency(labels, min_pairs=3):
    """Cell pairs separated by at least min_pairs boundary pixel-pairs."""
    pairs = []
    for a, b in ((labels[:, :-1], labels[:, 1:]),
                 (labels[:-1, :], labels[1:, :])):
        m = (a != b) & (a != OUT_OF_DOMAIN) & (b != OUT_OF_DOMAIN)
        lo = np.minimum(a[m], b[m]).astype(np.int64)
        hi = np.maximum(a[m], b[m]).astype(np.int64)
        pairs.append(lo * (labels.max() + 1) + hi)
    if not pairs:
        return frozenset()
    enc, counts = np.unique(np.concatenate(pairs), return_counts=True)
    base = labels.max() + 1
    return frozenset((int(e // base), int(e % base))
                     for e, c in zip(enc, counts) if c >= min_pairs)


def check_angle_condition(d: SmoothedDiagram) -> AngleReport:
    """Max hub angle per cell against pi/2 less one pixel of slack.

    The admissibility of the angular profile ends exactly at a quarter
    turn, and a raster cannot distinguish a cell that stops short of
    pi/2 by less than a pixel from one that reaches it, so the check is
    conservative: a cell passes only when its largest angle clears pi/2
    by the angle one pixel diagonal subtends at the cell's innermost
    radius.
    """
    net = d.network
    res = d.raster.resolution
    window = d.raster.window
    _, D0, TH, _ = _annulus_grids(net, d.annulus, res)
    px_diag = math.sqrt(2.0) * window.width / res
    angles = net.angles()
    cells = []
    ok = True
    for i in range(len(net.leaves)):
        mask = d.raster.labels == i
        if not np.any(mask):
            cells.append(CellAngle(i, math.nan, math.nan, False))
            ok = False
            continue
        amax = float(np.max(_wrap_abs(angles[i] - TH[mask])))
        slack = px_diag / float(np.min(D0[mask]))
        passed = amax < HALF_PI - slack
        cells.append(CellAngle(i, amax, slack, passed))
        ok = ok and passed
    return AngleReport(tuple(cells), ok)


def max_dilation_pair_bruteforce(net: StarNetwork):
    """Exact argmax of (d(p,o)+d(o,q))/d(p,q) over all leaf pairs."""
    n = len(net.leaves)
    if n < 2:
        raise InputError("dilation needs at least two leaves")
    pts = np.array([[p.x, p.y] for p in net.leaves])
    radii = net.radii()
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    with np.errstate(divide="ignore"):
        dil = (radii[:, None] + radii[None, :]) / dist
    dil[np.tril_indices(n)] = -np.inf  # keep i < j, row-major = lexicographic
    flat = int(np.argmax(dil))
    i, j = divmod(flat, n)
    return (i, j), float(dil[i, j])


def max_dilation_pair_via_diagram(d: SmoothedDiagram):
    """Argmax of dilation over adjacent cell pairs of the diagram."""
    net = d.network
    if len(net.leaves) == 2:
        # one candidate pair; the adjacency restriction cannot drop it
        m = OriginAnchoredMetric(net.hub)
        return (0, 1), dilation(m, net.leaves[0], net.leaves[1])
    if not d.angle_ok:
        raise InputError(
            "angle condition failed; adjacency does not bound the "
            "max-dilation pair")
    if not d.adjacency:
        raise InputError("diagram has no adjacent cell pairs")
    radii = net.radii()
    pts = np.array([[p.x, p.y] for p in net.leaves])
    best = None
    for i, j in sorted(d.adjacency):
        dist = math.hypot(*(pts[i] - pts[j]))
        val = (radii[i] + radii[j]) / dist
        if best is None or val > best[1]:
            best = ((i, j), val)
    return best


# ------------------------------------------------------------------- outline

def cell_outline(d: SmoothedDiagram, i: int):
    """Closed polygon (world coordinates) tracing cell i's pixel edges.

    Straight runs are merged; returns the longest loop when the mask
    touches the annulus boundary in several places.
    """
    labels = d.raster.labels
    if not np.any(labels == i):
        raise InputError(f"cell {i} is empty")
    window = d.raster.window
    res = d.raster.resolution
    mask = labels == i
    segs = {}

    def add(a, b):
        segs[a] = b

    padded = np.zeros((res + 2, res + 2), bool)
    padded[1:-1, 1:-1] = mask
    iy, ix = np.where(mask)
    # cell kept on the left of each directed edge
    right = ~padded[iy + 1, ix + 2]
    left = ~padded[iy + 1, ix]
    up = ~padded[iy + 2, ix + 1]
    down = ~padded[iy, ix + 1]
    for k in range(len(iy)):
        x, y = int(ix[k]), int(iy[k])
        if right[k]:
            add((x + 1, y), (x + 1, y + 1))
        if left[k]:
            add((x, y + 1), (x, y))
        if up[k]:
            add((x + 1, y + 1), (x, y + 1))
        if down[k]:
            add((x, y), (x + 1, y))

    loops = []
    while segs:
        start = next(iter(segs))
        loop = [start]
        cur = start
        while True:
            nxt = segs.pop(cur, None)
            if nxt is None or nxt == start:
                break
            loop.append(nxt)
            cur = nxt
        loops.append(loop)
    loop = max(loops, key=len)
    # merge straight runs
    merged = []
    for pt in loop:
        if len(merged) >= 2:
            (x0, y0), (x1, y1) = merged[-2], merged[-1]
            if (x1 - x0, y1 - y0) == (pt[0] - x1, pt[1] - y1):
                merged.pop()
        merged.append(pt)
    sx = window.width / res
    sy = window.height / res
    return np.array([[window.x0 + x * sx, window.y0 + y * sy]
                     for x, y in merged])


def smoothed_to_json_dict(d: SmoothedDiagram):
    cells = []
    for i in range(len(d.network.leaves)):
        if not np.any(d.raster.labels == i):
            cells.append({"site": i, "boundary": []})
            continue
        outline = cell_outline(d, i)
        cells.append({"site": i,
                      "boundary": [[float(x), float(y)] for x, y in outline]})
    return {
        "sites": [[p.x, p.y] for p in d.network.leaves],
        "vertices": [],
        "adjacency": sorted([list(p) for p in d.adjacency]),
        "cells": cells,
    }
