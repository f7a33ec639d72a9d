"""Minimization diagrams: a per-pixel raster oracle and an analytic
randomized incremental engine, plus cross-checks between the two.

The incremental engine stores each cell as a counterclockwise cyclic
list of directed arcs. Inserting a site q carves the region where q's
translated copy of f wins: for every affected cell, the sign of
f_cell - f_q at the arc junctions localizes the two crossings of the
new bisector with the old boundary, each crossing is refined by a
bracketed solve along the arc, and the stolen stretch of boundary is
replaced by one new bisector arc. Crossings on old bisector arcs are
three-site vertices; a cache keyed by the sorted site triple lets the
neighboring cell reuse the exact same point.
"""

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy import ndimage

from .errors import (
    ConstructionError,
    DegeneracyError,
    InputError,
    NumericError,
)
from .geometry import Bisector, FunctionPair, Window, classify_bisector
from .metric import PlanarPoint
from .rootfind import bracketed_root

OUT_OF_DOMAIN = -1

FOUR_CONN = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], bool)
EIGHT_CONN = np.ones((3, 3), bool)


# -------------------------------------------------------------- raster side

@dataclass(frozen=True)
class RasterDiagram:
    window: Window
    resolution: int
    labels: np.ndarray  # (resolution, resolution), [iy, ix], iy=0 at y0
    sites: tuple


def _pixel_centers(window: Window, resolution: int):
    xs = window.x0 + (np.arange(resolution) + 0.5) * window.width / resolution
    ys = window.y0 + (np.arange(resolution) + 0.5) * window.height / resolution
    return xs, ys


def _pixel_size(window: Window, resolution: int):
    return max(window.width, window.height) / resolution


def _check_sites(sites, window: Window):
    sites = tuple(PlanarPoint(float(p[0]), float(p[1])) for p in sites)
    if len(sites) < 1:
        raise InputError("need at least one site")
    if len(set(sites)) != len(sites):
        raise InputError("sites must be pairwise distinct")
    for s in sites:
        if not (window.x0 < s.x < window.x1 and window.y0 < s.y < window.y1):
            raise InputError(f"site {s} lies outside the window")
    return sites


def build_raster(pair: FunctionPair, sites, window: Window,
                 resolution: int) -> RasterDiagram:
    """Label every pixel with the argmin site of f at its center.

    Ties go to the lowest site index; pixels where any site's value is
    undefined get the OUT_OF_DOMAIN marker.
    """
    window = Window(*window)
    sites = _check_sites(sites, window)
    if resolution < 1:
        raise InputError("resolution must be positive")
    xs, ys = _pixel_centers(window, resolution)
    X, Y = np.meshgrid(xs, ys)
    best = np.full(X.shape, np.inf)
    labels = np.full(X.shape, OUT_OF_DOMAIN, dtype=np.int32)
    undefined = np.zeros(X.shape, bool)
    for i, s in enumerate(sites):
        v = pair.grid_at(s, X, Y)
        undefined |= ~np.isfinite(v)
        take = v < best
        best = np.where(take, v, best)
        labels[take] = i
    labels[undefined] = OUT_OF_DOMAIN
    return RasterDiagram(window, resolution, labels, sites)


class CellTopology(NamedTuple):
    site: int
    components: int
    holes: int


def raster_cell_topology(r: RasterDiagram):
    """Per-site (4-connected component count, hole count).

    Rasterizing a partition produces stray single-pixel chips and dotted
    slivers wherever boundaries meet at shallow angles, at any
    resolution, so components made purely of boundary pixels (nothing
    survives a one-pixel erosion) are not counted. Genuine splits and
    holes are thicker than one pixel and always survive.
    """
    if r.resolution < 128:
        raise InputError("topology checks need resolution >= 128")
    out = []
    for i in range(len(r.sites)):
        mask = r.labels == i
        interior = ndimage.binary_erosion(mask, EIGHT_CONN, border_value=1)
        lab, ncomp = ndimage.label(mask, structure=FOUR_CONN)
        if ncomp:
            has_core = ndimage.maximum(interior, labels=lab,
                                       index=np.arange(1, ncomp + 1))
            material = int(np.count_nonzero(has_core))
        else:
            material = 0
        filled = ndimage.binary_fill_holes(mask, structure=EIGHT_CONN)
        _, nholes = ndimage.label(filled & ~mask, structure=EIGHT_CONN)
        out.append(CellTopology(i, material, int(nholes)))
    return out


def raster_to_pgm(r: RasterDiagram) -> bytes:
    """Greyscale PGM (P5) of the labels, for debugging."""
    vals = np.where(r.labels == OUT_OF_DOMAIN, 255,
                    (r.labels * 29 + 7) % 250).astype(np.uint8)
    head = f"P5\n{r.resolution} {r.resolution}\n255\n".encode()
    return head + vals[::-1, :].tobytes()  # top row first


# ------------------------------------------------------------ analytic side

@dataclass
class Arc:
    """Directed boundary piece of a cell; frame pieces have no neighbor."""
    neighbor: Optional[int]
    bis: Optional[Bisector]
    a: PlanarPoint
    b: PlanarPoint


class VertexRecord(NamedTuple):
    point: PlanarPoint
    triple: tuple


@dataclass
class MinDiagram:
    pair: FunctionPair
    window: Window
    sites: tuple
    cells: dict          # site index -> CCW cyclic list of Arc
    vertices: list       # VertexRecord
    adjacency: set       # unordered site-index pairs, as sorted tuples


def _frame_arcs(window: Window):
    c = [PlanarPoint(window.x0, window.y0), PlanarPoint(window.x1, window.y0),
         PlanarPoint(window.x1, window.y1), PlanarPoint(window.x0, window.y1)]
    return [Arc(None, None, c[k], c[(k + 1) % 4]) for k in range(4)]


def _f_at(pair, site, pt):
    return pair.value_at(site, pt)


def _stolen(pair, sites, cell_idx, new_idx, pt):
    """True if the new site beats the cell's site at pt; degenerate ties
    raise."""
    fc = _f_at(pair, sites[cell_idx], pt)
    fq = _f_at(pair, sites[new_idx], pt)
    if abs(fc - fq) <= 1e-12 * (1.0 + abs(fc)):
        raise DegeneracyError(
            f"boundary vertex of cell {cell_idx} lies on the bisector with "
            f"site {new_idx}; perturb the sites")
    return fq < fc


def _arc_params(arc: Arc):
    if arc.bis is None:
        return 0.0, 1.0
    return arc.bis.param_of(arc.a), arc.bis.param_of(arc.b)


def _arc_point(arc: Arc, u):
    if arc.bis is None:
        return PlanarPoint(arc.a.x + u * (arc.b.x - arc.a.x),
                           arc.a.y + u * (arc.b.y - arc.a.y))
    return arc.bis.point_at(u)


def _cross_arc(pair, sites, cell_idx, new_idx, arc: Arc):
    """Crossing of B(cell, new) with the arc; returns (param, point)."""
    ua, ub = _arc_params(arc)

    def G(u):
        pt = _arc_point(arc, u)
        return (_f_at(pair, sites[new_idx], pt)
                - _f_at(pair, sites[cell_idx], pt))

    ga, gb = G(ua), G(ub)
    if not (ga > 0) != (gb > 0):
        raise ConstructionError(
            f"no sign change on an arc of cell {cell_idx} while inserting "
            f"site {new_idx}")
    u = bracketed_root(G, min(ua, ub), max(ua, ub),
                       flo=ga if ua < ub else gb,
                       fhi=gb if ua < ub else ga,
                       xtol=1e-13, ftol=1e-13)
    span = abs(ub - ua)
    if min(abs(u - ua), abs(u - ub)) <= 1e-9 * span:
        raise DegeneracyError(
            f"bisector of sites {cell_idx} and {new_idx} passes through an "
            "existing boundary vertex; perturb the sites")
    return u, _arc_point(arc, u)


def _insert_site(pair, sites, window, cells, vertex_cache, new_idx):
    f_new = [(_f_at(pair, sites[i], sites[new_idx]), i) for i in cells]
    owner = min(f_new)[1]

    queue = [owner]
    seen = {owner}
    pieces = []  # boundary pieces of the new cell, to be chained
    while queue:
        ci = queue.pop(0)
        arcs = cells[ci]
        m = len(arcs)
        stolen = [_stolen(pair, sites, ci, new_idx, a.a) for a in arcs]
        if not any(stolen):
            continue
        if all(stolen):
            raise ConstructionError(
                f"cell of site {ci} was fully consumed while inserting "
                f"site {new_idx}; the pair may not be admissible here")
        # contiguous run of stolen junctions; reject split runs
        runs = sum(1 for k in range(m) if stolen[k] and not stolen[k - 1])
        if runs != 1:
            raise ConstructionError(
                f"boundary of cell {ci} crosses the new bisector more than "
                f"twice while inserting site {new_idx}")
        j0 = next(k for k in range(m) if stolen[k] and not stolen[k - 1])
        j1 = next(k for k in range(m) if stolen[k] and not stolen[(k + 1) % m])
        entry = (j0 - 1) % m   # start kept, end stolen
        exit_ = j1             # start stolen, end kept

        x_in = _crossing_vertex(pair, sites, cells, vertex_cache,
                                ci, new_idx, arcs[entry])
        x_out = _crossing_vertex(pair, sites, cells, vertex_cache,
                                 ci, new_idx, arcs[exit_])
        if math.hypot(x_in.x - x_out.x, x_in.y - x_out.y) < 1e-9:
            raise DegeneracyError(
                f"two crossing candidates coincide near {x_in} while "
                f"inserting site {new_idx}; perturb the sites")

        bis = classify_bisector(pair, sites[ci], sites[new_idx])
        removed = []
        k = j0
        while k != j1:
            removed.append(arcs[k])
            k = (k + 1) % m
        # rebuild this cell: kept tail, trimmed entry, new arc, trimmed exit
        new_arcs = []
        k = (j1 + 1) % m
        while k != entry:
            new_arcs.append(arcs[k])
            k = (k + 1) % m
        e = arcs[entry]
        x = arcs[exit_]
        new_arcs.append(Arc(e.neighbor, e.bis, e.a, x_in))
        new_arcs.append(Arc(new_idx, bis, x_in, x_out))
        new_arcs.append(Arc(x.neighbor, x.bis, x_out, x.b))
        cells[ci] = new_arcs

        # pieces for the new cell
        pieces.append(Arc(ci, bis, x_out, x_in))
        if e.bis is None and e.neighbor is None:
            pieces.append(Arc(None, None, x_in, e.b))
        if x.bis is None and x.neighbor is None:
            pieces.append(Arc(None, None, x.a, x_out))
        for r in removed:
            if r.neighbor is None and r.bis is None:
                pieces.append(Arc(None, None, r.a, r.b))
            elif r.neighbor is not None and r.neighbor not in seen:
                seen.add(r.neighbor)
                queue.append(r.neighbor)
        for nb in (e.neighbor, x.neighbor):
            if nb is not None and nb not in seen:
                seen.add(nb)
                queue.append(nb)

    cells[new_idx] = _chain_pieces(pieces, window, new_idx)


def _crossing_vertex(pair, sites, cells, vertex_cache, ci, new_idx, arc):
    """Crossing point of B(ci, new) with the arc, reusing cached vertices."""
    if arc.bis is not None and arc.neighbor is not None:
        key = tuple(sorted((ci, arc.neighbor, new_idx)))
        if key in vertex_cache:
            return vertex_cache[key]
        _, pt = _cross_arc(pair, sites, ci, new_idx, arc)
        vertex_cache[key] = pt
        return pt
    _, pt = _cross_arc(pair, sites, ci, new_idx, arc)
    return pt


def _chain_pieces(pieces, window, new_idx):
    """Order boundary pieces into one CCW cycle by matching endpoints."""
    if not pieces:
        raise ConstructionError(
            f"no boundary pieces produced for site {new_idx}")
    diag = window.diagonal
    starts = {}
    for p in pieces:
        starts.setdefault((p.a.x, p.a.y), []).append(p)
    first = pieces[0]
    chain = [first]
    used = {id(first)}
    while len(chain) < len(pieces):
        tail = chain[-1].b
        cands = [p for p in starts.get((tail.x, tail.y), ())
                 if id(p) not in used]
        if not cands:
            # tolerate last-ulp drift between independently solved points
            best, bd = None, 1e-6 * diag
            for p in pieces:
                if id(p) in used:
                    continue
                d = math.hypot(p.a.x - tail.x, p.a.y - tail.y)
                if d < bd:
                    best, bd = p, d
            if best is None:
                raise ConstructionError(
                    f"boundary of the cell for site {new_idx} does not close")
            cands = [best]
        chain.append(cands[0])
        used.add(id(cands[0]))
    end, start = chain[-1].b, chain[0].a
    if math.hypot(end.x - start.x, end.y - start.y) > 1e-6 * diag:
        raise ConstructionError(
            f"boundary of the cell for site {new_idx} does not close")
    return chain


def build_incremental(pair: FunctionPair, sites, seed: int,
                      window: Window) -> MinDiagram:
    """Randomized incremental construction, insertion order fixed by seed."""
    window = Window(*window)
    sites = _check_sites(sites, window)
    order = np.random.default_rng(seed).permutation(len(sites))
    cells = {int(order[0]): _frame_arcs(window)}
    vertex_cache = {}
    for idx in order[1:]:
        try:
            _insert_site(pair, sites, window, cells, vertex_cache, int(idx))
        except NumericError as exc:
            raise ConstructionError(
                f"vertex solve failed while inserting site {int(idx)}: {exc}"
            ) from exc
    vertices, adjacency = _collect_features(pair, sites, cells)
    return MinDiagram(pair, window, sites, cells, vertices, adjacency)


def _collect_features(pair, sites, cells):
    adjacency = set()
    vert = {}
    for i, arcs in cells.items():
        m = len(arcs)
        for k, arc in enumerate(arcs):
            if arc.neighbor is not None:
                adjacency.add(tuple(sorted((i, arc.neighbor))))
            nxt = arcs[(k + 1) % m]
            if (arc.neighbor is not None and nxt.neighbor is not None
                    and arc.neighbor != nxt.neighbor):
                triple = tuple(sorted((i, arc.neighbor, nxt.neighbor)))
                vert.setdefault(triple, arc.b)
    vertices = []
    for triple, pt in sorted(vert.items()):
        fs = [_f_at(pair, sites[t], pt) for t in triple]
        resid = max(abs(fs[0] - fs[1]), abs(fs[1] - fs[2]))
        if resid > 1e-8:
            raise ConstructionError(
                f"vertex residual {resid:.3g} for triple {triple} "
                "exceeds 1e-8")
        vertices.append(VertexRecord(pt, triple))
    return vertices, adjacency


def feature_counts(d: MinDiagram):
    """(cells, arcs, vertices); shared arcs counted once."""
    shared = sum(1 for arcs in d.cells.values()
                 for a in arcs if a.neighbor is not None)
    return len(d.cells), shared // 2, len(d.vertices)


def point_in_cell(d: MinDiagram, i: int, pt) -> bool:
    """Membership by direct f comparison against every other site."""
    fi = _f_at(d.pair, d.sites[i], pt)
    return all(fi < _f_at(d.pair, d.sites[j], pt)
               for j in range(len(d.sites)) if j != i)


# ----------------------------------------------------- oracle cross-check

def _sample_arc(arc: Arc, max_step, lo_n=2, hi_n=4096):
    """Points along the arc spaced at most max_step apart (coordinatewise)."""
    ua, ub = _arc_params(arc)
    if arc.bis is None:
        n = int(np.clip(math.ceil((abs(arc.b.x - arc.a.x)
                                   + abs(arc.b.y - arc.a.y)) / max_step),
                        lo_n, hi_n))
        t = np.linspace(0.0, 1.0, n)
        return np.stack([arc.a.x + t * (arc.b.x - arc.a.x),
                         arc.a.y + t * (arc.b.y - arc.a.y)], axis=1)
    n = int(np.clip(math.ceil((abs(arc.b.x - arc.a.x)
                               + abs(arc.b.y - arc.a.y)) / max_step),
                    lo_n, hi_n))
    us = np.linspace(ua, ub, n)
    if arc.bis.param_axis == "y":
        cl, ch = sorted((arc.a.x, arc.b.x))
    else:
        cl, ch = sorted((arc.a.y, arc.b.y))
    pad = max(1e-12 * (ch - cl + 1.0), 1e-12)
    return arc.bis.points_at(us, bracket=(cl - pad, ch + pad))


def cell_boundary_points(d: MinDiagram, i: int, max_step=None):
    """Closed polyline of the cell boundary (dense where arcs curve)."""
    if max_step is None:
        max_step = d.window.diagonal / 512.0
    chunks = [_sample_arc(arc, max_step)[:-1] for arc in d.cells[i]]
    return np.concatenate(chunks, axis=0)


def verify_against_raster(d: MinDiagram, r: RasterDiagram) -> float:
    """Fraction of pixels where the two engines disagree, ignoring a
    2-pixel band around the analytic boundaries."""
    if tuple(d.sites) != tuple(r.sites):
        raise InputError("diagrams were built from different sites")
    n = r.resolution
    window = r.window
    px = _pixel_size(window, n)

    band = np.zeros((n, n), bool)
    for i in d.cells:
        pts = cell_boundary_points(d, i, max_step=0.45 * px)
        ix = np.clip(((pts[:, 0] - window.x0) / window.width * n).astype(int),
                     0, n - 1)
        iy = np.clip(((pts[:, 1] - window.y0) / window.height * n).astype(int),
                     0, n - 1)
        band[iy, ix] = True

    # analytic ownership: flood the complement of the boundary band and
    # anchor each component at the one site it contains
    free = ~band
    comp, ncomp = ndimage.label(free, structure=FOUR_CONN)
    owner_of_comp = np.full(ncomp + 1, -2, dtype=np.int64)
    ambiguous = set()
    for i, s in enumerate(d.sites):
        ix = int(np.clip((s.x - window.x0) / window.width * n, 0, n - 1))
        iy = int(np.clip((s.y - window.y0) / window.height * n, 0, n - 1))
        c = comp[iy, ix]
        if c == 0:
            for dy in range(-2, 3):
                for dx in range(-2, 3):
                    yy, xx = iy + dy, ix + dx
                    if 0 <= yy < n and 0 <= xx < n and comp[yy, xx] != 0:
                        c = comp[yy, xx]
                        break
                if c != 0:
                    break
        if c == 0:
            continue
        if owner_of_comp[c] != -2:
            ambiguous.add(int(c))
        owner_of_comp[c] = i
    for c in ambiguous:
        owner_of_comp[c] = -3
    analytic = owner_of_comp[comp]

    excluded = ndimage.binary_dilation(band, structure=np.ones((5, 5), bool))
    included = ~excluded & (r.labels != OUT_OF_DOMAIN)
    total = int(np.count_nonzero(included))
    if total == 0:
        return 0.0
    bad = included & (analytic != r.labels)
    return float(np.count_nonzero(bad)) / total


# ------------------------------------------------------------------- export

def diagram_to_json(d: MinDiagram, boundary_samples: int = 33) -> str:
    cells = []
    for i in sorted(d.cells):
        pts = []
        for arc in d.cells[i]:
            step = (abs(arc.b.x - arc.a.x) + abs(arc.b.y - arc.a.y) + 1e-9)
            pts.append(_sample_arc(arc, step / boundary_samples,
                                   lo_n=2, hi_n=boundary_samples + 1)[:-1])
        boundary = np.concatenate(pts, axis=0)
        cells.append({"site": i,
                      "boundary": [[float(x), float(y)] for x, y in boundary]})
    doc = {
        "sites": [[s.x, s.y] for s in d.sites],
        "vertices": [{"point": [v.point.x, v.point.y],
                      "triple": list(v.triple)} for v in d.vertices],
        "adjacency": sorted([list(p) for p in d.adjacency]),
        "cells": cells,
    }
    return json.dumps(doc, indent=1)
