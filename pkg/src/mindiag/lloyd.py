"""Rasterized Lloyd iteration under smoothed distance on an annulus.

Each step assigns every annulus pixel to its nearest site in smoothed
distance, then moves each site to an approximate minimizer of the
weighted cell objective sum(d_o(p, q)^2 / d(q, o)^2) over its pixels.
The 1/d(q,o)^2 weight converts pixel counting in the plane into area
in the log-transformed plane, where the smoothed distance is uniform.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .diagram import OUT_OF_DOMAIN
from .errors import EmptyCellError, InputError
from .metric import PlanarPoint

_SEARCH_DIRS = ((1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0))


@dataclass(frozen=True)
class AnnulusConfig:
    hub: PlanarPoint
    inner: float
    outer: float
    resolution: int

    def __init__(self, hub, inner, outer, resolution):
        if not 0.0 < float(inner) < float(outer):
            raise InputError("annulus needs 0 < inner < outer")
        if int(resolution) < 2:
            raise InputError("resolution must be at least 2")
        object.__setattr__(self, "hub",
                           PlanarPoint(float(hub[0]), float(hub[1])))
        object.__setattr__(self, "inner", float(inner))
        object.__setattr__(self, "outer", float(outer))
        object.__setattr__(self, "resolution", int(resolution))

    @property
    def pixel(self):
        return 2.0 * self.outer / self.resolution

    def contains(self, p):
        r = math.hypot(p[0] - self.hub.x, p[1] - self.hub.y)
        return self.inner <= r <= self.outer


@lru_cache(maxsize=4)
def _grids(cfg: AnnulusConfig):
    """Pixel-center coordinates, hub distances, weights, annulus mask."""
    res = cfg.resolution
    o = cfg.hub
    side = 2.0 * cfg.outer
    xs = o.x - cfg.outer + (np.arange(res) + 0.5) * side / res
    ys = o.y - cfg.outer + (np.arange(res) + 0.5) * side / res
    X, Y = np.meshgrid(xs, ys)
    D0 = np.hypot(X - o.x, Y - o.y)
    inside = (D0 >= cfg.inner) & (D0 <= cfg.outer)
    with np.errstate(divide="ignore"):
        W = np.where(inside, 1.0 / np.square(D0), 0.0)
    return X, Y, D0, W, inside


def _smoothed_grid(cfg, p, X, Y, D0):
    d = np.hypot(X - p[0], Y - p[1])
    dp = math.hypot(p[0] - cfg.hub.x, p[1] - cfg.hub.y)
    return 2.0 * d / (dp + D0 + d)


@dataclass(frozen=True)
class LloydState:
    sites: tuple
    iteration: int
    objective: float
    seed: int


@dataclass(frozen=True)
class LloydTrajectory:
    cfg: AnnulusConfig
    states: tuple
    spacing: tuple  # nearest-neighbor smoothed-distance CV per iteration

    @property
    def objectives(self):
        return tuple(s.objective for s in self.states)


def sample_exponential(cfg: AnnulusConfig, n: int, seed: int):
    """n points with log-radius uniform on [ln r, ln R], angle uniform."""
    if n < 1:
        raise InputError("need at least one sample")
    rng = np.random.default_rng(seed)
    L = rng.uniform(math.log(cfg.inner), math.log(cfg.outer), n)
    th = rng.uniform(0.0, 2.0 * math.pi, n)
    r = np.exp(L)
    return tuple(PlanarPoint(cfg.hub.x + ri * math.cos(ti),
                             cfg.hub.y + ri * math.sin(ti))
                 for ri, ti in zip(r, th))


def sample_euclidean(cfg: AnnulusConfig, n: int, seed: int):
    """Control initialization: uniform by area over the annulus."""
    if n < 1:
        raise InputError("need at least one sample")
    rng = np.random.default_rng(seed)
    r = np.sqrt(rng.uniform(cfg.inner ** 2, cfg.outer ** 2, n))
    th = rng.uniform(0.0, 2.0 * math.pi, n)
    return tuple(PlanarPoint(cfg.hub.x + ri * math.cos(ti),
                             cfg.hub.y + ri * math.sin(ti))
                 for ri, ti in zip(r, th))


def assign_pixels(cfg: AnnulusConfig, sites):
    """Label each annulus pixel with the nearest site under smoothed
    distance (ties to the lowest index); returns (labels, best value)."""
    X, Y, D0, _, inside = _grids(cfg)
    labels = np.full(X.shape, OUT_OF_DOMAIN, dtype=np.int32)
    best = np.full(X.shape, np.inf)
    for i, p in enumerate(sites):
        v = _smoothed_grid(cfg, p, X, Y, D0)
        take = inside & (v < best)
        best = np.where(take, v, best)
        labels[take] = i
    return labels, best


def objective_value(cfg: AnnulusConfig, sites):
    """sum over annulus pixels of d_o(site(pixel), pixel)^2 / d(pixel,o)^2."""
    _, best = assign_pixels(cfg, sites)
    _, _, _, W, inside = _grids(cfg)
    acc = np.square(best[inside]).astype(np.longdouble) * W[inside]
    return float(np.sum(acc))


def _cell_arrays(cfg, cell_pixels):
    X, Y, D0, W, inside = _grids(cfg)
    mask = np.asarray(cell_pixels)
    if mask.dtype == bool:
        iy, ix = np.nonzero(mask)
    else:
        pix = np.atleast_2d(mask)
        iy, ix = pix[:, 0], pix[:, 1]
    if len(iy) == 0:
        raise EmptyCellError(-1, "cell has no pixels")
    return X[iy, ix], Y[iy, ix], D0[iy, ix], W[iy, ix]


def cell_objective(cfg: AnnulusConfig, cell_pixels, p) -> float:
    """Weighted squared smoothed distance from p over the cell pixels."""
    xs, ys, d0, w = _cell_arrays(cfg, cell_pixels)
    d = np.hypot(xs - p[0], ys - p[1])
    dp = math.hypot(p[0] - cfg.hub.x, p[1] - cfg.hub.y)
    v = 2.0 * d / (dp + d0 + d)
    return float(np.sum(np.square(v).astype(np.longdouble) * w))


def weighted_centroid(cfg: AnnulusConfig, cell_pixels,
                      current_site) -> PlanarPoint:
    """Pattern-search minimizer of the weighted cell objective.

    Starts from the better of the current site and the exponential
    image of the mean log-plane pixel position; axis moves with step
    halving, candidates outside the annulus rejected, stopping below
    half a pixel.
    """
    xs, ys, d0, w = _cell_arrays(cfg, cell_pixels)
    o = cfg.hub

    def value(px, py):
        d = np.hypot(xs - px, ys - py)
        dp = math.hypot(px - o.x, py - o.y)
        v = 2.0 * d / (dp + d0 + d)
        return float(np.sum(np.square(v).astype(np.longdouble) * w))

    u = float(np.mean(np.log(d0)))
    t = float(np.mean(np.arctan2(ys - o.y, xs - o.x)))
    seed_pt = (o.x + math.exp(u) * math.cos(t),
               o.y + math.exp(u) * math.sin(t))
    cands = [seed_pt]
    if current_site is not None and cfg.contains(current_site):
        cands.append((float(current_site[0]), float(current_site[1])))
    vals = [value(*c) for c in cands]
    k = int(np.argmin(vals))
    best_pt, best_val = cands[k], vals[k]

    span = math.hypot(float(xs.max() - xs.min()), float(ys.max() - ys.min()))
    step = span / 8.0 if span > 0 else cfg.pixel
    stop = cfg.pixel / 2.0
    while step >= stop:
        moved = False
        for dx, dy in _SEARCH_DIRS:
            cand = (best_pt[0] + dx * step, best_pt[1] + dy * step)
            if not cfg.contains(cand):
                continue
            v = value(*cand)
            if v < best_val:
                best_pt, best_val = cand, v
                moved = True
        if not moved:
            step /= 2.0
    return PlanarPoint(*best_pt)


def initial_state(cfg: AnnulusConfig, sites, seed: int) -> LloydState:
    sites = tuple(PlanarPoint(float(p[0]), float(p[1])) for p in sites)
    for p in sites:
        if not cfg.contains(p):
            raise InputError(f"site {p} lies outside the annulus")
    return LloydState(sites, 0, objective_value(cfg, sites), seed)


def _separate_collisions(cfg, sites):
    """Push later-indexed sites one pixel radially outward until no two
    share a raster pixel."""
    res = cfg.resolution
    side = 2.0 * cfg.outer
    o = cfg.hub
    out = list(sites)
    px = cfg.pixel

    def key(p):
        ix = int((p.x - (o.x - cfg.outer)) / side * res)
        iy = int((p.y - (o.y - cfg.outer)) / side * res)
        return ix, iy

    seen = {}
    for i, p in enumerate(out):
        for _ in range(8):
            k = key(p)
            if k not in seen:
                break
            r = math.hypot(p.x - o.x, p.y - o.y)
            scale = min(r + px, cfg.outer) / r
            p = PlanarPoint(o.x + (p.x - o.x) * scale,
                            o.y + (p.y - o.y) * scale)
        seen[key(p)] = i
        out[i] = p
    return tuple(out)


def lloyd_step(state: LloydState, cfg: AnnulusConfig) -> LloydState:
    """One assignment + centroid update; objective recomputed after."""
    labels, _ = assign_pixels(cfg, state.sites)
    moved = []
    for i, p in enumerate(state.sites):
        mask = labels == i
        if not np.any(mask):
            raise EmptyCellError(i)
        moved.append(weighted_centroid(cfg, mask, p))
    moved = _separate_collisions(cfg, moved)
    return LloydState(moved, state.iteration + 1,
                      objective_value(cfg, moved), state.seed)


def spacing_cv(cfg: AnnulusConfig, sites) -> float:
    """Coefficient of variation of nearest-neighbor smoothed distance."""
    n = len(sites)
    if n < 2:
        raise InputError("spacing needs at least two sites")
    o = cfg.hub
    pts = np.array([[p.x, p.y] for p in sites])
    dp = np.hypot(pts[:, 0] - o.x, pts[:, 1] - o.y)
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.hypot(diff[..., 0], diff[..., 1])
    with np.errstate(invalid="ignore"):
        s = 2.0 * d / (dp[:, None] + dp[None, :] + d)
    np.fill_diagonal(s, np.inf)
    nn = np.min(s, axis=1)
    return float(np.std(nn) / np.mean(nn))


def run_lloyd(cfg: AnnulusConfig, n: int, iterations: int, seed: int,
              init: str = "exponential") -> LloydTrajectory:
    if iterations < 0:
        raise InputError("iterations must be non-negative")
    if init == "exponential":
        sites = sample_exponential(cfg, n, seed)
    elif init == "euclidean":
        sites = sample_euclidean(cfg, n, seed)
    else:
        raise InputError(f"unknown initialization {init!r}")
    sites = _separate_collisions(cfg, sites)
    state = initial_state(cfg, sites, seed)
    states = [state]
    spacing = [spacing_cv(cfg, state.sites)] if n >= 2 else [math.nan]
    for _ in range(iterations):
        state = lloyd_step(state, cfg)
        states.append(state)
        spacing.append(spacing_cv(cfg, state.sites) if n >= 2 else math.nan)
    return LloydTrajectory(cfg, tuple(states), tuple(spacing))
