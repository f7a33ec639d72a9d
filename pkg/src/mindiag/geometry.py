"""Level sets, bisectors, and the local structure around them.

Everything here works on a separable function f(x,y) = g(x) + h(y)
translated to a site. Level sets are sampled by root-finding along
rays from the translated minimum (f is strictly increasing there),
bisectors by root-finding one coordinate against the other, which the
double-monotonicity of the curve makes bracketable.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    DomainError,
    EmptyLevelSetError,
    InputError,
    NumericError,
    PoleError,
)
from .metric import PlanarPoint
from .profiles import Profile1D
from .rootfind import bracketed_root

VERTICAL = math.inf  # distinguished tangent-slope value

TANGENCY_TOL = 1e-8


class Window(NamedTuple):
    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def width(self):
        return self.x1 - self.x0

    @property
    def height(self):
        return self.y1 - self.y0

    @property
    def diagonal(self):
        return math.hypot(self.width, self.height)

    def contains(self, p):
        return self.x0 <= p[0] <= self.x1 and self.y0 <= p[1] <= self.y1

    @staticmethod
    def around(points, inflate=3.0):
        """Bounding box of the points, padded by inflate times its diagonal."""
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        pad = inflate * math.hypot(x1 - x0, y1 - y0)
        if pad == 0.0:
            pad = inflate
        return Window(x0 - pad, y0 - pad, x1 + pad, y1 + pad)


@dataclass(frozen=True)
class FunctionPair:
    """The separable convex function g(x) + h(y)."""

    gx: Profile1D
    hy: Profile1D

    @property
    def min_value(self):
        return self.gx(self.gx.argmin) + self.hy(self.hy.argmin)

    def min_point(self, center=(0.0, 0.0)):
        return PlanarPoint(center[0] + self.gx.argmin, center[1] + self.hy.argmin)

    def value_at(self, center, pt):
        """f translated to center, evaluated at pt. Strict on domains."""
        return (self.gx.eval(pt[0] - center[0])
                + self.hy.eval(pt[1] - center[1]))

    def grid_at(self, center, xs, ys):
        """Vectorized translated values; out-of-domain points give +inf."""
        return (self.gx.grid_values(np.asarray(xs, float) - center[0])
                + self.hy.grid_values(np.asarray(ys, float) - center[1]))

    def diff_at(self, a, b, pt):
        """f_a(pt) - f_b(pt); positive where site b is the nearer one."""
        return self.value_at(a, pt) - self.value_at(b, pt)


# ----------------------------------------------------------------- level sets

@dataclass(frozen=True)
class LevelSet:
    pair: FunctionPair
    center: PlanarPoint
    level: float

    def __post_init__(self):
        if not self.level > self.pair.min_value:
            raise EmptyLevelSetError(
                f"level {self.level} does not exceed the minimum "
                f"{self.pair.min_value}")

    def values(self, pts):
        pts = np.asarray(pts, float)
        return self.pair.grid_at(self.center, pts[..., 0], pts[..., 1])


def _ray_sup(profile, am, c):
    """Largest t with am + t*c inside the domain (vectorized over c)."""
    lo, hi = profile.domain
    with np.errstate(divide="ignore", invalid="ignore"):
        up = np.where(c > 0, (hi - am) / np.where(c > 0, c, 1.0), np.inf)
        dn = np.where(c < 0, (lo - am) / np.where(c < 0, c, 1.0), np.inf)
    return np.minimum(up, dn)


def _level_radii(ls: LevelSet, phis):
    """Distance from the translated minimum to the level curve per angle."""
    pair, level = ls.pair, ls.level
    gam, ham = pair.gx.argmin, pair.hy.argmin
    cx, sy = np.cos(phis), np.sin(phis)

    def f_of(t):
        return (pair.gx.grid_values(gam + t * cx)
                + pair.hy.grid_values(ham + t * sy))

    sup = np.minimum(_ray_sup(pair.gx, gam, cx), _ray_sup(pair.hy, ham, sy))
    near_sup = np.where(np.isfinite(sup), sup * (1.0 - 1e-12), np.inf)

    hi = np.where(np.isfinite(sup), 0.5 * sup, 1.0)
    for _ in range(90):
        low = f_of(hi) < level
        if not np.any(low):
            break
        grow = np.where(np.isfinite(sup), 0.5 * (hi + near_sup), 2.0 * hi)
        hi = np.where(low, grow, hi)
    else:
        raise NumericError("level not attained along some ray")

    lo = np.zeros_like(hi)
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if np.all((mid <= lo) | (mid >= hi)):
            break  # interval at float resolution everywhere
        low = f_of(mid) < level
        lo = np.where(low, mid, lo)
        hi = np.where(low, hi, mid)
    return hi


def sample_level_set(ls: LevelSet, n: int):
    """n points on the level curve, counterclockwise from angle 0.

    Each point satisfies |f - level| <= 1e-10.
    """
    if n < 1:
        raise InputError("need at least one sample")
    phis = 2.0 * math.pi * np.arange(n) / n
    t = _level_radii(ls, phis)
    m = ls.pair.min_point(ls.center)
    pts = np.stack([m.x + t * np.cos(phis), m.y + t * np.sin(phis)], axis=1)
    resid = np.abs(ls.values(pts) - ls.level)
    if np.any(resid > 1e-10):
        raise NumericError(
            f"level-set residual {float(np.max(resid)):.3g} above 1e-10")
    return pts


def _level_point(ls: LevelSet, phi):
    """Single point of the level curve at the given ray angle."""
    t = _level_radii(ls, np.array([phi]))[0]
    m = ls.pair.min_point(ls.center)
    return PlanarPoint(m.x + t * math.cos(phi), m.y + t * math.sin(phi))


# ------------------------------------------------------- local measurements

def tangent_slope(pair: FunctionPair, rel):
    """Slope of the level curve through the (relative) point; -h'/g'.

    Returns the VERTICAL sentinel where g' vanishes.
    """
    g1 = pair.gx.eval(rel[0], 1)
    h1 = pair.hy.eval(rel[1], 1)
    if g1 == 0.0:
        return VERTICAL
    return -h1 / g1


def curvature_measure(pair: FunctionPair, rel):
    """(g'h''/h' + h'g''/g') / sqrt(g'^2 + h'^2); larger = tighter bend."""
    g1 = pair.gx.eval(rel[0], 1)
    h1 = pair.hy.eval(rel[1], 1)
    if g1 == 0.0 or h1 == 0.0:
        raise PoleError("curvature measure has a pole where g' or h' vanishes")
    g2 = pair.gx.eval(rel[0], 2)
    h2 = pair.hy.eval(rel[1], 2)
    return (g1 * h2 / h1 + h1 * g2 / g1) / math.hypot(g1, h1)


def t_curve_slope(pair: FunctionPair, rel):
    """Slope (h''/h')/(g''/g') of the equal-tangent curve at the point."""
    g1 = pair.gx.eval(rel[0], 1)
    h1 = pair.hy.eval(rel[1], 1)
    if g1 == 0.0 or h1 == 0.0:
        raise PoleError("equal-tangent direction has a pole where g' or h' vanishes")
    g2 = pair.gx.eval(rel[0], 2)
    h2 = pair.hy.eval(rel[1], 2)
    return (h2 / h1) / (g2 / g1)


# ------------------------------------------------------------ crossing count

class CrossingReport(NamedTuple):
    crossings: int
    tangencies: int


def _refine_segment(resid_at, ulo, uhi, rlo, rhi, depth):
    """Count crossings hidden in a same-sign segment; flag near-touches.

    Returns (crossings, grazed) where grazed means the residual dipped
    under the tangency tolerance without a sign change.
    """
    if depth <= 0:
        return 0, min(abs(rlo), abs(rhi)) < TANGENCY_TOL
    um = 0.5 * (ulo + uhi)
    rm = resid_at(um)
    if rm == 0.0:
        return 0, True
    if (rm > 0) != (rlo > 0):
        # the dip reaches through: one crossing into it, one back out
        return 2, False
    total, grazed = 0, False
    for a, b, ra, rb in ((ulo, um, rlo, rm), (um, uhi, rm, rhi)):
        if min(abs(ra), abs(rb)) < abs(rb - ra) + TANGENCY_TOL:
            c, g = _refine_segment(resid_at, a, b, ra, rb, depth - 1)
            total += c
            grazed = grazed or g
    return total, (grazed and total == 0)


def _count_sign_changes(us, rs, resid_at, cyclic):
    """Sign changes of rs along us, refining suspicious flat stretches."""
    m = len(us)
    crossings = 0
    grazed_segments = []
    limit = m if cyclic else m - 1
    for k in range(limit):
        k2 = (k + 1) % m
        rlo, rhi = rs[k], rs[k2]
        if math.isinf(rlo) or math.isinf(rhi):
            continue
        if rlo == 0.0 or rhi == 0.0:
            grazed_segments.append(k)
            continue
        if (rlo > 0) != (rhi > 0):
            crossings += 1
            continue
        if min(abs(rlo), abs(rhi)) < abs(rhi - rlo) + TANGENCY_TOL:
            ulo = us[k]
            uhi = us[k2] if k2 != 0 else us[k] + (us[1] - us[0])
            c, grazed = _refine_segment(resid_at, ulo, uhi, rlo, rhi, 14)
            crossings += c
            if grazed:
                grazed_segments.append(k)
    # consecutive grazed segments describe one touch region
    tangencies = 0
    prev = None
    for k in grazed_segments:
        if prev is None or k != prev + 1:
            tangencies += 1
        prev = k
    return crossings, tangencies


def crossing_report(a: LevelSet, b: LevelSet, n: int = 1024) -> CrossingReport:
    """Crossings and near-tangencies of curve a's level against curve b."""
    if n < 256:
        raise InputError("need at least 256 samples")
    pts = sample_level_set(b, n)
    rs = np.asarray(a.values(pts) - a.level)
    phis = 2.0 * math.pi * np.arange(n) / n

    def resid_at(phi):
        p = _level_point(b, phi)
        return float(a.pair.grid_at(a.center, p.x, p.y)) - a.level

    c, t = _count_sign_changes(phis, rs, resid_at, cyclic=True)
    return CrossingReport(c, t)


def count_crossings(a: LevelSet, b: LevelSet, n: int = 1024) -> int:
    """Number of proper crossings between the two level curves."""
    return crossing_report(a, b, n).crossings


# ------------------------------------------------------------------ bisectors

def _approach(profile, offset, side):
    """Value just inside the domain edge (side=0 -> lower, 1 -> upper)."""
    lo, hi = profile.domain
    edge = (lo if side == 0 else hi) + offset
    if math.isinf(edge):
        return edge
    span = (hi - lo) if (math.isfinite(lo) and math.isfinite(hi)) else 1.0
    pad = 1e-12 * span * (1 + abs(edge))
    return edge + pad if side == 0 else edge - pad


def _offset_window(profile, oa, ob):
    """Open interval of t where both t-oa and t-ob are in the domain."""
    lo = _approach(profile, max(oa, ob), 0)
    hi = _approach(profile, min(oa, ob), 1)
    return lo, hi


def _offset_root(profile, oa, ob, rhs) -> Optional[float]:
    """Solve profile(t - oa) - profile(t - ob) = rhs; None if unattained.

    The left side is strictly monotone in t (strict convexity), rising
    when oa < ob, so a sign-changing bracket can be walked out from the
    midpoint and the domain window caps the walk.
    """
    if oa == ob:
        raise InputError("offsets coincide; no unique root")
    wlo, whi = _offset_window(profile, oa, ob)
    if not wlo < whi:
        raise DomainError("sites too far apart for the profile domain")

    def F(t):
        return (profile.eval(t - oa, 0) - profile.eval(t - ob, 0)) - rhs

    t0 = 0.5 * (oa + ob) + profile.argmin
    if not wlo < t0 < whi:
        if math.isfinite(wlo) and math.isfinite(whi):
            t0 = 0.5 * (wlo + whi)
        elif math.isfinite(wlo):
            t0 = wlo + 1.0
        elif math.isfinite(whi):
            t0 = whi - 1.0
        else:
            t0 = 0.0
    f0 = F(t0)
    if f0 == 0.0:
        return t0
    rising = oa < ob
    go_up = (f0 < 0) == rising
    edge = whi if go_up else wlo
    t_prev, f_prev = t0, f0
    step = max(1.0, abs(ob - oa))
    for _ in range(200):
        if math.isinf(edge):
            t_next = t_prev + step if go_up else t_prev - step
            step *= 2.0
            if abs(t_next) > 1e12:
                return None
        else:
            t_next = 0.5 * (t_prev + edge)
            if abs(edge - t_next) <= 1e-13 * (1.0 + abs(edge)):
                return None
        f_next = F(t_next)
        if f_next == 0.0:
            return t_next
        if (f_next > 0) != (f_prev > 0):
            return bracketed_root(F, t_prev, t_next, flo=f_prev, fhi=f_next,
                                  xtol=1e-13, ftol=1e-12)
        t_prev, f_prev = t_next, f_next
    return None


@dataclass(frozen=True)
class Bisector:
    """Locus where two translated copies of the same f agree."""

    pair: FunctionPair
    site_a: PlanarPoint
    site_b: PlanarPoint
    kind: str  # vertical-line | horizontal-line | monotone-curve
    axis_value: Optional[float] = None
    param_axis: str = "y"

    def _solve_y(self, x) -> Optional[float]:
        a, b = self.site_a, self.site_b
        rhs = self.pair.gx.eval(x - b.x) - self.pair.gx.eval(x - a.x)
        return _offset_root(self.pair.hy, a.y, b.y, rhs)

    def _solve_x(self, y) -> Optional[float]:
        a, b = self.site_a, self.site_b
        rhs = self.pair.hy.eval(y - b.y) - self.pair.hy.eval(y - a.y)
        return _offset_root(self.pair.gx, a.x, b.x, rhs)

    def point_at(self, u) -> PlanarPoint:
        """Point of the curve at parameter u along the trace axis."""
        if self.kind == "vertical-line":
            return PlanarPoint(self.axis_value, u)
        if self.kind == "horizontal-line":
            return PlanarPoint(u, self.axis_value)
        if self.param_axis == "y":
            x = self._solve_x(u)
            if x is None:
                raise NumericError(f"bisector has no point at parameter {u}")
            return PlanarPoint(x, u)
        y = self._solve_y(u)
        if y is None:
            raise NumericError(f"bisector has no point at parameter {u}")
        return PlanarPoint(u, y)

    def param_of(self, pt) -> float:
        return pt[1] if self.param_axis == "y" else pt[0]

    def points_at(self, us, bracket=None):
        """Vectorized point_at for an array of parameters.

        bracket bounds the solved coordinate; required when the solve
        profile's domain gives no finite interval of its own.
        """
        us = np.asarray(us, float)
        if self.kind == "vertical-line":
            return np.stack([np.full(us.shape, self.axis_value), us], axis=1)
        if self.kind == "horizontal-line":
            return np.stack([us, np.full(us.shape, self.axis_value)], axis=1)
        a, b = self.site_a, self.site_b
        if self.param_axis == "y":
            upr, solp = self.pair.hy, self.pair.gx
            uoff, soff = (a.y, b.y), (a.x, b.x)
        else:
            upr, solp = self.pair.gx, self.pair.hy
            uoff, soff = (a.x, b.x), (a.y, b.y)
        rhs = upr.grid_values(us - uoff[1]) - upr.grid_values(us - uoff[0])
        wlo, whi = _offset_window(solp, soff[0], soff[1])
        if bracket is not None:
            wlo, whi = max(wlo, bracket[0]), min(whi, bracket[1])
        if not (math.isfinite(wlo) and math.isfinite(whi) and wlo < whi):
            raise NumericError("no finite bracket for the bisector solve")

        def F(t):
            return (solp.grid_values(t - soff[0])
                    - solp.grid_values(t - soff[1]) - rhs)

        lo = np.full(us.shape, wlo)
        hi = np.full(us.shape, whi)
        flo, fhi = F(lo), F(hi)
        ok = np.isfinite(flo) & np.isfinite(fhi) & ((flo > 0) != (fhi > 0))
        if not np.all(ok):
            raise NumericError("bisector solve bracket lost a sign change")
        neg_lo = flo < 0
        for _ in range(90):
            mid = 0.5 * (lo + hi)
            take_lo = (F(mid) < 0) == neg_lo
            lo = np.where(take_lo, mid, lo)
            hi = np.where(take_lo, hi, mid)
        sol = 0.5 * (lo + hi)
        if self.param_axis == "y":
            return np.stack([sol, us], axis=1)
        return np.stack([us, sol], axis=1)

    def trace(self, window: Window, n: int = 256):
        """(params, points) arrays of curve samples inside the window."""
        if self.kind == "vertical-line":
            us = np.linspace(window.y0, window.y1, n)
            pts = np.stack([np.full(n, self.axis_value), us], axis=1)
        elif self.kind == "horizontal-line":
            us = np.linspace(window.x0, window.x1, n)
            pts = np.stack([us, np.full(n, self.axis_value)], axis=1)
        else:
            us, other = self._trace_curve(window, n)
            if self.param_axis == "y":
                pts = np.stack([other, us], axis=1)
            else:
                pts = np.stack([us, other], axis=1)
        inside = ((pts[:, 0] >= window.x0) & (pts[:, 0] <= window.x1)
                  & (pts[:, 1] >= window.y0) & (pts[:, 1] <= window.y1))
        return us[inside], pts[inside]

    def _trace_curve(self, window, n):
        a, b = self.site_a, self.site_b
        pair = self.pair
        if self.param_axis == "y":
            us = np.linspace(window.y0, window.y1, n)
            upr, solp = pair.hy, pair.gx
            oa, ob = (a.y, b.y), (a.x, b.x)
            lo_w, hi_w = window.x0 - window.width, window.x1 + window.width
        else:
            us = np.linspace(window.x0, window.x1, n)
            upr, solp = pair.gx, pair.hy
            oa, ob = (a.x, b.x), (a.y, b.y)
            lo_w, hi_w = window.y0 - window.height, window.y1 + window.height

        valid = upr.contains(us - oa[0]) & upr.contains(us - oa[1])
        rhs = np.where(valid,
                       upr.grid_values(us - oa[1]) - upr.grid_values(us - oa[0]),
                       0.0)

        slo, shi = _offset_window(solp, ob[0], ob[1])
        lo = np.full(n, max(slo, lo_w))
        hi = np.full(n, min(shi, hi_w))

        def F(t):
            return solp.grid_values(t - ob[0]) - solp.grid_values(t - ob[1]) - rhs

        flo, fhi = F(lo), F(hi)
        valid &= np.isfinite(flo) & np.isfinite(fhi) & ((flo > 0) != (fhi > 0))
        lo = np.where(valid, lo, 0.0)
        hi = np.where(valid, hi, 1.0)
        neg_lo = F(lo) < 0
        for _ in range(90):
            mid = 0.5 * (lo + hi)
            fm = F(mid)
            take_lo = (fm < 0) == neg_lo
            lo = np.where(take_lo, mid, lo)
            hi = np.where(take_lo, hi, mid)
        sol = 0.5 * (lo + hi)
        sol = np.where(valid, sol, np.nan)
        keep = np.isfinite(sol)
        return us[keep], sol[keep]


def classify_bisector(pair: FunctionPair, p, q) -> Bisector:
    """Build the bisector of two sites, classifying its shape."""
    p = PlanarPoint(*p)
    q = PlanarPoint(*q)
    if p == q:
        raise InputError("bisector of coincident sites is undefined")
    if p.y == q.y:
        axis = _offset_root(pair.gx, p.x, q.x, 0.0)
        if axis is None:
            raise NumericError("no balance point between the sites")
        return Bisector(pair, p, q, "vertical-line", axis, "y")
    if p.x == q.x:
        axis = _offset_root(pair.hy, p.y, q.y, 0.0)
        if axis is None:
            raise NumericError("no balance point between the sites")
        return Bisector(pair, p, q, "horizontal-line", axis, "x")
    param = "y" if abs(p.x - q.x) >= abs(p.y - q.y) else "x"
    return Bisector(pair, p, q, "monotone-curve", None, param)


def bisector_y_at_x(b: Bisector, x) -> Optional[float]:
    """y with f_a(x,y) = f_b(x,y), or None when the equation is unattained."""
    if b.kind != "monotone-curve":
        raise InputError("y-for-x queries need a monotone-curve bisector")
    return b._solve_y(x)


# --------------------------------------------------- multi-site primitives

def three_site_vertex(pair: FunctionPair, p, q, s,
                      window: Optional[Window] = None) -> Optional[PlanarPoint]:
    """Point equidistant (in f) from three sites, or None if there is none.

    Traces the bisector of (p, q) and finds the sign change of
    f_p - f_s along it; residuals at the result are below 1e-10.
    """
    p, q, s = PlanarPoint(*p), PlanarPoint(*q), PlanarPoint(*s)
    if len({p, q, s}) < 3:
        raise InputError("vertex needs three pairwise distinct sites")
    if window is None:
        window = Window.around([p, q, s], 3.0)
    bis = classify_bisector(pair, p, q)
    us, pts = bis.trace(window, 192)
    if len(us) < 2:
        return None
    rs = pair.grid_at(p, pts[:, 0], pts[:, 1]) - pair.grid_at(s, pts[:, 0], pts[:, 1])
    finite = np.isfinite(rs)
    sign_change = None
    for k in range(len(us) - 1):
        if not (finite[k] and finite[k + 1]):
            continue
        if rs[k] == 0.0:
            sign_change = (us[k], us[k], rs[k], rs[k])
            break
        if (rs[k] > 0) != (rs[k + 1] > 0):
            sign_change = (us[k], us[k + 1], rs[k], rs[k + 1])
            break
    if sign_change is None:
        return None
    ulo, uhi, rlo, rhi = sign_change
    if ulo == uhi:
        v = bis.point_at(ulo)
    else:
        def G(u):
            pt = bis.point_at(u)
            return pair.diff_at(p, s, pt)

        u_star = bracketed_root(G, ulo, uhi, flo=rlo, fhi=rhi,
                                xtol=1e-13, ftol=1e-12)
        v = bis.point_at(u_star)
    if abs(pair.diff_at(p, q, v)) > 1e-10 or abs(pair.diff_at(p, s, v)) > 1e-10:
        raise NumericError("vertex solve did not reach residual 1e-10")
    return v


def count_bisector_intersections(pair: FunctionPair, p, q, s,
                                 window: Optional[Window] = None,
                                 n: int = 512) -> int:
    """Sign changes of f_q - f_s along the (p,q) bisector in the window."""
    p, q, s = PlanarPoint(*p), PlanarPoint(*q), PlanarPoint(*s)
    if q == s or p == q or p == s:
        raise InputError("sites must be pairwise distinct")
    if window is None:
        window = Window.around([p, q, s], 3.0)
    bis = classify_bisector(pair, p, q)
    us, pts = bis.trace(window, n)
    if len(us) < 2:
        return 0
    rs = pair.grid_at(q, pts[:, 0], pts[:, 1]) - pair.grid_at(s, pts[:, 0], pts[:, 1])

    def resid_at(u):
        pt = bis.point_at(u)
        return float(pair.grid_at(q, pt.x, pt.y) - pair.grid_at(s, pt.x, pt.y))

    crossings, _ = _count_sign_changes(us, rs, resid_at, cyclic=False)
    return crossings
