"""Smoothed distance anchored at a hub point, and the transforms around it.

The smoothed distance d_o(p,q) = 2 d(p,q) / (d(p,o) + d(q,o) + d(p,q))
is a metric on the plane without o, bounded by 1. Exponentiating the
log plane (u, v) = (ln r, theta) turns it into a translation-invariant
metric there, and a further monotone map turns that into a separable
convex function g(u) + h(v), which is what the diagram machinery eats.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InputError, UndefinedPointError

LN2 = math.log(2.0)


class PlanarPoint(NamedTuple):
    x: float
    y: float


class TransformedPoint(NamedTuple):
    u: float  # log-radius
    v: float  # angle, canonical range (-pi, pi]


@dataclass(frozen=True)
class OriginAnchoredMetric:
    origin: PlanarPoint = PlanarPoint(0.0, 0.0)


def _check_not_origin(m, p):
    if p[0] == m.origin.x and p[1] == m.origin.y:
        raise UndefinedPointError("smoothed distance is undefined at the hub")


def smoothed_distance(m: OriginAnchoredMetric, p, q) -> float:
    """d_o(p, q) in [0, 1]; 0 only for identical points, 1 for antipodes."""
    _check_not_origin(m, p)
    _check_not_origin(m, q)
    if p[0] == q[0] and p[1] == q[1]:
        return 0.0
    ox, oy = m.origin
    d = math.hypot(p[0] - q[0], p[1] - q[1])
    dp = math.hypot(p[0] - ox, p[1] - oy)
    dq = math.hypot(q[0] - ox, q[1] - oy)
    return 2.0 * d / (dp + dq + d)


def smoothed_distance_grid(m: OriginAnchoredMetric, p, xs, ys):
    """Vectorized d_o(p, (xs, ys)) over coordinate arrays."""
    _check_not_origin(m, p)
    ox, oy = m.origin
    d = np.hypot(xs - p[0], ys - p[1])
    dp = math.hypot(p[0] - ox, p[1] - oy)
    dq = np.hypot(xs - ox, ys - oy)
    denom = dp + dq + d
    return np.divide(2.0 * d, denom, out=np.zeros_like(denom), where=denom > 0)


def dilation(m: OriginAnchoredMetric, p, q) -> float:
    """Detour factor (d(p,o) + d(o,q)) / d(p,q) of routing through the hub."""
    if p[0] == q[0] and p[1] == q[1]:
        raise InputError("dilation of a pair of identical points is infinite")
    ox, oy = m.origin
    d = math.hypot(p[0] - q[0], p[1] - q[1])
    dp = math.hypot(p[0] - ox, p[1] - oy)
    dq = math.hypot(q[0] - ox, q[1] - oy)
    return (dp + dq) / d


def log_transform(m: OriginAnchoredMetric, p) -> TransformedPoint:
    """Map p to (ln d(p,o), angle of p - o), angle in (-pi, pi]."""
    _check_not_origin(m, p)
    dx = p[0] - m.origin.x
    dy = p[1] - m.origin.y
    v = math.atan2(dy, dx)
    if v <= -math.pi:
        v += 2.0 * math.pi
    return TransformedPoint(math.log(math.hypot(dx, dy)), v)


def exp_transform(m: OriginAnchoredMetric, t) -> PlanarPoint:
    """Inverse of log_transform: o + e^u (cos v, sin v)."""
    r = math.exp(t[0])
    return PlanarPoint(m.origin.x + r * math.cos(t[1]),
                       m.origin.y + r * math.sin(t[1]))


def delta_distance(m: OriginAnchoredMetric, t1, t2) -> float:
    """The transformed-plane metric: d_o of the exponentiated points."""
    return smoothed_distance(m, exp_transform(m, t1), exp_transform(m, t2))


def smoothed_to_f(d):
    """Monotone map (0,1) -> (ln 2, inf) turning d_o into g+h values.

    Algebraically -ln((1 - 1/rho^2)/2) with rho = 2/d - 1, rewritten in
    the cancellation-free form ln((2-d)^2 / (2(1-d))).
    """
    arr = np.asarray(d, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise InputError("smoothed_to_f needs values strictly inside (0, 1)")
    out = 2.0 * np.log(2.0 - arr) - LN2 - np.log1p(-arr)
    return float(out) if arr.ndim == 0 else out


def f_to_smoothed(v):
    """Inverse of smoothed_to_f; maps [ln 2, inf) back onto [0, 1)."""
    arr = np.asarray(v, dtype=float)
    arg = -np.expm1(LN2 - arr)  # = 1 - 2 e^{-v}, exact 0 at v = ln 2
    if np.any(arg < 0.0):
        raise InputError("f_to_smoothed needs values >= ln 2")
    s = np.sqrt(arg)
    out = 2.0 * s / (1.0 + s)
    return float(out) if arr.ndim == 0 else out
