"""Univariate convex profiles with derivatives up to order 3.

A profile is one coordinate factor of a separable convex function
f(x,y) = g(x) + h(y). Each built-in carries closed-form derivatives
and a margin test: the quantity g''(x)^2 - g'(x)g'''(x) must stay
positive for the level-set and diagram machinery to behave (nested
curves cross at most twice, bisectors cross at most once).
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, InputError

HALF_PI = 0.5 * math.pi
NONSMOOTH_GUARD = 1e-6


@dataclass(frozen=True)
class Profile1D:
    """Convex function of one variable, evaluable to third order."""

    name: str
    domain: tuple
    symmetric: bool
    strictly_convex: bool = True
    argmin: float = 0.0
    nonsmooth_points: tuple = ()
    orders: tuple = field(default=(), repr=False)

    def contains(self, x):
        """True where x lies strictly inside the (open) domain."""
        lo, hi = self.domain
        arr = np.asarray(x, dtype=float)
        ok = np.ones(arr.shape, dtype=bool) if arr.ndim else np.bool_(True)
        if lo != -math.inf:
            ok = ok & (arr > lo)
        if hi != math.inf:
            ok = ok & (arr < hi)
        return bool(ok) if arr.ndim == 0 else ok

    def eval(self, x, order=0):
        """Value (order 0) or derivative of the given order at x.

        x may be a scalar or an array; everything must be in-domain.
        """
        if order not in (0, 1, 2, 3):
            raise InputError(f"derivative order {order} not in 0..3")
        arr = np.asarray(x, dtype=float)
        inside = self.contains(arr)
        if not (inside if arr.ndim == 0 else bool(np.all(inside))):
            raise DomainError(
                f"argument outside domain {self.domain} of profile {self.name}")
        out = self.orders[order](arr)
        return float(out) if arr.ndim == 0 else np.asarray(out, dtype=float)

    def __call__(self, x):
        return self.eval(x, 0)

    def grid_values(self, x, order=0):
        """Like eval but out-of-domain entries give +inf instead of raising."""
        if order not in (0, 1, 2, 3):
            raise InputError(f"derivative order {order} not in 0..3")
        arr = np.asarray(x, dtype=float)
        lo, hi = self.domain
        span = (hi - lo) if (math.isfinite(lo) and math.isfinite(hi)) else 1.0
        pad = 1e-9 * span
        clipped = np.clip(arr,
                          lo + pad if math.isfinite(lo) else -np.inf,
                          hi - pad if math.isfinite(hi) else np.inf)
        vals = self.orders[order](clipped)
        return np.where(self.contains(arr), vals, np.inf)


# ---------------------------------------------------------------- built-ins

def _quadratic_orders():
    return (
        lambda x: x * x,
        lambda x: 2.0 * x,
        lambda x: np.full_like(np.asarray(x, float), 2.0),
        lambda x: np.zeros_like(np.asarray(x, float)),
    )


def _power_orders(c):
    # |x|^c and derivatives; near 0 the evaluation point is clamped to
    # the guard edge on the larger-|x| side (positive side at exactly 0)
    # whenever the true derivative is not continuous there (c < order+1).
    def deriv(k):
        coef = 1.0
        for j in range(k):
            coef *= (c - j)
        odd = (k % 2 == 1)

        def fk(x):
            a = np.abs(np.asarray(x, float))
            if k >= 1 and c < k + 1:
                a = np.maximum(a, NONSMOOTH_GUARD)
            val = coef * a ** (c - k)
            if odd:
                s = np.sign(np.asarray(x, float))
                s = np.where(s == 0, 1.0, s)
                val = val * s
            return val
        return fk

    return tuple(deriv(k) for k in range(4))


def _smoothed_g_orders():
    # g(x) = ln(e^x + 2 + e^{-x}) = |x| + 2 ln(1 + e^{-|x|}), minimum ln 4 at 0.
    def g0(x):
        a = np.abs(np.asarray(x, float))
        return a + 2.0 * np.log1p(np.exp(-a))

    def g1(x):
        return np.tanh(0.5 * np.asarray(x, float))

    def g2(x):
        e = np.exp(-np.abs(np.asarray(x, float)))
        return 2.0 * e / np.square(1.0 + e)

    def g3(x):
        return -g1(x) * g2(x)

    return (g0, g1, g2, g3)


def _smoothed_h_pieces():
    # h(y) = -ln(1 + cos y) = -ln(2 cos^2(y/2)) on (-pi, pi).
    def h0(y):
        c = np.cos(0.5 * np.asarray(y, float))
        return -np.log(2.0 * c * c)

    def h1(y):
        return np.tan(0.5 * np.asarray(y, float))

    def h2(y):
        c = np.cos(0.5 * np.asarray(y, float))
        return 0.5 / (c * c)

    def h3(y):
        return h1(y) * h2(y)

    return (h0, h1, h2, h3)


def _extended_h_orders():
    # Same as smoothed-h on [-pi/2, pi/2]; beyond, the quadratic with
    # matching value, slope, and curvature at the junction, so the third
    # derivative is 0 outside (and by the guard policy, within 1e-6 of
    # the junction as well).
    sh = _smoothed_h_pieces()

    def h0(y):
        y = np.asarray(y, float)
        ym = np.clip(y, -HALF_PI, HALF_PI)
        ep = np.maximum(y - HALF_PI, 0.0)
        em = np.minimum(y + HALF_PI, 0.0)
        return sh[0](ym) + ep + 0.5 * ep * ep - em + 0.5 * em * em

    def h1(y):
        y = np.asarray(y, float)
        ym = np.clip(y, -HALF_PI, HALF_PI)
        ep = np.maximum(y - HALF_PI, 0.0)
        em = np.minimum(y + HALF_PI, 0.0)
        return sh[1](ym) + ep + em

    def h2(y):
        y = np.asarray(y, float)
        return sh[2](np.clip(y, -HALF_PI, HALF_PI))

    def h3(y):
        y = np.asarray(y, float)
        inner = np.abs(y) < HALF_PI - NONSMOOTH_GUARD
        return np.where(inner, sh[3](np.clip(y, -HALF_PI, HALF_PI)), 0.0)

    return (h0, h1, h2, h3)


def _exp_square_orders():
    def f0(x):
        x = np.asarray(x, float)
        return np.exp(x * x)

    def f1(x):
        x = np.asarray(x, float)
        return 2.0 * x * np.exp(x * x)

    def f2(x):
        x = np.asarray(x, float)
        return (2.0 + 4.0 * x * x) * np.exp(x * x)

    def f3(x):
        x = np.asarray(x, float)
        return (12.0 * x + 8.0 * x ** 3) * np.exp(x * x)

    return (f0, f1, f2, f3)


_UNBOUNDED = (-math.inf, math.inf)


def make_builtin(name: str, c: Optional[float] = None) -> Profile1D:
    """Construct a built-in profile by name.

    Names: quadratic, power (needs c > 1, also spellable "power:2.5"),
    smoothed-g, smoothed-h, extended-h, exp-square.
    """
    if ":" in name:
        base, _, arg = name.partition(":")
        if c is not None:
            raise InputError("parameter given both inline and as keyword")
        try:
            c = float(arg)
        except ValueError:
            raise InputError(f"bad profile parameter {arg!r}") from None
        name = base

    if name == "quadratic":
        return Profile1D("quadratic", _UNBOUNDED, True, orders=_quadratic_orders())
    if name == "power":
        if c is None:
            raise InputError("power profile needs an exponent, e.g. power:3")
        if not c > 1.0:
            raise InputError(f"power exponent must exceed 1, got {c}")
        nonsmooth = (0.0,) if c <= 3.0 else ()
        return Profile1D(f"power:{c:g}", _UNBOUNDED, True,
                         nonsmooth_points=nonsmooth, orders=_power_orders(c))
    if name == "smoothed-g":
        return Profile1D("smoothed-g", _UNBOUNDED, True,
                         orders=_smoothed_g_orders())
    if name == "smoothed-h":
        return Profile1D("smoothed-h", (-math.pi, math.pi), True,
                         orders=_smoothed_h_pieces())
    if name == "extended-h":
        return Profile1D("extended-h", _UNBOUNDED, True,
                         nonsmooth_points=(-HALF_PI, HALF_PI),
                         orders=_extended_h_orders())
    if name == "exp-square":
        return Profile1D("exp-square", _UNBOUNDED, True,
                         orders=_exp_square_orders())
    raise InputError(f"unknown profile name {name!r}")


# ------------------------------------------------------------ admissibility

@dataclass(frozen=True)
class AdmissibilityReport:
    profile: str
    interval: tuple
    samples: int
    min_margin: float
    first_violation: Optional[float]

    @property
    def admissible(self) -> bool:
        # margin exactly 0 counts as non-admissible
        return self.min_margin > 0.0


def admissibility_margin(profile: Profile1D, x):
    """Second-derivative margin g''(x)^2 - g'(x) g'''(x); positive is good."""
    d1 = profile.eval(x, 1)
    d2 = profile.eval(x, 2)
    d3 = profile.eval(x, 3)
    return d2 * d2 - d1 * d3


def check_admissible_on(profile: Profile1D, interval, samples: int) -> AdmissibilityReport:
    """Sample the margin on a uniform grid over [a, b] and classify."""
    a, b = float(interval[0]), float(interval[1])
    if not a < b:
        raise InputError(f"empty interval ({a}, {b})")
    if samples < 2:
        raise InputError("need at least 2 samples")
    if not (profile.contains(a) and profile.contains(b)):
        raise DomainError(
            f"interval ({a}, {b}) not inside domain {profile.domain}")
    xs = np.linspace(a, b, samples)
    margins = admissibility_margin(profile, xs)
    idx = int(np.argmin(margins))
    min_margin = float(margins[idx])
    first = None
    if min_margin < 0.0:
        bad = np.nonzero(margins < 0.0)[0]
        first = float(xs[bad[0]])
    return AdmissibilityReport(profile.name, (a, b), samples, min_margin, first)
