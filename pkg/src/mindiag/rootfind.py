"""Bracketed scalar root finding.

One solver is used everywhere: bisection safeguarded by secant steps.
It needs a sign-changing bracket and shrinks it until the interval is
below ``xtol`` (or the residual is below ``ftol`` when one is given).
"""

import math

from .errors import NumericError

MAX_ITER = 200


def bracketed_root(fn, lo, hi, flo=None, fhi=None, xtol=1e-12, ftol=0.0,
                   max_iter=MAX_ITER):
    """Root of fn in [lo, hi]; fn(lo) and fn(hi) must differ in sign.

    Returns x with hi-lo <= xtol around it, or |fn(x)| <= ftol if that
    triggers first. A zero endpoint is returned as-is.
    """
    if lo > hi:
        lo, hi = hi, lo
        flo, fhi = fhi, flo
    if flo is None:
        flo = fn(lo)
    if fhi is None:
        fhi = fn(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NumericError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")

    x, fx = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)
    for _ in range(max_iter):
        if hi - lo <= xtol or (ftol > 0 and abs(fx) <= ftol):
            return x
        # secant candidate, kept only if it lands safely inside
        denom = fhi - flo
        mid = 0.5 * (lo + hi)
        x = mid
        if denom != 0.0:
            s = lo - flo * (hi - lo) / denom
            margin = 0.125 * (hi - lo)
            if lo + margin < s < hi - margin:
                x = s
        fx = fn(x)
        if fx == 0.0:
            return x
        if (fx > 0) == (flo > 0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
    if hi - lo <= xtol * 8 or (ftol > 0 and abs(fx) <= ftol * 8):
        return x
    raise NumericError(f"root not bracketed to tolerance after {max_iter} iterations")


def expand_bracket(fn, x0, step, x_max=math.inf, f0=None, grow=2.0,
                   max_steps=200):
    """Walk from x0 in +step direction until fn changes sign.

    Returns (lo, hi, flo, fhi) with a sign change between them. The walk
    is clamped to x_max; hitting the clamp without a sign change raises.
    """
    f0 = fn(x0) if f0 is None else f0
    if f0 == 0.0:
        return x0, x0, 0.0, 0.0
    lo, flo = x0, f0
    h = step
    for _ in range(max_steps):
        hi = lo + h
        clamped = hi >= x_max
        if clamped:
            hi = x_max
        fhi = fn(hi)
        if fhi == 0.0 or (fhi > 0) != (flo > 0):
            return lo, hi, flo, fhi
        if clamped:
            raise NumericError(f"no sign change between {x0} and {x_max}")
        lo, flo = hi, fhi
        h *= grow
    raise NumericError("bracket expansion exhausted")
