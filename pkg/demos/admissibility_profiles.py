"""Profile gallery: values, derivatives, and the admissibility margin.

The margin g''(x)^2 - g'(x) g'''(x) decides whether a profile can take
part in a diagram with pseudocircle level sets.  Two of the built-ins
sit exactly on the boundary of that condition somewhere: smoothed-h
loses admissibility beyond |y| = pi/2 and exp-square beyond 1/sqrt(2).
"""

import math

import numpy as np

from mindiag import admissibility_margin, check_admissible_on, make_builtin
from mindiag.rootfind import bracketed_root


def describe(name, span):
    prof = make_builtin(name)
    rep = check_admissible_on(prof, span, 2001)
    verdict = "admissible" if rep.admissible else "NOT admissible"
    print(f"{name:12s} on [{span[0]:+.3f}, {span[1]:+.3f}]: {verdict}, "
          f"min margin {rep.min_margin:+.6f}")
    if rep.first_violation is not None:
        print(f"{'':12s} first violation at x = {rep.first_violation:+.6f}")
    return prof


def main():
    describe("quadratic", (-4.0, 4.0))
    describe("power:2.5", (-4.0, 4.0))
    describe("smoothed-g", (-6.0, 6.0))
    describe("extended-h", (-6.0, 6.0))
    h = describe("smoothed-h", (-math.pi + 1e-6, math.pi - 1e-6))
    e = describe("exp-square", (-2.0, 2.0))

    root_h = bracketed_root(lambda y: admissibility_margin(h, y), 1.0, 2.0)
    root_e = bracketed_root(lambda x: admissibility_margin(e, x), 0.5, 0.9)
    print()
    print(f"smoothed-h margin root: {root_h:.9f}  (pi/2 = {math.pi/2:.9f})")
    print(f"exp-square margin root: {root_e:.9f}  "
          f"(1/sqrt(2) = {1/math.sqrt(2):.9f})")

    # a quick look at how the margin behaves across each domain
    print()
    for name, lo, hi in [("smoothed-g", -3, 3), ("extended-h", -3, 3),
                         ("exp-square", -1.2, 1.2)]:
        prof = make_builtin(name)
        xs = np.linspace(lo, hi, 7)
        vals = ", ".join(f"{admissibility_margin(prof, x):+.4f}" for x in xs)
        print(f"{name:12s} margin samples: {vals}")


if __name__ == "__main__":
    main()
