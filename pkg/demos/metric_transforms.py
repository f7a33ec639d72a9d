"""The smoothed distance, its log-plane twin, and the chain between them.

d_o(p,q) = 2 d(p,q) / (d(p,o) + d(q,o) + d(p,q)) is a metric on the
punctured plane, invariant under scaling and rotation about o.  Mapping
points to (log radius, angle) turns it into a translation-invariant
metric delta, and a fixed monotone function turns delta at (0,0) into
the separable sum smoothed-g(x) + smoothed-h(y).
"""

import math

import numpy as np

from mindiag import (OriginAnchoredMetric, PlanarPoint, TransformedPoint,
                     delta_distance, dilation, exp_transform, f_to_smoothed,
                     log_transform, make_builtin, smoothed_distance,
                     smoothed_to_f)


def main():
    o = OriginAnchoredMetric(PlanarPoint(0.0, 0.0))
    rng = np.random.default_rng(5)

    p, q = (3.0, 0.0), (0.0, 4.0)
    d = smoothed_distance(o, p, q)
    print(f"d_o({p}, {q}) = {d:.6f}")
    print(f"detour through the hub: dilation = {dilation(o, p, q):.6f} "
          f"= 2/d_o - 1 = {2 / d - 1:.6f}")

    # invariances: scale by 10, rotate by an arbitrary angle
    s, th = 10.0, 1.234
    ct, st = math.cos(th), math.sin(th)
    ps = (s * (ct * p[0] - st * p[1]), s * (st * p[0] + ct * p[1]))
    qs = (s * (ct * q[0] - st * q[1]), s * (st * q[0] + ct * q[1]))
    print(f"after scale+rotation: {smoothed_distance(o, ps, qs):.15f}")

    # the antipodal ceiling: d_o never exceeds 1
    worst = 0.0
    for _ in range(20000):
        a, b = rng.uniform(-5, 5, 2), rng.uniform(-5, 5, 2)
        if math.hypot(*a) < 1e-6 or math.hypot(*b) < 1e-6:
            continue
        worst = max(worst, smoothed_distance(o, tuple(a), tuple(b)))
    print(f"largest of 20000 random distances: {worst:.6f} (supremum 1)")

    t1 = log_transform(o, p)
    t2 = log_transform(o, q)
    print(f"log plane: {p} -> ({t1.u:.4f}, {t1.v:.4f}), "
          f"{q} -> ({t2.u:.4f}, {t2.v:.4f})")
    back = exp_transform(o, t1)
    print(f"round trip: ({back.x:.12f}, {back.y:.12f})")
    print(f"delta(t1, t2) = {delta_distance(o, t1, t2):.12f} "
          f"= d_o = {d:.12f}")

    g = make_builtin("smoothed-g")
    h = make_builtin("smoothed-h")
    x, y = 0.7, 2.1
    dd = delta_distance(o, TransformedPoint(x, y), TransformedPoint(0.0, 0.0))
    print(f"chain: smoothed_to_f(delta) = {smoothed_to_f(dd):.12f} vs "
          f"g(x)+h(y) = {g(x) + h(y):.12f}")
    print(f"inverse chain recovers delta: "
          f"{f_to_smoothed(g(x) + h(y)):.12f} vs {dd:.12f}")


if __name__ == "__main__":
    main()
