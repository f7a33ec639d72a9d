"""Smoothed distance on a star network, and the worst detour in it.

The smoothed distance 2 d(p,q) / (d(p,o) + d(q,o) + d(p,q)) measures
how bad the detour through the hub o is; the pair of leaves with the
largest dilation is exactly the pair at the smallest smoothed distance.
When every diagram cell spans a narrow angle seen from the hub, the
worst pair must own adjacent cells, so it can be found by scanning the
adjacency list instead of all pairs.
"""

import math
from pathlib import Path

import numpy as np

from mindiag import (Marker, OriginAnchoredMetric, PlanarPoint, Polyline,
                     RasterUnderlay, Scene, StarNetwork, Window,
                     build_smoothed_voronoi, check_angle_condition,
                     cell_outline, dilation, max_dilation_pair_bruteforce,
                     max_dilation_pair_via_diagram, modified_distance,
                     render_svg, smoothed_distance, smoothed_to_f)

OUT = Path(__file__).parent / "out"


def main():
    OUT.mkdir(exist_ok=True)
    rng = np.random.default_rng(23)
    n = 20
    radii = rng.uniform(1.3, 2.3, n)
    angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, n))
    leaves = [(r * math.cos(a), r * math.sin(a))
              for r, a in zip(radii, angles)]
    net = StarNetwork((0.0, 0.0), leaves)
    metric = OriginAnchoredMetric(PlanarPoint(0.0, 0.0))

    # the separable form agrees with the smoothed-distance chain as long
    # as the two points are less than a quarter turn apart
    p, q = leaves[0], leaves[1]
    via_chain = smoothed_to_f(smoothed_distance(metric, p, q))
    direct = modified_distance(net, p, q)
    print(f"separable form {direct:.12f} vs chain {via_chain:.12f} "
          f"(difference {abs(direct - via_chain):.2e})")

    diagram = build_smoothed_voronoi(net, (1.0, 2.5), 384)
    report = check_angle_condition(diagram)
    widest = max(c.max_angle for c in report.cells)
    print(f"angle condition {'passes' if report.ok else 'fails'}: "
          f"widest cell spans {math.degrees(widest):.1f} degrees "
          f"(needs < {math.degrees(math.pi / 2 - report.cells[0].slack):.1f})")

    pair_b, value_b = max_dilation_pair_bruteforce(net)
    pair_v, value_v = max_dilation_pair_via_diagram(diagram)
    print(f"worst detour by brute force: leaves {pair_b}, "
          f"dilation {value_b:.6f}")
    print(f"worst detour via adjacency:  leaves {pair_v}, "
          f"dilation {value_v:.6f}")
    i, j = pair_b
    print(f"check: 2/d_o - 1 = "
          f"{2.0 / smoothed_distance(metric, leaves[i], leaves[j]) - 1.0:.6f}"
          f" = {dilation(metric, leaves[i], leaves[j]):.6f}")

    win = Window(-2.6, -2.6, 2.6, 2.6)
    elements = [RasterUnderlay(win, diagram.raster.labels)]
    for k in range(n):
        elements.append(Polyline(tuple(map(tuple, cell_outline(diagram, k))),
                                 closed=True, stroke="#222222", width=1.0))
    elements.extend(Marker(l) for l in leaves)
    elements.append(Marker((0.0, 0.0), radius=4.0, fill="#ffffff",
                           stroke="#000000"))
    path = OUT / "smoothed_star_network.svg"
    path.write_bytes(render_svg(Scene(win, tuple(elements)), 900, 900))
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
