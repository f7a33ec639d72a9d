"""Level curves behave like circles, bisectors like monotone arcs.

Samples a few level sets of g(x)+h(y) pairs, counts pairwise crossings
(never more than two for admissible profiles), then classifies and
traces bisectors between random sites and writes both as one SVG.
"""

from pathlib import Path

import numpy as np

from mindiag import (FunctionPair, LevelSet, PlanarPoint, Polyline, Scene,
                     Window, classify_bisector, count_crossings,
                     label_color, make_builtin, render_svg, sample_level_set,
                     three_site_vertex, Marker)

OUT = Path(__file__).parent / "out"


def main():
    OUT.mkdir(exist_ok=True)
    pair = FunctionPair(make_builtin("smoothed-g"),
                        make_builtin("extended-h"))
    win = Window(-4.0, -3.0, 4.0, 3.0)
    rng = np.random.default_rng(7)

    curves = []
    sets = []
    for k in range(4):
        center = tuple(rng.uniform(-1.0, 1.0, 2))
        level = 0.8 + 0.5 * k
        ls = LevelSet(pair, center, level)
        sets.append(ls)
        pts = sample_level_set(ls, 360)
        curves.append(Polyline(tuple(map(tuple, pts)), closed=True,
                               stroke=label_color(k)))
        print(f"level set {k}: center ({center[0]:+.3f}, {center[1]:+.3f}) "
              f"level {level:.2f}")

    print()
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            n = count_crossings(sets[i], sets[j], n=512)
            print(f"curves {i} and {j} cross {n} times")

    sites = [PlanarPoint(-1.5, -0.8), PlanarPoint(1.2, 0.9),
             PlanarPoint(0.3, -1.4)]
    elements = list(curves)
    for a in range(3):
        for b in range(a + 1, 3):
            bis = classify_bisector(pair, sites[a], sites[b])
            us, pts = bis.trace(win, 512)
            print(f"bisector {a}-{b}: {bis.kind}, {len(us)} trace points")
            elements.append(Polyline(tuple(map(tuple, pts)),
                                     stroke="#555555", width=1.0))
    v = three_site_vertex(pair, *sites)
    print(f"three bisectors meet at ({v[0]:+.5f}, {v[1]:+.5f})")
    elements.append(Marker(tuple(v), radius=4.0, fill="#cc3333"))
    elements.extend(Marker((s.x, s.y)) for s in sites)

    svg = render_svg(Scene(win, tuple(elements)), 960, 720)
    path = OUT / "level_sets_and_bisectors.svg"
    path.write_bytes(svg)
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
