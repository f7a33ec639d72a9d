"""Build a minimization diagram two ways and check one against the other.

The incremental construction gives exact cell boundaries and vertices;
the raster assigns every pixel to its nearest site by brute force.  The
two must agree away from cell boundaries.  Writes the diagram as SVG
(exact boundaries over the pixel field) and as a PGM label image.
"""

import json
from pathlib import Path

import numpy as np

from mindiag import (FunctionPair, Marker, Polyline, RasterUnderlay, Scene,
                     Window, build_incremental, build_raster,
                     cell_boundary_points, diagram_to_json, feature_counts,
                     make_builtin, raster_to_pgm, render_svg,
                     verify_against_raster)

OUT = Path(__file__).parent / "out"


def main():
    OUT.mkdir(exist_ok=True)
    pair = FunctionPair(make_builtin("smoothed-g"),
                        make_builtin("quadratic"))
    win = Window(-3.0, -3.0, 3.0, 3.0)
    rng = np.random.default_rng(11)
    sites = [tuple(rng.uniform(-2.0, 2.0, 2)) for _ in range(12)]

    diagram = build_incremental(pair, sites, seed=0, window=win)
    cells, arcs, verts = feature_counts(diagram)
    print(f"{cells} cells, {arcs} arcs, {verts} vertices "
          f"(bounds: arcs <= {3 * cells - 6}, vertices <= {2 * cells - 5})")

    raster = build_raster(pair, sites, win, 512)
    mismatch = verify_against_raster(diagram, raster)
    print(f"pixel disagreement away from boundaries: {mismatch:.6f}")

    doc = json.loads(diagram_to_json(diagram))
    print(f"JSON summary: {len(doc['cells'])} cells, "
          f"{len(doc['vertices'])} vertices, "
          f"{len(doc['adjacency'])} adjacent pairs")

    elements = [RasterUnderlay(win, raster.labels)]
    for i in range(len(sites)):
        pts = cell_boundary_points(diagram, i, 256)
        elements.append(Polyline(tuple(map(tuple, pts)), closed=True,
                                 stroke="#222222", width=1.2))
    elements.extend(Marker(s) for s in sites)
    svg_path = OUT / "incremental_diagram.svg"
    svg_path.write_bytes(render_svg(Scene(win, tuple(elements)), 900, 900))
    print(f"wrote {svg_path}")

    pgm_path = OUT / "incremental_diagram.pgm"
    pgm_path.write_bytes(raster_to_pgm(raster))
    print(f"wrote {pgm_path}")


if __name__ == "__main__":
    main()
