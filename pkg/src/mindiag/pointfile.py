"""Plain-text point lists: one `x y` pair per line, # starts a comment."""

from .errors import InputError
from .metric import PlanarPoint


def parse_points(text: str):
    pts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise InputError(
                f"line {lineno}: expected two coordinates, got {raw!r}")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            raise InputError(
                f"line {lineno}: could not parse coordinates in {raw!r}")
        pts.append(PlanarPoint(x, y))
    if not pts:
        raise InputError("point file contains no points")
    return tuple(pts)


def load_points(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_points(fh.read())
