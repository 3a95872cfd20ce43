"""Slant directions, stepped-surface heights, and tessellation.

The initial-data surface for direction (r,s,t) is the lowest stepped
surface above the plane r*i + s*j + t*k = 0; its height function is

    k_{i,j} = i + j - 2*floor((r*i + s*j + t*(i+j)) / (2*t))

Python's // is the mathematical floor, which is what the formula needs
at negative arguments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from typing import NamedTuple


@dataclass(frozen=True)
class SlantDirection:
    r: int
    s: int
    t: int

    def __post_init__(self):
        r, s, t = self.r, self.s, self.t
        if not (isinstance(r, int) and isinstance(s, int) and isinstance(t, int)):
            raise ValueError("r, s, t must be integers")
        if r < 0 or s < 0 or t <= max(r, s):
            raise ValueError("need r, s >= 0 and t > max(r, s)")
        if gcd(gcd(r, s), t) != 1:
            raise ValueError("need gcd(r, s, t) = 1")

    @property
    def swapped(self) -> bool:
        """True when r > s; internal formulas then run on the i<->j mirror."""
        return self.r > self.s

    def canonical(self) -> "SlantDirection":
        """The r <= s representative (i and j exchanged when needed)."""
        if self.swapped:
            return SlantDirection(self.s, self.r, self.t)
        return self

    def all_odd(self) -> bool:
        return self.r % 2 == 1 and self.s % 2 == 1 and self.t % 2 == 1

    def __iter__(self):
        return iter((self.r, self.s, self.t))


class LatticePoint(NamedTuple):
    i: int
    j: int
    k: int

    @staticmethod
    def of(i: int, j: int, k: int) -> "LatticePoint":
        if (i + j + k) % 2 != 0:
            raise ValueError(f"point ({i},{j},{k}) has odd coordinate sum")
        return LatticePoint(i, j, k)


def height(d: SlantDirection, i: int, j: int) -> int:
    r, s, t = d
    return i + j - 2 * ((r * i + s * j + t * (i + j)) // (2 * t))


def height_branchwise(d: SlantDirection, i: int, j: int) -> int:
    """Independent branch-form evaluation of the height (oracle for tests)."""
    r, s, t = d
    if (i + j) % 2 == 0:
        return -2 * ((r * i + s * j) // (2 * t))
    return 1 - 2 * ((r * i + s * j + t) // (2 * t))


def plane_index(d: SlantDirection, p) -> int:
    r, s, t = d
    i, j, k = p
    return r * i + s * j + t * k


def surface_point(d: SlantDirection, i: int, j: int) -> LatticePoint:
    return LatticePoint(i, j, height(d, i, j))


# ---------------------------------------------------------------------------
# vertex environments

# The five allowed sign patterns of (k_{i+1,j}-k, k_{i-1,j}-k, k_{i,j+1}-k,
# k_{i,j-1}-k) for r <= s.  The first three descend in the j direction
# (dual face is a hexagon); the last two are the j-local min and max
# (down-up and up-down squares, the lower and upper halves of a split
# hexagon in the dual graph).
_ENVIRONMENTS = {
    (-1, 1, -1, 1): "E1",   # descends in i and in j
    (-1, -1, -1, 1): "E2",  # local max in i, descends in j
    (1, 1, -1, 1): "E3",    # local min in i, descends in j
    (1, 1, 1, 1): "E4",     # local min in both (down-up square)
    (-1, -1, -1, -1): "E5", # local max in both (up-down square)
}


def classify_vertex(d: SlantDirection, i: int, j: int) -> str:
    if d.swapped:
        dc = d.canonical()
        return classify_vertex(dc, j, i)
    k = height(d, i, j)
    pattern = (
        height(d, i + 1, j) - k,
        height(d, i - 1, j) - k,
        height(d, i, j + 1) - k,
        height(d, i, j - 1) - k,
    )
    tag = _ENVIRONMENTS.get(pattern)
    if tag is None:
        raise AssertionError(f"excluded vertex environment {pattern} at ({i},{j})")
    return tag


def face_kind(d: SlantDirection, x: int, y: int) -> str:
    """Dual-face type at surface point (x,y): 'hexagon' or 'square'."""
    tag = classify_vertex(d, x, y)
    return "hexagon" if tag in ("E1", "E2", "E3") else "square"


# ---------------------------------------------------------------------------
# tessellated cone domain


@dataclass(frozen=True)
class Tile:
    x: int
    y: int
    color: str
    shape: str  # square, up-triangle, down-triangle


@dataclass
class TessellatedDomain:
    apex: LatticePoint
    direction: SlantDirection
    faces: list
    heights: dict

    def to_json(self) -> str:
        return json.dumps({
            "apex": list(self.apex),
            "direction": list(self.direction),
            "faces": [{"x": f.x, "y": f.y, "color": f.color, "shape": f.shape}
                      for f in self.faces],
            "heights": [{"x": x, "y": y, "k": k}
                        for (x, y), k in sorted(self.heights.items())],
        }, indent=None, sort_keys=True)


def cone_points(d: SlantDirection, apex) -> dict:
    """Surface points (x,y) -> height inside the backward cone of the apex."""
    i, j, k = apex
    out = {}
    m = plane_index(d, apex)
    if m < 0:
        return out
    # |x-i| + |y-j| <= k - k_{x,y}; heights are bounded below on the cone
    r, s, t = d
    xr = 4 * (abs(k) + m + 2 * t + 4)
    for x in range(i - xr, i + xr + 1):
        for y in range(j - xr, j + xr + 1):
            h = height(d, x, y)
            if abs(x - i) + abs(y - j) <= k - h:
                out[(x, y)] = h
    return out


def tessellate(d: SlantDirection, apex) -> TessellatedDomain:
    """Black/white square/triangle tessellation of the cone domain.

    Each unit cell of surface points splits along the (x+1,y)-(x,y+1)
    diagonal into two triangles when its corner heights form a local
    max or min (the 3D surface is a tent), and stays a single flat
    square tile on slope cells. The 'down-triangle' is the lower-left
    piece. Colors follow the bipartite classes of the dual graph; the
    global convention is pinned by the worked four-term example.
    """
    apex = LatticePoint.of(*apex)
    pts = cone_points(d, apex)
    tiles = []
    for (x, y), h in pts.items():
        corners = [(x + 1, y), (x, y + 1), (x + 1, y + 1)]
        if not all(c in pts for c in corners):
            continue
        h10 = pts[(x + 1, y)]
        h01 = pts[(x, y + 1)]
        h11 = pts[(x + 1, y + 1)]
        mu = h10  # anti-diagonal pair h10 == h01 always (parity)
        if h == h11:
            # tent cell (local max or min along the main diagonal)
            tiles.append(Tile(x, y, "black", "down-triangle"))
            tiles.append(Tile(x, y, "white", "up-triangle"))
        else:
            # slope cell: flat square tile
            color = "white" if h == mu + 1 else "black"
            tiles.append(Tile(x, y, color, "square"))
    return TessellatedDomain(apex, d, tiles, pts)
