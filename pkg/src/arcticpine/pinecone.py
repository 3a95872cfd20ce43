"""Pinecone dimer graphs dual to tessellated cone domains.

The graph is assembled column by column in (x, w) drawing coordinates.
Each surface point (x, y) of the cone domain sits on a brick whose
midline is at w = (k - j + 1) + y - k_{x,y}: a "down-up" point owns the
lower half [w-1, w] of the brick, an "up-down" point the upper half
[w, w+1], and a double-descent point the whole brick [w-1, w+1] (a
hexagon).  The graph consists of the cells of the *interior* faces
(strictly inside the cone); cells of boundary faces belong to the
frozen brick-wall exterior and contribute no edges.  Boundary faces
still appear in the face list wherever they touch an interior cell, so
that the partition-function exponents 1 - N_{x,y} can be evaluated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .lattice import SlantDirection, LatticePoint, height, plane_index, cone_points
from .poly import SparsePoly
from .tsystem import var_name


# ---------------------------------------------------------------------------
# slice positions and boundary


def _canonical(d: SlantDirection, apex):
    i, j, k = apex
    if d.swapped:
        return d.canonical(), (j, i, k), True
    return d, (i, j, k), False


def slice_bounds(d: SlantDirection, apex, x: int):
    """(w_min, w_max) of slice x, or None when the slice is outside the domain."""
    d, (i, j, k), _ = _canonical(d, apex)
    r, s, t = d
    m = plane_index(d, (i, j, k))
    X = x - i
    if Fraction(-m, r + t) > X or X > Fraction(m, t - r):
        return None
    if X <= 0:
        w_min = Fraction(1 - X)
        w_max = 1 + Fraction(2 * m + (2 * r + t + s) * X, t - s)
    else:
        w_min = Fraction(1 + X)
        w_max = 1 + Fraction(2 * m + (2 * r - t - s) * X, t - s)
    return w_min, w_max


def edge_positions(d: SlantDirection, apex, x: int) -> list:
    """Positions w(x,u) of the split-brick midline edges in slice x.

    The window is w_min <= w < w_max; the upper bound is exclusive (a
    midline sitting exactly on the cone boundary belongs to the frozen
    exterior), which reproduces the published tables.
    """
    d, (i, j, k), _ = _canonical(d, apex)
    r, s, t = d
    bounds = slice_bounds(d, (i, j, k), x)
    if bounds is None:
        return []
    w_min, w_max = bounds
    base = k - j + 1 - x
    out = []
    # w is nondecreasing in u; scan a safe window of u values
    span = (t - s) * (abs(k) + abs(j) + abs(x) + 2 * (i + j + k != 0)) + \
        2 * (t + s) + int(w_max) + abs(int(w_min)) + 4
    for u in range(-span, span + 1):
        w = base + 2 * (((t + s) * u + (r - s) * x) // (t - s))
        if w_min <= w < w_max:
            out.append(w)
    return sorted(set(out))


def boundary_segments(d: SlantDirection, apex) -> list:
    """The four boundary segments of the (x,w) domain as endpoint pairs."""
    d, (i, j, k), _ = _canonical(d, apex)
    r, s, t = d
    m = plane_index(d, (i, j, k))
    x_left = Fraction(i) - Fraction(m, r + t)
    x_right = Fraction(i) + Fraction(m, t - r)

    def lower(x):
        return Fraction(1) + abs(x - i)

    def upper(x):
        X = x - i
        if X <= 0:
            return 1 + Fraction(2 * m + (2 * r + t + s) * X, t - s)
        return 1 + Fraction(2 * m + (2 * r - t - s) * X, t - s)

    xi = Fraction(i)
    return [
        ((x_left, lower(x_left)), (xi, lower(xi))),
        ((xi, lower(xi)), (x_right, lower(x_right))),
        ((x_left, upper(x_left)), (xi, upper(xi))),
        ((xi, upper(xi)), (x_right, upper(x_right))),
    ]


# ---------------------------------------------------------------------------
# graph


@dataclass(frozen=True)
class Face:
    x: int
    y: int
    kind: str          # square | hexagon
    valency: int
    boundary: bool
    edges: tuple


@dataclass
class PineconeGraph:
    direction: SlantDirection
    apex: LatticePoint
    vertices: list     # (id, color, (x, w))
    edges: list        # (a, b) vertex-id pairs
    faces: list        # Face

    def vertex_count(self):
        return len(self.vertices)

    def to_json(self) -> str:
        return json.dumps({
            "direction": list(self.direction),
            "apex": list(self.apex),
            "vertices": [{"id": vid, "color": c, "x": p[0], "y": p[1]}
                         for vid, c, p in self.vertices],
            "edges": [list(e) for e in self.edges],
            "faces": [{"x": f.x, "y": f.y, "kind": f.kind, "valency": f.valency,
                       "boundary": f.boundary, "edges": list(f.edges)}
                      for f in self.faces],
        }, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "PineconeGraph":
        data = json.loads(text)
        return PineconeGraph(
            SlantDirection(*data["direction"]),
            LatticePoint.of(*data["apex"]),
            [(v["id"], v["color"], (v["x"], v["y"])) for v in data["vertices"]],
            [tuple(e) for e in data["edges"]],
            [Face(f["x"], f["y"], f["kind"], f["valency"], f["boundary"],
                  tuple(f["edges"])) for f in data["faces"]],
        )


def _face_half(d: SlantDirection, x: int, y: int) -> str:
    """hexagon / lower (down-up) / upper (up-down), from the column triple."""
    h = height(d, x, y)
    below = height(d, x, y - 1)
    above = height(d, x, y + 1)
    if below == h + 1 and above == h - 1:
        return "hexagon"
    if below == h + 1 and above == h + 1:
        return "lower"
    if below == h - 1 and above == h - 1:
        return "upper"
    raise AssertionError(f"impossible column triple at ({x},{y})")


def _cell_span(d: SlantDirection, apex, x: int, y: int, h: int):
    """The w-interval [w0, w1] of the face's cell in its column."""
    i, j, k = apex
    w = (k - j + 1) + y - h
    half = _face_half(d, x, y)
    if half == "lower":
        return w - 1, w
    if half == "upper":
        return w, w + 1
    return w - 1, w + 1


def build_graph(d: SlantDirection, apex) -> PineconeGraph:
    dc, apexc, swapped = _canonical(d, apex)
    apexc = LatticePoint.of(*apexc)
    i, j, k = apexc
    pts = cone_points(dc, apexc)

    def cell_edges(x, w0, w1):
        out = [((x, w0), (x + 1, w0)), ((x, w1), (x + 1, w1))]
        for c in (x, x + 1):
            for w in range(w0, w1):
                out.append(((c, w), (c, w + 1)))
        return out

    spans = {p: _cell_span(dc, apexc, p[0], p[1], h) for p, h in pts.items()}
    interior = {p for p, h in pts.items()
                if abs(p[0] - i) + abs(p[1] - j) < k - h}

    present = set()
    for (x, y) in interior:
        w0, w1 = spans[(x, y)]
        present.update(cell_edges(x, w0, w1))

    vertex_ids = {}
    for a, b in sorted(present):
        for v in (a, b):
            if v not in vertex_ids:
                vertex_ids[v] = len(vertex_ids)
    edge_ids = {}
    edge_list = []
    for a, b in sorted(present):
        edge_ids[(a, b)] = len(edge_list)
        edge_list.append((vertex_ids[a], vertex_ids[b]))

    faces = []
    if not interior:
        # apex on the initial surface: everything is frozen and the
        # partition function is the single monomial t_{i,j}
        fx, fy = (j, i) if swapped else (i, j)
        faces.append(Face(fx, fy, "square", 0, True, ()))
        return PineconeGraph(d, LatticePoint.of(*apex), [], [], faces)
    for (x, y), h in sorted(pts.items()):
        w0, w1 = spans[(x, y)]
        es = tuple(edge_ids[e] for e in cell_edges(x, w0, w1) if e in present)
        if not es:
            # fully frozen boundary face: never touches the active region
            continue
        kind = "hexagon" if w1 - w0 == 2 else "square"
        fx, fy = (y, x) if swapped else (x, y)
        faces.append(Face(fx, fy, kind, len(es), (x, y) not in interior, es))

    vertices = []
    for (c, w), n in sorted(vertex_ids.items(), key=lambda kv: kv[1]):
        color = "black" if (c + w) % 2 == 0 else "white"
        vertices.append((n, color, (c, w)))
    return PineconeGraph(d, LatticePoint.of(*apex), vertices, edge_list, faces)


# ---------------------------------------------------------------------------
# Gale-Robinson correspondence


@dataclass(frozen=True)
class GaleRobinsonParams:
    i: int
    j: int
    k: int
    l: int
    m: int
    n: int

    def __post_init__(self):
        if self.i + self.j != self.m or self.k + self.l != self.m:
            raise ValueError("need i+j = k+l = m")

    def as_tuple(self):
        return (self.i, self.j, self.k, self.l, self.m, self.n)


def gale_robinson(d: SlantDirection, apex) -> GaleRobinsonParams:
    d, (i, j, k), _ = _canonical(d, apex)
    r, s, t = d
    m = plane_index(d, (i, j, k))
    if d.all_odd():
        return GaleRobinsonParams((t + s) // 2, (t - s) // 2, (t + r) // 2,
                                  (t - r) // 2, t, m // 2 + t)
    return GaleRobinsonParams(t + s, t - s, t + r, t - r, 2 * t, m + 2 * t)


def gale_robinson_number(p: GaleRobinsonParams, index: int = None) -> int:
    """a(index) from the bilinear recurrence with all-ones initial data.

    index defaults to p.n.  The matching count of the graph with apex on
    plane index m equals a(n - m~): the parameter n of the
    correspondence includes one extra ring of frozen brick wall.
    """
    a = {}
    if index is None:
        index = p.n
    for n in range(index + 1):
        if n < p.m:
            a[n] = 1
        else:
            a[n] = (a[n - p.i] * a[n - p.j] + a[n - p.k] * a[n - p.l]) // a[n - p.m]
            if a[n] * a[n - p.m] != a[n - p.i] * a[n - p.j] + a[n - p.k] * a[n - p.l]:
                raise AssertionError("non-integral Gale-Robinson term")
    return a[index]


# ---------------------------------------------------------------------------
# matchings and the partition function


@dataclass
class Matching:
    edges: frozenset
    occupation: dict  # (x, y) -> N_{x,y}


def enumerate_matchings(g: PineconeGraph, cap: int = 60) -> list:
    n = len(g.vertices)
    if n > cap:
        raise ValueError(f"{n} vertices exceeds the enumeration cap {cap}")
    if n % 2 == 1:
        return []
    incident = [[] for _ in range(n)]
    for e, (a, b) in enumerate(g.edges):
        incident[a].append((e, b))
        incident[b].append((e, a))

    covered = bytearray(n)
    chosen = []
    results = []

    def available(v):
        return [(e, u) for e, u in incident[v] if not covered[u]]

    def rec(remaining):
        if remaining == 0:
            results.append(frozenset(chosen))
            return
        # pick the uncovered vertex with fewest available edges
        best, best_opts = -1, None
        for v in range(n):
            if covered[v]:
                continue
            opts = available(v)
            if best_opts is None or len(opts) < len(best_opts):
                best, best_opts = v, opts
                if len(opts) <= 1:
                    break
        if not best_opts:
            return
        covered[best] = 1
        for e, u in best_opts:
            covered[u] = 1
            chosen.append(e)
            rec(remaining - 2)
            chosen.pop()
            covered[u] = 0
        covered[best] = 0

    rec(n)
    out = []
    for edge_set in sorted(results, key=sorted):
        occ = {}
        for f in g.faces:
            occ[(f.x, f.y)] = sum(1 for e in f.edges if e in edge_set)
        out.append(Matching(edge_set, occ))
    return out


def face_exponent(face: Face, n_dimers: int) -> int:
    if face.boundary:
        return 1 - n_dimers
    return face.valency // 2 - 1 - n_dimers


def partition_function(g: PineconeGraph, weights="symbolic", cap: int = 60):
    """Sum over perfect matchings of the face-weight monomials.

    weights: "symbolic" for one variable per face, or a map
    (x,y) -> Rational.
    """
    matchings = enumerate_matchings(g, cap=cap)
    coords = sorted({(f.x, f.y) for f in g.faces})
    if weights == "symbolic":
        names = tuple(var_name(x, y) for (x, y) in coords)
        index = {c: n for n, c in enumerate(coords)}
        terms = {}
        for mt in matchings:
            exps = [0] * len(coords)
            for f in g.faces:
                exps[index[(f.x, f.y)]] += face_exponent(f, mt.occupation[(f.x, f.y)])
            key = tuple(exps)
            terms[key] = terms.get(key, Fraction(0)) + 1
        return SparsePoly(names, terms)
    total = Fraction(0)
    for mt in matchings:
        prod = Fraction(1)
        for f in g.faces:
            prod *= Fraction(weights[(f.x, f.y)]) ** face_exponent(f, mt.occupation[(f.x, f.y)])
        total += prod
    return total
