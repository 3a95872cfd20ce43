"""SVG rendering: implicit curves by sign-grid marching, density heatmaps.

Curves are drawn by evaluating the eliminant on a regular grid and
running marching squares on the sign pattern (saddle cells are split by
a center sample).  The marching resolution and the plot window are
stamped into the document metadata so a rendering is reproducible from
the file alone.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .poly import SparsePoly

# edge pairs per sign-pattern index; edges are (corner, corner) with
# corners 0=(x,y) 1=(x+1,y) 2=(x+1,y+1) 3=(x,y+1); index bit i set when
# corner i is positive.  Patterns 5 and 10 are saddles resolved by the
# center sample.
_MS_TABLE = {
    1: [((0, 1), (0, 3))],
    2: [((0, 1), (1, 2))],
    3: [((0, 3), (1, 2))],
    4: [((1, 2), (2, 3))],
    6: [((0, 1), (2, 3))],
    7: [((0, 3), (2, 3))],
    8: [((0, 3), (2, 3))],
    9: [((0, 1), (2, 3))],
    11: [((1, 2), (2, 3))],
    12: [((0, 3), (1, 2))],
    13: [((0, 1), (1, 2))],
    14: [((0, 1), (0, 3))],
    5: None,
    10: None,
}
_SADDLE = {
    (5, True): [((0, 1), (1, 2)), ((0, 3), (2, 3))],
    (5, False): [((0, 1), (0, 3)), ((1, 2), (2, 3))],
    (10, True): [((0, 1), (0, 3)), ((1, 2), (2, 3))],
    (10, False): [((0, 1), (1, 2)), ((0, 3), (2, 3))],
}


def eval_grid(poly: SparsePoly, xs, ys, subs=None) -> np.ndarray:
    """Values of poly(u, v) on the tensor grid, rows indexed by ys.

    Variables other than u, v must be covered by subs (exact rationals,
    substituted before the float evaluation).
    """
    if subs:
        poly = poly.subs({k: Fraction(v) for k, v in subs.items()})
    extra = [v for v in poly.vars if v not in ("u", "v")]
    live = set()
    for e, c in poly.terms.items():
        for name, exp in zip(poly.vars, e):
            if exp != 0:
                live.add(name)
    bad = [v for v in extra if v in live]
    if bad:
        raise ValueError(f"unsubstituted variables {bad} in grid evaluation")
    iu = poly.vars.index("u") if "u" in poly.vars else None
    iv = poly.vars.index("v") if "v" in poly.vars else None
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    out = np.zeros((len(ys), len(xs)))
    xpow = {}
    ypow = {}
    for e, c in poly.terms.items():
        a = e[iu] if iu is not None else 0
        b = e[iv] if iv is not None else 0
        if a not in xpow:
            xpow[a] = xs ** a
        if b not in ypow:
            ypow[b] = ys ** b
        out += float(c) * np.outer(ypow[b], xpow[a])
    return out


def marching_segments(values: np.ndarray, xs, ys, center_value=None):
    """Line segments of the zero set from a value grid.

    center_value(x, y) resolves saddle cells; without it saddles split
    along the average-of-corners sign.
    """
    segs = []
    ny, nx = values.shape
    for gy in range(ny - 1):
        for gx in range(nx - 1):
            vals = (values[gy, gx], values[gy, gx + 1],
                    values[gy + 1, gx + 1], values[gy + 1, gx])
            idx = sum(1 << i for i, v in enumerate(vals) if v > 0)
            if idx in (0, 15):
                continue
            pts = ((xs[gx], ys[gy]), (xs[gx + 1], ys[gy]),
                   (xs[gx + 1], ys[gy + 1]), (xs[gx], ys[gy + 1]))
            edges = _MS_TABLE[idx]
            if edges is None:
                cx = (xs[gx] + xs[gx + 1]) / 2
                cy = (ys[gy] + ys[gy + 1]) / 2
                c = center_value(cx, cy) if center_value is not None \
                    else sum(vals) / 4
                edges = _SADDLE[(idx, c > 0)]
            for (a0, a1), (b0, b1) in edges:
                segs.append((_edge_zero(pts[a0], pts[a1], vals[a0], vals[a1]),
                             _edge_zero(pts[b0], pts[b1], vals[b0], vals[b1])))
    return segs


def _edge_zero(p0, p1, v0, v1):
    t = 0.5 if v0 == v1 else v0 / (v0 - v1)
    t = min(max(t, 0.0), 1.0)
    return (p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1]))


# ---------------------------------------------------------------------------
# documents


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def _document(body: list, window, size: int, meta: dict) -> str:
    x0, x1, y0, y1 = (float(w) for w in window)
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{_fmt(x0)} {_fmt(-y1)} {_fmt(x1 - x0)} {_fmt(y1 - y0)}">',
        "<metadata>" + json.dumps(meta, sort_keys=True) + "</metadata>",
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def _polyline(points, stroke, width):
    pts = " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in points)
    return (f'<polyline points="{pts}" fill="none" stroke="{stroke}" '
            f'stroke-width="{_fmt(width)}" />')


def domain_outline(segments):
    """Closed polygon through the endpoints of the four domain segments."""
    corners = set()
    for sg in segments:
        for u in (sg.u_min, sg.u_max):
            corners.add((Fraction(u), sg.slope * u + sg.intercept))
    # order corners by angle around the centroid
    cx = sum(c[0] for c in corners) / len(corners)
    cy = sum(c[1] for c in corners) / len(corners)
    import math
    return sorted(corners, key=lambda c: math.atan2(c[1] - cy, c[0] - cx))


def render_curve_svg(eliminant: SparsePoly, segments=None, subs=None,
                     window=None, resolution: int = 800, size: int = 800,
                     meta=None) -> str:
    """Implicit plot of the eliminant with the scaled-domain outline.

    A zero polynomial gives a blank canvas with the domain only.
    """
    if window is None:
        if segments:
            corners = domain_outline(segments)
            us = [float(c[0]) for c in corners]
            vs = [float(c[1]) for c in corners]
            pad = 0.15 * max(max(us) - min(us), max(vs) - min(vs))
            window = (min(us) - pad, max(us) + pad, min(vs) - pad, max(vs) + pad)
        else:
            window = (-1.5, 1.5, -1.5, 1.5)
    x0, x1, y0, y1 = (float(w) for w in window)
    body = []
    stroke_w = (x1 - x0) / size * 2
    if segments:
        corners = domain_outline(segments)
        pts = [(float(u), float(v)) for u, v in corners]
        body.append(_polyline(pts + pts[:1], "#888888", stroke_w))
    meta = dict(meta or {})
    meta.update({"resolution": resolution, "window": [x0, x1, y0, y1]})
    if eliminant is None or eliminant.is_zero():
        return _document(body, window, size, meta)
    xs = np.linspace(x0, x1, resolution + 1)
    ys = np.linspace(y0, y1, resolution + 1)
    values = eval_grid(eliminant, xs, ys, subs=subs)
    for a, b in marching_segments(values, xs, ys):
        body.append(_polyline([a, b], "#003366", stroke_w))
    return _document(body, window, size, meta)


def render_profile_svg(rows, size: int = 800, meta=None) -> str:
    """Shaded heatmap of profile rows (u, v, rho).

    Lighter shades are smaller |rho|; cells with rho exactly 0 are
    drawn light blue (the frozen region).
    """
    rows = sorted((float(u), float(v), float(r)) for u, v, r in rows)
    if not rows:
        raise ValueError("empty profile")
    us = sorted({u for u, _, _ in rows})
    du = min((b - a for a, b in zip(us, us[1:])), default=1.0) or 1.0
    umin, umax = min(u for u, _, _ in rows), max(u for u, _, _ in rows)
    vmin, vmax = min(v for _, v, _ in rows), max(v for _, v, _ in rows)
    window = (umin - du, umax + du, vmin - du, vmax + du)
    top = max(abs(r) for _, _, r in rows) or 1.0
    body = []
    for u, v, r in rows:
        if r == 0.0:
            color = "#cce6ff"
        else:
            shade = int(round(235 * (1 - min(abs(r) / top, 1.0))))
            color = f"#{shade:02x}{shade:02x}{shade:02x}"
        body.append(f'<rect x="{_fmt(u - du)}" y="{_fmt(-v - du)}" '
                    f'width="{_fmt(2 * du)}" height="{_fmt(2 * du)}" '
                    f'fill="{color}" />')
    meta = dict(meta or {})
    meta.update({"cells": len(rows), "window": list(window)})
    return _document(body, window, size, meta)
