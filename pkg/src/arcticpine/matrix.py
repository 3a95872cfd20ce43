"""Dense matrices over SparsePoly or EpsSeries, exact determinants,
and tensor-grid polynomial interpolation.

Determinant strategies:
 - SparsePoly entries: fraction-free Bareiss elimination (Laurent entries
   are cleared row-by-row with a tracked monomial prefactor).
 - EpsSeries entries over rationals: the series are polynomials in eps
   modulo eps^(order+1), so the determinant is computed exactly by Bareiss
   over Q[eps] and truncated.
 - EpsSeries entries with free variables: evaluation on a rational tensor
   grid followed by interpolation of each eps coefficient.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import SparsePoly, align_to, _merge_vars
from .series import EpsSeries


class InterpolationFailure(ValueError):
    pass


class PolyMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        entries = [list(row) for row in entries]
        if not entries or not entries[0]:
            raise ValueError("empty matrix")
        ncols = len(entries[0])
        if any(len(row) != ncols for row in entries):
            raise ValueError("ragged matrix")
        self.rows = len(entries)
        self.cols = ncols
        self.entries = entries

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def is_square(self):
        return self.rows == self.cols

    def det(self, degree_bounds=None):
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        first = self.entries[0][0]
        if isinstance(first, EpsSeries):
            vs = ()
            for row in self.entries:
                for e in row:
                    vs = _merge_vars(vs, e.variables())
            if not vs:
                return _det_series_rational(self.entries)
            return det_series_interpolated(self, vs, degree_bounds or {})
        return _det_bareiss(self.entries)


def _det_bareiss(entries):
    """Fraction-free Bareiss over SparsePoly entries (Laurent allowed)."""
    n = len(entries)
    vs = ()
    for row in entries:
        for e in row:
            vs = _merge_vars(vs, e.vars)
    m = [[align_to(e, vs) for e in row] for row in entries]
    # clear Laurent denominators row by row; det picks up the inverse monomial
    pref_exp = [0] * len(vs)
    for row in m:
        mins = [0] * len(vs)
        for e in row:
            for exps in e.terms:
                for i, x in enumerate(exps):
                    if x < mins[i]:
                        mins[i] = x
        if any(x < 0 for x in mins):
            mono = SparsePoly.monomial(vs, tuple(-x for x in mins))
            for j in range(len(row)):
                row[j] = row[j] * mono
            for i, x in enumerate(mins):
                pref_exp[i] -= x
    sign = 1
    prev = SparsePoly.constant(vs, 1)
    zero = SparsePoly(vs)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return zero
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            cik = row_i[k]
            for j in range(k + 1, n):
                elt = pivot * row_i[j] - cik * row_k[j]
                if k > 0:
                    elt = elt.divexact(prev)
                row_i[j] = elt
            row_i[k] = zero
        prev = pivot
    det = m[n - 1][n - 1] * sign
    if any(pref_exp):
        det = det * SparsePoly.monomial(vs, tuple(-x for x in pref_exp))
    return det


def det_packed(entries):
    """Bareiss determinant over bit-packed integer Laurent polynomials.

    Rows are scaled to integer coefficients and their exponent ranges
    centered around zero (so the 8-bit packed fields cover all
    intermediate products); the tracked scalar and monomial prefactors
    are divided back out at the end.  Falls back on the caller to use
    the generic path when the exponent budget cannot be met.
    """
    from math import lcm
    from .packed import PackedLaurent
    n = len(entries)
    vs = ()
    for row in entries:
        for e in row:
            vs = _merge_vars(vs, e.vars)
    if not vs:
        vs = ("_",)
    nv = len(vs)
    scale = Fraction(1)
    pref = [0] * nv
    mat = []
    halfwidth = [0] * nv
    for row in entries:
        row = [align_to(e, vs) for e in row]
        lo = [0] * nv
        hi = [0] * nv
        den = 1
        for e in row:
            for exps, c in e.terms.items():
                den = lcm(den, c.denominator)
                for i, x in enumerate(exps):
                    if x < lo[i]:
                        lo[i] = x
                    if x > hi[i]:
                        hi[i] = x
        mid = [(a + b) // 2 for a, b in zip(lo, hi)]
        for i in range(nv):
            halfwidth[i] = max(halfwidth[i], hi[i] - mid[i], mid[i] - lo[i])
        mono = SparsePoly.monomial(vs, tuple(-m for m in mid), den)
        scale *= den
        for i, m in enumerate(mid):
            pref[i] -= m
        mat.append([PackedLaurent.from_sparse(e * mono) for e in row])
    if any(2 * (n + 1) * h >= 127 for h in halfwidth):
        raise OverflowError("exponent range too large for packed determinant")
    sign = 1
    zero = PackedLaurent(vs)
    prev = None
    for k in range(n - 1):
        if mat[k][k].is_zero():
            for i in range(k + 1, n):
                if not mat[i][k].is_zero():
                    mat[k], mat[i] = mat[i], mat[k]
                    sign = -sign
                    break
            else:
                return SparsePoly(vs)
        pivot = mat[k][k]
        for i in range(k + 1, n):
            row_i = mat[i]
            row_k = mat[k]
            cik = row_i[k]
            for j in range(k + 1, n):
                elt = pivot * row_i[j] - cik * row_k[j]
                if prev is not None:
                    elt = elt.divexact(prev)
                row_i[j] = elt
            row_i[k] = zero
        prev = pivot
    det = mat[n - 1][n - 1].to_sparse() * sign
    det = det * (Fraction(1) / scale)
    if any(pref):
        det = det * SparsePoly.monomial(vs, tuple(-x for x in pref))
    return det


def _series_to_epspoly(s: EpsSeries) -> SparsePoly:
    terms = {}
    for n, c in enumerate(s.coeffs):
        if c.is_zero():
            continue
        if not c.is_constant():
            raise ValueError("series coefficient is not rational")
        terms[(n,)] = c.constant_value()
    return SparsePoly(("eps",), terms)


def _det_series_rational(entries) -> EpsSeries:
    order = entries[0][0].order
    mat = [[_series_to_epspoly(e) for e in row] for row in entries]
    det = _det_bareiss(mat)
    coeffs = [SparsePoly.constant((), det.coeff((n,))) for n in range(order + 1)]
    return EpsSeries(order, coeffs)


def det_series_interpolated(mat: PolyMatrix, variables, degree_bounds) -> EpsSeries:
    """det of an EpsSeries matrix with free variables via grid evaluation.

    degree_bounds: map variable -> degree bound for every eps coefficient
    of the determinant; missing variables get a bound derived by doubling
    until an extra verification point agrees.
    """
    bounds = {v: degree_bounds.get(v, 2) for v in variables}
    while True:
        try:
            return _det_series_interp_once(mat, tuple(variables), bounds)
        except InterpolationFailure:
            grown = False
            for v in bounds:
                if bounds[v] < 64:
                    bounds[v] *= 2
                    grown = True
            if not grown:
                raise


def _eval_series_matrix(mat: PolyMatrix, assignment):
    rows = []
    for row in mat.entries:
        out = []
        for e in row:
            out.append(EpsSeries(e.order, [c.subs({k: v for k, v in assignment.items()
                                                   if k in c.vars}) for c in e.coeffs]))
        rows.append(out)
    return rows


def _det_series_interp_once(mat, variables, bounds) -> EpsSeries:
    grids = {v: [Fraction(i) for i in range(bounds[v] + 2)] for v in variables}
    # the final grid point of each variable is a verification point
    order = mat.entries[0][0].order
    points = [()]
    for v in variables:
        points = [p + (a,) for p in points for a in grids[v]]
    values = {}
    for p in points:
        assignment = dict(zip(variables, p))
        d = _det_series_rational(_eval_series_matrix(mat, assignment))
        values[p] = d
    coeff_polys = []
    for n in range(order + 1):
        vals = {p: values[p].coeffs[n].constant_value() for p in points}
        interp_grids = [grids[v][: bounds[v] + 1] for v in variables]
        poly = _interp_tensor(variables, interp_grids, vals)
        # verify on the points outside the interpolation subgrid
        for p, val in vals.items():
            if poly.subs(dict(zip(variables, p))).constant_value() != val:
                raise InterpolationFailure(f"degree bounds too small at eps^{n}")
        coeff_polys.append(poly)
    return EpsSeries(order, coeff_polys)


def _interp_tensor(variables, grids, values):
    """Lagrange interpolation over a full tensor grid.

    values: map full-point tuple -> Fraction.
    """
    variables = tuple(variables)
    if not variables:
        return SparsePoly.constant((), values[()])
    v0 = variables[0]
    rest = variables[1:]
    slices = []
    for a in grids[0]:
        sub = {p[1:]: val for p, val in values.items() if p[0] == a}
        slices.append(_interp_tensor(rest, grids[1:], sub))
    # univariate Lagrange in v0 with polynomial values
    x = SparsePoly.var((v0,), v0)
    result = SparsePoly(variables)
    for i, a in enumerate(grids[0]):
        basis = SparsePoly.constant((v0,), 1)
        denom = Fraction(1)
        for j, b in enumerate(grids[0]):
            if j == i:
                continue
            basis = basis * (x - b)
            denom *= (a - b)
        result = result + slices[i] * basis * (Fraction(1) / denom)
    return align_to(result, variables) if result.vars != variables else result


def interpolate(evaluations, degree_bounds, variables):
    """Spec-shaped interpolation: list of (point, value) pairs on a tensor grid.

    degree_bounds: per-variable degree bounds (dict or sequence following
    `variables`). Points beyond the (bound+1)-subgrid act as verification
    points; a mismatch raises InterpolationFailure.
    """
    variables = tuple(variables)
    if not isinstance(degree_bounds, dict):
        degree_bounds = dict(zip(variables, degree_bounds))
    values = {tuple(Fraction(c) for c in p): Fraction(v) for p, v in evaluations}
    coords = [sorted({p[i] for p in values}) for i in range(len(variables))]
    grids = []
    for i, v in enumerate(variables):
        need = degree_bounds[v] + 1
        if len(coords[i]) < need:
            raise InterpolationFailure(f"not enough grid points for {v}")
        grids.append(coords[i][:need])
    sub = {}
    for p in values:
        if all(p[i] in grids[i] for i in range(len(p))):
            sub[p] = values[p]
    expected = 1
    for g in grids:
        expected *= len(g)
    if len(sub) != expected:
        raise InterpolationFailure("points do not form a tensor grid")
    poly = _interp_tensor(variables, grids, sub)
    for p, val in values.items():
        if poly.subs(dict(zip(variables, p))).constant_value() != val:
            raise InterpolationFailure("inconsistent evaluations for the given bounds")
    return poly
