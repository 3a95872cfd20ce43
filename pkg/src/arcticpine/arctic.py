"""Arctic curves from the conical rescaling of density denominators.

Substituting x = e^(eps X), y = e^(eps Y), z = e^(-eps (u X + v Y))
into a density denominator (after the slanted re-reading
x -> z^(r~/t~)/x, y -> z^(s~/t~)/y) and expanding in eps gives
Delta = eps^theta (H + O(eps)); the leading coefficient H is a
homogeneous polynomial in (X, Y) whose double roots trace the arctic
curve.  Eliminating X between H and dH/dX (square-free reduction
first, then a subresultant remainder sequence or pointwise resultants
plus interpolation) yields the curve polynomial P(u, v).

The expansion itself uses the moment method: for a term c x^a y^b z^g
the substituted exponential is exp(eps l) with
l = -a X - b Y - (m/t~)(u X + v Y), m = a r~ + b s~ + g t~, so the
eps^n coefficient of Delta is a weighted sum of the integer moments
sum_terms c (-a)^p (-b)^q (-m)^rho over p + q + rho = n.  Fractional
powers of z are never materialized; they only appear as exact rational
multiples inside exponential arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from math import gcd as _igcd

from .lattice import SlantDirection
from .matrix import InterpolationFailure, interpolate
from .modular import (balanced, crt_pair, det_mod, newton_interp_mod,
                      prime_stream, uni_gcd_mod, uni_squarefree_mod)
from .poly import SparsePoly, align_to, _merge_vars
from .prs import (content_and_primitive, squarefree_primitive,
                  subresultant_prs, sylvester_resultant)
from .series import EpsSeries

XYUV = ("X", "Y", "u", "v")


@dataclass(frozen=True)
class ViewDirection:
    rt: int
    st: int
    tt: int

    def __post_init__(self):
        # same constraints as a slant direction
        SlantDirection(self.rt, self.st, self.tt)

    @staticmethod
    def of(view) -> "ViewDirection":
        if isinstance(view, ViewDirection):
            return view
        if isinstance(view, SlantDirection):
            return ViewDirection(view.r, view.s, view.t)
        return ViewDirection(*view)

    def __iter__(self):
        return iter((self.rt, self.st, self.tt))


@dataclass
class ScalingExpansion:
    theta: int
    H: SparsePoly
    series: EpsSeries
    conjecture_match: bool | None = None


@dataclass
class DomainSegment:
    slope: Fraction
    intercept: Fraction
    u_min: Fraction
    u_max: Fraction

    def v(self, u) -> Fraction:
        return self.slope * Fraction(u) + self.intercept

    def contains(self, u, v) -> bool:
        u, v = Fraction(u), Fraction(v)
        return self.u_min <= u <= self.u_max and v == self.v(u)

    def line(self) -> SparsePoly:
        """The segment's supporting line as an integer linear polynomial."""
        p = (SparsePoly.var(("u", "v"), "v") - self.slope * SparsePoly.var(("u", "v"), "u")
             - SparsePoly.constant(("u", "v"), self.intercept))
        return p.primitive_scalar()


@dataclass
class ArcticCurve:
    eliminant: SparsePoly
    known_linear_factors: tuple = ()
    domain_segments: tuple = ()
    view: ViewDirection | None = None
    parameters: dict = field(default_factory=dict)

    def full_eliminant(self) -> SparsePoly:
        out = self.eliminant
        for f in self.known_linear_factors:
            out = out * f
        return out


def _sign_normalized(p: SparsePoly) -> SparsePoly:
    p = p.primitive_scalar()
    if not p.is_zero() and p.sorted_terms()[0][1] < 0:
        p = p * -1
    return p


# ---------------------------------------------------------------------------
# conical rescaling


def theta_conjecture(d) -> int:
    """Conjectured vanishing order 2(t + 1 + (r mod 2)) for 2x2-periodic
    (r, r, t) initial data."""
    r, s, t = d
    if r != s:
        raise ValueError("the vanishing-order formula covers r = s")
    return 2 * (t + 1 + r % 2)


def rescale_delta(D: SparsePoly, view, order: int) -> EpsSeries:
    """eps-expansion of D(z^(r~/t~)/x, z^(s~/t~)/y, z) under
    x = e^(eps X), y = e^(eps Y), z = e^(-eps (u X + v Y)).

    Coefficients of D may involve parameter variables (A, sigma, tau);
    they are carried through into the series coefficients.
    """
    view = ViewDirection.of(view)
    rt, st, tt = view
    if order < 0:
        raise ValueError("order must be non-negative")
    ix = D.vars.index("x") if "x" in D.vars else None
    iy = D.vars.index("y") if "y" in D.vars else None
    iz = D.vars.index("z") if "z" in D.vars else None
    pidx = [i for i, v in enumerate(D.vars) if v not in ("x", "y", "z")]
    pvars = tuple(D.vars[i] for i in pidx)

    terms = []
    for e, c in D.terms.items():
        a = e[ix] if ix is not None else 0
        b = e[iy] if iy is not None else 0
        g = e[iz] if iz is not None else 0
        m = a * rt + b * st + g * tt
        pe = tuple(e[i] for i in pidx)
        terms.append((a, b, m, pe, c))

    # moments S[p, q, rho] = sum over terms of c (-a)^p (-b)^q (-m)^rho,
    # kept separately per parameter monomial
    moments = {}
    for a, b, m, pe, c in terms:
        pa = [1]
        pb = [1]
        pm = [1]
        for _ in range(order):
            pa.append(pa[-1] * -a)
            pb.append(pb[-1] * -b)
            pm.append(pm[-1] * -m)
        for p in range(order + 1):
            spa = c * pa[p]
            for q in range(order + 1 - p):
                spq = spa * pb[q]
                for rho in range(order + 1 - p - q):
                    key = (p, q, rho, pe)
                    moments[key] = moments.get(key, 0) + spq * pm[rho]

    out_vars = XYUV + pvars
    npad = len(pvars)
    coeffs = []
    for n in range(order + 1):
        acc = {}
        for (p, q, rho, pe), S in moments.items():
            if p + q + rho != n or S == 0:
                continue
            base = Fraction(1, factorial(p) * factorial(q) * factorial(rho)
                            * tt ** rho)
            for i in range(rho + 1):
                coeff = S * base * comb(rho, i)
                key = (p + i, q + rho - i, i, rho - i) + pe
                acc[key] = acc.get(key, Fraction(0)) + coeff
        coeffs.append(SparsePoly(out_vars if npad else XYUV,
                                 {k: v for k, v in acc.items() if v != 0}))
    return EpsSeries(order, coeffs)


def leading_expansion(series: EpsSeries, direction=None) -> ScalingExpansion:
    """First nonzero eps-coefficient of the rescaled denominator.

    Every lower coefficient must vanish identically as a polynomial and
    the leading one must be homogeneous in (X, Y) of degree theta.  When
    a 2x2-periodic (r, r, t) direction is supplied, theta is compared to
    the conjectured value and a mismatch recorded (not fatal).
    """
    theta = series.valuation()
    if theta is None:
        raise ValueError("rescaled series vanishes to the truncation order")
    H = series.coeffs[theta]
    iX = H.vars.index("X")
    iY = H.vars.index("Y")
    for e in H.terms:
        if e[iX] + e[iY] != theta:
            raise AssertionError("leading coefficient is not homogeneous")
    match = None
    if direction is not None:
        r, s, t = direction
        if r == s:
            match = theta == theta_conjecture(direction)
    return ScalingExpansion(theta, _sign_normalized(H), series, match)


# ---------------------------------------------------------------------------
# elimination


def _leading_H(H):
    return H.H if isinstance(H, ScalingExpansion) else H


def eliminate(H, params=None, view=None, keep_spurious: bool = False,
              method: str = "auto") -> ArcticCurve:
    """Arctic curve P(u, v) by eliminating X between H and dH/dX.

    H (a ScalingExpansion or its leading polynomial) is dehomogenized by
    Y -> 1, made square-free and primitive in X (repeated factors would
    kill the resultant identically), and eliminated: small X-degrees run
    the subresultant remainder sequence down to a degree-0 remainder;
    larger ones use pointwise univariate resultants on a rational (u, v)
    grid with verified tensor interpolation.  Known linear factors (the
    supporting lines of the scaled-domain segments) are split off by
    trial exact division unless keep_spurious is set; no multivariate
    factorization is attempted.
    """
    H = _leading_H(H)
    f = H.subs({"Y": 1}) if "Y" in H.vars else H
    if f.is_zero():
        raise ValueError("H vanishes after setting Y = 1")
    pv = tuple(x for x in ("u", "v") if x in f.vars)
    if f.degree("X") > 4 and pv and not (set(f.vars) - {"X", "u", "v"}):
        f = _interp_squarefree(f, "X", pv)
    else:
        f = squarefree_primitive(f, "X")
    dX = f.degree("X")
    if dX == 0:
        elim = f
    else:
        fp = f.derivative("X")
        if method == "prs" or (method == "auto" and dX <= 4):
            seq = subresultant_prs(f, fp, "X")
            last = seq[-1]
            if last.degree("X") != 0:
                raise ArithmeticError("remainder sequence stalled above degree 0")
            elim = last
        elif method in ("auto", "resultant"):
            elim = _interp_resultant(f, fp)
        else:
            raise ValueError(f"unknown elimination method {method!r}")
    if "X" in elim.vars:
        elim = elim.subs({"X": 0})
    if (not elim.is_constant() and not (set(elim.vars) - {"u", "v"})
            and elim.degree("u") > 0 and elim.degree("v") > 0
            and max(elim.degree("u"), elim.degree("v")) > 8):
        elim = _interp_squarefree(elim, "u", ("v",))
    else:
        for var in ("u", "v"):
            if var in elim.vars and not elim.is_constant() and elim.degree(var) > 0:
                elim = squarefree_primitive(elim, var)
    elim = _sign_normalized(elim)
    segments = scaled_domain(view) if view is not None else ()
    linears = []
    if not keep_spurious and segments:
        for seg in segments:
            line = align_to(seg.line(), elim.vars)
            while True:
                q = elim.try_divexact(line)
                if q is None:
                    break
                elim = q
                linears.append(seg.line())
        elim = _sign_normalized(elim)
    return ArcticCurve(elim, tuple(linears), tuple(segments),
                       ViewDirection.of(view) if view is not None else None,
                       dict(params or {}))


def _uni_resultant(a, b):
    """Resultant of two univariate polynomials given as coefficient lists
    (ascending powers, Fractions), by fraction-free elimination of the
    Sylvester matrix."""
    da = len(a) - 1
    db = len(b) - 1
    n = da + db
    if n == 0:
        return Fraction(1)
    rows = []
    for i in range(db):
        rows.append([Fraction(0)] * i + a[::-1] + [Fraction(0)] * (db - 1 - i))
    for i in range(da):
        rows.append([Fraction(0)] * i + b[::-1] + [Fraction(0)] * (da - 1 - i))
    sign = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        piv = rows[k][k]
        for i in range(k + 1, n):
            c = rows[i][k]
            if c == 0:
                continue
            ratio = c / piv
            ri = rows[i]
            rk = rows[k]
            for j in range(k + 1, n):
                ri[j] -= ratio * rk[j]
            ri[k] = Fraction(0)
    det = Fraction(sign)
    for k in range(n):
        det *= rows[k][k]
    return det


def _integer_terms(p: SparsePoly, order):
    """Scale p to integer coefficients; exponent keys follow `order`
    (missing variables contribute exponent 0).  Returns (scale, terms)."""
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // _igcd(den, c.denominator)
    idx = [p.vars.index(v) if v in p.vars else None for v in order]
    out = {}
    for e, c in p.terms.items():
        key = tuple(e[i] if i is not None else 0 for i in idx)
        out[key] = out.get(key, 0) + int(c * den)
    return den, {k: c for k, c in out.items() if c}


def _pw(cache, x, e, p):
    key = (x, e)
    if key not in cache:
        cache[key] = pow(x, e, p)
    return cache[key]


def _sylv_det_mod(a, b, p):
    """det of the Sylvester matrix of the (nominal-degree) coefficient
    lists a, b over GF(p)."""
    da = len(a) - 1
    db = len(b) - 1
    n = da + db
    if n == 0:
        return 1 % p
    arev = a[::-1]
    brev = b[::-1]
    rows = []
    for i in range(db):
        rows.append([0] * i + arev + [0] * (db - 1 - i))
    for i in range(da):
        rows.append([0] * i + brev + [0] * (da - 1 - i))
    return det_mod(rows, p)


def _tensor_interp_mod(unodes, vnodes, V, p):
    """Coefficients {(ku, kv): c} of the polynomial through the grid
    values V[iu][iv] over GF(p)."""
    rows = [newton_interp_mod(vnodes, V[iu], p) for iu in range(len(unodes))]
    nv = max((len(r) for r in rows), default=0)
    out = {}
    for kv in range(nv):
        col = [rows[iu][kv] if kv < len(rows[iu]) else 0
               for iu in range(len(unodes))]
        for ku, c in enumerate(newton_interp_mod(unodes, col, p)):
            if c:
                out[(ku, kv)] = c
    return out


def _eval_dict_mod(d, pu, pv, p, cache=None):
    if cache is None:
        cache = {}
    acc = 0
    for (ku, kv), c in d.items():
        acc += c * _pw(cache, pu, ku, p) * _pw(cache, pv, kv, p)
    return acc % p


def _crt_lift(acc, mod, cand, p):
    keys = set(acc) | set(cand)
    new = {k: crt_pair(acc.get(k, 0) % mod, mod, cand.get(k, 0) % p, p)
           for k in keys}
    m = mod * p
    lift = {k: balanced(v, m) for k, v in new.items()}
    return new, m, {k: v for k, v in lift.items() if v}


def _res_grid_mod(ft, gt, da, db, unodes, vnodes, p):
    """Sylvester determinants of the integer term dicts ft, gt (keys
    (eX, eu, ev)) on the integer grid unodes x vnodes, over GF(p)."""
    fmod = {k: c % p for k, c in ft.items()}
    gmod = {k: c % p for k, c in gt.items()}
    nv = len(vnodes)
    cache = {}
    # partial sums over v per (eX, eu): independent of the u node
    def vsums(tmod):
        out = {}
        for (ex, eu, ev), c in tmod.items():
            row = out.setdefault((ex, eu), [0] * nv)
            for iv, pv in enumerate(vnodes):
                row[iv] = (row[iv] + c * _pw(cache, pv, ev, p)) % p
        return out
    fsum = vsums(fmod)
    gsum = vsums(gmod)
    V = []
    for pu in unodes:
        fu = {}
        for (ex, eu), row in fsum.items():
            w = _pw(cache, pu, eu, p)
            tgt = fu.setdefault(ex, [0] * nv)
            for iv in range(nv):
                tgt[iv] = (tgt[iv] + w * row[iv]) % p
        gu = {}
        for (ex, eu), row in gsum.items():
            w = _pw(cache, pu, eu, p)
            tgt = gu.setdefault(ex, [0] * nv)
            for iv in range(nv):
                tgt[iv] = (tgt[iv] + w * row[iv]) % p
        outrow = []
        for iv in range(nv):
            a = [fu.get(ex, [0] * nv)[iv] for ex in range(da + 1)]
            b = [gu.get(ex, [0] * nv)[iv] for ex in range(db + 1)]
            outrow.append(_sylv_det_mod(a, b, p))
        V.append(outrow)
    return V


def _interp_resultant(f: SparsePoly, fp: SparsePoly) -> SparsePoly:
    """Res_X(f, fp) by pointwise Sylvester determinants over prime
    fields, tensor interpolation, and Chinese-remainder lifting.

    The lift stops once adding a prime leaves the balanced integer
    coefficients unchanged and is then verified against exact rational
    resultants at held-out sample points.
    """
    if any(v not in ("X", "u", "v") for v in f.vars):
        raise ValueError("pointwise resultants need rational parameters")
    da = f.degree("X")
    db = fp.degree("X")
    den_f, ft = _integer_terms(f, ("X", "u", "v"))
    den_g, gt = _integer_terms(fp, ("X", "u", "v"))
    gen = prime_stream()
    p0 = next(gen)
    bound = 16
    while True:
        unodes = list(range(bound + 1))
        cand = _tensor_interp_mod(unodes, unodes,
                                  _res_grid_mod(ft, gt, da, db, unodes, unodes, p0),
                                  p0)
        ok = True
        for pu, pv in ((bound + 3, bound + 7), (bound + 11, bound + 5)):
            direct = _res_grid_mod(ft, gt, da, db, [pu], [pv], p0)[0][0]
            if _eval_dict_mod(cand, pu, pv, p0) != direct:
                ok = False
                break
        if ok:
            break
        bound *= 2
        if bound > 1024:
            raise InterpolationFailure("resultant degree discovery failed")
    du = max((k[0] for k in cand), default=0)
    dv = max((k[1] for k in cand), default=0)
    acc, mod = dict(cand), p0
    lift = {k: balanced(v, mod) for k, v in acc.items() if balanced(v, mod)}
    for p in gen:
        unodes = list(range(du + 1))
        vnodes = list(range(dv + 1))
        cand = _tensor_interp_mod(unodes, vnodes,
                                  _res_grid_mod(ft, gt, da, db, unodes, vnodes, p),
                                  p)
        direct = _res_grid_mod(ft, gt, da, db, [du + 3], [dv + 5], p)[0][0]
        if _eval_dict_mod(cand, du + 3, dv + 5, p) != direct:
            raise InterpolationFailure("resultant degree bound unstable")
        acc, mod, new_lift = _crt_lift(acc, mod, cand, p)
        if new_lift == lift:
            break
        lift = new_lift
        if mod.bit_length() > 60 * 80:
            raise InterpolationFailure("resultant lift did not stabilize")
    R = SparsePoly(("u", "v"), {k: Fraction(c) for k, c in lift.items()})
    _verify_resultant(f, fp, R, Fraction(den_f) ** db * Fraction(den_g) ** da)
    return R


def _verify_resultant(f, fp, R, scale):
    fc = [f.coeff_of("X", i) for i in range(f.degree("X") + 1)]
    gc = [fp.coeff_of("X", i) for i in range(fp.degree("X") + 1)]
    for pu, pv in ((Fraction(3, 7), Fraction(2, 5)),
                   (Fraction(-5, 9), Fraction(4, 11))):
        a = [c.subs({"u": pu, "v": pv}).constant_value() for c in fc]
        b = [c.subs({"u": pu, "v": pv}).constant_value() for c in gc]
        exact = _uni_resultant(a, b) * scale
        got = R.subs({"u": pu, "v": pv}).constant_value()
        if got != exact:
            raise InterpolationFailure("modular resultant failed exact check")


# ---------------------------------------------------------------------------
# square-free reduction by slice interpolation


class _BadPrime(Exception):
    pass


def _sq_slice(tmod, dmain, node, p, cache):
    a = [0] * (dmain + 1)
    for key, c in tmod.items():
        w = c
        for x, e in zip(node, key[1:]):
            if e:
                w = w * _pw(cache, x, e, p) % p
        a[key[0]] = (a[key[0]] + w) % p
    return a


def _sqfree_prime_1d(terms, dmain, p, need, dmax_known=None):
    """T = lc * (monic square-free part) on valid 1-parameter slices,
    interpolated over GF(p).  Returns ({(k, ev): c}, dmax) or None when
    `need` nodes were not enough (held-out slice mismatch)."""
    tmod = {k: c % p for k, c in terms.items()}
    cache = {}
    dmax = dmax_known
    valid = []
    v0 = 0
    while len(valid) < need + 1:
        if v0 > 16 * (need + 16):
            raise InterpolationFailure("not enough usable square-free slices")
        node = (v0,)
        v0 += 1
        a = _sq_slice(tmod, dmain, node, p, cache)
        if a[-1] == 0:
            continue
        sq = uni_squarefree_mod(a, p)
        dsq = len(sq) - 1
        if dmax is None or dsq > dmax:
            if dmax_known is not None:
                raise _BadPrime
            dmax = dsq
            valid = [x for x in valid if len(x[2]) - 1 == dmax]
        if dsq == dmax:
            valid.append((node, a[-1], sq))
    check = valid.pop()
    nodes = [x[0][0] for x in valid]
    out = {}
    ok = True
    ccache = {}
    for k in range(dmax + 1):
        ys = [lc * sq[k] % p for (_, lc, sq) in valid]
        cs = newton_interp_mod(nodes, ys, p)
        got = sum(c * _pw(ccache, check[0][0], e, p) for e, c in enumerate(cs)) % p
        if got != check[1] * check[2][k] % p:
            ok = False
            break
        for e, c in enumerate(cs):
            if c:
                out[(k, e)] = c
    return (out, dmax) if ok else None


def _sqfree_prime_2d(terms, dmain, p, need, dmax_known=None):
    """Two-parameter version of _sqfree_prime_1d on a clean rectangular
    node grid (rows with any degenerate slice are skipped)."""
    tmod = {k: c % p for k, c in terms.items()}
    cache = {}
    dmax = dmax_known
    bad_cols = set()
    while True:
        vnodes = []
        x = 0
        while len(vnodes) < need + 1:
            if x not in bad_cols:
                vnodes.append(x)
            x += 1
        rows = []
        col_fail = {}
        u0 = 0
        restart = False
        while len(rows) < need + 2 and not restart:
            if u0 > 16 * (need + 16):
                raise InterpolationFailure("not enough usable square-free slices")
            row = []
            for v0 in vnodes:
                a = _sq_slice(tmod, dmain, (u0, v0), p, cache)
                sq = uni_squarefree_mod(a, p) if a[-1] else None
                dsq = len(sq) - 1 if sq is not None else None
                if sq is None or (dmax is not None and dsq < dmax):
                    col_fail[v0] = col_fail.get(v0, 0) + 1
                    if col_fail[v0] >= 3:
                        bad_cols.add(v0)
                        restart = True
                    row = None
                    break
                if dmax is None or dsq > dmax:
                    if dmax_known is not None:
                        raise _BadPrime
                    dmax = dsq
                    rows = []
                    row = None
                    break
                row.append((a[-1], sq))
            if row is not None:
                rows.append((u0, row))
            u0 += 1
        if not restart:
            break
    checku, checkrow = rows.pop()
    unodes = [r[0] for r in rows]
    out = {}
    ccache = {}
    for k in range(dmax + 1):
        V = [[lc * sq[k] % p for (lc, sq) in row] for (_, row) in rows]
        cs = _tensor_interp_mod(unodes, vnodes, V, p)
        for iv, v0 in enumerate(vnodes):
            got = sum(c * _pw(ccache, checku, ku, p) * _pw(ccache, v0, kv, p)
                      for (ku, kv), c in cs.items()) % p
            lc, sq = checkrow[iv]
            if got != lc * sq[k] % p:
                return None
        for (ku, kv), c in cs.items():
            out[(k, ku, kv)] = c
    return out, dmax


def _content_is_constant(S, var, pvars, p):
    """Sound one-sided test: True proves the content of S in `var` is a
    rational constant (mod-p gcd degree can only overestimate)."""
    dmain = S.degree(var)
    _, terms = _integer_terms(S, (var,) + tuple(pvars))
    if len(pvars) == 1:
        coeffs = {}
        for (k, e), c in terms.items():
            coeffs.setdefault(k, {})[e] = c
        g = None
        for k in sorted(coeffs):
            lst = [coeffs[k].get(e, 0) for e in range(max(coeffs[k]) + 1)]
            g = lst if g is None else uni_gcd_mod(g, lst, p)
            if len(g) == 1:
                return True
        return len(g) == 1
    # two parameters: a constant gcd along one u-line and one v-line
    # proves the content has degree 0 in v and in u respectively
    cache = {}
    for fixed_idx, probe in ((1, (5, 11, 17)), (2, (7, 13, 19))):
        ok = False
        for x in probe:
            coeffs = {}
            for (k, e1, e2), c in terms.items():
                e_fix = (e1, e2)[fixed_idx - 1]
                e_run = (e1, e2)[2 - fixed_idx]
                w = c * _pw(cache, x, e_fix, p) % p
                d = coeffs.setdefault(k, {})
                d[e_run] = (d.get(e_run, 0) + w) % p
            g = None
            for k in sorted(coeffs):
                d = coeffs[k]
                lst = [d.get(e, 0) for e in range(max(d) + 1)] if d else []
                if not any(lst):
                    continue
                g = lst if g is None else uni_gcd_mod(g, lst, p)
                if len(g) == 1:
                    break
            if g is not None and len(g) == 1:
                ok = True
                break
        if not ok:
            return False
    return True


def _interp_squarefree(poly: SparsePoly, var: str, pvars) -> SparsePoly:
    """Square-free, content-free part of poly in `var` via slice-wise
    univariate square-free parts over prime fields.

    Each parameter slice contributes lc * (monic square-free part);
    these glue to the polynomial lc_M * S where S is the square-free
    part and M the repeated-factor cofactor, so the primitive part in
    `var` of the interpolated lift is S.  The lift is stabilized over
    increasing prime products and verified on held-out slices with a
    fresh prime.
    """
    pvars = tuple(pvars)
    if set(poly.vars) - ({var} | set(pvars)):
        raise ValueError("square-free interpolation needs rational parameters")
    if len(pvars) not in (1, 2):
        raise ValueError("one or two parameter variables required")
    _, terms = _integer_terms(poly, (var,) + pvars)
    dmain = max(k[0] for k in terms)
    if dmain == 0:
        return _sign_normalized(poly)
    worker = _sqfree_prime_1d if len(pvars) == 1 else _sqfree_prime_2d
    gen = prime_stream()
    p0 = next(gen)
    need = 16
    while True:
        got = worker(terms, dmain, p0, need)
        if got is not None:
            cand, dmax = got
            break
        need *= 2
        if need > 4096:
            raise InterpolationFailure("square-free slice degrees kept rising")
    need = max(k[1] for k in cand) + 1 if cand else 1
    acc, mod = dict(cand), p0
    lift = {k: balanced(v, mod) for k, v in acc.items() if balanced(v, mod)}
    for p in gen:
        try:
            got = worker(terms, dmain, p, need, dmax_known=dmax)
        except _BadPrime:
            continue
        if got is None:
            need *= 2
            continue
        cand = got[0]
        acc, mod, new_lift = _crt_lift(acc, mod, cand, p)
        if new_lift == lift:
            break
        lift = new_lift
        if mod.bit_length() > 60 * 80:
            raise InterpolationFailure("square-free lift did not stabilize")
    allv = (var,) + pvars
    T = SparsePoly(allv, {k: Fraction(c) for k, c in lift.items()})
    q = next(gen)
    if _content_is_constant(T, var, pvars, q):
        S = T.primitive_scalar()
    else:
        S = content_and_primitive(T, var)[1].primitive_scalar()
    S = _sign_normalized(S)
    _verify_squarefree(poly, S, var, pvars, next(gen))
    return S


def _verify_squarefree(poly, S, var, pvars, p):
    dmain = poly.degree(var)
    ds = S.degree(var)
    _, terms = _integer_terms(poly, (var,) + pvars)
    _, sterms = _integer_terms(S, (var,) + pvars)
    cache = {}
    checked = 0
    base = 3
    while checked < 2:
        base += 1
        if base > 200:
            raise InterpolationFailure("no usable square-free check slice")
        node = (base,) if len(pvars) == 1 else (base, 2 * base + 1)
        a = _sq_slice(terms, dmain, node, p, cache)
        s = _sq_slice(sterms, ds, node, p, cache)
        if a[-1] == 0 or s[-1] == 0:
            continue
        inv = pow(s[-1], -1, p)
        s_monic = [x * inv % p for x in s]
        if uni_squarefree_mod(a, p) != s_monic:
            raise InterpolationFailure("square-free lift failed slice check")
        checked += 1


def hessian_curve(H, params=None, view=None) -> ArcticCurve:
    """Hessian-determinant route for quadratic leading coefficients.

    For H = a X^2 + b X Y + c Y^2 the double-root condition is the
    vanishing of det Hess = 4 a c - b^2; this must agree with the
    remainder-sequence eliminant up to a constant factor.
    """
    H = _leading_H(H)
    iX = H.vars.index("X")
    iY = H.vars.index("Y")
    if any(e[iX] + e[iY] != 2 for e in H.terms):
        raise ValueError("Hessian route needs a quadratic homogeneous H")
    a = H.coeff_of("X", 2)
    b = H.coeff_of("X", 1)
    c = H.coeff_of("X", 0)
    if "Y" in b.vars:
        b = b.coeff_of("Y", 1)
    if "Y" in c.vars:
        c = c.coeff_of("Y", 2)
    a = a.subs({"Y": 0}) if "Y" in a.vars else a
    disc = 4 * (a * c) - b * b
    if disc.is_zero():
        raise ArithmeticError("degenerate quadratic: Hessian vanishes identically")
    segments = scaled_domain(view) if view is not None else ()
    return ArcticCurve(_sign_normalized(disc), (), tuple(segments),
                       ViewDirection.of(view) if view is not None else None,
                       dict(params or {}))


# ---------------------------------------------------------------------------
# scaled domain, symmetries, holography, cone


def scaled_domain(d):
    """The four boundary segments of the scaled initial-data domain.

    In scaled coordinates (u, v) = (i, j)/k the slanted surface spans
    the quadrilateral bounded by these lines; for (0, 0, 1) it is the
    square |u| + |v| = 1.
    """
    r, s, t = d
    segs = []
    left = (Fraction(-t, t + r), Fraction(0))
    right = (Fraction(0), Fraction(t, t - r))
    for den in (t + s, s - t):
        segs.append(DomainSegment(Fraction(-(t + r), den), Fraction(-t, den),
                                  *left))
    for den in (t + s, s - t):
        segs.append(DomainSegment(Fraction(t - r, den), Fraction(-t, den),
                                  *right))
    return tuple(segs)


def _proportional(a: SparsePoly, b: SparsePoly) -> bool:
    vs = _merge_vars(a.vars, b.vars)
    a = align_to(a, vs)
    b = align_to(b, vs)
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    ea, ca = a.sorted_terms()[0]
    eb, cb = b.sorted_terms()[0]
    if ea != eb:
        return False
    return a * cb == b * ca


def symmetry_check(curve: ArcticCurve, recompute=None) -> dict:
    """Invariance of a 2x2-periodic arctic curve under the weight
    relabelings (sigma, tau) -> (1-sigma, 1-tau), (tau, sigma) and
    (1-tau, 1-sigma).

    Accepts either an ArcticCurve whose parameters carry 'direction',
    'sigma' and 'tau', or a plain mapping with those keys (the base
    leading coefficient is then computed on the fly and no elimination
    is run unless a partner disagrees at the H level).  Each partner is
    recomputed at the transformed rational pair and the eliminants
    compared up to a scalar; a partner whose normalized H is
    proportional is accepted without re-running the elimination, since
    the eliminant is a deterministic, scale-invariant function of H.
    """
    params = curve.parameters if isinstance(curve, ArcticCurve) else dict(curve)
    if not {"direction", "sigma", "tau"} <= set(params):
        raise ValueError("symmetry check needs direction, sigma, tau parameters")
    d = params["direction"]
    sig, tau = Fraction(params["sigma"]), Fraction(params["tau"])
    if recompute is None:
        recompute = arctic_curve
    H = params.get("H")
    if H is None and not isinstance(curve, ArcticCurve):
        H = periodic_leading(d, sig, tau).H
        curve = None
    report = {}
    for name, (s2, t2) in (("complement", (1 - sig, 1 - tau)),
                           ("swap", (tau, sig)),
                           ("swap_complement", (1 - tau, 1 - sig))):
        if H is not None and recompute is arctic_curve:
            lead2 = periodic_leading(d, s2, t2)
            if _proportional(H, lead2.H):
                report[name] = True
                continue
        if curve is None:
            curve = arctic_curve(d, sig, tau)
        partner = recompute(d, s2, t2)
        report[name] = _proportional(curve.full_eliminant(),
                                     partner.full_eliminant())
    return report


def holographic_curve(D_source, view, params=None, order: int | None = None,
                      method: str = "hessian") -> ArcticCurve:
    """Arctic curve of a source model re-read from a view direction
    (r~, s~, t~) through the slanted substitution z^(r~/t~)/x etc.

    D_source is the source denominator (a slant direction stands for
    its uniform denominator with symbolic A).
    """
    from .density import uniform_denominator
    view = ViewDirection.of(view)
    if not isinstance(D_source, SparsePoly):
        D_source = uniform_denominator(SlantDirection(*D_source), symbolic=True)
    series = rescale_delta(D_source, view, 4 if order is None else order)
    lead = leading_expansion(series)
    if method == "hessian" and lead.theta == 2:
        return hessian_curve(lead, params=params, view=view)
    return eliminate(lead, params=params, view=view)


def uniform_view_curve(d_source, view) -> SparsePoly:
    """Closed-form ellipse family
    (1-A) t~^2 u^2 + A t~^2 v^2 - A (1-A) (r~ u + s~ v + t~)^2
    as an independent check for holographic_curve on uniform sources."""
    rt, st, tt = ViewDirection.of(view)
    vs = ("u", "v", "A")
    u = SparsePoly.var(vs, "u")
    v = SparsePoly.var(vs, "v")
    a = SparsePoly.var(vs, "A")
    one = SparsePoly.constant(vs, 1)
    lin = rt * u + st * v + tt * one
    return ((one - a) * tt * tt * u * u + a * tt * tt * v * v
            - a * (one - a) * lin * lin)


def cone_surface(curve: ArcticCurve, source_d) -> SparsePoly:
    """Homogeneous cone over the source-plane arctic curve, apex (0, 0, 1).

    Rays join the apex to curve points on the source plane
    r u + s v + t w = 0; substituting the ray parameter
    lambda = -t / (r u + s v + t (w - 1)) into P(lambda u, lambda v) and
    clearing denominators gives a surface polynomial homogeneous in
    (u, v, w - 1) whose planar sections reproduce the holographic
    curves of the same source.
    """
    r, s, t = source_d
    P = curve.eliminant
    pvars = tuple(v for v in P.vars if v not in ("u", "v"))
    vs = ("u", "v", "w") + pvars
    u = SparsePoly.var(vs, "u")
    v = SparsePoly.var(vs, "v")
    w = SparsePoly.var(vs, "w")
    lin = r * u + s * v + t * (w - SparsePoly.constant(vs, 1))
    iu = P.vars.index("u") if "u" in P.vars else None
    iv = P.vars.index("v") if "v" in P.vars else None
    deg = 0
    for e in P.terms:
        dd = (e[iu] if iu is not None else 0) + (e[iv] if iv is not None else 0)
        deg = max(deg, dd)
    out = SparsePoly(vs)
    for e, c in P.terms.items():
        a = e[iu] if iu is not None else 0
        b = e[iv] if iv is not None else 0
        pe = tuple(x for i, x in enumerate(e) if P.vars[i] not in ("u", "v"))
        mono = SparsePoly.monomial(vs, (a, b, 0) + pe, c * Fraction(-t) ** (a + b))
        out = out + mono * lin ** (deg - a - b)
    return _sign_normalized(out)


# ---------------------------------------------------------------------------
# end-to-end driver


def arctic_curve(d, sigma=None, tau=None, source=None,
                 keep_spurious: bool = False, method: str = "auto") -> ArcticCurve:
    """Full pipeline for a slant direction in its own frame.

    Uniform data (sigma, tau omitted) goes through the closed-form
    denominator and the Hessian; 2x2-periodic data goes through the
    density-system determinant, the eps-expansion at the conjectured
    order (with one escalation), and subresultant elimination.
    """
    d = SlantDirection(*d)
    if sigma is None and tau is None:
        from .density import uniform_denominator
        D = uniform_denominator(d, symbolic=True)
        series = rescale_delta(D, d, 4)
        lead = leading_expansion(series)
        params = {"direction": d, "theta": lead.theta}
        if d.r != d.s:
            from .tsystem import uniform_alpha
            alpha = uniform_alpha(d).value(30)
            params["A_numeric"] = alpha ** (d.r * d.r - d.t * d.t)
            params["A_is_approximate"] = True
        curve = hessian_curve(lead, params=params, view=d)
        return curve
    sigma = Fraction(sigma)
    tau = Fraction(tau)
    lead = periodic_leading(d, sigma, tau, source=source)
    params = {"direction": d, "sigma": sigma, "tau": tau,
              "theta": lead.theta, "conjecture_match": lead.conjecture_match,
              "H": lead.H}
    return eliminate(lead, params=params, view=d,
                     keep_spurious=keep_spurious, method=method)


def periodic_leading(d, sigma, tau, source=None) -> ScalingExpansion:
    """Leading expansion (theta, H) of the 2x2-periodic density
    determinant for direction d, without the elimination step."""
    from .density import density_system, system_determinant
    d = SlantDirection(*d)
    sys = density_system(d, Fraction(sigma), Fraction(tau), source=source)
    det = system_determinant(sys)
    guess = theta_conjecture(d) + 4 if d.r == d.s else 6
    series = rescale_delta(det.poly, d, guess)
    if series.valuation() is None:
        series = rescale_delta(det.poly, d, 2 * guess)
    return leading_expansion(series, direction=d)
