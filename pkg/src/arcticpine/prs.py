"""Polynomial remainder sequences, multivariate gcd, square-free reduction.

The remainder sequence follows the paper-style iterated Euclidean
divisions but every remainder is stripped of its content in the active
variable (primitive PRS), which keeps coefficient growth under control
and agrees with the naive sequence up to unit content.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import SparsePoly, align

# ---------------------------------------------------------------------------
# univariate view: p as list of SparsePoly coefficients in the other variables


def _check_ordinary(p: SparsePoly, var: str):
    if p.has_negative_exponent(var):
        raise ValueError(f"negative exponent in active variable {var}; clear denominators first")


def to_univariate(p: SparsePoly, var: str):
    _check_ordinary(p, var)
    d = p.degree(var)
    return [p.coeff_of(var, k) for k in range(d + 1)]


def from_univariate(coeffs, var: str) -> SparsePoly:
    vs = ()
    for c in coeffs:
        for v in c.vars:
            if v not in vs:
                vs = vs + (v,)
    if var not in vs:
        vs = vs + (var,)
    x = SparsePoly.var(vs, var)
    out = SparsePoly(vs)
    for k, c in enumerate(coeffs):
        out = out + c * x ** k
    return out


# ---------------------------------------------------------------------------
# multivariate gcd via primitive PRS, recursing through the variable list


def _support_vars(p: SparsePoly):
    out = []
    for e in p.terms:
        for i, x in enumerate(e):
            if x != 0 and p.vars[i] not in out:
                out.append(p.vars[i])
    return out


def mv_gcd(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    """gcd of ordinary (non-Laurent) polynomials, primitive and
    normalized to positive leading (graded-lex) coefficient."""
    a, b = align(a, b)
    if a.is_zero():
        return b.primitive_scalar()
    if b.is_zero():
        return a.primitive_scalar()
    if a.has_negative_exponent() or b.has_negative_exponent():
        raise ValueError("gcd requires ordinary polynomials")
    sup = [v for v in _support_vars(a) if v in _support_vars(b)]
    only_a = [v for v in _support_vars(a) if v not in sup]
    only_b = [v for v in _support_vars(b) if v not in sup]
    if not sup:
        # no common variable: gcd is the gcd of all coefficients, a rational
        return SparsePoly.constant(a.vars, 1).primitive_scalar() \
            if (only_a or only_b or True) else a
    var = sup[0]
    ca, pa = content_and_primitive(a, var)
    cb, pb = content_and_primitive(b, var)
    cont = mv_gcd(ca, cb)
    g = _gcd_primitive_univ(pa, pb, var)
    return (g * cont).primitive_scalar()


def content_and_primitive(p: SparsePoly, var: str):
    """Content of p in `var` (gcd of the coefficients) and the primitive part."""
    coeffs = [c for c in to_univariate(p, var) if not c.is_zero()]
    cont = SparsePoly(p.vars)
    for c in coeffs:
        cont = mv_gcd(cont, c)
        if cont.is_constant() and cont.constant_value() == 1:
            break
    if cont.is_zero():
        return SparsePoly.constant(p.vars, 1), p
    return cont, p.divexact(cont)


def _prem(f, g, var):
    """Pseudo-remainder of f by g in var (univariate coefficient lists)."""
    fu = list(to_univariate(f, var))
    gu = to_univariate(g, var)
    df, dg = len(fu) - 1, len(gu) - 1
    if df < dg:
        return f
    lead = gu[-1]
    for _ in range(df - dg + 1):
        df_cur = len(fu) - 1
        if df_cur < dg:
            # multiply by lead to keep the classical prem normalization
            fu = [c * lead for c in fu]
            continue
        top = fu[-1]
        fu = [c * lead for c in fu[:-1]]
        for k in range(dg):
            fu[df_cur - dg + k] = fu[df_cur - dg + k] - top * gu[k]
        while fu and fu[-1].is_zero():
            fu.pop()
        if not fu:
            break
    if not fu:
        return SparsePoly(f.vars)
    return from_univariate(fu, var)


def _brown_sequence(f, g, var):
    """Raw subresultant sequence (Brown's beta/psi divisions).

    Every division is exact in the coefficient ring, which keeps the
    growth polynomial without any mid-sequence content extraction.
    Stops after the last nonzero remainder.
    """
    seq = [f, g]
    delta = f.degree(var) - g.degree(var)
    beta = SparsePoly.constant(f.vars, Fraction((-1) ** (delta + 1)))
    psi = SparsePoly.constant(f.vars, -1)
    while True:
        a, b = seq[-2], seq[-1]
        r = _prem(a, b, var)
        if r.is_zero():
            break
        r = r.divexact(beta)
        seq.append(r)
        if r.degree(var) == 0:
            break
        gamma = b.coeff_of(var, b.degree(var))
        if delta > 0:
            num = (gamma * -1) ** delta
            psi = num if delta == 1 else num.divexact(psi ** (delta - 1))
        delta = b.degree(var) - r.degree(var)
        beta = (gamma * -1) * psi ** delta
    return seq


def subresultant_prs(f: SparsePoly, g: SparsePoly, var: str):
    """Remainder sequence of f, g in `var`, each element primitive in `var`.

    Ends at the last nonzero remainder. If f and g have a common factor
    involving `var`, the sequence ends before reaching degree 0.
    """
    if g.is_zero():
        raise ValueError("g must be nonzero")
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if f.degree(var) < g.degree(var):
        raise ValueError("need deg(f) >= deg(g) in the active variable")
    _check_ordinary(f, var)
    _check_ordinary(g, var)
    a = content_and_primitive(f, var)[1].primitive_scalar()
    b = content_and_primitive(g, var)[1].primitive_scalar()
    raw = _brown_sequence(a, b, var)
    seq = [a, b]
    for r in raw[2:]:
        if r.degree(var) == 0:
            # the content in var of a degree-0 remainder is the remainder
            # itself; stripping it would destroy the eliminant
            seq.append(r.primitive_scalar())
        else:
            seq.append(content_and_primitive(r, var)[1].primitive_scalar())
    return seq


def _gcd_primitive_univ(a, b, var):
    """gcd of two primitive polynomials in var via the remainder sequence."""
    if a.degree(var) < b.degree(var):
        a, b = b, a
    seq = _brown_sequence(a, b, var)
    last = seq[-1]
    if last.degree(var) == 0:
        return SparsePoly.constant(a.vars, 1)
    return content_and_primitive(last, var)[1].primitive_scalar()


def squarefree_primitive(p: SparsePoly, var: str) -> SparsePoly:
    """p stripped of its content in var and of repeated factors in var."""
    if p.is_zero():
        raise ValueError("p must be nonzero")
    _check_ordinary(p, var)
    pp = content_and_primitive(p, var)[1].primitive_scalar()
    if pp.degree(var) == 0:
        return pp
    g = mv_gcd(pp, pp.derivative(var))
    if g.is_constant():
        return pp
    return pp.divexact(g).primitive_scalar()


def sylvester_matrix(f: SparsePoly, g: SparsePoly, var: str):
    from .matrix import PolyMatrix
    fu = to_univariate(f, var)
    gu = to_univariate(g, var)
    m, n = len(fu) - 1, len(gu) - 1
    if m < 0 or n < 0:
        raise ValueError("zero polynomial")
    size = m + n
    if size == 0:
        return PolyMatrix([[SparsePoly.constant(f.vars, 1)]])
    zero = SparsePoly(f.vars)
    rows = []
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(fu)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(gu)):
            row[i + k] = c
        rows.append(row)
    return PolyMatrix(rows)


def sylvester_resultant(f: SparsePoly, g: SparsePoly, var: str) -> SparsePoly:
    """Resultant via the Sylvester-matrix determinant (oracle-grade)."""
    return sylvester_matrix(f, g, var).det()


def discriminant(f: SparsePoly, var: str) -> SparsePoly:
    return sylvester_resultant(f, f.derivative(var), var)
