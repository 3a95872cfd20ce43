"""Sparse multivariate Laurent polynomials over exact rationals.

Terms are kept in a dict mapping exponent tuples to Fraction coefficients.
Negative exponents are allowed everywhere except in operations that
explicitly require ordinary polynomials in their active variable
(PRS, square-free reduction); those reject negative exponents.

Canonical term order is graded lexicographic on the declared variable
order: higher total degree first, ties broken by lexicographically
larger exponent vector. The text format emits terms in that order.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"not an exact scalar: {c!r}")


class SparsePoly:
    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Scalar] | None = None):
        self.vars = tuple(variables)
        clean = {}
        if terms:
            n = len(self.vars)
            for exps, c in terms.items():
                c = _as_fraction(c)
                if c == 0:
                    continue
                exps = tuple(int(e) for e in exps)
                if len(exps) != n:
                    raise ValueError("exponent vector length mismatch")
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if clean[exps] == 0:
                    del clean[exps]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, variables: Sequence[str], c: Scalar) -> "SparsePoly":
        z = (0,) * len(tuple(variables))
        return cls(variables, {z: c})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Sequence[int], c: Scalar = 1) -> "SparsePoly":
        return cls(variables, {tuple(exps): c})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "SparsePoly":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, {tuple(e): 1})

    # -- basics ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree(self, name: str) -> int:
        """Degree in one variable (max exponent); 0 for the zero polynomial."""
        if not self.terms:
            return 0
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def min_degree(self, name: str) -> int:
        if not self.terms:
            return 0
        i = self.vars.index(name)
        return min(e[i] for e in self.terms)

    def has_negative_exponent(self, name: str | None = None) -> bool:
        if name is None:
            return any(e < 0 for exps in self.terms for e in exps)
        i = self.vars.index(name)
        return any(exps[i] < 0 for exps in self.terms)

    def sorted_terms(self):
        """Terms in canonical (graded-lex descending) order."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.constant(self.vars, other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        a, b = align(self, other)
        return a.terms == b.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            return other
        return SparsePoly.constant(self.vars, other)

    def __add__(self, other):
        other = self._coerce(other)
        a, b = align(self, other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, Fraction(0)) + c
            if s == 0:
                terms.pop(e, None)
            else:
                terms[e] = s
        out = SparsePoly.__new__(SparsePoly)
        out.vars = a.vars
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = SparsePoly.__new__(SparsePoly)
        out.vars = self.vars
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if c == 0:
                return SparsePoly(self.vars)
            out = SparsePoly.__new__(SparsePoly)
            out.vars = self.vars
            out.terms = {e: k * c for e, k in self.terms.items()}
            return out
        a, b = align(self, self._coerce(other))
        terms = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = terms.get(e, Fraction(0)) + ca * cb
                if s == 0:
                    terms.pop(e, None)
                else:
                    terms[e] = s
        out = SparsePoly.__new__(SparsePoly)
        out.vars = a.vars
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / _as_fraction(other))
        raise TypeError("use divexact for polynomial division")

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power; invert a monomial explicitly")
        result = SparsePoly.constant(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n >>= 1
        return result

    def derivative(self, name: str) -> "SparsePoly":
        i = self.vars.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            terms[tuple(ne)] = c * e[i]
        return SparsePoly(self.vars, terms)

    # -- substitution / evaluation ----------------------------------------

    def subs(self, assignment: Mapping[str, Scalar]) -> "SparsePoly":
        """Substitute exact rational values for a subset of variables.

        Variables receiving a value are removed from the context.
        Negative exponents require a nonzero value.
        """
        idx = {self.vars.index(k): _as_fraction(v) for k, v in assignment.items()}
        keep = [i for i in range(len(self.vars)) if i not in idx]
        new_vars = tuple(self.vars[i] for i in keep)
        terms = {}
        for e, c in self.terms.items():
            val = c
            for i, v in idx.items():
                p = e[i]
                if p == 0:
                    continue
                if v == 0 and p < 0:
                    raise ZeroDivisionError("negative exponent at zero value")
                val = val * (v ** p if p >= 0 else Fraction(1) / (v ** (-p)))
            if val == 0:
                continue
            ne = tuple(e[i] for i in keep)
            s = terms.get(ne, Fraction(0)) + val
            if s == 0:
                terms.pop(ne, None)
            else:
                terms[ne] = s
        out = SparsePoly.__new__(SparsePoly)
        out.vars = new_vars
        out.terms = terms
        return out

    def subs_poly(self, assignment: Mapping[str, "SparsePoly"]) -> "SparsePoly":
        """Substitute polynomials for variables (non-negative exponents only)."""
        target_vars = None
        for p in assignment.values():
            target_vars = p.vars if target_vars is None else _merge_vars(target_vars, p.vars)
        keep = [v for v in self.vars if v not in assignment]
        if target_vars is None:
            target_vars = tuple(keep)
        else:
            target_vars = _merge_vars(target_vars, keep)
        result = SparsePoly(target_vars)
        for e, c in self.terms.items():
            term = SparsePoly.constant(target_vars, c)
            for i, name in enumerate(self.vars):
                p = e[i]
                if p == 0:
                    continue
                if name in assignment:
                    if p < 0:
                        raise ValueError("negative exponent in polynomial substitution")
                    term = term * (align_to(assignment[name], target_vars) ** p)
                else:
                    term = term * SparsePoly.var(target_vars, name) ** p if p > 0 else \
                        term * SparsePoly.monomial(target_vars,
                                                   _unit_exp(target_vars, name, p))
            result = result + term
        return result

    def coeff_of(self, name: str, power: int) -> "SparsePoly":
        """Coefficient of name^power, as a polynomial in the remaining variables."""
        i = self.vars.index(name)
        keep = [j for j in range(len(self.vars)) if j != i]
        new_vars = tuple(self.vars[j] for j in keep)
        terms = {}
        for e, c in self.terms.items():
            if e[i] != power:
                continue
            terms[tuple(e[j] for j in keep)] = c
        return SparsePoly(new_vars, terms)

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    # -- content / division ------------------------------------------------

    def content_scalar(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators,
        signed so that the canonical leading coefficient is positive."""
        if not self.terms:
            return Fraction(1)
        from math import gcd, lcm
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator))
            den = lcm(den, c.denominator)
        cont = Fraction(num, den)
        lead = self.sorted_terms()[0][1]
        return cont if lead > 0 else -cont

    def primitive_scalar(self) -> "SparsePoly":
        c = self.content_scalar()
        if c in (0, 1):
            return self
        return self * (Fraction(1) / c)

    def _divide_exact(self, divisor: "SparsePoly", guard: int):
        """Quotient self / divisor or None when the division is inexact
        or exceeds the step guard.

        Term-by-term against the graded-lex leading monomial of the
        divisor; the working remainder's leading monomial strictly
        decreases, tracked with a heap.
        """
        a, b = align(self, divisor)
        if a.is_zero():
            return SparsePoly(a.vars)
        lead_e, lead_c = b.sorted_terms()[0]
        tail = [(be, bc) for be, bc in b.terms.items() if be != lead_e]
        rem = dict(a.terms)
        heap = [(-sum(e), tuple(-x for x in e)) for e in rem]
        heapq.heapify(heap)
        # in an exact division every intermediate remainder monomial
        # stays at or above the per-variable exponent floor of a
        floor = [min(e[i] for e in a.terms) for i in range(len(a.vars))]
        qterms = {}
        steps = 0
        while rem:
            steps += 1
            if steps > guard:
                return None
            while heap:
                e = tuple(-x for x in heap[0][1])
                if e in rem:
                    break
                heapq.heappop(heap)
            if not heap:
                return None
            heapq.heappop(heap)
            if any(x < m for x, m in zip(e, floor)):
                return None
            c = rem.pop(e)
            qe = tuple(x - y for x, y in zip(e, lead_e))
            qc = c / lead_c
            qterms[qe] = qterms.get(qe, Fraction(0)) + qc
            for be, bc in tail:
                te = tuple(x + y for x, y in zip(qe, be))
                s = rem.get(te, Fraction(0)) - qc * bc
                if s == 0:
                    rem.pop(te, None)
                else:
                    if te not in rem:
                        heapq.heappush(heap, (-sum(te), tuple(-x for x in te)))
                    rem[te] = s
        return SparsePoly(a.vars, qterms)

    def divexact(self, divisor: "SparsePoly") -> "SparsePoly":
        """Exact division; raises ValueError if the division is not exact."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if isinstance(divisor, SparsePoly) and divisor.is_constant():
            return self * (Fraction(1) / divisor.constant_value())
        q = self._divide_exact(divisor, 4_000_000)
        if q is None:
            raise ValueError("inexact polynomial division")
        return q

    def try_divexact(self, divisor: "SparsePoly"):
        """divexact that returns None instead of raising when not exact."""
        if divisor.is_zero():
            return None
        if divisor.is_constant():
            return self * (Fraction(1) / divisor.constant_value())
        guard = 16 * (len(self.terms) + 4) * (len(divisor.terms) + 4)
        return self._divide_exact(divisor, guard)

    # -- text format -------------------------------------------------------

    def to_text(self) -> str:
        """Canonical text: `+c * x^a y^b ...` terms in graded-lex order."""
        if not self.terms:
            return "+0"
        parts = []
        for e, c in self.sorted_terms():
            sign = "+" if c > 0 else "-"
            mag = abs(c)
            cs = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            factors = [f"{v}^{p}" for v, p in zip(self.vars, e) if p != 0]
            if factors:
                parts.append(f"{sign}{cs} * " + " ".join(factors))
            else:
                parts.append(f"{sign}{cs}")
        return " ".join(parts)

    def __repr__(self):
        return f"SparsePoly({self.vars}, {self.to_text()!r})"

    @classmethod
    def from_text(cls, variables: Sequence[str], text: str) -> "SparsePoly":
        variables = tuple(variables)
        n = len(variables)
        terms = {}
        tokens = text.replace("+", " +").replace("-", " -").split()
        # re-join exponents like `y^-1` broken by the replace above
        joined = []
        for tok in tokens:
            if joined and joined[-1].endswith("^"):
                joined[-1] += tok.lstrip()
            else:
                joined.append(tok)
        i = 0
        while i < len(joined):
            tok = joined[i]
            sign = 1
            if tok.startswith("+"):
                tok = tok[1:]
            elif tok.startswith("-"):
                sign = -1
                tok = tok[1:]
            if "/" in tok:
                num, den = tok.split("/")
                c = Fraction(int(num), int(den))
            else:
                c = Fraction(int(tok))
            c *= sign
            exps = [0] * n
            i += 1
            if i < len(joined) and joined[i] == "*":
                i += 1
                while i < len(joined) and "^" in joined[i]:
                    name, p = joined[i].split("^")
                    exps[variables.index(name)] += int(p)
                    i += 1
            terms[tuple(exps)] = terms.get(tuple(exps), Fraction(0)) + c
        return cls(variables, terms)


def _unit_exp(variables, name, p):
    e = [0] * len(variables)
    e[tuple(variables).index(name)] = p
    return tuple(e)


def _merge_vars(a: Iterable[str], b: Iterable[str]) -> tuple:
    out = list(a)
    for v in b:
        if v not in out:
            out.append(v)
    return tuple(out)


def align_to(p: SparsePoly, variables: Sequence[str]) -> SparsePoly:
    """Re-express p in a variable context containing all of p.vars."""
    variables = tuple(variables)
    if p.vars == variables:
        return p
    pos = [variables.index(v) for v in p.vars]
    n = len(variables)
    terms = {}
    for e, c in p.terms.items():
        ne = [0] * n
        for i, x in zip(pos, e):
            ne[i] = x
        terms[tuple(ne)] = c
    out = SparsePoly.__new__(SparsePoly)
    out.vars = variables
    out.terms = terms
    return out


def align(a: SparsePoly, b: SparsePoly):
    """Bring two polynomials into a shared variable context (union)."""
    if a.vars == b.vars:
        return a, b
    merged = _merge_vars(a.vars, b.vars)
    return align_to(a, merged), align_to(b, merged)
