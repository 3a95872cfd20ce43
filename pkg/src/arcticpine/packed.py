"""Integer-coefficient Laurent polynomials with bit-packed exponent keys.

Symbolic T-system evolution multiplies polynomials with tens of
thousands of monomials; tuple-keyed dicts are too slow for that.  Here a
monomial's exponent vector is packed into a single big integer, eight
bits per variable with a +128 offset, so that multiplying monomials is
one integer addition.  Coefficients are plain ints (the evolution only
ever produces integer coefficients).
"""

from __future__ import annotations

from fractions import Fraction

from .poly import SparsePoly

_WIDTH = 8
_OFFSET = 1 << (_WIDTH - 1)
_MASK = (1 << _WIDTH) - 1


def _base(nvars: int) -> int:
    b = 0
    for i in range(nvars):
        b |= _OFFSET << (_WIDTH * i)
    return b


class PackedLaurent:
    __slots__ = ("vars", "terms", "base")

    def __init__(self, variables, terms=None, base=None):
        self.vars = tuple(variables)
        self.terms = terms if terms is not None else {}
        self.base = base if base is not None else _base(len(self.vars))

    @classmethod
    def monomial(cls, variables, exps, coeff=1):
        p = cls(variables)
        key = p.base
        for i, e in enumerate(exps):
            if not -_OFFSET <= e < _OFFSET:
                raise OverflowError("exponent out of packed range")
            key += e << (_WIDTH * i)
        if coeff:
            p.terms[key] = coeff
        return p

    @classmethod
    def constant(cls, variables, c):
        return cls.monomial(variables, [0] * len(variables), c)

    def unpack(self, key):
        out = []
        for i in range(len(self.vars)):
            out.append(((key >> (_WIDTH * i)) & _MASK) - _OFFSET)
        return tuple(out)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, PackedLaurent) and self.vars == other.vars \
            and self.terms == other.terms

    def __add__(self, other):
        if self.vars != other.vars:
            raise ValueError("variable mismatch")
        out = dict(self.terms)
        for k, c in other.terms.items():
            nc = out.get(k, 0) + c
            if nc:
                out[k] = nc
            elif k in out:
                del out[k]
        return PackedLaurent(self.vars, out, self.base)

    def __sub__(self, other):
        if self.vars != other.vars:
            raise ValueError("variable mismatch")
        out = dict(self.terms)
        for k, c in other.terms.items():
            nc = out.get(k, 0) - c
            if nc:
                out[k] = nc
            elif k in out:
                del out[k]
        return PackedLaurent(self.vars, out, self.base)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return PackedLaurent(self.vars, {}, self.base)
            return PackedLaurent(self.vars, {k: c * other for k, c in self.terms.items()},
                                 self.base)
        if self.vars != other.vars:
            raise ValueError("variable mismatch")
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        base = self.base
        out = {}
        get = out.get
        for k1, c1 in a.items():
            k0 = k1 - base
            for k2, c2 in b.items():
                k = k0 + k2
                nc = get(k, 0) + c1 * c2
                if nc:
                    out[k] = nc
                else:
                    del out[k]
        return PackedLaurent(self.vars, out, self.base)

    def divexact(self, other: "PackedLaurent") -> "PackedLaurent":
        """Exact division; raises ValueError when the division leaves a remainder."""
        if self.vars != other.vars:
            raise ValueError("variable mismatch")
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return PackedLaurent(self.vars, {}, self.base)
        rem = dict(self.terms)
        den = other.terms
        dk = max(den)
        dc = den[dk]
        base = self.base
        quo = {}
        while rem:
            rk = max(rem)
            rc = rem[rk]
            if rc % dc != 0:
                raise ValueError("inexact polynomial division")
            qc = rc // dc
            qk = rk - dk + base
            quo[qk] = qc
            q0 = qk - base
            for k, c in den.items():
                kk = q0 + k
                nc = rem.get(kk, 0) - qc * c
                if nc:
                    rem[kk] = nc
                elif kk in rem:
                    del rem[kk]
        return PackedLaurent(self.vars, quo, self.base)

    def to_sparse(self) -> SparsePoly:
        return SparsePoly(self.vars,
                          {self.unpack(k): Fraction(c) for k, c in self.terms.items()})

    @classmethod
    def from_sparse(cls, p: SparsePoly) -> "PackedLaurent":
        out = cls(p.vars)
        for e, c in p.terms.items():
            if c.denominator != 1:
                raise ValueError("packed polynomials need integer coefficients")
            key = out.base
            for i, x in enumerate(e):
                if not -_OFFSET <= x < _OFFSET:
                    raise OverflowError("exponent out of packed range")
                key += x << (_WIDTH * i)
            out.terms[key] = c.numerator
        return out

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"PackedLaurent({len(self.terms)} terms over {len(self.vars)} vars)"
