"""Truncated power series in a formal parameter eps.

Coefficients are SparsePoly values in the remaining variables; a series
of order N stores exactly N+1 coefficients and all arithmetic discards
terms beyond eps^N.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import SparsePoly, align_to, _merge_vars


class EpsSeries:
    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        if order < 0:
            raise ValueError("order must be non-negative")
        coeffs = list(coeffs)
        if len(coeffs) != order + 1:
            raise ValueError("need exactly order+1 coefficients")
        self.order = order
        self.coeffs = coeffs

    @classmethod
    def constant(cls, order: int, value: SparsePoly) -> "EpsSeries":
        zero = SparsePoly(value.vars)
        return cls(order, [value] + [zero] * order)

    @classmethod
    def zero(cls, order: int, variables=()) -> "EpsSeries":
        z = SparsePoly(variables)
        return cls(order, [z] * (order + 1))

    def variables(self):
        vs = ()
        for c in self.coeffs:
            vs = _merge_vars(vs, c.vars)
        return vs

    def _aligned(self, other: "EpsSeries"):
        if self.order != other.order:
            raise ValueError("order mismatch")
        vs = _merge_vars(self.variables(), other.variables())
        a = [align_to(c, vs) for c in self.coeffs]
        b = [align_to(c, vs) for c in other.coeffs]
        return a, b

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None if all vanish."""
        for n, c in enumerate(self.coeffs):
            if not c.is_zero():
                return n
        return None

    def __eq__(self, other):
        if not isinstance(other, EpsSeries):
            return NotImplemented
        a, b = self._aligned(other)
        return all(x == y for x, y in zip(a, b))

    def __add__(self, other):
        if not isinstance(other, EpsSeries):
            other = EpsSeries.constant(self.order, SparsePoly.constant((), other))
        a, b = self._aligned(other)
        return EpsSeries(self.order, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return EpsSeries(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, EpsSeries):
            other = EpsSeries.constant(self.order, SparsePoly.constant((), other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return EpsSeries(self.order, [c * other for c in self.coeffs])
        if isinstance(other, SparsePoly):
            return EpsSeries(self.order, [c * other for c in self.coeffs])
        a, b = self._aligned(other)
        n = self.order
        zero = SparsePoly(a[0].vars if a else ())
        out = [zero] * (n + 1)
        for i, ca in enumerate(a):
            if ca.is_zero():
                continue
            for j in range(0, n - i + 1):
                if b[j].is_zero():
                    continue
                out[i + j] = out[i + j] + ca * b[j]
        return EpsSeries(n, out)

    __rmul__ = __mul__

    def inverse(self) -> "EpsSeries":
        """Multiplicative inverse; the eps^0 coefficient must be a nonzero rational."""
        c0 = self.coeffs[0]
        if not c0.is_constant() or c0.is_zero():
            raise ValueError("series inverse needs a nonzero constant leading coefficient")
        inv0 = Fraction(1) / c0.constant_value()
        vs = self.variables()
        out = [SparsePoly.constant(vs, inv0)]
        a = [align_to(c, vs) for c in self.coeffs]
        for n in range(1, self.order + 1):
            acc = SparsePoly(vs)
            for k in range(1, n + 1):
                acc = acc + a[k] * out[n - k]
            out.append(acc * (-inv0))
        return EpsSeries(self.order, out)

    def shift(self, k: int) -> "EpsSeries":
        """Multiply by eps^k (k may be negative if the low coefficients vanish)."""
        vs = self.variables()
        zero = SparsePoly(vs)
        cs = [align_to(c, vs) for c in self.coeffs]
        if k >= 0:
            new = [zero] * k + cs[: self.order + 1 - k]
        else:
            if any(not c.is_zero() for c in cs[:-k]):
                raise ValueError("negative shift would truncate nonzero terms")
            new = cs[-k:] + [zero] * (-k)
        return EpsSeries(self.order, new)

    def truncate(self, order: int) -> "EpsSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return EpsSeries(order, self.coeffs[: order + 1])

    def __repr__(self):
        parts = [f"eps^{n}*({c.to_text()})" for n, c in enumerate(self.coeffs) if not c.is_zero()]
        return "EpsSeries(" + (" + ".join(parts) if parts else "0") + f"; order={self.order})"


def series_exp(linear_form: SparsePoly, order: int) -> EpsSeries:
    """Truncated series of exp(eps * linear_form)."""
    if order < 0:
        raise ValueError("order must be non-negative")
    coeffs = [SparsePoly.constant(linear_form.vars, 1)]
    power = coeffs[0]
    fact = 1
    for n in range(1, order + 1):
        power = power * linear_form
        fact *= n
        coeffs.append(power * Fraction(1, fact))
    return EpsSeries(order, coeffs)
