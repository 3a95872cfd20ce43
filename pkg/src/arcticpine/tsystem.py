"""Octahedron-recurrence evolution from slanted initial data.

Supported initial data on the stepped surface:
 - symbolic: one Laurent variable t_{i,j} per surface point,
 - uniform: t_{i,j} = alpha^(m(m-1)/2) with alpha the root of
   alpha^(t^2) = alpha^(r^2) + alpha^(s^2),
 - periodic2x2 (r = s only): the uniform solution staggered by four
   positive weights a,b,c,d with period two in i and j,
 - custom: an arbitrary rational assignment.

Uniform and 2x2-periodic values are carried exactly as a single power
of alpha times a rational; for r = s this makes every L/R coefficient
an exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .lattice import SlantDirection, LatticePoint, height, plane_index, cone_points
from .packed import PackedLaurent
from .poly import SparsePoly


def var_name(i: int, j: int) -> str:
    """Variable name for the initial-data symbol t_{i,j}."""
    return f"t{i}_{j}".replace("-", "m")


# ---------------------------------------------------------------------------
# exact alpha-power values


@dataclass(frozen=True)
class AlphaValue:
    """A value alpha^exp * ratio with integer exp and rational ratio."""
    exp: int
    ratio: Fraction

    def __mul__(self, other):
        if isinstance(other, AlphaValue):
            return AlphaValue(self.exp + other.exp, self.ratio * other.ratio)
        return AlphaValue(self.exp, self.ratio * Fraction(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, AlphaValue):
            return AlphaValue(self.exp - other.exp, self.ratio / other.ratio)
        return AlphaValue(self.exp, self.ratio / Fraction(other))

    def __add__(self, other):
        if not isinstance(other, AlphaValue):
            other = AlphaValue(0, Fraction(other))
        if self.ratio == 0:
            return other
        if other.ratio == 0:
            return self
        if self.exp != other.exp:
            raise ArithmeticError("sum of incommensurate alpha powers")
        return AlphaValue(self.exp, self.ratio + other.ratio)

    def normalized(self, d: SlantDirection) -> "AlphaValue":
        """Fold alpha^(t^2-r^2) = 2 into the ratio (r = s directions only).

        The same value has many representations because powers of alpha
        and powers of 2 trade off; this picks exp in [0, t^2-r^2).
        """
        r, s, t = d
        if s != r:
            return self
        denom = t * t - r * r
        p = self.exp // denom
        return AlphaValue(self.exp - p * denom, self.ratio * Fraction(2) ** p)

    def same_value(self, other: "AlphaValue", d: SlantDirection) -> bool:
        return self.normalized(d) == other.normalized(d)

    def rational(self, d: SlantDirection) -> Fraction:
        """Exact rational value when alpha^exp is a power of 2 (r = s)."""
        n = self.normalized(d)
        if n.exp != 0 and n.ratio != 0:
            raise ValueError("value is not rational for this direction")
        return n.ratio

    def numeric(self, d: SlantDirection, digits: int = 40) -> Fraction:
        alpha = uniform_alpha(d).value(digits)
        return self.ratio * alpha ** self.exp


# ---------------------------------------------------------------------------
# alpha


@dataclass(frozen=True)
class AlphaSpec:
    direction: SlantDirection
    closed_form: bool

    def value(self, digits: int = 40) -> Fraction:
        """Rational approximation of alpha with error below 10^-digits."""
        r, s, t = self.direction
        if self.closed_form:
            # alpha = 2^(1/(t^2-r^2))
            return _nth_root(Fraction(2), t * t - r * r, digits)
        return _alpha_newton(r, s, t, digits)

    def residual(self, digits: int = 40) -> Fraction:
        r, s, t = self.direction
        a = self.value(digits)
        return abs(a ** (t * t) - a ** (r * r) - a ** (s * s))


def uniform_alpha(d: SlantDirection) -> AlphaSpec:
    return AlphaSpec(d, closed_form=(d.r == d.s))


def _nth_root(x: Fraction, n: int, digits: int) -> Fraction:
    """x^(1/n) by integer Newton iteration at fixed decimal scale."""
    scale = 10 ** (digits + 8)
    target = (x.numerator * scale ** n) // x.denominator
    # integer n-th root of target
    y = int(round(float(x) ** (1.0 / n) * scale))
    while True:
        y_new = ((n - 1) * y + target // y ** (n - 1)) // n
        if abs(y_new - y) <= 1:
            y = y_new
            break
        y = y_new
    return Fraction(y, scale)


def _alpha_newton(r: int, s: int, t: int, digits: int) -> Fraction:
    def f(a: Fraction) -> Fraction:
        return a ** (t * t) - a ** (r * r) - a ** (s * s)

    def fp(a: Fraction) -> Fraction:
        out = Fraction(t * t) * a ** (t * t - 1)
        if r > 0:
            out -= Fraction(r * r) * a ** (r * r - 1)
        if s > 0:
            out -= Fraction(s * s) * a ** (s * s - 1)
        return out

    lo, hi = Fraction(1), Fraction(2)
    for _ in range(60):
        mid = (lo + hi) / 2
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    a = (lo + hi) / 2
    tol = Fraction(1, 10 ** digits)
    for _ in range(200):
        fa = f(a)
        if abs(fa) < tol:
            break
        a = a - fa / fp(a)
        a = a.limit_denominator(10 ** (digits + 20))
    return a


# ---------------------------------------------------------------------------
# initial data


@dataclass(frozen=True)
class InitialData:
    direction: SlantDirection
    kind: str  # symbolic | uniform | periodic2x2 | custom
    weights: tuple = ()       # (a,b,c,d) for periodic2x2
    assignment: object = None  # map or callable for custom

    @staticmethod
    def symbolic(d: SlantDirection) -> "InitialData":
        return InitialData(d, "symbolic")

    @staticmethod
    def uniform(d: SlantDirection) -> "InitialData":
        return InitialData(d, "uniform")

    @staticmethod
    def periodic2x2(d: SlantDirection, a, b, c, dd) -> "InitialData":
        if d.r != d.s:
            raise ValueError("2x2-periodic initial data requires r = s")
        w = tuple(Fraction(x) for x in (a, b, c, dd))
        if any(x <= 0 for x in w):
            raise ValueError("weights must be positive")
        return InitialData(d, "periodic2x2", weights=w)

    @staticmethod
    def custom(d: SlantDirection, assignment) -> "InitialData":
        return InitialData(d, "custom", assignment=assignment)

    def surface_value(self, i: int, j: int):
        d = self.direction
        k = height(d, i, j)
        m = plane_index(d, (i, j, k))
        if self.kind == "uniform":
            return AlphaValue(m * (m - 1) // 2, Fraction(1))
        if self.kind == "periodic2x2":
            a, b, c, dd = self.weights
            w = (a, b, c, dd)[2 * (i % 2) + (j % 2)]
            return AlphaValue(m * (m - 1) // 2, w)
        if self.kind == "custom":
            if callable(self.assignment):
                return Fraction(self.assignment(i, j))
            return Fraction(self.assignment[(i, j)])
        raise ValueError("symbolic initial data has no numeric surface value")


# ---------------------------------------------------------------------------
# evolution


class TSolutionCache:
    """Memoized octahedron evolution above one initial-data assignment."""

    def __init__(self, init: InitialData, depth_cap: int | None = None):
        self.init = init
        d = init.direction
        self.depth_cap = depth_cap if depth_cap is not None else 8 * d.t
        self.values = {}
        self._sym_vars = None
        self._sym_apex = None

    def _symbolic_setup(self, apex):
        pts = cone_points(self.init.direction, apex)
        names = tuple(var_name(x, y) for (x, y) in sorted(pts))
        self._sym_vars = names
        self._sym_apex = apex
        self.values = {}

    def value(self, p) -> object:
        i, j, k = p
        d = self.init.direction
        if (i + j + k) % 2 != 0:
            raise ValueError("odd coordinate sum")
        m = plane_index(d, p)
        if m < 0:
            raise ValueError("point below the initial surface")
        if m > self.depth_cap * 1 and self.init.kind == "symbolic":
            if m > self.depth_cap:
                raise ValueError(f"plane index {m} exceeds depth cap {self.depth_cap}")
        if self.init.kind == "uniform":
            return AlphaValue(m * (m - 1) // 2, Fraction(1))
        if self.init.kind == "symbolic" and self._sym_apex != (i, j, k):
            # variables are fixed per apex; reset cache for a new target
            self._symbolic_setup(LatticePoint.of(i, j, k))
        return self._value_rec(i, j, k)

    def _value_rec(self, i, j, k):
        key = (i, j, k)
        got = self.values.get(key)
        if got is not None:
            return got
        d = self.init.direction
        ks = height(d, i, j)
        if k < ks:
            raise ValueError(f"point ({i},{j},{k}) below the initial surface")
        if k == ks:
            if self.init.kind == "symbolic":
                val = PackedLaurent.monomial(
                    self._sym_vars,
                    [1 if v == var_name(i, j) else 0 for v in self._sym_vars])
            else:
                val = self.init.surface_value(i, j)
        else:
            a = self._value_rec(i + 1, j, k - 1)
            b = self._value_rec(i - 1, j, k - 1)
            c = self._value_rec(i, j + 1, k - 1)
            e = self._value_rec(i, j - 1, k - 1)
            below = self._value_rec(i, j, k - 2)
            num_l = a * b
            num_r = c * e
            if self.init.kind == "symbolic":
                val = (num_l + num_r).divexact(below)
            else:
                val = (num_l + num_r) / below
        self.values[key] = val
        return val


def evolve(init: InitialData, p, depth_cap: int | None = None):
    """T-value at p; SparsePoly for symbolic data, exact value otherwise."""
    p = LatticePoint.of(*p)
    cache = TSolutionCache(init, depth_cap)
    v = cache.value(p)
    if isinstance(v, PackedLaurent):
        return v.to_sparse()
    return v


def uniform_T(d: SlantDirection, p) -> int:
    """Exponent e with T = alpha^e for the uniform solution."""
    m = plane_index(d, p)
    return m * (m - 1) // 2


def lr_coeff(init: InitialData, p):
    """(L, R) at p: L = T_{i+1,j,k} T_{i-1,j,k} / (T_{i,j,k+1} T_{i,j,k-1}).

    p is the center of an octahedron relation, so i+j+k must be odd.
    """
    i, j, k = p
    if (i + j + k) % 2 == 0:
        raise ValueError("L/R coefficients live at odd-coordinate-sum centers")
    d = init.direction
    if init.kind == "uniform":
        r, s, t = d
        return AlphaValue(r * r - t * t, Fraction(1)), AlphaValue(s * s - t * t, Fraction(1))
    if init.kind == "symbolic":
        raise ValueError("L/R coefficients need numeric initial data")
    cache = TSolutionCache(init)
    num = cache._value_rec(i + 1, j, k) * cache._value_rec(i - 1, j, k)
    den = cache._value_rec(i, j, k + 1) * cache._value_rec(i, j, k - 1)
    ell = num / den
    if isinstance(ell, AlphaValue):
        ell = ell.rational(d)
    one = Fraction(1)
    return ell, one - ell


# ---------------------------------------------------------------------------
# closed-form transition functions (r = s, both odd)


def _eta(m: int, r: int, t: int) -> int:
    h = (t - r) // 2
    return m // t + (m - h) // (t - r) - (m - (t - r)) // (t - r)


def _mu(m: int, t: int) -> int:
    return 2 * ((m + t) // (2 * t))


def _mu_prime(m: int, t: int) -> int:
    return 2 * (m // (2 * t)) + 1


_F_SWAPS = {
    (0, 0): (0, 1, 2, 3),
    (1, 0): (3, 2, 1, 0),  # a<->d, b<->c
    (0, 1): (1, 0, 3, 2),  # a<->b, c<->d
    (1, 1): (2, 3, 0, 1),  # a<->c, b<->d
}


def transition_f(d: SlantDirection, weights, i: int, k: int, m: int) -> AlphaValue:
    """f_{i,k}(m): the exact theta-recursion multiplier (r = s, r,t odd)."""
    r, s, t = d
    if r != s or r % 2 == 0 or t % 2 == 0:
        raise ValueError("closed-form transitions need r = s with r, t odd")
    perm = _F_SWAPS[(i % 2, k % 2)]
    a, b, c, dd = (Fraction(weights[p]) for p in perm)
    h = (t - r) // 2
    exp = (r + t) // 2 * (4 * m + r + t - 1)
    num = (Fraction(a * a + dd * dd, 2) ** _eta(m, r, t)) * \
          (Fraction(b * b + c * c, 2) ** _eta(m - h, r, t))
    den = (a ** _mu_prime(m, t)) * (b ** _mu(m - h, t)) * \
          (c ** _mu_prime(m - h, t)) * (dd ** _mu(m, t))
    return AlphaValue(exp, num / den)


def theta_value(d: SlantDirection, weights, i: int, k: int, m: int) -> AlphaValue:
    """theta^{2m}_{i,k} built from the transition recursion (r = s, r,t odd)."""
    r, s, t = d
    if m < 0:
        raise ValueError("m must be non-negative")
    if m <= (t + r - 2) // 2:
        # initial layer: t'_{i,k} on plane P_{2m}
        a, b, c, dd = (Fraction(w) for w in weights)
        w = {(0, 0): a, (0, 1): b, (1, 1): c, (1, 0): dd}[(i % 2, k % 2)]
        return AlphaValue(m * (2 * m - 1), w)
    step = (r + t) // 2
    prev = theta_value(d, weights, i - 1, k - 1, m - step)
    return prev * transition_f(d, weights, i - 1, k - 1, m - step)


def periodic_theta(d: SlantDirection, weights, parity, m: int) -> AlphaValue:
    """f_{i,k}(m) for the given (i,k) parity pair."""
    i, k = parity
    return transition_f(d, weights, i, k, m)


# ---------------------------------------------------------------------------
# periodic L/R tables


def sigma_tau(weights):
    a, b, c, dd = (Fraction(w) for w in weights)
    sigma = b * b / (b * b + c * c)
    tau = a * a / (a * a + dd * dd)
    return sigma, tau


def periodic_lr_table(d: SlantDirection, a, b, c, dd) -> dict:
    """Exact L/R table for 2x2-periodic initial data with r = s.

    Keys: (i mod 2, k mod 2, m mod 2t) when r and t are both odd
    (plane index is 2m), else (i mod 2, m mod 4t).  Values: (L, R).
    """
    r, s, t = d
    if r != s:
        raise ValueError("2x2-periodic tables require r = s")
    if gcd(r, t) != 1:
        raise ValueError("need gcd(r, t) = 1")
    weights = (a, b, c, dd)
    if r % 2 == 1 and t % 2 == 1:
        out = {}
        for ip in (0, 1):
            for kp in (0, 1):
                for mc in range(2 * t):
                    m = mc + 2 * t  # shift into the bulk; table is 2t-periodic in m
                    fa = transition_f(d, weights, ip, kp - 2, m - t)
                    fb = transition_f(d, weights, ip - 1, kp - 1, m - (r + t) // 2)
                    ell = (fa / fb).rational(d)
                    out[(ip, kp, mc)] = (ell, 1 - ell)
        return out
    # opposite parity: derive by direct evolution (trust but verify)
    init = InitialData.periodic2x2(d, a, b, c, dd)
    cache = TSolutionCache(init)
    buckets = {}
    for i in range(0, 6):
        for j in range(0, 6):
            for k in range(height(d, i, j) + 1, height(d, i, j) + 14):
                if (i + j + k) % 2 == 0:
                    continue  # centers have odd coordinate sum
                num = cache._value_rec(i + 1, j, k) * cache._value_rec(i - 1, j, k)
                den = cache._value_rec(i, j, k + 1) * cache._value_rec(i, j, k - 1)
                ell = (num / den).rational(d)
                # table key follows the top point (i,j,k+1) of the relation
                m_top = plane_index(d, (i, j, k + 1))
                key = (i % 2, m_top % (4 * t))
                if key in buckets and buckets[key] != ell:
                    raise AssertionError(f"L not constant on class {key}")
                buckets[key] = ell
    if len(buckets) != 2 * 4 * t:
        raise AssertionError("incomplete L/R table")
    return {k: (v, 1 - v) for k, v in buckets.items()}
