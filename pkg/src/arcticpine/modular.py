"""Prime-field helpers for interpolation-based elimination.

The elimination pipeline evaluates huge integer polynomials on grids,
which is far cheaper modulo word-sized primes.  Results are lifted back
to the integers by Chinese remaindering with a stability stop (adding a
prime must leave the balanced lift unchanged) and the callers verify the
lift against exact rational evaluations at held-out points.
"""

from __future__ import annotations

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_stream(start: int = (1 << 61) - 1):
    """Primes at or below `start`, largest first."""
    n = start if start % 2 == 1 else start - 1
    while n > 2:
        if is_prime(n):
            yield n
        n -= 2


def balanced(x: int, m: int) -> int:
    """Symmetric representative of x mod m in (-m/2, m/2]."""
    x %= m
    return x - m if 2 * x > m else x


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """Residue mod m1*m2 matching r1 mod m1 and r2 mod m2 (coprime moduli)."""
    d = (r2 - r1) * pow(m1, -1, m2) % m2
    return r1 + m1 * d


# ---------------------------------------------------------------------------
# univariate polynomials over GF(p): ascending int coefficient lists


def trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def uni_rem_mod(a, b, p):
    """Remainder of a modulo b over GF(p); b nonzero, trailing-zero trimmed."""
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        c = a[-1] * inv % p
        a.pop()
        if c:
            for k in range(db):
                a[da - db + k] = (a[da - db + k] - c * b[k]) % p
        trim(a)
    return a


def uni_gcd_mod(a, b, p):
    """Monic gcd over GF(p)."""
    a = trim([x % p for x in a])
    b = trim([x % p for x in b])
    while b:
        a, b = b, uni_rem_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def uni_div_mod(a, b, p):
    """Exact quotient a / b over GF(p) (raises if the division leaves a rest)."""
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * (len(a) - db)
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        c = a[-1] * inv % p
        q[da - db] = c
        a.pop()
        if c:
            for k in range(db):
                a[da - db + k] = (a[da - db + k] - c * b[k]) % p
        trim(a)
    if a:
        raise ArithmeticError("inexact polynomial division over GF(p)")
    return q


def uni_deriv_mod(a, p):
    return trim([k * a[k] % p for k in range(1, len(a))])


def uni_squarefree_mod(a, p):
    """Monic square-free part a / gcd(a, a') over GF(p)."""
    a = trim([x % p for x in a])
    if len(a) <= 1:
        return [1] if a else []
    g = uni_gcd_mod(a, uni_deriv_mod(a, p), p)
    if len(g) == 1:
        q = list(a)
    else:
        q = uni_div_mod(a, g, p)
    inv = pow(q[-1], -1, p)
    return [x * inv % p for x in q]


def newton_interp_mod(xs, ys, p):
    """Coefficients (ascending) of the interpolating polynomial over GF(p)."""
    n = len(xs)
    c = [y % p for y in ys]
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            c[i] = (c[i] - c[i - 1]) * pow((xs[i] - xs[i - k]) % p, -1, p) % p
    res = []
    for i in range(n - 1, -1, -1):
        xi = xs[i]
        new = [0] * (len(res) + 1)
        for j, a in enumerate(res):
            new[j + 1] = (new[j + 1] + a) % p
            new[j] = (new[j] - xi * a) % p
        new[0] = (new[0] + c[i]) % p
        res = new
    return trim(res)


def det_mod(rows, p):
    """Determinant over GF(p) by Gaussian elimination (rows are mutated)."""
    n = len(rows)
    det = 1
    for k in range(n):
        piv = None
        for i in range(k, n):
            if rows[i][k] % p:
                piv = i
                break
        if piv is None:
            return 0
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            det = -det
        pivval = rows[k][k] % p
        det = det * pivval % p
        inv = pow(pivval, -1, p)
        rk = rows[k]
        for i in range(k + 1, n):
            c = rows[i][k] % p
            if c == 0:
                continue
            ratio = c * inv % p
            ri = rows[i]
            for j in range(k + 1, n):
                ri[j] = (ri[j] - ratio * rk[j]) % p
    return det % p
