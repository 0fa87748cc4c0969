"""Slow, independent reference computations used only by the tests."""

import math
from fractions import Fraction

from sympy import isprime


def legendre_symbol(a, p):
    """Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def ival(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def square_in_Qp(n, p):
    """Integer n != 0: square in Q_p by valuation parity and the unit's residue."""
    v = ival(n, p)
    if v % 2:
        return False
    u = n // p**v
    if p == 2:
        return u % 8 == 1
    return legendre_symbol(u % p, p) == 1


def _refine(poly, p, residues, level, max_level):
    """Residue classes z mod p^level; True if an exact square value shows up,
    False if every class ends with a pinned non-square value, None otherwise."""
    slack = 3 if p == 2 else 1
    while residues:
        nxt = []
        for z in residues:
            val = sum(c * z**i for i, c in enumerate(poly))
            if val == 0 or square_in_Qp(val, p):
                return True
            # poly(z + p^level h) = poly(z) mod p^level, so the class is pinned
            if ival(val, p) + slack <= level:
                continue
            nxt.extend(z + i * p**level for i in range(p))
        if level == max_level:
            return None if nxt else False
        residues = nxt
        level += 1
    return False


def brute_local_soluble(d, a, b, p, max_level=8):
    """d w^2 = d^2 + a d z^2 + b z^4 over Q_p, by exhaustive residue enumeration."""
    affine = [d**3, 0, a * d * d, 0, b * d]
    infinity = [b * d, 0, a * d * d, 0, d**3]
    r1 = _refine(affine, p, list(range(p)), 1, max_level)
    if r1:
        return True
    r2 = _refine(infinity, p, [0], 1, max_level)
    if r2:
        return True
    if r1 is False and r2 is False:
        return False
    return None


def rational_points_on_torsor(d, a, b, height):
    """Is there z = r/s, |r|, s <= height, with d*(d^2 s^4 + a d r^2 s^2 + b r^4) a square?"""
    q = Fraction(b, d)
    if q > 0 and math.isqrt(q.numerator) ** 2 == q.numerator and math.isqrt(q.denominator) ** 2 == q.denominator:
        return True
    for s in range(1, height + 1):
        for r in range(0, height + 1):
            if math.gcd(r, s) != 1:
                continue
            val = d * (d * d * s**4 + a * d * r * r * s * s + b * r**4)
            if val >= 0 and math.isqrt(val) ** 2 == val:
                return True
    return False


def sieve_oracle(limit):
    return [
        D
        for D in range(2, limit + 1)
        if isprime(D)
        and D % 8 == 1
        and legendre_symbol(D % 3, 3) == -1
        and legendre_symbol(D % 5, 5) == -1
        and legendre_symbol(D % 13, 13) == 1
    ]


def agm_steps(a, b, steps=10):
    for _ in range(steps):
        a, b = (a + b) / 2, math.sqrt(a * b)
    return a
