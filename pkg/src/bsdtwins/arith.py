"""Exact integer and rational kernels: factoring, residue symbols, p-adic squares."""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .errors import FactorBudgetExceeded, NotASquare

Rat = Union[int, Fraction]

TRIAL_LIMIT = 10**6
RHO_SEED = 20240917
RHO_ITERATIONS = 20_000_000

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i in range(limit + 1) if sieve[i]]


_PRIMES_CACHE: list[int] = []


def small_primes(limit: int = TRIAL_LIMIT) -> list[int]:
    """Primes up to limit; the table up to TRIAL_LIMIT is built once."""
    global _PRIMES_CACHE
    if limit > TRIAL_LIMIT:
        return _small_primes(limit)
    if not _PRIMES_CACHE:
        _PRIMES_CACHE = _small_primes(TRIAL_LIMIT)
    return _PRIMES_CACHE[: bisect.bisect_right(_PRIMES_CACHE, limit)]


def primes_up_to(limit: int) -> Iterator[int]:
    yield from small_primes(limit)


def is_prime(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases.

    Deterministic for n < 3.3e24; beyond that the error probability is
    below 4**-13 for any fixed input.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def value(self) -> int:
        v = self.sign
        for p, e in self.factors:
            v *= p**e
        return v

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def __str__(self) -> str:
        body = "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)
        if not body:
            body = "1"
        return ("-" if self.sign < 0 else "") + body


def _brent(n: int, rng: random.Random, budget: list[int]) -> int:
    """Pollard-Brent rho; returns a nontrivial factor of composite n."""
    if n % 2 == 0:
        return 2
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            budget[0] -= r
            if budget[0] <= 0:
                raise FactorBudgetExceeded(f"rho budget exhausted on {n}")
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factor(n: int, trial_limit: int = TRIAL_LIMIT, rho_iterations: int | None = None) -> Factorization:
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    trial_limit = min(trial_limit, TRIAL_LIMIT)
    out: dict[int, int] = {}
    bound = min(trial_limit, math.isqrt(n) + 1)
    if not _PRIMES_CACHE:
        small_primes(2)
    for p in _PRIMES_CACHE:
        if p > bound or n == 1:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
            bound = min(bound, math.isqrt(n) + 1)
            if n > 1 and p > 1000 and is_prime(n):
                break
        elif p == 997 and is_prime(n):
            break
    if n > 1:
        rng = random.Random(RHO_SEED)
        budget = [RHO_ITERATIONS if rho_iterations is None else rho_iterations]
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if m <= trial_limit**2 or is_prime(m):
                # every cofactor below trial_limit**2 with no small factor is prime
                out[m] = out.get(m, 0) + 1
                continue
            r = math.isqrt(m)
            if r * r == m:
                stack += [r, r]
                continue
            d = _brent(m, rng, budget)
            stack += [d, m // d]
    return Factorization(sign, tuple(sorted(out.items())))


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi symbol needs odd positive n")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for n > 0."""
    if n <= 0:
        raise ValueError("kronecker symbol needs positive n")
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    return result * jacobi(a, n) if n > 1 else result


def squarefree_part(n: int) -> int:
    if n == 0:
        raise ValueError("squarefree part of 0")
    f = factor(n)
    s = f.sign
    for p, e in f.factors:
        if e % 2:
            s *= p
    return s


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for _, e in factor(n).factors)


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def valuation(x: Rat, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of 0")
    return _ival(x.numerator, p) - _ival(x.denominator, p)


def _ival(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def unit_part(x: Rat, p: int) -> tuple[int, Fraction]:
    """Return (v, u) with x = p**v * u and u a p-adic unit."""
    x = Fraction(x)
    v = valuation(x, p)
    return v, x / Fraction(p) ** v


def is_square_in_Qp(x: Rat, p: int) -> bool:
    if isinstance(x, int):
        return _int_square_in_Qp(x, p)
    x = Fraction(x)
    if x == 0:
        return True
    v, u = unit_part(x, p)
    if v % 2:
        return False
    # u is a p-adic unit: reduce numerator * denominator (same square class)
    w = u.numerator * u.denominator
    if p == 2:
        return w % 8 == 1
    return jacobi(w % p, p) == 1


def _int_square_in_Qp(n: int, p: int) -> bool:
    if n == 0:
        return True
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    if v % 2:
        return False
    if p == 2:
        return n % 8 == 1
    return jacobi(n % p, p) == 1


def is_square_in_R(x: Rat) -> bool:
    return x >= 0


def hensel_lift_sqrt(u: int, p: int, target_precision: int) -> int:
    """Return r with r*r = u mod p**target_precision."""
    if not is_square_in_Qp(u, p):
        raise NotASquare(f"{u} is not a square in Z_{p}")
    mod = p**target_precision
    if u % mod == 0:
        return 0
    v = _ival(u, p)
    w = u // p**v
    need = target_precision - v  # r = p**(v/2) * s with s*s = w mod p**need
    if need <= 0:
        return p ** (v // 2) % mod
    if p == 2:
        s, k = 1, 3
        while k < need:
            if (s * s - w) % 2 ** (k + 1):
                s += 2 ** (k - 1)
            k += 1
    else:
        s, k = _sqrt_mod_prime(w, p), 1
        while k < need:
            k = min(2 * k, need)
            m = p**k
            s = (s - (s * s - w) * pow(2 * s, -1, m)) % m
    return p ** (v // 2) * s % mod


def _sqrt_mod_prime(a: int, p: int) -> int:
    """Tonelli-Shanks."""
    a %= p
    if a == 0 or p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        raise NotASquare(f"{a} is not a residue mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def sqrt_mod_prime(a: int, p: int) -> int:
    return _sqrt_mod_prime(a, p)
