"""Rational torsion via reduction bounds and Nagell-Lutz enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .arith import factor, is_square, jacobi, small_primes
from .model import Point, WeierstrassModel, integer_roots_cubic

MAZUR = {(n,) for n in range(2, 11)} | {(12,), ()} | {(2, 2 * n) for n in range(1, 5)}


@dataclass(frozen=True)
class TorsionGroup:
    structure: tuple[int, ...]  # () trivial, (n,) cyclic, (2, 2n) otherwise
    generators: tuple = ()
    points: tuple = field(default=(), compare=False, repr=False)

    @property
    def order(self) -> int:
        return math.prod(self.structure)

    @property
    def two_rank(self) -> int:
        return sum(1 for n in self.structure if n % 2 == 0)

    def two_primary(self) -> tuple[int, ...]:
        out = []
        for n in self.structure:
            k = 1
            while n % 2 == 0:
                n //= 2
                k *= 2
            if k > 1:
                out.append(k)
        return tuple(out)

    def __str__(self) -> str:
        if not self.structure:
            return "0"
        return " x ".join(f"Z/{n}Z" for n in self.structure)


@dataclass(frozen=True)
class MordellWeilGroup:
    rank: int | None
    provenance: str  # proven-by-descent | assumed | external | unknown
    torsion: TorsionGroup

    def __str__(self) -> str:
        if self.rank == 0:
            return str(self.torsion)
        r = "Z^?" if self.rank is None else f"Z^{self.rank}"
        return r if not self.torsion.structure else f"{r} x {self.torsion}"


def count_points_mod_p(E: WeierstrassModel, p: int) -> int:
    """#E(F_p) for an odd prime p of good reduction of this model."""
    b2, b4, b6 = E.b2, E.b4, E.b6
    total = p + 1
    for x in range(p):
        v = (((4 * x + b2) * x + 2 * b4) * x + b6) % p
        if v:
            total += jacobi(v, p)
    return total


def torsion_bound(E: WeierstrassModel, nprimes: int = 8, limit: int = 400) -> int:
    disc = E.discriminant
    g = 0
    used = 0
    for p in small_primes(limit):
        if p == 2 or disc % p == 0:
            continue
        g = math.gcd(g, count_points_mod_p(E, p))
        used += 1
        if used >= nprimes or g == 1:
            break
    assert used >= 3 or g == 1
    return g


def two_torsion_points(E: WeierstrassModel) -> list[Point]:
    """Rational 2-torsion of y^2 = x(x^2 + Ax + B)."""
    A, B = E.ab
    pts = [(Fraction(0), Fraction(0))]
    disc = A * A - 4 * B
    if is_square(disc):
        s = math.isqrt(disc)
        for r in sorted({Fraction(-A - s, 2), Fraction(-A + s, 2)}):
            pts.append((r, Fraction(0)))
    return pts


def _divisors_with_square_dividing(n: int) -> list[int]:
    f = factor(n)
    ranges = [[p**k for k in range(e // 2 + 1)] for p, e in f.factors]
    return sorted(math.prod(c) for c in product(*ranges))


def _nagell_lutz_points(E: WeierstrassModel, bound: int) -> list[Point]:
    # Y^2 = X^3 + a X + b with X = 36x + 3b2, Y = 108(2y + a1 x + a3)
    a = -27 * E.c4
    b = -54 * E.c6
    disc = 4 * a**3 + 27 * b * b
    found = []
    for Y in [0] + _divisors_with_square_dividing(abs(disc)):
        for X in integer_roots_cubic(0, a, b - Y * Y):
            for sY in {Y, -Y}:
                x = Fraction(X - 3 * E.b2, 36)
                y = (Fraction(sY, 108) - E.a1 * x - E.a3) / 2
                P = (x, y)
                if not E.on_curve(P):
                    continue
                k = E.order(P)
                if k and bound % k == 0:
                    found.append(P)
    return found


def torsion_subgroup(E: WeierstrassModel) -> TorsionGroup:
    bound = torsion_bound(E)
    if bound == 1:
        return TorsionGroup((), (), (None,))
    points = None
    if E.is_ab_form():
        two = two_torsion_points(E)
        if len(two) + 1 == bound:
            points = [None] + two
    if points is None:
        points = [None] + sorted(set(_nagell_lutz_points(E, bound)))
    return _structure(E, points)


def _structure(E: WeierstrassModel, points: list[Point]) -> TorsionGroup:
    n = len(points)
    orders = {P: E.order(P) for P in points if P is not None}
    twos = [P for P, k in orders.items() if k == 2]
    if n == 1:
        structure, gens = (), ()
    elif len(twos) == 3:
        m = n // 2
        P = next(P for P, k in orders.items() if k == m)
        sub = {E.mul(i, P) for i in range(m)}
        Q = next(T for T in twos if T not in sub)
        structure, gens = (2, m), (P, Q)
    else:
        P = next(P for P, k in orders.items() if k == n)
        structure, gens = (n,), (P,)
    assert structure in MAZUR, f"torsion {structure} violates Mazur's theorem"
    return TorsionGroup(structure, gens, tuple(points))
