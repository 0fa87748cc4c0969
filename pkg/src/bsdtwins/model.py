"""Integral Weierstrass models, their invariants, point arithmetic and twists."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .arith import is_squarefree
from .errors import NotShortForm, NotSquarefree, SingularModel

# The point at infinity is represented by None throughout.
INFINITY = None
Point = Optional[tuple]


@dataclass(frozen=True)
class DerivedInvariants:
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    discriminant: int
    j: Fraction


@dataclass(frozen=True)
class WeierstrassModel:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        if self.discriminant == 0:
            raise SingularModel(f"singular model {self.ainvs}")

    @classmethod
    def from_ab(cls, A: int, B: int) -> "WeierstrassModel":
        """y^2 = x(x^2 + A x + B)."""
        return cls(0, A, 0, B, 0)

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self) -> int:
        return self.a1 * self.a1 + 4 * self.a2

    @property
    def b4(self) -> int:
        return self.a1 * self.a3 + 2 * self.a4

    @property
    def b6(self) -> int:
        return self.a3 * self.a3 + 4 * self.a6

    @property
    def b8(self) -> int:
        a1, a2, a3, a4, a6 = self.ainvs
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self) -> int:
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self) -> int:
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j(self) -> Fraction:
        return Fraction(self.c4**3, self.discriminant)

    def is_ab_form(self) -> bool:
        return self.a1 == 0 and self.a3 == 0 and self.a6 == 0

    @property
    def ab(self) -> tuple[int, int]:
        if not self.is_ab_form():
            raise NotShortForm(f"{self.ainvs} is not of the form y^2 = x(x^2+Ax+B)")
        return (self.a2, self.a4)

    # coordinate changes -------------------------------------------------

    def rst(self, r: int, s: int, t: int) -> "WeierstrassModel":
        """Model for x = x' + r, y = y' + s x' + t."""
        a1, a2, a3, a4, a6 = self.ainvs
        return WeierstrassModel(
            a1 + 2 * s,
            a2 - s * a1 + 3 * r - s * s,
            a3 + r * a1 + 2 * t,
            a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
            a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
        )

    def scale(self, u: int) -> "WeierstrassModel":
        """Model with a_i multiplied by u**i (x' = u^2 x, y' = u^3 y)."""
        a1, a2, a3, a4, a6 = self.ainvs
        return WeierstrassModel(u * a1, u**2 * a2, u**3 * a3, u**4 * a4, u**6 * a6)

    def unscale(self, u: int) -> "WeierstrassModel":
        """Inverse of scale; every a_i must be divisible by u**i."""
        q = []
        for a, i in zip(self.ainvs, (1, 2, 3, 4, 6)):
            if a % u**i:
                raise ValueError(f"cannot divide {self.ainvs} by {u}")
            q.append(a // u**i)
        return WeierstrassModel(*q)

    # points ---------------------------------------------------------------

    def on_curve(self, P: Point, mod: int | None = None) -> bool:
        if P is None:
            return True
        x, y = P
        a1, a2, a3, a4, a6 = self.ainvs
        lhs = y * y + a1 * x * y + a3 * y
        rhs = x**3 + a2 * x * x + a4 * x + a6
        if mod is None:
            return lhs == rhs
        return (lhs - rhs) % mod == 0

    def neg(self, P: Point, mod: int | None = None) -> Point:
        if P is None:
            return None
        x, y = P
        ny = -y - self.a1 * x - self.a3
        return (x, ny % mod) if mod else (x, ny)

    def add(self, P: Point, Q: Point, mod: int | None = None) -> Point:
        """Chord-tangent addition over Q, or over F_p when mod=p is given."""
        if P is None:
            return Q
        if Q is None:
            return P
        a1, a2, a3, a4, a6 = self.ainvs
        x1, y1 = P
        x2, y2 = Q

        def div(a, b):
            if mod is None:
                return Fraction(a) / b
            return a * pow(b, -1, mod) % mod

        def same(a, b):
            return a == b if mod is None else (a - b) % mod == 0

        if same(x1, x2):
            if not same(y1 + y2 + a1 * x2 + a3, 0):
                den = 2 * y1 + a1 * x1 + a3
                lam = div(3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1, den)
                nu = div(-x1**3 + a4 * x1 + 2 * a6 - a3 * y1, den)
            else:
                return None
        else:
            lam = div(y2 - y1, x2 - x1)
            nu = div(y1 * x2 - y2 * x1, x2 - x1)
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        if mod is not None:
            return (x3 % mod, y3 % mod)
        return (x3, y3)

    def double(self, P: Point, mod: int | None = None) -> Point:
        return self.add(P, P, mod)

    def mul(self, n: int, P: Point, mod: int | None = None) -> Point:
        if n < 0:
            return self.mul(-n, self.neg(P, mod), mod)
        R = None
        while n:
            if n & 1:
                R = self.add(R, P, mod)
            P = self.add(P, P, mod)
            n >>= 1
        return R

    def order(self, P: Point, bound: int = 12) -> int:
        """Order of P if at most bound, else 0."""
        Q = P
        for k in range(1, bound + 1):
            if Q is None:
                return k
            Q = self.add(Q, P)
        return 0

    def __str__(self) -> str:
        return "[" + ",".join(str(a) for a in self.ainvs) + "]"


def derived_invariants(E: WeierstrassModel) -> DerivedInvariants:
    return DerivedInvariants(E.b2, E.b4, E.b6, E.b8, E.c4, E.c6, E.discriminant, E.j)


def quadratic_twist(E: WeierstrassModel, D: int) -> WeierstrassModel:
    """E^D : y^2 = x^3 + a2 D x^2 + a4 D^2 x + a6 D^3."""
    if E.a1 or E.a3:
        raise NotShortForm("twisting is defined for a1 = a3 = 0 only")
    if not is_squarefree(D):
        raise NotSquarefree(f"{D} is not squarefree")
    return WeierstrassModel(0, E.a2 * D, 0, E.a4 * D * D, E.a6 * D**3)


def is_isomorphic(E: WeierstrassModel, F: WeierstrassModel) -> bool:
    """Q-isomorphism via c4, c6: F is E scaled by some rational u."""
    if E.j != F.j:
        return False
    c4, c6, d4, d6 = E.c4, E.c6, F.c4, F.c6
    if c6 == 0:
        # j = 1728: need d4/c4 a fourth power
        return _is_rational_power(Fraction(d4, c4), 4)
    if c4 == 0:
        return _is_rational_power(Fraction(d6, c6), 6)
    u2 = Fraction(d6 * c4, c6 * d4)
    return _is_rational_power(u2, 2) and u2 * u2 * c4 == d4 and u2**3 * c6 == d6


def _is_rational_power(x: Fraction, k: int) -> bool:
    if x <= 0:
        return False
    return all(_iroot(n, k) is not None for n in (x.numerator, x.denominator))


def _iroot(n: int, k: int) -> int | None:
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo if lo**k == n else None


def integer_roots_cubic(b: int, c: int, d: int) -> list[int]:
    """Integer roots of x^3 + b x^2 + c x + d, by exact bisection."""
    f = lambda x: ((x + b) * x + c) * x + d
    roots = set()
    # critical points of the cubic bound monotone pieces
    disc = b * b - 3 * c
    cuts: list[Fraction] = []
    if disc > 0:
        from math import isqrt

        s = isqrt(disc)
        cuts = [Fraction(-b - s - 1, 3), Fraction(-b + s + 1, 3)]
    bound = 1 + max(abs(b), abs(c), abs(d))
    pts = [-bound] + [int(x) for x in cuts] + [bound]
    pts = sorted(set(pts))
    # scan integer points in a small window around each cut, then bisect between
    for p0 in pts:
        for x in range(p0 - 2, p0 + 3):
            if f(x) == 0:
                roots.add(x)
    for lo, hi in zip(pts, pts[1:]):
        flo, fhi = f(lo), f(hi)
        if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
            continue
        while hi - lo > 1:
            mid = (lo + hi) // 2
            fm = f(mid)
            if fm == 0:
                roots.add(mid)
                break
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi = mid
    return sorted(r for r in roots if f(r) == 0)


def to_ab_forms(E: WeierstrassModel) -> list[tuple[int, int]]:
    """All (A, B) models y^2 = x(x^2+Ax+B) isomorphic to E, one per rational 2-torsion point.

    Completing the square and scaling x by 4 gives Y^2 = X^3 + b2 X^2 + 8 b4 X + 16 b6,
    whose rational roots are integers.
    """
    b2, b4, b6 = E.b2, E.b4, E.b6
    out = []
    for r in integer_roots_cubic(b2, 8 * b4, 16 * b6):
        A = 3 * r + b2
        B = 3 * r * r + 2 * b2 * r + 8 * b4
        out.append(_reduce_ab(A, B))
    return out


def _reduce_ab(A: int, B: int) -> tuple[int, int]:
    """Divide out u with u^2 | A, u^4 | B (the model stays integral and isomorphic)."""
    from .arith import factor

    for p, _ in factor(B).factors:
        while A % (p * p) == 0 and B % p**4 == 0:
            A //= p * p
            B //= p**4
    return A, B


_AB_RE = re.compile(r"^\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")
_AINV_RE = re.compile(r"^\[\s*-?\d+(\s*,\s*-?\d+){4}\s*\]$")


def parse_curve(text: str) -> WeierstrassModel:
    """Parse "[a1,a2,a3,a4,a6]" or "(A,B)"; raises ValueError on malformed input."""
    text = text.strip()
    m = _AB_RE.match(text)
    if m:
        return WeierstrassModel.from_ab(int(m.group(1)), int(m.group(2)))
    if _AINV_RE.match(text):
        return WeierstrassModel(*json.loads(text))
    raise ValueError(f"cannot parse curve {text!r}")


def coefficients_of(values: Sequence[int]) -> WeierstrassModel:
    if len(values) == 2:
        return WeierstrassModel.from_ab(*values)
    if len(values) == 5:
        return WeierstrassModel(*values)
    raise ValueError("expected 2 or 5 integers")
