"""Real period of the global minimal model.

Roots of 4x^3 + b2 x^2 + 2 b4 x + b6 are isolated by bisection on exact
rational sign evaluations; only the final AGM runs in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import Inconsistent, NegativeDiscriminantUnsupported
from .localdata import GlobalData, global_data, minimal_scaling
from .model import WeierstrassModel

DEFAULT_DIGITS = 60


@dataclass(frozen=True)
class RealPeriod:
    value: mpmath.mpf
    u: int  # Delta(model) = u^12 Delta_min
    digits: int = DEFAULT_DIGITS
    method: str = "agm"

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError("a real period is positive")

    def display(self, digits: int = 12) -> str:
        return mpmath.nstr(self.value, digits)

    def __str__(self) -> str:
        return self.display()


def agm(a, b, digits: int = DEFAULT_DIGITS):
    with mpmath.workdps(digits + 10):
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        if a <= 0 or b <= 0:
            raise ValueError("agm needs positive arguments")
        eps = mpmath.mpf(10) ** (-(digits + 5))
        while abs(a - b) > eps * a:
            a, b = (a + b) / 2, mpmath.sqrt(a * b)
        a = (a + b) / 2
    return +a


def _cubic(E: WeierstrassModel) -> list[int]:
    """4x^3 + b2 x^2 + 2 b4 x + b6, lowest degree first."""
    return [E.b6, 2 * E.b4, E.b2, 4]


def _eval(poly, x):
    acc = 0
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def isolate_real_roots(poly: list[int], bits: int) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational brackets (lo, hi), ascending, each holding one root of a squarefree cubic.

    Brackets are shrunk until hi - lo <= 2^-bits * max(1, |lo|).
    """
    bound = 1 + Fraction(max(abs(c) for c in poly[:-1]), abs(poly[-1]))
    b = Fraction(2 ** (bound.numerator // bound.denominator + 1).bit_length())
    expected = 3 if _cubic_discriminant(poly) > 0 else 1
    d0, d1, d2 = poly[1], 2 * poly[2], 3 * poly[3]
    disc = d1 * d1 - 4 * d2 * d0
    dps = 30
    while True:
        breaks = [-b, b]
        if disc > 0:
            with mpmath.workdps(dps):
                s = mpmath.sqrt(disc)
                breaks[1:1] = sorted(Fraction(str(mpmath.mpf(-d1 + e * s) / (2 * d2))) for e in (-1, 1))
        signs = [_sign(_eval(poly, x)) for x in breaks]
        changes = [i for i in range(len(breaks) - 1) if signs[i] * signs[i + 1] < 0]
        if len(changes) == expected:
            break
        # a critical point approximation fell on the wrong side of a root
        dps *= 2
    return [_bisect(poly, breaks[i], breaks[i + 1], bits) for i in changes]


def _cubic_discriminant(poly: list[int]) -> int:
    d, c, b, a = poly
    return b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d + 18 * a * b * c * d


def _bisect(poly, lo: Fraction, hi: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    slo = _sign(_eval(poly, lo))
    tol = Fraction(1, 2**bits)
    while hi - lo > tol * max(1, abs(lo)):
        mid = (lo + hi) / 2
        s = _sign(_eval(poly, mid))
        if s == 0:
            return mid, mid
        if s == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _roots(E: WeierstrassModel, digits: int) -> list:
    bits = int(digits * 3.33) + 40
    brackets = isolate_real_roots(_cubic(E), bits)
    return [mpmath.mpf(lo.numerator) / lo.denominator for lo, _ in brackets]


def real_period(
    E: WeierstrassModel,
    digits: int = DEFAULT_DIGITS,
    fallback: bool = True,
    gd: GlobalData | None = None,
) -> RealPeriod:
    """Omega of the global minimal model isomorphic to E, counting every real component."""
    u = minimal_scaling(E, gd or global_data(E))
    if E.discriminant < 0:
        if not fallback:
            raise NegativeDiscriminantUnsupported("Delta < 0: only the quadrature fallback is available")
        with mpmath.workdps(digits):
            return RealPeriod(+(period_by_quadrature(E, digits) * u), u, digits, "quadrature")
    with mpmath.workdps(digits + 20):
        e3, e2, e1 = _roots(E, digits + 20)
        omega = 2 * mpmath.pi / agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2), digits + 15)
        value = omega * u
    with mpmath.workdps(digits):
        return RealPeriod(+value, u, digits, "agm")


def period_by_quadrature(E: WeierstrassModel, digits: int = 30):
    """Integral of |dx/(2y + a1 x + a3)| over E(R) for the given model, by quadrature."""
    with mpmath.workdps(digits + 15):
        roots = _roots(E, digits + 15)
        f = _cubic(E)
        e1 = roots[-1]
        # x = e1 + t^2 on the unbounded component
        fp = sum(i * c * e1 ** (i - 1) for i, c in enumerate(f) if i)
        fpp2 = 6 * 4 * e1 / 2 + f[2]
        total = 2 * mpmath.quad(lambda t: 2 / mpmath.sqrt(4 * t**4 + fpp2 * t**2 + fp), [0, 1, mpmath.inf])
        if len(roots) == 3:
            e3, e2 = roots[0], roots[1]
            # x = e3 + (e2 - e3) sin^2 theta on the bounded component
            total += 2 * mpmath.quad(
                lambda th: 1 / mpmath.sqrt(e1 - e3 - (e2 - e3) * mpmath.sin(th) ** 2), [0, mpmath.pi / 2]
            )
    return +total


def period_equality_check(
    E1: WeierstrassModel,
    E2: WeierstrassModel,
    c1: dict[int, int],
    c2: dict[int, int],
    parity: str = "unknown",
    digits: int = DEFAULT_DIGITS,
) -> str:
    """'equal', 'not-equal' or 'unknown'.

    With matching Tamagawa numbers the periods agree exactly when the
    analytic rank is even. With mismatched Tamagawa numbers only the
    numerics are consulted, which can refute equality but never prove it.
    """
    if parity not in ("even", "odd", "unknown"):
        raise ValueError(f"parity must be even, odd or unknown, not {parity!r}")
    w1, w2 = real_period(E1, digits).value, real_period(E2, digits).value
    with mpmath.workdps(digits):
        close = abs(w1 - w2) <= mpmath.mpf(10) ** -40 * max(w1, w2)
    if c1 != c2 or parity == "unknown":
        return "unknown" if close else "not-equal"
    predicted = parity == "even"
    if predicted != close:
        raise Inconsistent(f"criterion predicts equal={predicted} but |Omega1 - Omega2| says {close}")
    return "equal" if predicted else "not-equal"
