"""Tate's algorithm and the global aggregation of local reduction data."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .arith import factor, jacobi
from .model import WeierstrassModel

_COMPONENTS = {"II": 1, "III": 2, "IV": 3, "IV*": 7, "III*": 8, "II*": 9}


@dataclass(frozen=True, order=True)
class KodairaSymbol:
    kind: str  # one of I, II, III, IV, I*, IV*, III*, II*
    n: int = 0  # only meaningful for I and I*

    @property
    def components(self) -> int:
        if self.kind == "I":
            return max(self.n, 1)
        if self.kind == "I*":
            return self.n + 5
        return _COMPONENTS[self.kind]

    def __str__(self) -> str:
        if self.kind == "I":
            return f"I{self.n}"
        if self.kind == "I*":
            return f"I{self.n}*"
        return self.kind

    def latex(self) -> str:
        if self.kind in ("I", "I*"):
            sub = str(self.n) if self.n < 10 else "{%d}" % self.n
            return f"I_{sub}" + ("^*" if self.kind == "I*" else "")
        if self.kind.endswith("*"):
            return self.kind[:-1] + "^*"
        return self.kind

    def pari_code(self) -> int:
        """Integer encoding used by PARI and the LMFDB."""
        if self.kind == "I":
            return 1 if self.n == 0 else self.n + 4
        if self.kind == "I*":
            return -1 if self.n == 0 else -(self.n + 4)
        return {"II": 2, "III": 3, "IV": 4, "II*": -2, "III*": -3, "IV*": -4}[self.kind]

    @classmethod
    def from_pari_code(cls, code: int) -> "KodairaSymbol":
        if code == 1:
            return cls("I", 0)
        if code == -1:
            return cls("I*", 0)
        if code > 4:
            return cls("I", code - 4)
        if code < -4:
            return cls("I*", -code - 4)
        return cls({2: "II", 3: "III", 4: "IV", -2: "II*", -3: "III*", -4: "IV*"}[code])

    @classmethod
    def parse(cls, text: str) -> "KodairaSymbol":
        t = text.replace("_", "").replace("^", "").replace("{", "").replace("}", "").strip()
        m = re.fullmatch(r"I(\d+)(\*?)", t)
        if m:
            return cls("I*" if m.group(2) else "I", int(m.group(1)))
        if t in ("II", "III", "IV", "II*", "III*", "IV*"):
            return cls(t)
        raise ValueError(f"unknown Kodaira symbol {text!r}")


I0 = KodairaSymbol("I", 0)


@dataclass(frozen=True)
class LocalData:
    p: int
    kodaira: KodairaSymbol
    f: int
    c: int
    m: int
    v_delta_min: int
    reduction: str  # good, split, nonsplit, additive

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "kodaira": str(self.kodaira),
            "f": self.f,
            "c": self.c,
            "m": self.m,
            "v_delta_min": self.v_delta_min,
        }


@dataclass(frozen=True)
class GlobalData:
    conductor: int
    delta_min: int
    local: dict[int, LocalData] = field(default_factory=dict)

    @property
    def bad_primes(self) -> list[int]:
        return [p for p, ld in sorted(self.local.items()) if ld.f > 0]

    def tamagawa(self) -> dict[int, int]:
        return {p: self.local[p].c for p in self.bad_primes}

    def kodaira(self) -> dict[int, KodairaSymbol]:
        return {p: self.local[p].kodaira for p in self.bad_primes}


def _val(x: int, p: int) -> int:
    if x == 0:
        return 10**9
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _has_root_quadratic(a: int, b: int, c: int, p: int) -> bool:
    """Whether a x^2 + b x + c has a root in F_p."""
    a, b, c = a % p, b % p, c % p
    if a == 0:
        return b != 0 or c == 0
    if p == 2:
        return any((a * x * x + b * x + c) % 2 == 0 for x in (0, 1))
    d = (b * b - 4 * a * c) % p
    return d == 0 or jacobi(d, p) == 1


def _polymulmod(f: list[int], g: list[int], m: list[int], p: int) -> list[int]:
    # polynomials as coefficient lists, low degree first; m monic
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] = (out[i + j] + x * y) % p
    return _polymod(out, m, p)


def _polymod(f: list[int], m: list[int], p: int) -> list[int]:
    f = f[:]
    dm = len(m) - 1
    while len(f) - 1 >= dm:
        lead = f[-1] % p
        if lead:
            shift = len(f) - 1 - dm
            for i, c in enumerate(m):
                f[shift + i] = (f[shift + i] - lead * c) % p
        f.pop()
    while f and f[-1] % p == 0:
        f.pop()
    return f


def _polygcd_degree(f: list[int], g: list[int], p: int) -> int:
    f = [x % p for x in f]
    g = [x % p for x in g]
    while g and g[-1] == 0:
        g.pop()
    while g:
        inv = pow(g[-1], -1, p)
        g = [x * inv % p for x in g]
        f, g = g, _polymod(f, g, p)
    return len(f) - 1


def _count_cubic_roots(b: int, c: int, d: int, p: int) -> int:
    """Number of distinct roots in F_p of T^3 + b T^2 + c T + d."""
    if p < 200:
        return sum(1 for t in range(p) if (((t + b) * t + c) * t + d) % p == 0)
    cubic = [d % p, c % p, b % p, 1]
    # x^p mod cubic, then gcd(cubic, x^p - x)
    result, base, e = [1], [0, 1], p
    while e:
        if e & 1:
            result = _polymulmod(result, base, cubic, p)
        base = _polymulmod(base, base, cubic, p)
        e >>= 1
    result = result + [0] * (2 - len(result) + 1)
    result[1] = (result[1] - 1) % p
    while result and result[-1] == 0:
        result.pop()
    if not result:
        return 3
    return _polygcd_degree(cubic, result, p)


def tate_algorithm(E: WeierstrassModel, p: int) -> LocalData:
    """Local reduction data of E at p, minimizing the model along the way."""
    C = E
    while True:
        n = _val(C.discriminant, p)
        if n == 0:
            return LocalData(p, I0, 0, 1, 1, 0, "good")
        a1, a2, a3, a4, a6 = C.ainvs
        b2, b4, b6, b8 = C.b2, C.b4, C.b6, C.b8
        c4, c6 = C.c4, C.c6
        half = pow(2, -1, p) if p != 2 else None
        # move the singular point of the reduction to (0, 0)
        if p == 2:
            if b2 % 2 == 0:
                r = a4 % 2
                t = (((r + a2) * r + a4) * r + a6) % 2
            else:
                r = a3 % 2  # a1 is odd
                t = (a4 + r * r) % 2
        elif p == 3:
            if b2 % 3 == 0:
                r = (-b6) % 3
            else:
                r = (-pow(b2, -1, 3) * b4) % 3
            t = (a1 * r + a3) % 3
        else:
            if c4 % p == 0:
                r = (-pow(12, -1, p) * b2) % p
            else:
                r = (-pow(12 * c4, -1, p) * (c6 + b2 * c4)) % p
            t = (-half * (a1 * r + a3)) % p
        C = C.rst(r, 0, t)
        a1, a2, a3, a4, a6 = C.ainvs
        b2, b4, b6, b8 = C.b2, C.b4, C.b6, C.b8

        if c4 % p:
            # multiplicative: split iff the tangent directions are rational
            split = _has_root_quadratic(1, a1, -a2, p)
            cp = n if split else (2 if n % 2 == 0 else 1)
            return LocalData(p, KodairaSymbol("I", n), 1, cp, n, n, "split" if split else "nonsplit")
        if _val(a6, p) < 2:
            return LocalData(p, KodairaSymbol("II"), n, 1, 1, n, "additive")
        if _val(b8, p) < 3:
            return LocalData(p, KodairaSymbol("III"), n - 1, 2, 2, n, "additive")
        if _val(b6, p) < 3:
            cp = 3 if _has_root_quadratic(1, a3 // p, -a6 // p**2, p) else 1
            return LocalData(p, KodairaSymbol("IV"), n - 2, cp, 3, n, "additive")

        # p | a1, a2; p^2 | a3, a4; p^3 | a6
        if p == 2:
            s = a2 % 2
            t = 2 * ((a6 // 4) % 2)
        elif p == 3:
            s, t = a1, a3
        else:
            s = -a1 * half
            t = -a3 * half
        C = C.rst(0, s, t)
        a1, a2, a3, a4, a6 = C.ainvs

        # auxiliary cubic T^3 + b T^2 + c T + d
        b, c, d = a2 // p, a4 // p**2, a6 // p**3
        w = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
        x = 3 * c - b * b
        if w % p:
            cp = 1 + _count_cubic_roots(b, c, d, p)
            return LocalData(p, KodairaSymbol("I*", 0), n - 4, cp, 5, n, "additive")

        if x % p:
            # double root: move it to T = 0, then peel off powers of p
            if p == 2:
                r = c % 2
            elif p == 3:
                r = c * pow(b, -1, 3)
            else:
                r = (b * c - 9 * d) * pow(2 * x, -1, p)
            C = C.rst(p * (r % p), 0, 0)
            a1, a2, a3, a4, a6 = C.ainvs
            ix, iy, mx, my = 3, 3, p * p, p * p
            while True:
                a2t, a3t = a2 // p, a3 // my
                a4t, a6t = a4 // (p * mx), a6 // (mx * my)
                if (a3t * a3t + 4 * a6t) % p:
                    cp = 4 if _has_root_quadratic(1, a3t, -a6t, p) else 2
                    break
                if p == 2:
                    t = my * (a6t % 2)
                else:
                    t = my * ((-a3t * half) % p)
                C = C.rst(0, 0, t)
                a1, a2, a3, a4, a6 = C.ainvs
                my *= p
                iy += 1
                a2t, a3t = a2 // p, a3 // my
                a4t, a6t = a4 // (p * mx), a6 // (mx * my)
                if (a4t * a4t - 4 * a6t * a2t) % p:
                    cp = 4 if _has_root_quadratic(a2t, a4t, a6t, p) else 2
                    break
                if p == 2:
                    r = mx * ((a6t * pow(a2t, -1, 2)) % 2)
                else:
                    r = mx * ((-a4t * pow(2 * a2t, -1, p)) % p)
                C = C.rst(r, 0, 0)
                a1, a2, a3, a4, a6 = C.ainvs
                mx *= p
                ix += 1
            m = ix + iy - 5
            return LocalData(p, KodairaSymbol("I*", m), n - m - 4, cp, m + 5, n, "additive")

        # triple root: move it to T = 0
        if p == 2:
            r = b
        elif p == 3:
            r = -d
        else:
            r = -b * pow(3, -1, p)
        C = C.rst(p * (r % p), 0, 0)
        a1, a2, a3, a4, a6 = C.ainvs
        x3t, x6t = a3 // p**2, a6 // p**4
        if (x3t * x3t + 4 * x6t) % p:
            cp = 3 if _has_root_quadratic(1, x3t, -x6t, p) else 1
            return LocalData(p, KodairaSymbol("IV*"), n - 6, cp, 7, n, "additive")
        if p == 2:
            t = -4 * (x6t % 2)
        else:
            t = p * p * ((-x3t * half) % p)
        C = C.rst(0, 0, t)
        a1, a2, a3, a4, a6 = C.ainvs
        if _val(a4, p) < 4:
            return LocalData(p, KodairaSymbol("III*"), n - 7, 2, 8, n, "additive")
        if _val(a6, p) < 6:
            return LocalData(p, KodairaSymbol("II*"), n - 8, 1, 9, n, "additive")
        # the model was not minimal at p
        C = C.unscale(p)


def ogg_check(ld: LocalData) -> bool:
    return ld.v_delta_min == ld.f + ld.m - 1


def global_data(E: WeierstrassModel) -> GlobalData:
    disc = E.discriminant
    local = {}
    conductor = 1
    dmin = 1
    for p in factor(disc).primes:
        ld = tate_algorithm(E, p)
        local[p] = ld
        conductor *= p**ld.f
        dmin *= p**ld.v_delta_min
    sign = 1 if disc > 0 else -1
    return GlobalData(conductor, sign * dmin, local)


def minimal_scaling(E: WeierstrassModel, gd: GlobalData | None = None) -> int:
    """The integer u with Delta(E) = u^12 * Delta_min."""
    gd = gd or global_data(E)
    u = 1
    for p, ld in gd.local.items():
        diff = _val(E.discriminant, p) - ld.v_delta_min
        assert diff % 12 == 0
        u *= p ** (diff // 12)
    return u
