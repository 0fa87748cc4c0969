"""Descent via 2-isogeny: torsor local solubility, Selmer groups, rank and Sha[2].

For an isogeny onto y^2 = x(x^2 + a x + b) (after the scaling identification)
the class d in Q(S,2) is represented by the quartic torsor

    C_d : d w^2 = d^2 + a d z^2 + b z^4.

Over Q_p we look for z in Z_p with d * (d^2 + a d z^2 + b z^4) a square, and
for t = 1/z in pZ_p with d * (b + a d t^2 + d^2 t^4) a square; t = 0 is the
pair of points at infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .arith import factor, is_square_in_Qp, squarefree_part
from .errors import SelmerClosureError, UndecidedAtDepth
from .isogeny import TwoIsogeny, dual_isogeny
from .torsion import TorsionGroup

INF = "inf"

NON_RESIDUE = "non-residue"
ODD_VALUATION = "odd-valuation"
REAL_SIGN = "real-sign"

_BIG = 10**9


@dataclass(frozen=True)
class TorsorQuartic:
    d: int
    a: int
    b: int

    @property
    def coefficients(self) -> tuple[int, int, int]:
        """(d^2, a d, b) in d w^2 = d^2 + a d z^2 + b z^4."""
        return (self.d * self.d, self.a * self.d, self.b)

    def __str__(self) -> str:
        c0, c2, c4 = self.coefficients
        return f"{self.d}*w^2 = {c0} + {c2}*z^2 + {c4}*z^4"


@dataclass(frozen=True)
class LocalCertificate:
    place: object
    soluble: bool
    witness: str | None = None
    reasons: dict = field(default_factory=dict)  # chart -> sorted tuple of insolubility reasons

    @property
    def categories(self) -> frozenset:
        return frozenset(r for rs in self.reasons.values() for r in rs)

    def as_dict(self) -> dict:
        out = {"soluble": self.soluble}
        if self.soluble:
            out["witness"] = self.witness
        else:
            out["reasons"] = {k: list(v) for k, v in sorted(self.reasons.items())}
        return out


@dataclass(frozen=True)
class SelmerContext:
    iso: TwoIsogeny
    places: tuple
    basis: tuple


@dataclass(frozen=True)
class SelmerGroup:
    direction: str
    places: tuple
    elements: frozenset
    certificates: dict = field(compare=False, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def dimension(self) -> int:
        return self.order.bit_length() - 1

    def as_dict(self) -> dict:
        classes = []
        for d in sorted(self.certificates, key=_class_key):
            certs = self.certificates[d]
            classes.append(
                {
                    "d": d,
                    "soluble_at": {str(v): certs[v].as_dict() for v in self.places},
                    "in_selmer": d in self.elements,
                }
            )
        return {
            "direction": self.direction,
            "S": [str(v) for v in self.places],
            "classes": classes,
            "elements": sorted(self.elements, key=_class_key),
            "dimension": self.dimension,
        }


@dataclass(frozen=True)
class DescentVerdict:
    sel_phi_dim: int
    sel_phihat_dim: int
    sel2_bounds: tuple[int, int]  # upper bounds for dim Sel^2 of E1 and E2
    rank: tuple[int, int]  # interval, proven when both ends agree
    sha2_dims: tuple[tuple[int, int], tuple[int, int]]
    tamagawa_ratio: Fraction

    @property
    def rank_proven(self) -> bool:
        return self.rank[0] == self.rank[1]

    @property
    def sha2_trivial(self) -> bool:
        return all(iv == (0, 0) for iv in self.sha2_dims)


def _class_key(d: int) -> tuple[int, int]:
    return (abs(d), d < 0)


def selmer_context(iso: TwoIsogeny) -> SelmerContext:
    """Places: infinity, 2 and every prime dividing Delta(domain) * Delta(codomain)."""
    disc = iso.domain_model.discriminant * iso.codomain_model.discriminant
    primes = sorted(set(factor(disc).primes) | {2})
    return SelmerContext(iso, (INF, *primes), (-1, *primes))


def q_s_2(ctx: SelmerContext | tuple) -> list[int]:
    basis = ctx.basis if isinstance(ctx, SelmerContext) else tuple(ctx)
    out = set()
    for k in range(len(basis) + 1):
        for combo in combinations(basis, k):
            out.add(math.prod(combo))
    return sorted(out, key=_class_key)


def torsor(iso: TwoIsogeny, d: int) -> TorsorQuartic:
    a, b = iso.codomain
    return TorsorQuartic(d, a, b)


# --- local solubility --------------------------------------------------------


def _val(x: int, p: int) -> int:
    if x == 0:
        return _BIG
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _quartic_disc_valuation(t: TorsorQuartic, p: int) -> int:
    # d*(d^2 + a d z^2 + b z^4): discriminant 16 * b d * d^3 * (a^2 d^4 - 4 b d^4)^2
    d, a, b = t.d, t.a, t.b
    return _val(16 * b * d**4, p) + 2 * (4 * _val(d, p) + _val(a * a - 4 * b, p))


def _search(poly: list[int], p: int, start: tuple[int, int], cap: int, reasons: set):
    """Search x = x0 + p^nu Z_p for poly(x) a square in Q_p.

    poly holds integer coefficients, lowest degree first. Returns a witness
    string or None; leaf insolubility reasons are added to ``reasons``.
    """
    # dividing by an even power of p keeps the square class
    k = min(_val(c, p) for c in poly if c) // 2
    poly = [c // p ** (2 * k) for c in poly]
    deriv = [i * c for i, c in enumerate(poly)][1:]
    slack = 3 if p == 2 else 1
    stack = [start]
    while stack:
        x0, nu = stack.pop()
        gx = _horner(poly, x0)
        if is_square_in_Qp(gx, p):
            return f"x={x0} mod {p}^{nu}: value is a square"
        l = _val(gx, p)
        m = _val(_horner(deriv, x0), p)
        if l > 2 * m and l - m >= nu:
            return f"x={x0} mod {p}^{nu}: Hensel root of the quartic"
        if l + slack <= min(m + nu, 2 * nu):
            # square class is constant on the disc
            reasons.add(ODD_VALUATION if l % 2 else NON_RESIDUE)
            continue
        if nu >= cap:
            raise UndecidedAtDepth(f"no certificate at depth {nu} for x={x0} mod {p}^{nu}")
        step = p**nu
        for i in range(p - 1, -1, -1):
            stack.append((x0 + i * step, nu + 1))
    return None


def _horner(poly: list[int], x: int) -> int:
    acc = 0
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def _real_soluble(t: TorsorQuartic) -> LocalCertificate:
    d, a, b = t.d, t.a, t.b
    if d > 0:
        return LocalCertificate(INF, True, "z=0")
    if b * d > 0:
        return LocalCertificate(INF, True, "points at infinity")
    # d < 0 < b: need b u^2 + a d u + d^2 <= 0 for some u >= 0
    if a * d < 0 and a * a >= 4 * b:
        return LocalCertificate(INF, True, "z^2 at the minimum of the quartic")
    return LocalCertificate(INF, False, reasons={"real": (REAL_SIGN,)})


def locally_soluble(t: TorsorQuartic, v, depth_cap: int | None = None) -> tuple[bool, LocalCertificate]:
    if v == INF:
        cert = _real_soluble(t)
        return cert.soluble, cert
    p = int(v)
    d, a, b = t.d, t.a, t.b
    if is_square_in_Qp(Fraction(b, d), p):
        cert = LocalCertificate(p, True, "points at infinity")
        return True, cert
    cap = depth_cap or (_quartic_disc_valuation(t, p) + 2 * _val(2 * d, p) + 3)
    affine = [d**3, 0, a * d * d, 0, b * d]
    at_infinity = [b * d, 0, a * d * d, 0, d**3]
    reasons: dict[str, set] = {"affine": set(), "infinity": set()}
    w = _search(affine, p, (0, 0), cap, reasons["affine"])
    if w is None:
        w = _search(at_infinity, p, (0, 1), cap, reasons["infinity"])
        if w is not None:
            w = "t=1/z, " + w
    if w is not None:
        return True, LocalCertificate(p, True, w)
    cert = LocalCertificate(p, False, reasons={k: tuple(sorted(s)) for k, s in reasons.items()})
    return False, cert


# --- Selmer groups -------------------------------------------------------------


def _descent_isogeny(iso: TwoIsogeny, direction: str) -> TwoIsogeny:
    if direction == "phi":
        return iso
    if direction == "phihat":
        return dual_isogeny(iso)
    raise ValueError(f"direction must be 'phi' or 'phihat', not {direction!r}")


def selmer_group(iso: TwoIsogeny, direction: str = "phi", depth_cap: int | None = None) -> SelmerGroup:
    """Sel^phi(E1) for direction 'phi', Sel^phihat(E2) for 'phihat'."""
    psi = _descent_isogeny(iso, direction)
    ctx = selmer_context(iso)
    certificates = {}
    elements = set()
    for d in q_s_2(ctx):
        t = torsor(psi, d)
        certs = {}
        for v in ctx.places:
            _, certs[v] = locally_soluble(t, v, depth_cap)
        certificates[d] = certs
        if all(c.soluble for c in certs.values()):
            elements.add(d)
    for d1 in elements:
        for d2 in elements:
            if squarefree_part(d1 * d2) not in elements:
                raise SelmerClosureError(f"{d1}*{d2} missing from the {direction}-Selmer set")
    return SelmerGroup(direction, ctx.places, frozenset(elements), certificates)


def sel2_bound_and_deduce(
    e: int, f: int, tors1: TorsionGroup, tors2: TorsionGroup, tamagawa_ratio: Fraction | None = None
) -> DescentVerdict:
    """Bound Sel^2 of both curves from the phi / phihat Selmer dimensions.

    dim Sel^2(E1) <= e + f - dim E2(Q)[phihat]/phi(E1(Q)[2]); the quotient is
    one-dimensional exactly when (0,0) is the only rational 2-torsion point.
    """
    t1, t2 = tors1.two_rank, tors2.two_rank
    q1 = 1 if t1 == 1 else 0
    q2 = 1 if t2 == 1 else 0
    bound1, bound2 = e + f - q1, e + f - q2
    rank_hi = max(0, min(bound1 - t1, bound2 - t2))
    sha = []
    for bound, t in ((bound1, t1), (bound2, t2)):
        sha.append((0, max(0, bound - t)))
    if tamagawa_ratio is None:
        tamagawa_ratio = Fraction(2**e, 2**f)
    return DescentVerdict(e, f, (bound1, bound2), (0, rank_hi), (sha[0], sha[1]), tamagawa_ratio)


def tamagawa_ratio(iso: TwoIsogeny, depth_cap: int | None = None) -> Fraction:
    return Fraction(selmer_group(iso, "phi", depth_cap).order, selmer_group(iso, "phihat", depth_cap).order)


@dataclass(frozen=True)
class DescentResult:
    sel_phi: SelmerGroup
    sel_phihat: SelmerGroup
    verdict: DescentVerdict


def descend(iso: TwoIsogeny, tors1: TorsionGroup, tors2: TorsionGroup, depth_cap: int | None = None) -> DescentResult:
    s1 = selmer_group(iso, "phi", depth_cap)
    s2 = selmer_group(iso, "phihat", depth_cap)
    ratio = Fraction(s1.order, s2.order)
    return DescentResult(s1, s2, sel2_bound_and_deduce(s1.dimension, s2.dimension, tors1, tors2, ratio))
