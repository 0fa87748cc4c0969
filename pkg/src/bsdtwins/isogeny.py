"""Rational 2-isogenies between curves y^2 = x(x^2 + Ax + B)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import squarefree_part
from .errors import SingularModel
from .model import Point, WeierstrassModel


def _raw_codomain(A: int, B: int) -> tuple[int, int]:
    return (-2 * A, A * A - 4 * B)


@dataclass(frozen=True)
class TwoIsogeny:
    """The isogeny with kernel {O, (0,0)} from domain (A, B).

    The formula (x, y) -> (y^2/x^2, y(B - x^2)/x^2) lands on (-2A, A^2-4B);
    ``scale`` u then identifies that curve with ``codomain`` via
    (x, y) -> (x/u^2, y/u^3).
    """

    domain: tuple[int, int]
    codomain: tuple[int, int]
    scale: int = 1

    @property
    def domain_model(self) -> WeierstrassModel:
        return WeierstrassModel.from_ab(*self.domain)

    @property
    def codomain_model(self) -> WeierstrassModel:
        return WeierstrassModel.from_ab(*self.codomain)

    def __call__(self, P: Point, mod: int | None = None) -> Point:
        if P is None:
            return None
        x, y = P
        if (x == 0) if mod is None else (x % mod == 0):
            return None
        B = self.domain[1]
        u = self.scale
        if mod is None:
            x, y = Fraction(x), Fraction(y)
            X = y * y / (x * x)
            Y = y * (B - x * x) / (x * x)
            return (X / u**2, Y / u**3)
        inv = pow(x * x * u**2, -1, mod)
        X = y * y * inv % mod
        Y = y * (B - x * x) * inv * pow(u, -1, mod) % mod
        return (X, Y)


def two_isogeny(A: int, B: int) -> TwoIsogeny:
    if B * (A * A - 4 * B) == 0:
        raise SingularModel(f"(A, B) = ({A}, {B}) is singular")
    return TwoIsogeny((A, B), _raw_codomain(A, B), 1)


def dual_isogeny(iso: TwoIsogeny) -> TwoIsogeny:
    """The isogeny back to iso.domain whose composite with iso is [2]."""
    A2, B2 = iso.codomain
    rawA, rawB = _raw_codomain(A2, B2)
    A, B = iso.domain
    for u in (1, 2):
        if rawA == u * u * A and rawB == u**4 * B:
            return TwoIsogeny((A2, B2), (A, B), u)
    raise ValueError("codomain does not match the dual formula")


def twist_isogeny(iso: TwoIsogeny, D: int) -> TwoIsogeny:
    (A, B), (A2, B2) = iso.domain, iso.codomain
    return TwoIsogeny((A * D, B * D * D), (A2 * D, B2 * D * D), iso.scale)


def two_division_field(E: WeierstrassModel) -> int:
    """Squarefree s with Q(E[2]) = Q(sqrt(s))."""
    A, B = E.ab
    return squarefree_part(A * A - 4 * B)


def is_balanced(iso: TwoIsogeny) -> bool:
    return two_division_field(iso.domain_model) == two_division_field(iso.codomain_model)
