"""Sieving quadratic twist parameters D that keep the descent data of a pair fixed."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .arith import is_prime, is_squarefree, jacobi
from .isogeny import TwoIsogeny, twist_isogeny
from .model import WeierstrassModel, quadratic_twist
from .torsion import torsion_subgroup


@dataclass(frozen=True)
class TwistCondition:
    residues: tuple[tuple[int, frozenset], ...] = ()  # (modulus, allowed residues)
    symbols: tuple[tuple[int, int], ...] = ()  # (odd prime p, required Jacobi symbol (D/p))
    positive: bool = True
    coprime_to: int = 1
    prime_only: bool = True

    def __post_init__(self):
        for m, allowed in self.residues:
            if not allowed:
                raise ValueError(f"no admissible residue modulo {m}")

    def diagnostics(self, D: int) -> dict[str, bool]:
        out = {}
        if self.positive:
            out["D>0"] = D > 0
        if self.prime_only:
            out["prime"] = is_prime(D)
        else:
            out["squarefree"] = D != 0 and is_squarefree(D)
        if self.coprime_to != 1:
            out[f"gcd(D,{self.coprime_to})=1"] = math.gcd(D, self.coprime_to) == 1
        for m, allowed in self.residues:
            out[f"D mod {m} in {sorted(allowed)}"] = D % m in allowed
        for p, s in self.symbols:
            out[f"(D/{p})={s}"] = jacobi(D % p, p) == s
        return out

    def accepts(self, D: int) -> bool:
        return all(self.diagnostics(D).values())


def sieve_condition() -> TwistCondition:
    """Prime D > 0 with D = 1 mod 8, (D/3) = (D/5) = -1 and (D/13) = 1."""
    return TwistCondition(
        residues=((8, frozenset({1})),),
        symbols=((3, -1), (5, -1), (13, 1)),
        positive=True,
        coprime_to=2 * 3 * 5 * 13,
        prime_only=True,
    )


def _place_set(iso: TwoIsogeny) -> list[int]:
    from .descent import selmer_context

    return [v for v in selmer_context(iso).places if v != "inf"]


def generic_condition(iso: TwoIsogeny, D0: int, prime_only: bool = False) -> TwistCondition:
    """D with D*D0 a square in Q_v for every place v in S of the pair.

    Assumes gcd(D0, 2 * primes of S) = 1, so the 2-adic condition is
    D = D0 mod 8 and the odd ones are (D/p) = (D0/p).
    """
    primes = _place_set(iso)
    odd = [p for p in primes if p != 2]
    if any(D0 % p == 0 for p in primes):
        raise ValueError("D0 must be prime to 2 and to the bad primes of the pair")
    return TwistCondition(
        residues=((8, frozenset({D0 % 8})),),
        symbols=tuple((p, jacobi(D0 % p, p)) for p in odd),
        positive=D0 > 0,
        coprime_to=math.prod(primes),
        prime_only=prime_only,
    )


def _torsion_is_z2(args) -> bool:
    pair, D = args
    return all(torsion_subgroup(quadratic_twist(E, D)).structure == (2,) for E in pair)


def sieve(
    cond: TwistCondition,
    limit: int,
    pair: tuple[WeierstrassModel, WeierstrassModel] | None = None,
    workers: int = 1,
) -> list[int]:
    """Qualifying D <= limit, ascending.

    With ``pair`` given, D is kept only when both twists have torsion exactly Z/2.
    """
    if limit < 2:
        raise ValueError("limit must be at least 2")
    lo = 1 if cond.positive else -limit
    candidates = [D for D in range(lo, limit + 1) if D not in (0, 1) and cond.accepts(D)]
    if pair is None or not candidates:
        return candidates
    jobs = [(pair, D) for D in candidates]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            keep = list(pool.map(_torsion_is_z2, jobs))
    else:
        keep = [_torsion_is_z2(j) for j in jobs]
    return [D for D, k in zip(candidates, keep) if k]


def alpha00(terms: int = 64) -> float:
    """prod_{s=1}^{terms} (1 - 2^-s)."""
    out = 1.0
    for s in range(1, terms + 1):
        out *= 1.0 - 2.0**-s
    return out


@dataclass(frozen=True)
class SearchRow:
    D: int
    checks: dict = field(default_factory=dict)


def explain(cond: TwistCondition, limit: int) -> list[SearchRow]:
    return [SearchRow(D, cond.diagnostics(D)) for D in range(2, limit + 1) if cond.accepts(D)]


def twisted_pair_isogeny(iso: TwoIsogeny, D: int) -> TwoIsogeny:
    return twist_isogeny(iso, D)
