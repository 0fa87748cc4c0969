"""End-to-end acceptance checks. Each criterion records one PASS/FAIL line,
printed in the terminal summary by conftest.py."""

import json
import random
import time

import mpmath
import pytest

from bsdtwins.arith import is_squarefree, squarefree_part
from bsdtwins.cli import main
from bsdtwins.descent import (
    NON_RESIDUE,
    ODD_VALUATION,
    locally_soluble,
    selmer_group,
    tamagawa_ratio,
    torsor,
)
from bsdtwins.errors import SingularModel
from bsdtwins.isogeny import dual_isogeny, two_isogeny, twist_isogeny
from bsdtwins.lmfdb_client import compute, crosscheck, fetch
from bsdtwins.localdata import global_data, ogg_check
from bsdtwins.model import WeierstrassModel, quadratic_twist
from bsdtwins.period import period_equality_check, real_period
from bsdtwins.report import EQUAL, verify_pair
from bsdtwins.twinsearch import alpha00, sieve_condition, sieve

from oracles import brute_local_soluble, sieve_oracle

RESULTS = {}

E1_AB = (25350, 2471625)
E2_AB = (-50700, 632736000)


def record(n, ok, detail):
    RESULTS[n] = (ok, detail)
    assert ok, detail


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_criterion_1_base_pair(capsys):
    t0 = time.perf_counter()
    code, out = run_cli(capsys, "verify", "38025.ck1", "38025.ck2", "--format", "json")
    elapsed = time.perf_counter() - t0
    entries = {e["name"]: e for e in json.loads(out)["entries"]}
    dmin = str(3**6 * 5**9 * 13**9)
    kod = {"3": "I0*", "5": "III*", "13": "III*"}
    tam = {"3": 2, "5": 2, "13": 2}
    checks = {
        "exit 0": code == 0,
        "conductor": entries["conductor"]["first"] == entries["conductor"]["second"] == 38025,
        "Delta_min": entries["minimal discriminant"]["first"] == entries["minimal discriminant"]["second"] == dmin,
        "j": (entries["j-invariant"]["first"], entries["j-invariant"]["second"]) == ("257^3", "17^3"),
        "torsion": entries["Mordell-Weil"]["first"]["torsion"] == entries["Mordell-Weil"]["second"]["torsion"] == [2],
        "Kodaira": entries["Kodaira symbols"]["first"] == entries["Kodaira symbols"]["second"] == kod,
        "Tamagawa": entries["Tamagawa numbers"]["first"] == entries["Tamagawa numbers"]["second"] == tam,
        "runtime < 5 s": elapsed < 5,
    }
    failed = [k for k, v in checks.items() if not v]
    record(1, not failed, f"base pair {elapsed:.2f}s" + (f", failed: {failed}" if failed else ""))


def test_criterion_2_descent_at_17():
    t0 = time.perf_counter()
    iso = twist_isogeny(two_isogeny(*E1_AB), 17)
    E1 = WeierstrassModel.from_ab(*E1_AB)
    E2 = WeierstrassModel.from_ab(*E2_AB)
    r = verify_pair(E1, E2, 17)
    sel_phi = selmer_group(iso, "phi")
    sel_phihat = selmer_group(iso, "phihat")
    elapsed = time.perf_counter() - t0
    s = r.selmer
    ok = (
        sel_phi.elements == {1, 65}
        and sel_phihat.dimension == 1
        and s["sel2_bounds"] == [1, 1]
        and s["rank"] == [0, 0]
        and s["sha2"] == [[0, 0], [0, 0]]
        and elapsed < 30
    )
    record(2, ok, f"Sel^phi={sorted(sel_phi.elements)}, dim Sel^phihat={sel_phihat.dimension}, "
           f"Sel2<={s['sel2_bounds']}, rank={s['rank']}, Sha[2]={s['sha2']}, {elapsed:.2f}s")


def test_criterion_3_local_insolubility_table():
    iso = twist_isogeny(two_isogeny(*E1_AB), 17)
    table = {2: 5, 13: 5, 17: 5, 85: 13, 34: 13, 170: 17, 10: 2}
    insoluble = {d: not locally_soluble(torsor(iso, d), p)[0] for d, p in table.items()}
    expected = {
        2: {"affine": (NON_RESIDUE,), "infinity": (ODD_VALUATION,)},
        17: {"affine": (NON_RESIDUE,), "infinity": (ODD_VALUATION,)},
    }
    cats_ok = all(locally_soluble(torsor(iso, d), table[d])[1].reasons == expected[d] for d in expected)
    cats_ok &= locally_soluble(torsor(iso, 10), 2)[1].categories == {NON_RESIDUE, ODD_VALUATION}
    ok = all(insoluble.values()) and cats_ok
    record(3, ok, f"insoluble at p(d): {insoluble}; categories match for d in (2, 17, 10): {cats_ok}")


def test_criterion_4_periods():
    E1 = WeierstrassModel.from_ab(*E1_AB)
    E2 = WeierstrassModel.from_ab(*E2_AB)
    w = real_period(E1).value
    w17 = real_period(quadratic_twist(E1, 17)).value
    with mpmath.workdps(60):
        rel = abs(w17 * mpmath.sqrt(17) - w) / w
    c = {3: 2, 5: 2, 13: 2}
    c17 = {**c, 17: 2}
    v1 = period_equality_check(E1, E2, c, c, "even")
    v17 = period_equality_check(quadratic_twist(E1, 17), quadratic_twist(E2, 17), c17, c17, "even")
    ok = abs(w - mpmath.mpf("0.209")) <= 0.001 and rel <= mpmath.mpf(10) ** -30 and v1 == v17 == "equal"
    record(4, ok, f"Omega(E1)={mpmath.nstr(w, 12)}, twist law rel err {mpmath.nstr(rel, 3)}, verdicts {v1}/{v17}")


@pytest.fixture(scope="module")
def sieved():
    pair = tuple(WeierstrassModel.from_ab(*ab) for ab in (E1_AB, E2_AB))
    return sieve(sieve_condition(), 300, pair=pair)


def test_criterion_5_pipeline_equal_for_each_sieved_d(sieved):
    E1 = WeierstrassModel.from_ab(*E1_AB)
    E2 = WeierstrassModel.from_ab(*E2_AB)
    verdicts = {D: verify_pair(E1, E2, D).overall for D in sieved}
    assert sieved == sieve_oracle(300)
    assert all(v == EQUAL for v in verdicts.values()), verdicts


@pytest.mark.xfail(strict=True, reason="113 satisfies every sieve condition; see the decisions ledger")
def test_criterion_5_sieve_list(sieved):
    E1 = WeierstrassModel.from_ab(*E1_AB)
    E2 = WeierstrassModel.from_ab(*E2_AB)
    equal = all(verify_pair(E1, E2, D).overall == EQUAL for D in sieved)
    record(5, sieved == [17, 233, 257] and equal,
           f"sieve D<=300 gives {sieved} (expected [17, 233, 257]); pipeline EQUAL for each: {equal}")


def test_criterion_6_tamagawa_ratio():
    base = two_isogeny(*E1_AB)
    taus = {D: tamagawa_ratio(twist_isogeny(base, D)) for D in (17, 233, 257)}
    record(6, all(t == 1 for t in taus.values()), f"tau = {{{', '.join(f'{D}: {t}' for D, t in taus.items())}}}")


def _random_model(rng):
    while True:
        a = [rng.randint(0, 1), rng.randint(-1, 1), rng.randint(0, 1), rng.randint(-500, 500), rng.randint(-500, 500)]
        try:
            return WeierstrassModel(*a)
        except SingularModel:
            continue


def _points_mod(E, p):
    return [None] + [(x, y) for x in range(p) for y in range(p) if E.on_curve((x, y), p)]


def test_criterion_7_property_suites():
    rng = random.Random(7)
    failures = {}

    ogg = sum(not ogg_check(ld) for _ in range(500) for ld in global_data(_random_model(rng)).local.values())
    failures["Ogg (500 models)"] = ogg

    closure = 0
    for A in range(-12, 13, 3):
        for B in range(-12, 13, 4):
            if B == 0 or A * A == 4 * B:
                continue
            for direction in ("phi", "phihat"):
                sel = selmer_group(two_isogeny(A, B), direction)
                closure += sum(
                    1 for d1 in sel.elements for d2 in sel.elements
                    if squarefree_part(d1 * d2) not in sel.elements
                )
    failures["Selmer closure"] = closure

    iso = two_isogeny(*E1_AB)
    dual = dual_isogeny(iso)
    E, F = iso.domain_model, iso.codomain_model
    comp = sum(dual(iso(P, 31), 31) != E.mul(2, P, 31) for P in _points_mod(E, 31))
    comp += sum(iso(dual(Q, 31), 31) != F.mul(2, Q, 31) for Q in _points_mod(F, 31))
    failures["dual o phi = [2] over F_31"] = comp

    disagree = compared = 0
    for A in range(-25, 26):
        for B in range(-25, 26):
            if B == 0 or A * A == 4 * B or 16 * B * B * abs(A * A - 4 * B) > 10**4:
                continue
            phi = two_isogeny(A, B)
            a, b = phi.codomain
            for d in (-1, 2, -3, 5, 6, -7, 13):
                for p in (2, 3, 5, 7, 11, 13):
                    expected = brute_local_soluble(d, a, b, p, max_level=8)
                    if expected is None:
                        continue
                    compared += 1
                    disagree += locally_soluble(torsor(phi, d), p)[0] != expected
    failures[f"local solubility vs mod p^8 enumeration ({compared} cases)"] = disagree

    twist = 0
    for _ in range(300):
        try:
            E = WeierstrassModel(0, rng.randint(-50, 50), 0, rng.randint(-50, 50), rng.randint(-50, 50))
        except SingularModel:
            continue
        D = rng.choice([-195, -15, -3, -1, 2, 3, 5, 13, 17, 21, 233, 1365])
        assert is_squarefree(D)
        T = quadratic_twist(E, D)
        twist += T.discriminant != D**6 * E.discriminant or T.j != E.j
    failures["twist laws"] = twist

    bad = {k: v for k, v in failures.items() if v}
    record(7, not bad, "zero failures: " + ", ".join(failures) if not bad else f"failures: {bad}")


def test_criterion_8_alpha():
    a = alpha00()
    record(8, abs(a - 0.28879) <= 1e-4, f"alpha_00 = {a:.10f}")


PAIRS = [
    ("38025.ck1", "38025.ck2"), ("38025.t1", "38025.t2"), ("38025.u1", "38025.u2"), ("38025.cl1", "38025.cl2"),
    ("207025.bf1", "207025.bf2"), ("207025.bu1", "207025.bu2"), ("207025.cj1", "207025.cj2"),
    ("4225.h1", "4225.h2"),
]


def test_criterion_9_fixture_crosschecks():
    discrepancies = {}
    for pair in PAIRS:
        recs = [fetch(label) for label in pair]
        for label, rec in zip(pair, recs):
            out = crosscheck(rec, compute(rec.model))
            if out:
                discrepancies[label] = out
        if recs[0].delta_min != recs[1].delta_min or recs[0].conductor != recs[1].conductor:
            discrepancies[pair] = "pair does not share conductor and Delta_min"
    twist = global_data(quadratic_twist(WeierstrassModel.from_ab(*E1_AB), -195))
    h1 = fetch("4225.h1")
    twist_ok = twist.conductor == h1.conductor == 4225 and twist.delta_min == h1.delta_min
    record(9, not discrepancies and twist_ok,
           f"{len(PAIRS)} pairs, discrepancies: {discrepancies or 'none'}; "
           f"twist by -195 matches 4225.h1: {twist_ok}")
