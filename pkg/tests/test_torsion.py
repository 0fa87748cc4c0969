import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from bsdtwins.arith import small_primes
from bsdtwins.errors import SingularModel
from bsdtwins.model import WeierstrassModel, quadratic_twist
from bsdtwins.torsion import MAZUR, MordellWeilGroup, count_points_mod_p, torsion_subgroup, two_torsion_points

from conftest import load

PARI = load("torsion_pari.json")


def test_e1_torsion_is_z2(E1):
    T = torsion_subgroup(E1)
    assert T.structure == (2,)
    assert T.generators == ((0, 0),)
    assert str(T) == "Z/2Z"


def test_twisted_pair_torsion_is_z2(E1, E2):
    for E in (E1, E2):
        assert torsion_subgroup(quadratic_twist(E, 17)).structure == (2,)


def test_congruent_number_curve_full_two_torsion():
    E = WeierstrassModel(0, 0, 0, -1, 0)
    assert torsion_subgroup(E).structure == (2, 2)
    assert set(two_torsion_points(E)) == {(0, 0), (-1, 0), (1, 0)}


def test_two_torsion_points_of_pair(E1, E2):
    assert two_torsion_points(E1) == [(0, 0)]
    assert two_torsion_points(E2) == [(0, 0)]


def test_mordell_weil_display(E1):
    T = torsion_subgroup(E1)
    assert str(MordellWeilGroup(0, "proven-by-descent", T)) == "Z/2Z"
    assert str(MordellWeilGroup(None, "unknown", T)) == "Z^? x Z/2Z"


@pytest.mark.parametrize("rec", PARI, ids=lambda r: str(r["ainvs"]))
def test_against_pari(rec):
    E = WeierstrassModel(*rec["ainvs"])
    T = torsion_subgroup(E)
    assert sorted(T.structure) == rec["structure"]
    assert T.structure in MAZUR


@st.composite
def models(draw):
    a = [draw(st.integers(0, 1)), draw(st.integers(-1, 1)), draw(st.integers(0, 1))]
    a += [draw(st.integers(-200, 200)), draw(st.integers(-200, 200))]
    try:
        return WeierstrassModel(*a)
    except SingularModel:
        assume(False)


@settings(max_examples=80)
@given(models())
def test_torsion_order_divides_reductions(E):
    T = torsion_subgroup(E)
    assert T.structure in MAZUR
    for P, n in zip(T.generators, T.structure):
        assert E.order(P) == n
    for p in small_primes(100):
        if p > 2 and E.discriminant % p:
            assert count_points_mod_p(E, p) % T.order == 0


@settings(max_examples=60)
@given(st.integers(-50, 50), st.integers(-50, 50))
def test_two_torsion_points_are_two_torsion(A, B):
    assume(B != 0 and A * A != 4 * B)
    E = WeierstrassModel.from_ab(A, B)
    pts = two_torsion_points(E)
    assert pts[0] == (0, 0)
    for P in pts:
        assert E.on_curve(P) and E.order(P) == 2
    assert len(pts) == 2 ** torsion_subgroup(E).two_rank - 1
