import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from locproj.errors import BadRank, DegenerateGrading, NotSymmetric
from locproj.grassmann import (
    WeightList,
    enumerate_fixed_points,
    euler_localized,
    euler_report,
    martin_chi,
    residue_sum_check,
    symmetric_gamma,
    tangent_character,
    xi0,
    xid,
)
from locproj.models import AFFINE, affine_fixed_points, get_spec
from locproj.plethysm import SymFun, gamma_Am
from locproj.series import Character, Truncation

T = ("t",)
P1 = WeightList([(0,), (1,)])


def t_char(d):
    return Character({(k,): v for k, v in d.items()}, T)


def test_fixed_points_of_p1():
    pts = enumerate_fixed_points(P1, 1)
    assert sorted(str(p.U) for p in pts) == ["1", "t"]
    assert [tangent_character(p) for p in pts] == [t_char({-1: 1}), t_char({1: 1})]
    (full,) = enumerate_fixed_points(P1, 2)
    assert full.U == P1.character()
    with pytest.raises(BadRank):
        enumerate_fixed_points(P1, 3)
    with pytest.raises(BadRank):
        enumerate_fixed_points(P1, -1)


def test_affine_weights_contain_U0():
    spec = get_spec("affine-sl2")
    Z = WeightList.from_character(spec.Z_trunc(2, 1))
    U0 = dict(affine_fixed_points(1))[0]
    assert U0 == Character({(-1, 1): 1, (-1, -1): 1}, AFFINE)
    assert any(p.U == U0 for p in enumerate_fixed_points(Z, 2))


def test_affine_cotangent_at_identity_tends_to_closed_form():
    # dual(T) at U_0 is q/(1-q)^2 (z^2 + 2 + z^-2) through q-degree n
    n = 6
    spec = get_spec("affine-sl2")
    U0 = dict(affine_fixed_points(n))[0]
    Zk = spec.Z_trunc(n + 2, n)
    cot = (U0 * (Zk - U0).dual()).dual().truncate((1, 0), n)
    target = {}
    for d in range(1, n + 1):
        for e, c in ((2, 1), (0, 2), (-2, 1)):
            target[(d, e)] = d * c
    assert cot == Character(target, AFFINE)


@pytest.mark.parametrize("m", range(6))
def test_p1_line_bundles(m):
    chi = euler_localized(P1, 1, lambda U: U.det() ** m, N=10)
    assert chi.as_dict() == {i: 1 for i in range(m + 1)}
    assert xi0({m: 1}, P1, N=10).as_dict() == chi.as_dict()


def test_p1_dual_line_bundle_vanishes():
    assert euler_localized(P1, 1, lambda U: U.det() ** -1, N=10).as_dict() == {}
    assert xi0({-1: 1}, P1, N=10).as_dict() == {}
    assert xi0({0: 1}, P1, N=10).as_dict() == {0: 1}


def test_full_rank_is_a_point():
    Z = WeightList([(0,), (2,), (5,)])
    assert euler_localized(Z, 3, N=6).as_dict() == {0: 1}


def test_degenerate_grading():
    Z = WeightList([(1, 0), (0, 1)])
    with pytest.raises(DegenerateGrading):
        euler_localized(Z, 1, grading=(1, 1))


@pytest.mark.parametrize("f, Z", [({m: 1}, P1) for m in range(6)] + [({0: 1}, WeightList([(3,)])), ({-2: 1}, WeightList([(0,), (1,), (3,)]))])
def test_residue_sum_examples(f, Z):
    rep = residue_sum_check(f, Z, N=12)
    assert rep["match"] and rep["first_mismatch"] is None


def test_xid_sign_convention_for_even_and_odd_d():
    # xi0 + (-1)^d xid equals the localized sum for both parities of |Z|
    for Z in (P1, WeightList([(0,), (1,), (4,)])):
        for m in (-4, -1, 0, 3):
            loc = euler_localized(Z, 1, lambda U: U.det() ** m, N=12)
            d = len(Z)
            total = xi0({m: 1}, Z, N=12) + xid({m: 1}, Z, N=12).scale((-1) ** d)
            assert total.agrees(loc)


@given(
    st.lists(st.integers(-6, 8), min_size=1, max_size=5, unique=True),
    st.integers(-6, 6),
)
def test_residue_identity_property(grades, m):
    Z = WeightList([(g,) for g in grades])
    assert residue_sum_check({m: 1}, Z, N=12)["match"]


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))), st.integers(0, 10**6))
def test_structure_sheaf_has_chi_one(nk, seed):
    size, n = nk
    grades = random.Random(seed).sample(range(-8, 9), size)
    Z = WeightList([(g,) for g in grades])
    assert euler_localized(Z, n, N=8).as_dict() == {0: 1}


F_CHOICES = [None, SymFun.e(1), SymFun.e(2), SymFun.e(1, 1)]


@given(st.integers(0, 10**6), st.integers(0, 3))
def test_martin_equals_localized(seed, fi):
    rng = random.Random(seed)
    size = rng.randint(1, 6)
    n = rng.randint(1, min(3, size))
    grades = rng.sample(range(-6, 9), size)
    Z = WeightList([(g,) for g in grades])
    f = F_CHOICES[fi]
    if f is not None and f.max_index() > n:
        f = SymFun.e(1)
    m = rng.randint(0, 2)
    loc = euler_localized(Z, n, lambda U: gamma_Am(U, m, f), N=10)
    g = symmetric_gamma(n, m, f)
    assert martin_chi(Z, n, g, N=10).agrees(loc)
    assert martin_chi(Z, n, g, N=10, method="borel_weil").agrees(loc)


def test_martin_examples():
    Z = WeightList([(0,), (1,), (2,)])
    one = euler_localized(Z, 2, N=8)
    assert martin_chi(Z, 2, N=8) == one == martin_chi(Z, 2, N=8, method="borel_weil")
    e1 = euler_localized(Z, 2, lambda U: U, N=8)
    assert martin_chi(Z, 2, symmetric_gamma(2, 0, SymFun.e(1)), N=8).agrees(e1)
    x = ("x1", "x2")
    with pytest.raises(NotSymmetric):
        martin_chi(Z, 2, Character({(1, 0): 1}, x), N=8)


def test_euler_report_cross_check():
    rep = euler_report(P1, 1, 3, cross_check=True)
    assert rep["chi"] == {"0": "1", "1": "1", "2": "1", "3": "1"}
    assert rep["match"] is True


def test_localization_terms_are_schedule_independent(monkeypatch):
    Z = WeightList([(g,) for g in (0, 1, 3, 4, 7)])
    seq = euler_localized(Z, 2, lambda U: U.det() ** 2, N=10)
    monkeypatch.setenv("LOCPROJ_THREADS", "4")
    par = euler_localized(Z, 2, lambda U: U.det() ** 2, N=10)
    assert seq == par and isinstance(seq, Truncation)
