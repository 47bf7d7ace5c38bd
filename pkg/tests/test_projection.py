import json

import pytest

from locproj import _kernels
from locproj.errors import NoStabilization
from locproj.grassmann import WeightList, euler_localized
from locproj.models import get_spec, hilb_fixed_points, load_spec, pochhammer, spec_to_json
from locproj.projection import (
    Cutoffs,
    RestrictedData,
    check_conditions,
    lhs_chi_Y,
    m_scan,
    rhs_at,
    rhs_sum,
    rhs_term,
    term_valuations,
    valuation_bound,
    verify_projection,
)
from locproj.series import Character, RationalCharacter, expand
from locproj.projection import lhs_terms

HILB = get_spec("hilbert-plane")
CUSP = get_spec("cusp-curve")
AFF = get_spec("affine-sl2")


def user_spec(A=(), B_num=(), Z_num=(), den=(), C=()):
    def char(terms):
        return [{"coeff": str(c), "exps": [e]} for e, c in terms]

    rat_den = [{"exps": [g], "mult": 1} for g in den]
    return load_spec(
        {
            "variables": ["t"],
            "Z": {"num": char(Z_num), "den": rat_den},
            "A": char(A),
            "B": {"num": char(B_num), "den": rat_den},
            "C": char(C),
            "grading": [1],
        }
    )


def test_valuation_bound_trivial_data():
    spec = user_spec()
    assert [valuation_bound(spec, 3, i) for i in range(-3, 4)] == [3 * i for i in range(-3, 4)]


def test_valuation_bound_b_equals_d():
    # B = Z, so the b-sum cancels the d-sum and only the a-part survives
    spec = user_spec(A=[(-2, 1), (1, 2)], Z_num=[(0, 1)], B_num=[(0, 1)], den=[1])
    for i in range(-3, 4):
        a_part = (i - 2) if -2 <= -i else 0
        a_part += 2 * (i + 1) if 1 <= -i else 0
        assert valuation_bound(spec, 2, i) == 2 * i + a_part


@pytest.mark.parametrize("m", [1, 2])
def test_valuation_bound_against_brute_force(m):
    tv = term_valuations(HILB, m, 12, 12, 12)
    for i in range(-5, 6):
        if i in tv:
            assert valuation_bound(HILB, m, i) <= tv[i]


def test_lhs_single_point_is_direct_formula():
    ((label, t),) = lhs_terms(HILB, n=1, m=0, N=14)
    g = HILB.grading
    direct = RationalCharacter(Character.constant(1, ("t",)), {(g[0],): 1, (g[1],): 1})
    assert t == expand(direct, 14)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lhs_term_count_is_partition_count(n):
    assert len(lhs_terms(HILB, n=n, m=0, N=6)) == len(hilb_fixed_points(n)) == [1, 2, 3][n - 1]


def test_affine_lhs_is_inverse_pochhammer_up_to_part_size():
    # the finite model of level n sees partitions with parts <= 2n
    lhs = lhs_chi_Y(AFF, n=3, m=0, N=18)
    want = pochhammer(1, 6, inverse=True).as_dict()
    assert [lhs.coefficient(3 * a) for a in range(7)] == [want.get(a, 0) for a in range(7)]


def test_rhs_term_j0_is_euler_characteristic():
    cut = Cutoffs(8, 8, 8, 10, 40)
    rd = RestrictedData(HILB, 2)
    grades = rd.z_grades(8)
    want = euler_localized(WeightList.from_grades(grades), 2, lambda U: U.det(), N=10)
    assert rhs_term(HILB, 0, cut, n=2, m=1) == want


def test_rhs_term_vanishes_for_large_j():
    cut = Cutoffs(10, 10, 10, 10, 40)
    for j in (11, 12):
        assert rhs_term(HILB, j, cut, n=1, m=1).as_dict() == {}


def test_rhs_term_full_rank_single_point():
    spec = user_spec(A=[(-1, 1)], Z_num=[(0, 1), (1, 1), (3, 1)], B_num=[(0, 1), (1, 1), (3, 1)])
    cut = Cutoffs(3, 3, 2, 6, 40)
    term = rhs_term(spec, 2, cut, n=3, m=0)
    U = {0: 1, 1: 1, 3: 1}
    E = RestrictedData(spec, 3).E(U, 3)
    from locproj.plethysm import lambda_power

    lam = lambda_power(Character.from_univariate(E), 2).univariate()
    assert term.as_dict() == {d: c for d, c in lam.items() if d <= 6}


def test_rhs_sums_rows():
    cut = Cutoffs(10, 10, 4, 10, 40)
    total = rhs_at(HILB, cut, n=2, m=1)
    parts = [rhs_term(HILB, j, cut, n=2, m=1) for j in range(5)]
    acc = parts[0]
    for p in parts[1:]:
        acc = acc + p
    assert acc == total


def test_stabilization_survives_extra_raise():
    rd = RestrictedData(HILB, 2)
    series, trace, final = rhs_sum(HILB, Cutoffs(10, 10, 10, 10, 40), n=2, m=0)
    assert not trace[-1]["changed"]
    assert rhs_at(HILB, final.raised(1, rd.kmax()), n=2, m=0) == series
    assert all(isinstance(c, int) for c in series.coeffs)


def test_no_stabilization_is_reported_with_trace():
    with pytest.raises(NoStabilization) as info:
        rhs_sum(HILB, Cutoffs(10, 10, 10, 10, 40), n=2, m=0, budget=1)
    assert len(info.value.trace) == 2


def test_conditions_builtin_specs():
    assert check_conditions(HILB)["all_pass"]
    assert check_conditions(CUSP)["all_pass"]


def test_conditions_reject_c0():
    data = spec_to_json(CUSP)
    data["C"] = data["C"] + [{"coeff": "1", "exps": [0]}]
    rep = check_conditions(load_spec(data))
    assert not rep["conditions"]["c"]["pass"] and not rep["all_pass"]
    bad = verify_projection(load_spec(data), n=1, m=1)
    assert not bad.match and bad.exit_code() == 2


def test_conditions_cross_check_with_vanishing_filter():
    rep = check_conditions(HILB, n=2, vanishing_k=5)
    assert rep["conditions"]["e"]["vanishing_match"]


@pytest.mark.parametrize("n, m, want", [(2, 0, [1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6]), (3, 0, [1, 1, 2, 3, 4, 5, 7, 8, 10, 12, 14])])
def test_verify_hilbert_examples(n, m, want):
    rep = verify_projection(HILB, n=n, m=m, order=10)
    assert rep.match and rep.series_by_order("rhs") == want


def test_verify_user_spec_matches_builtin():
    data = spec_to_json(CUSP, n=2)
    data.pop("rank")
    rep = verify_projection(load_spec(data), n=2, m=1, order=10)
    assert rep.match
    assert rep.series_by_order("lhs") == verify_projection(CUSP, n=2, m=1, order=10).series_by_order("lhs")


def test_curve_m0_mismatch_is_reported():
    rep = verify_projection(CUSP, n=1, m=0, order=10)
    assert not rep.match and rep.first_mismatch == 8
    assert any("below the admissible range" in n for n in rep.notes)


def test_m_scan_thresholds():
    res, threshold = m_scan(CUSP, [0, 1, 2], n=2)
    assert threshold == 1 and res == {0: False, 1: True, 2: True}
    res, threshold = m_scan(HILB, [0, 1, 2], n=2)
    assert threshold == 0


def test_report_json_is_deterministic():
    a = verify_projection(HILB, n=2, m=1, order=8).dumps()
    b = verify_projection(HILB, n=2, m=1, order=8).dumps()
    assert a == b
    data = json.loads(a)
    assert all(isinstance(v, str) for v in data["rhs"].values())


def test_backends_give_identical_reports():
    with _kernels.use_backend("numpy"):
        slow = verify_projection(HILB, n=2, m=1, order=8).dumps()
    fast = verify_projection(HILB, n=2, m=1, order=8).dumps()
    assert slow == fast


def test_threads_give_identical_reports(monkeypatch):
    seq = verify_projection(CUSP, n=2, m=1, order=10).dumps()
    monkeypatch.setenv("LOCPROJ_THREADS", "3")
    assert verify_projection(CUSP, n=2, m=1, order=10).dumps() == seq
