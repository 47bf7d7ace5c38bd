"""Acceptance criteria, exact at tolerance zero.

Each test records a one-line verdict; ``conftest.py`` prints them in the
terminal summary.  Criterion 8(ii) asks for the level-2 affine model to
reproduce 1/(q;q) through q^6, which the level-2 model cannot do (it counts
partitions with parts <= 4); that test is expected to fail.  The level-3 run
below it shows the same pipeline reaching 1, 1, 2, 3, 5, 7, 11.
"""

import contextlib
import random
import time

import pytest

from locproj.grassmann import (
    WeightList,
    euler_localized,
    martin_chi,
    residue_sum_check,
    symmetric_gamma,
    tangent_character,
    FixedPoint,
)
from locproj.models import (
    curve_fixed_points,
    curve_virtual_cotangent,
    get_spec,
    grassmannian_lambda_chi,
    hilb_cotangent,
    hilb_fixed_points,
    load_spec,
    partitions,
    spec_to_json,
    theta,
    theta_sum,
    vanishing_lemma_check,
)
from locproj.plethysm import SymFun, gamma_Am
from locproj.projection import check_conditions, term_valuations, valuation_bound, verify_projection

ACCEPTANCE_RESULTS = []

HILB = get_spec("hilbert-plane")
CUSP = get_spec("cusp-curve")
AFF = get_spec("affine-sl2")
PARTITION_COUNTS = [1, 1, 2, 3, 5, 7, 11]


@contextlib.contextmanager
def criterion(label, limit):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        ACCEPTANCE_RESULTS.append(f"FAIL  {label}  ({elapsed:.1f}s): {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}")
        raise
    ACCEPTANCE_RESULTS.append(f"PASS  {label}  ({elapsed:.1f}s)")


def _distinct_weights(rng, size, grading):
    seen, out = set(), []
    while len(out) < size:
        w = (rng.randint(-3, 3), rng.randint(-3, 3))
        g = grading[0] * w[0] + grading[1] * w[1]
        if g not in seen:
            seen.add(g)
            out.append(w)
    return WeightList(out, ("z1", "z2"))


def test_criterion_01_residue_sum_identity():
    with criterion("1 residue-sum identity, 50 random cases, N=12", 5):
        rng = random.Random(1)
        grading = (1, 7)
        for _ in range(50):
            Z = _distinct_weights(rng, rng.randint(3, 5), grading)
            m = rng.randint(-6, 6)
            rep = residue_sum_check({m: 1}, Z, grading, N=12)
            assert rep["match"], rep


def test_criterion_02_martin_cross_oracle():
    with criterion("2 Martin formula = localization = Borel-Weil (m >= 0)", 30):
        rng = random.Random(2)
        fs = [None, SymFun.e(1), SymFun.e(2), SymFun.e(1, 1)]
        for n in (1, 2, 3):
            for size in range(n, 7):
                Z = WeightList.from_grades(rng.sample(range(-7, 10), size))
                for f in fs:
                    for m in (-1, 0, 1, 2):
                        loc = euler_localized(Z, n, lambda U: gamma_Am(U, m, f), N=10)
                        g = symmetric_gamma(n, m, f)
                        assert martin_chi(Z, n, g, N=10).agrees(loc), (n, size, f, m)
                        if m >= 0:
                            assert martin_chi(Z, n, g, N=10, method="borel_weil").agrees(loc), (n, size, f, m)


def test_criterion_03_partition_identity():
    with criterion("3 chi_Gr(lambda^j T*) = (-1)^j p(j), j <= 5", 60):
        rng = random.Random(3)
        for j in range(6):
            k = j + 1
            n = 2 * k
            assignments = set()
            while len(assignments) < 2:
                assignments.add(tuple(rng.sample(range(-25, 26), n)))
            for grades in sorted(assignments):
                chi = grassmannian_lambda_chi(WeightList.from_grades(grades), k, j, N=10)
                assert chi.as_dict() == {0: (-1) ** j * PARTITION_COUNTS[j]}, (j, grades)


def test_criterion_04_vanishing_lemma_exhaustive():
    with criterion("4 vanishing lemma and coloring, n <= 3, grade <= 6", 60):
        for n in range(4):
            rep = vanishing_lemma_check(n, 6)
            assert rep["pass"], rep["failures"][:3]
            assert rep["zero"] == rep["young"] == len(list(partitions(n)))


def test_criterion_05_cotangent_identities():
    with criterion("5 cotangent dimensions, tangent-difference identity, curve virtual dimension", 60):
        for n in range(1, 5):
            for mu in partitions(n):
                T = hilb_cotangent(mu)
                assert T.dim() == 2 * n and T.has_nonnegative_coefficients()
        for n in range(1, 4):
            for mu, U in hilb_fixed_points(n):
                k = n + 4
                Zk = WeightList.from_character(HILB.Z_trunc(k, n))
                S = [i for i, w in enumerate(Zk.weights) if U.coefficient(w)]
                diff = tangent_character(FixedPoint(Zk, S)).dual() - HILB.E_at(U, k, n)
                assert diff == hilb_cotangent(mu)
        for n in range(4):
            for S, _ in curve_fixed_points(n):
                assert curve_virtual_cotangent(S).dim() == n


@pytest.mark.parametrize("grading", [(1, 13), (13, 1)])
def test_criterion_06_plane(grading):
    with criterion(f"6 plane projection formula, grading {grading}", 150):
        for n in (1, 2, 3):
            for m in (0, 1, 2):
                rep = verify_projection(HILB, n=n, m=m, order=10, grading=grading)
                assert rep.match, (n, m, rep.first_mismatch)
                assert rep.rhs.is_integral()


def test_criterion_07_curve():
    with criterion("7 curve projection formula, m >= 1", 120):
        for n in (1, 2):
            for m in (1, 2):
                rep = verify_projection(CUSP, n=n, m=m, order=10)
                assert rep.match, (n, m, rep.first_mismatch)


def test_criterion_08i_theta_sum():
    with criterion("8(i) theta-sum identity through q^12, |k| <= 4", 60):
        assert theta((0, 2), 12) == theta_sum(4, 12).truncate((1, 0), 12)


def test_criterion_08ii_affine_level_2():
    with criterion("8(ii) affine-sl2 n=2, N=6 gives 1,1,2,3,5,7,11", 600):
        rep = verify_projection(AFF, n=2, order=6)
        assert rep.match
        assert rep.series_by_order("rhs") == PARTITION_COUNTS, rep.series_by_order("rhs")


def test_criterion_08ii_affine_level_3():
    with criterion("8(ii) supplementary: affine-sl2 n=3, N=6 gives 1,1,2,3,5,7,11", 600):
        rep = verify_projection(AFF, n=3, order=6)
        assert rep.match
        assert rep.series_by_order("lhs") == rep.series_by_order("rhs") == PARTITION_COUNTS


def test_criterion_09_valuation_bound():
    with criterion("9 valuation bound, n=1, m in {1,2}, |i| <= 5", 10):
        for m in (1, 2):
            tv = term_valuations(HILB, m, 12, 12, 12)
            checked = [i for i in range(-5, 6) if i in tv]
            assert checked == list(range(0, 6))
            for i in checked:
                assert valuation_bound(HILB, m, i) <= tv[i], (m, i)


def test_criterion_10_negative_controls():
    with criterion("10 negative controls", 60):
        data = spec_to_json(CUSP)
        data["C"].append({"coeff": "1", "exps": [0]})
        rep = check_conditions(load_spec(data))
        assert not rep["conditions"]["c"]["pass"]

        flipped = HILB.replace(bundle_changes=lambda b: {"A": -b.A})
        good = verify_projection(HILB, n=1, m=0, order=10, grading=(2, 7))
        bad = verify_projection(flipped, n=1, m=0, order=10, grading=(2, 7))
        assert good.match and not bad.match and bad.first_mismatch <= 10

        curve0 = verify_projection(CUSP, n=1, m=0, order=10)
        assert any("admissible" in note for note in curve0.notes)
        assert curve0.to_json()["match"] is False
