"""Both sides of the projection formula, its hypotheses, and the comparison.

Everything here runs after restriction to the model's one-parameter grading:
characters become ``{degree: coeff}`` dicts in ``t`` and series become
:class:`~locproj.series.Truncation` objects.

The right-hand side at cutoffs ``(k, l, J)`` is

    sum over fixed points S of G_{n, Z_{<=k}} of
        γ(U_S) · sum_{j<=J} [w^j] prod_e (1 - w t^e)^{E_S[e]}  /  λ(T*_S)

with ``E_S = A U + B_{<=l} U* + C U U*``.  It is recomputed with the cutoffs
raised until two successive raises leave every coefficient through the order
unchanged.
"""

import json
from dataclasses import asdict, dataclass, replace
from fractions import Fraction

import numpy as np

from . import _kernels
from ._parallel import pmap
from .errors import DegenerateGrading, NoStabilization
from .grassmann import cotangent_grades
from .plethysm import gamma_Am, lambda_w_series
from .series import Character, Grading, Truncation, _normalize_denominator, expand, expand_dense

__all__ = [
    "Cutoffs",
    "VerificationReport",
    "RestrictedData",
    "lhs_chi_Y",
    "rhs_term",
    "rhs_at",
    "rhs_sum",
    "valuation_bound",
    "term_valuations",
    "check_conditions",
    "verify_projection",
    "m_scan",
]


@dataclass(frozen=True)
class Cutoffs:
    """``k``: grade cut of ``Z``; ``l``: grade cut of ``B``; ``J``: λ-degree; ``N``: order; ``W``: condition window."""

    k: int
    l: int
    J: int
    N: int
    W: int = 40

    def raised(self, step=1, kmax=None):
        k = self.k + step
        if kmax is not None:
            k = min(k, kmax)
        return replace(self, k=k, l=self.l + step, J=self.J + step)

    def to_json(self):
        return asdict(self)


def _poly_mul(a, b, top=None):
    out = {}
    for d1, c1 in a.items():
        for d2, c2 in b.items():
            d = d1 + d2
            if top is None or d <= top:
                out[d] = out.get(d, 0) + c1 * c2
    return {d: c for d, c in out.items() if c}


def _dual(a):
    return {-d: c for d, c in a.items()}


def _univariate(c, grading):
    return c.restrict(grading).univariate()


class RestrictedData:
    """The model's bundle data at rank ``n``, restricted to ``grading``."""

    def __init__(self, spec, n=None, grading=None):
        self.spec = spec
        self.n = spec.n if n is None else n
        self.grading = Grading.coerce(grading or spec.grading)
        b = spec.bundle(self.n)
        self.rank = b.rank
        self.A = _univariate(b.A, self.grading)
        self.C = _univariate(b.C, self.grading)
        self._Z = b.Z.restrict(self.grading)
        self._B = b.B.restrict(self.grading)
        self._B_corr = _univariate(b.B_corr, self.grading)
        self._cache = {}

    def _series(self, which, order):
        key = (which, order)
        if key not in self._cache:
            src = self._Z if which == "Z" else self._B
            s = expand(src, order).as_dict()
            if which == "B":
                for d, c in self._B_corr.items():
                    if d <= order:
                        s[d] = s.get(d, 0) + c
                s = {d: c for d, c in s.items() if c}
            self._cache[key] = s
        return self._cache[key]

    def d(self, order):
        """``{i: d_i}`` for ``i <= order``."""
        return self._series("Z", order)

    def b(self, order):
        return self._series("B", order)

    def z_grades(self, k):
        """Grades of ``Z_{<=k}``, one per weight; they must be distinct."""
        grades = []
        for g, c in sorted(self.d(k).items()):
            if c < 0:
                raise ValueError("Z must have nonnegative coefficients")
            if c > 1:
                raise DegenerateGrading(
                    f"{c} weights of Z have grade {g} under {tuple(self.grading)}; "
                    f"choose a more generic grading or a smaller cut"
                )
            grades.append(g)
        return grades

    def kmax(self, limit=400):
        """Largest cut keeping the weights of ``Z`` distinct (``None`` if beyond ``limit``)."""
        for g, c in sorted(self.d(limit).items()):
            if c > 1:
                return g - 1
        return None

    def E(self, U, l):
        """``A U + B_{<=l} U* + C U U*`` as a degree dict."""
        Ud = _dual(U)
        out = {}
        for part in (_poly_mul(self.A, U), _poly_mul(self.b(l), Ud), _poly_mul(self.C, _poly_mul(U, Ud))):
            for d, c in part.items():
                out[d] = out.get(d, 0) + c
        return {d: c for d, c in out.items() if c}


# ---------------------------------------------------------------------------
# left-hand side


def _inverse_lambda_terms(T):
    """Numerator polynomial and denominator factors of ``1/λ(T)`` for a virtual ``T``."""
    num = {0: 1}
    den = []
    for g, c in sorted(T.items()):
        if g == 0:
            raise DegenerateGrading("a cotangent weight restricts to grade 0")
        if c > 0:
            den.append((g, c))
        else:
            for _ in range(-c):
                num = _poly_mul(num, {0: 1, g: -1})
    return num, den


def _sum_truncations(terms, N):
    total = {}
    for t in terms:
        if t is None:
            continue
        for d, c in t.as_dict().items():
            total[d] = total.get(d, 0) + c
    total = {d: c for d, c in total.items() if c}
    return Truncation(min(min(total, default=N), N), N, total)


def lhs_terms(spec, n=None, m=None, f=None, grading=None, N=10):
    """``[(label, Truncation)]``: one localization term per fixed point of ``Y``."""
    n = spec.n if n is None else n
    grading = Grading.coerce(grading or spec.grading)
    out = []
    for label, U in spec.y_points(n):
        T = _univariate(spec.y_cotangent(label, U, n), grading)
        gamma = _univariate(spec.gamma(U, m, f), grading)
        num, den = _inverse_lambda_terms(T)
        lower, dense = expand_dense(_poly_mul(gamma, num), den, N)
        out.append((label, Truncation(lower, N, dense) if lower is not None else Truncation.zero(N)))
    return out


def lhs_chi_Y(spec, n=None, m=None, f=None, grading=None, N=10):
    """``χ_Y(γ)`` by (virtual) localization on the fixed points of ``Y``."""
    return _sum_truncations((t for _, t in lhs_terms(spec, n, m, f, grading, N)), N)


# ---------------------------------------------------------------------------
# right-hand side


class _PointEngine:
    """Dense per-cutoff data so each fixed point costs a few convolutions."""

    def __init__(self, rd, grades, cut, m, f):
        self.grades = grades
        self.g0 = grades[0]
        self.gmax = grades[-1]
        span = self.gmax - self.g0 + 1
        self.pos = np.array([g - self.g0 for g in grades], dtype=np.int64)
        self.zmask = np.zeros(span, dtype=np.int64)
        self.zmask[self.pos] = 1
        self.A = _dense(rd.A)
        self.B = _dense(rd.b(cut.l))
        self.C = _dense(rd.C)
        self.cut = cut
        self.m = m
        self.f = f

    def gamma(self, S):
        if self.f is None:
            return {self.m * sum(self.grades[a] for a in S): 1}
        U_char = Character._raw({(self.grades[a],): 1 for a in S}, ("t",))
        return gamma_Am(U_char, self.m, self.f).univariate()

    def parts(self, S):
        """``(E, T*)`` as ``(grades, mults)`` integer arrays, grades ascending."""
        u = np.zeros(len(self.zmask), dtype=np.int64)
        u[self.pos[list(S)]] = 1
        ud = u[::-1]
        g0, gm = self.g0, self.gmax
        cot = _nonzero(g0 - gm, np.convolve(self.zmask - u, ud))
        pieces = []
        if self.A is not None:
            pieces.append((self.A[0] + g0, np.convolve(self.A[1], u)))
        if self.B is not None:
            pieces.append((self.B[0] - gm, np.convolve(self.B[1], ud)))
        if self.C is not None:
            pieces.append((self.C[0] + g0 - gm, np.convolve(self.C[1], np.convolve(u, ud))))
        return _combine(pieces), cot

    def term(self, S, select):
        gamma = self.gamma(S)
        if not gamma:
            return None
        (eg, ea), (tg, tc) = self.parts(S)
        neg = tg < 0
        shift = int(-(tg[neg] * tc[neg]).sum())
        sign = -1 if int(tc[neg].sum()) % 2 else 1
        N = self.cut.N
        J = self.cut.J
        gmin = min(gamma)
        hi = N - gmin - shift
        lo = _window_lo(eg, ea, J)
        if hi < lo:
            return None
        Q = select(np.column_stack((eg, ea)), J, lo, max(hi, 0) - lo + 1)
        lower = lo + gmin + shift
        width = N - lower + 1
        num = [0] * width
        for d, c in gamma.items():
            off = d - gmin
            for i, q in enumerate(Q[: width - off]):
                if q:
                    num[off + i] += sign * c * q
        if not any(num):
            return None
        den = np.column_stack((np.abs(tg), tc))
        dense = _kernels.divide_factors(num, den)
        return Truncation(lower, N, {lower + i: c for i, c in enumerate(dense) if c})


def _window_lo(eg, ea, J):
    """A degree no larger than any monomial of ``prod (1 - w t^e)^a`` mod ``w^{J+1}``."""
    neg = eg < 0
    if not neg.any():
        return 0
    ng, na = eg[neg], ea[neg]
    pos = na > 0
    lo_count = int((ng[pos] * na[pos]).sum())
    if not pos.all():
        lo_count += J * int(ng[~pos].min())
    return max(lo_count, J * int(ng.min()))


def _nonzero(offset, arr):
    idx = np.nonzero(arr)[0]
    return idx + offset, arr[idx]


def _dense(poly):
    if not poly:
        return None
    lo, hi = min(poly), max(poly)
    arr = np.zeros(hi - lo + 1, dtype=np.int64)
    for d, c in poly.items():
        arr[d - lo] = c
    return lo, arr


def _combine(pieces):
    if not pieces:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    lo = min(o for o, _ in pieces)
    hi = max(o + len(a) - 1 for o, a in pieces)
    acc = np.zeros(hi - lo + 1, dtype=np.int64)
    for o, a in pieces:
        acc[o - lo : o - lo + len(a)] += a
    return _nonzero(lo, acc)


def _point_term(rd, grades, S, cut, m, f, select):
    """Contribution of the fixed point ``S`` (kept for single-point inspection)."""
    return _PointEngine(rd, grades, cut, m, f).term(S, select)


def _select_sum(factors, J, lo, width):
    return _kernels.lambda_rowsum(factors, J, lo, width)


def _select_row(j):
    sign = -1 if j % 2 else 1

    def pick(factors, J, lo, width):
        return [sign * c for c in _kernels.lambda_rows(factors, J, lo, width)[j]]

    return pick


def _fixed_points(rank, size):
    from itertools import combinations

    return list(combinations(range(size), rank))


def rhs_at(spec, cutoffs, n=None, m=None, f=None, grading=None, data=None):
    """``sum_{j<=J} (-1)^j χ_{X_k}(γ λ^j(E_{k,l}))`` through ``t^N``."""
    rd = data or RestrictedData(spec, n, grading)
    m = spec.m if m is None else m
    f = spec.f if f is None else f
    grades = rd.z_grades(cutoffs.k)
    if rd.rank > len(grades):
        return Truncation.zero(cutoffs.N)
    engine = _PointEngine(rd, grades, cutoffs, m, f)
    terms = pmap(lambda S: engine.term(S, _select_sum), _fixed_points(rd.rank, len(grades)))
    return _sum_truncations(terms, cutoffs.N)


def rhs_term(spec, j, cutoffs, n=None, m=None, f=None, grading=None):
    """``χ_{X_k}(γ λ^j(E_{k,l}))`` for a single ``j``."""
    rd = RestrictedData(spec, n, grading)
    m = spec.m if m is None else m
    f = spec.f if f is None else f
    grades = rd.z_grades(cutoffs.k)
    cut = replace(cutoffs, J=j)
    if rd.rank > len(grades):
        return Truncation.zero(cutoffs.N)
    engine = _PointEngine(rd, grades, cut, m, f)
    terms = pmap(lambda S: engine.term(S, _select_row(j)), _fixed_points(rd.rank, len(grades)))
    return _sum_truncations(terms, cutoffs.N)


def _coeff_strings(t):
    return {str(d): str(c) for d, c in t.as_dict().items()}


def rhs_sum(spec, cutoffs, n=None, m=None, f=None, grading=None, budget=8, step=1):
    """Raise ``(k, l, J)`` until two successive raises change nothing through ``N``.

    Returns ``(series, trace, final_cutoffs)``.  ``k`` never exceeds the
    largest cut for which the restricted weights of ``Z`` stay distinct.
    """
    rd = RestrictedData(spec, n, grading)
    kmax = rd.kmax()
    cut = cutoffs
    if kmax is not None and cut.k > kmax:
        cut = replace(cut, k=kmax)
    trace = []
    history = []
    for _ in range(budget + 1):
        r = rhs_at(spec, cut, n, m, f, grading, data=rd)
        changed = bool(history) and r != history[-1]
        trace.append({"k": cut.k, "l": cut.l, "J": cut.J, "changed": changed, "coeffs": _coeff_strings(r)})
        history.append(r)
        if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            return r, trace, cut
        cut = cut.raised(step, kmax)
    raise NoStabilization(
        f"right-hand side still changing after {budget} raises of (k, l, J)", trace
    )


# ---------------------------------------------------------------------------
# valuation bound


def valuation_bound(spec, m, i, n=None, grading=None, k=None, l=None):
    """``o_i = m i + sum_{j<=-i} a_j (i+j) + sum_{j<=i} b_j (j-i) - sum_{j<=i} d_j (j-i)``.

    ``k`` and ``l`` cut ``Z`` and ``B``; by default they are large enough not
    to matter (only indices ``<= i`` enter).
    """
    rd = RestrictedData(spec, n, grading)
    top = i if k is None else min(i, k)
    btop = i if l is None else min(i, l)
    o = m * i
    o += sum(a * (i + j) for j, a in rd.A.items() if j <= -i)
    o += sum(b * (j - i) for j, b in rd.b(btop).items() if j <= i)
    o -= sum(d * (j - i) for j, d in rd.d(top).items() if j <= i)
    return o


def term_valuations(spec, m, k, l, J, grading=None, N=None):
    """Smallest t-degree in each rank-one localization term of ``x^m Σ_j (-w)^j λ^j(E_x)``.

    Returns ``{i: valuation}`` over the weights ``i`` of ``Z_{<=k}``; the
    minimum is over all w-coefficients ``j <= J``.
    """
    rd = RestrictedData(spec, 1, grading)
    grades = rd.z_grades(k)
    out = {}
    for idx, i in enumerate(grades):
        E = rd.E({i: 1}, l)
        ws = lambda_w_series(Character.from_univariate(E), J)
        T = cotangent_grades(grades, (idx,))
        shift, _, _ = _normalize_denominator(T.items())
        best = None
        for row in ws.rows:
            if row:
                v = m * i + min(row.univariate()) + shift
                best = v if best is None else min(best, v)
        out[i] = best
    return out


# ---------------------------------------------------------------------------
# hypotheses


def check_conditions(spec, W=None, n=None, grading=None, vanishing_k=None):
    """Check conditions (a) to (e) on restricted coefficients over ``[-W, W]``.

    Conditions quantify over all indices; beyond the window only the built-in
    specs are known to behave (their ``B`` equals ``Z`` up to a polynomial),
    which the report records as a caveat.
    """
    rd = RestrictedData(spec, n, grading)
    n = rd.n
    spans = [abs(d) for d in list(rd.A) + list(rd.C)]
    if W is None:
        W = 4 * max(spans + [1])
    d = rd.d(W)
    b = rd.b(W)
    a, c = rd.A, rd.C
    kprime = min(d, default=0)
    rng = range(-W, W + 1)
    report = {"window": W, "conditions": {}}

    bad_a = [i for i in rng if i <= -kprime and a.get(i, 0) < 0]
    report["conditions"]["a"] = {"pass": not bad_a, "violations": bad_a[:10]}

    neg_b = [i for i in rng if b.get(i, 0) < 0]
    tail_from = W + 1
    for i in range(W, -W - 1, -1):
        if b.get(i, 0) != d.get(i, 0):
            break
        tail_from = i
    tail_ok = tail_from <= W // 2
    report["conditions"]["b"] = {
        "pass": not neg_b and tail_ok,
        "violations": neg_b[:10],
        "tail_from": tail_from if tail_from <= W else None,
    }

    bad_c = sorted(i for i, v in c.items() if i <= 0 and v)
    report["conditions"]["c"] = {"pass": not bad_c, "violations": bad_c}

    bad_d = []
    for i in rng:
        if c.get(i, 0) >= 0:
            continue
        for j in rng:
            if not d.get(j, 0):
                continue
            if abs(i + j) > W:
                continue
            val = a.get(-i - j, 0) + b.get(i + j, 0) + c[i] - d[j] + 1
            if val < 0:
                bad_d.append([i, j])
    report["conditions"]["d"] = {"pass": not bad_d, "violations": bad_d[:10]}

    report["conditions"]["e"] = _check_defined(spec, n, rd.grading, vanishing_k)
    report["all_pass"] = all(v["pass"] for v in report["conditions"].values())
    report["caveat"] = "indices outside the window are not checked"
    return report


def _check_defined(spec, n, grading, vanishing_k):
    """Surrogate for (e): finitely many Y fixed points, all with isolated restricted cotangent."""
    from .models import vanishing_fixed_points

    try:
        points = spec.y_points(n)
        for label, U in points:
            T = spec.y_cotangent(label, U, n).restrict(grading).univariate()
            if 0 in T:
                return {"pass": False, "detail": f"cotangent weight of grade 0 at {U}"}
        out = {"pass": True, "fixed_points": len(points)}
        if vanishing_k is not None:
            found = vanishing_fixed_points(spec, n, vanishing_k)
            same = sorted(str(U) for _, U in found) == sorted(str(U) for _, U in points)
            out["vanishing_k"] = vanishing_k
            out["vanishing_match"] = same
            out["pass"] = same
        return out
    except Exception as exc:  # the report records any failure to define Y
        return {"pass": False, "detail": f"{type(exc).__name__}: {exc}"}


# ---------------------------------------------------------------------------
# the comparison


def _rational_strings(t):
    return {str(d): str(Fraction(c)) for d, c in t.as_dict().items()} if t is not None else None


class VerificationReport:
    __slots__ = (
        "example",
        "n",
        "m",
        "f",
        "grading",
        "order",
        "order_scale",
        "cutoffs",
        "lhs",
        "rhs",
        "match",
        "first_mismatch",
        "trace",
        "conditions",
        "notes",
    )

    def __init__(self, **kw):
        for s in self.__slots__:
            setattr(self, s, kw.get(s))
        if self.notes is None:
            self.notes = []

    def exit_code(self):
        return 0 if self.match else 2

    def series_by_order(self, which="rhs"):
        """Coefficients at multiples of ``order_scale``, i.e. in the reported order unit."""
        t = self.lhs if which == "lhs" else self.rhs
        if t is None:
            return None
        s = self.order_scale or 1
        return [t.coefficient(s * a) for a in range(self.order + 1)]

    def to_json(self):
        return {
            "example": self.example,
            "n": self.n,
            "m": self.m,
            "f": self.f.to_json() if self.f is not None else None,
            "grading": list(self.grading),
            "order": self.order,
            "order_scale": self.order_scale,
            "cutoffs": self.cutoffs.to_json() if self.cutoffs else None,
            "lhs": _rational_strings(self.lhs),
            "rhs": _rational_strings(self.rhs),
            "match": self.match,
            "first_mismatch": self.first_mismatch,
            "trace": self.trace,
            "conditions": self.conditions,
            "notes": self.notes,
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def default_cutoffs(spec, N, W=40):
    return Cutoffs(N, N, N, N, W)


def verify_projection(
    spec,
    n=None,
    m=None,
    f=None,
    order=10,
    grading=None,
    cutoffs=None,
    budget=8,
    step=1,
    check=True,
):
    """Compare ``χ_Y(γ)`` with the stabilized right-hand side through ``order``.

    ``order`` is in the model's unit (powers of ``q`` for the affine model);
    the comparison runs through grade ``order * order_scale``.
    """
    n = spec.n if n is None else n
    m = spec.m if m is None else m
    f = spec.f if f is None else f
    grading = Grading.coerce(grading or spec.grading)
    N = order * spec.order_scale
    cut = cutoffs or default_cutoffs(spec, N)
    cut = replace(cut, N=N)
    report = VerificationReport(
        example=spec.name, n=n, m=m, f=f, grading=grading, order=order,
        order_scale=spec.order_scale, cutoffs=cut,
    )
    if m < spec.min_m:
        report.notes.append(f"m = {m} is below the admissible range m >= {spec.min_m}; a mismatch is allowed")
    if check:
        cond = check_conditions(spec, W=cut.W, n=n, grading=grading)
        report.conditions = cond
        if not cond["all_pass"]:
            failed = sorted(k for k, v in cond["conditions"].items() if not v["pass"])
            report.notes.append("hypotheses fail: " + ", ".join(failed))
            report.match = False
            return report
    report.lhs = lhs_chi_Y(spec, n, m, f, grading, N)
    rhs, trace, final = rhs_sum(spec, cut, n, m, f, grading, budget, step)
    report.rhs = rhs
    report.trace = trace
    report.cutoffs = final
    bad = report.lhs.first_mismatch(rhs)
    report.match = bad is None
    report.first_mismatch = bad
    if not all(isinstance(c, int) for c in rhs.coeffs):
        report.notes.append("right-hand side has non-integer coefficients")
    return report


def m_scan(spec, ms, n=None, order=10, grading=None, budget=8):
    """``{m: match}`` and the empirical threshold: smallest scanned m from which every match holds."""
    results = {}
    for m in ms:
        results[m] = verify_projection(spec, n=n, m=m, order=order, grading=grading, budget=budget, check=False).match
    threshold = None
    for m in sorted(ms, reverse=True):
        if not results[m]:
            break
        threshold = m
    return results, threshold
