"""Euler characteristics on finite Grassmannians ``G_{n,Z}``.

Fixed points of the torus on the Grassmannian of codimension-``n`` subspaces
of a multiplicity-free representation ``Z`` are the coordinate subspaces; at
the point with quotient weights ``S`` the cotangent weights are
``z_b / z_a`` for ``a`` in ``S`` and ``b`` not in ``S``.  Localization sums
``γ(U_S) / λ(T*_S)`` over those points.  Everything is computed after
restriction to a one-parameter subgroup, as truncated Laurent series in ``t``.
"""

import json
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

from ._parallel import pmap
from .errors import BadRank, DegenerateGrading, NotSymmetric
from .plethysm import gamma_Am
from .series import Character, Grading, Truncation, expand_dense

__all__ = [
    "WeightList",
    "FixedPoint",
    "enumerate_fixed_points",
    "tangent_character",
    "cotangent_grades",
    "localization_terms",
    "euler_localized",
    "xi0",
    "xid",
    "xi",
    "residue_sum_check",
    "vandermonde",
    "martin_chi",
    "symmetric_gamma",
    "euler_report",
]


class WeightList:
    """Ordered weights of a finite representation, repeated by multiplicity."""

    __slots__ = ("weights", "variables")

    def __init__(self, weights, variables=None):
        weights = [tuple(int(x) for x in w) for w in weights]
        if variables is None:
            nv = len(weights[0]) if weights else 1
            variables = ("t",) if nv == 1 else tuple(f"z{i + 1}" for i in range(nv))
        self.variables = tuple(variables)
        for w in weights:
            if len(w) != len(self.variables):
                raise ValueError(f"weight {w} does not match variables {self.variables}")
        self.weights = tuple(weights)

    @classmethod
    def from_character(cls, c):
        weights = []
        for e, m in c.items():
            if m < 0:
                raise ValueError("a representation has nonnegative multiplicities")
            weights.extend([e] * m)
        return cls(weights, c.variables)

    @classmethod
    def from_grades(cls, grades):
        """Univariate weights ``t**g``."""
        return cls([(g,) for g in grades], ("t",))

    @classmethod
    def coerce(cls, z):
        if isinstance(z, WeightList):
            return z
        if isinstance(z, Character):
            return cls.from_character(z)
        z = list(z)
        if z and isinstance(z[0], int):
            return cls.from_grades(z)
        return cls(z)

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def character(self, indices=None):
        idx = range(len(self.weights)) if indices is None else indices
        out = {}
        for i in idx:
            w = self.weights[i]
            out[w] = out.get(w, 0) + 1
        return Character._raw(out, self.variables)

    def grades(self, grading):
        grading = Grading.coerce(grading)
        return [grading.grade(w) for w in self.weights]

    def distinct_grades(self, grading):
        """Restricted grades, raising :class:`DegenerateGrading` on a collision."""
        gs = self.grades(grading)
        if len(set(gs)) != len(gs):
            seen = {}
            for w, g in zip(self.weights, gs):
                if g in seen:
                    raise DegenerateGrading(
                        f"weights {seen[g]} and {w} both have grade {g} under "
                        f"{tuple(grading)}; choose a more generic grading"
                    )
                seen[g] = w
        return gs

    def to_json(self):
        return [list(w) for w in self.weights]

    @classmethod
    def from_json(cls, data, variables=None):
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data, variables)

    def __repr__(self):
        return f"WeightList({self.to_json()}, variables={self.variables})"


class FixedPoint:
    """Coordinate subspace ``V_S``; ``U_S = Z / V_S`` has the weights indexed by ``S``."""

    __slots__ = ("S", "U", "V", "Z")

    def __init__(self, Z, S):
        self.Z = Z
        self.S = tuple(sorted(S))
        comp = [i for i in range(len(Z)) if i not in set(self.S)]
        self.U = Z.character(self.S)
        self.V = Z.character(comp)

    @property
    def n(self):
        return len(self.S)

    def complement(self):
        s = set(self.S)
        return tuple(i for i in range(len(self.Z)) if i not in s)

    def __repr__(self):
        return f"FixedPoint(S={self.S}, U={self.U})"


def enumerate_fixed_points(Z, n):
    Z = WeightList.coerce(Z)
    if n < 0 or n > len(Z):
        raise BadRank(f"rank {n} is outside 0..{len(Z)}")
    return [FixedPoint(Z, S) for S in combinations(range(len(Z)), n)]


def tangent_character(p):
    """``Hom(V, U)``: character ``U_S · V_S*``."""
    return p.U * p.V.dual()


def cotangent_grades(grades, S):
    """Restricted cotangent weights ``g_b - g_a``, ``a`` in ``S``, ``b`` outside."""
    inside = set(S)
    out = {}
    for a in S:
        ga = grades[a]
        for b, gb in enumerate(grades):
            if b not in inside:
                d = gb - ga
                out[d] = out.get(d, 0) + 1
    return out


def _gamma_fn(gamma, variables):
    if gamma is None:
        one = Character.constant(1, variables)
        return lambda U: one
    if isinstance(gamma, Character):
        return lambda U: gamma
    return gamma


def localization_terms(Z, n, gamma=None, grading=None, N=10):
    """``[(FixedPoint, Truncation)]``, one localization term per fixed point."""
    Z = WeightList.coerce(Z)
    if grading is None:
        grading = Grading((1,) * len(Z.variables))
    grading = Grading.coerce(grading)
    grades = Z.distinct_grades(grading)
    gamma = _gamma_fn(gamma, Z.variables)

    def term(p):
        num = gamma(p.U).restrict(grading).univariate()
        den = cotangent_grades(grades, p.S)
        if 0 in den:
            raise DegenerateGrading("a cotangent weight has grade 0")
        lower, dense = expand_dense(num, den.items(), N)
        if lower is None:
            return p, Truncation.zero(N)
        return p, Truncation(lower, N, dense)

    return pmap(term, enumerate_fixed_points(Z, n))


def _sum(truncs, N):
    total = {}
    for t in truncs:
        for d, c in t.as_dict().items():
            total[d] = total.get(d, 0) + c
    lower = min([d for d, c in total.items() if c], default=N)
    return Truncation(min(lower, N), N, {d: c for d, c in total.items() if c})


def euler_localized(Z, n, gamma=None, grading=None, N=10):
    """``χ_{G_{n,Z}}(γ(U))`` by fixed-point localization, through ``t**N``.

    ``gamma`` maps the quotient character ``U`` to a Character; ``None``
    means the structure sheaf.
    """
    return _sum((t for _, t in localization_terms(Z, n, gamma, grading, N)), N)


# ---------------------------------------------------------------------------
# the rank-one operators


def _as_laurent(f):
    """``{m: coeff}`` from an int dict, a univariate Character or a constant."""
    if isinstance(f, Character):
        return f.univariate()
    if isinstance(f, int):
        return {0: f} if f else {}
    return {int(m): c for m, c in dict(f).items() if c}


def _complete_homogeneous(grades, top):
    """``h_0..h_top`` of the monomials ``t**g`` as ``{degree: coeff}`` dicts."""
    h = [{0: 1}] + [{} for _ in range(top)]
    for g in grades:
        # multiply by 1/(1 - u t**g), u the degree marker
        for m in range(1, top + 1):
            row = h[m]
            for d, c in h[m - 1].items():
                row[d + g] = row.get(d + g, 0) + c
    return [{d: c for d, c in r.items() if c} for r in h]


def _truncation(poly, N):
    return Truncation.from_character({d: c for d, c in poly.items() if c}, N)


def xi0(f, Z, grading=None, N=10):
    """``[x^0]`` of ``f(x) λ(Z x^{-1})^{-1}`` expanded about ``x = ∞``.

    On ``x**m`` this is ``h_m`` of the restricted weights, and 0 for ``m < 0``.
    """
    Z = WeightList.coerce(Z)
    grading = Grading.coerce(grading or (1,) * len(Z.variables))
    grades = Z.grades(grading)
    f = _as_laurent(f)
    top = max([m for m in f if m >= 0], default=-1)
    out = {}
    if top >= 0:
        h = _complete_homogeneous(grades, top)
        for m, c in f.items():
            if m >= 0:
                for d, v in h[m].items():
                    out[d] = out.get(d, 0) + c * v
    return _truncation(out, N)


def xid(f, Z, grading=None, N=10):
    """The ``x = 0`` residue operator, normalized so that ``xi0 + (-1)^d xid = xi``.

    On ``x**m`` this is ``-det(Z)^{-1} h_{-m-d}(Z^{-1})``, nonzero only for
    ``m <= -d``; it is ``-(-1)^d`` times the ``[x^0]`` coefficient of the
    expansion about ``x = 0``.
    """
    Z = WeightList.coerce(Z)
    grading = Grading.coerce(grading or (1,) * len(Z.variables))
    grades = Z.grades(grading)
    d = len(grades)
    f = _as_laurent(f)
    need = [-m - d for m in f if -m - d >= 0]
    out = {}
    if need:
        h = _complete_homogeneous([-g for g in grades], max(need))
        shift = -sum(grades)
        for m, c in f.items():
            k = -m - d
            if k >= 0:
                for deg, v in h[k].items():
                    out[deg + shift] = out.get(deg + shift, 0) - c * v
    return _truncation(out, N)


def xi(f, Z, grading=None, N=10):
    """``χ_P`` on ``P = G_{1,Z}`` of ``f(U)`` by localization."""
    f = _as_laurent(f)
    Z = WeightList.coerce(Z)
    var = Z.variables

    def gamma(U):
        (e, _), = U.items()
        total = Character((), var)
        for m, c in f.items():
            total = total + Character._raw({tuple(m * x for x in e): c}, var)
        return total

    return euler_localized(Z, 1, gamma, grading, N)


def residue_sum_check(f, Z, grading=None, N=10, name="residue-sum"):
    """Report whether ``xi0(f) + (-1)^d xid(f)`` equals ``xi(f)`` through ``t**N``."""
    Z = WeightList.coerce(Z)
    d = len(Z)
    lhs = xi0(f, Z, grading, N)
    rd = xid(f, Z, grading, N)
    lhs = lhs + (rd if d % 2 == 0 else -rd)
    rhs = xi(f, Z, grading, N)
    bad = lhs.first_mismatch(rhs)
    return {"identity": name, "order": N, "match": bad is None, "first_mismatch": bad}


# ---------------------------------------------------------------------------
# Martin's formula


def vandermonde(n, variables=None):
    """``Δ = prod_{i != j} (1 - x_i / x_j)`` in ``n`` variables."""
    if variables is None:
        variables = tuple(f"x{i + 1}" for i in range(n))
    one = Character.constant(1, variables)
    delta = one
    for i in range(n):
        for j in range(n):
            if i != j:
                e = [0] * n
                e[i] += 1
                e[j] -= 1
                delta = delta * (one - Character.monomial(e, 1, variables))
    return delta


def _coerce_symmetric(f, n):
    variables = tuple(f"x{i + 1}" for i in range(n))
    if f is None:
        return Character.constant(1, variables)
    if isinstance(f, int):
        return Character.constant(f, variables)
    if f.nvars != n:
        raise ValueError(f"f has {f.nvars} variables, expected {n}")
    if not f.is_symmetric():
        raise NotSymmetric("Martin's formula needs a symmetric function of x_1..x_n")
    return Character._raw(dict(f._terms), variables)


def martin_chi(Z, n, f=None, grading=None, N=10, method="localized"):
    """``(1/n!) ξ_{x_1} ... ξ_{x_n} f Δ``.

    ``method="localized"`` applies the localized operator in every variable;
    ``"borel_weil"`` applies ``xi0`` in every variable.
    """
    Z = WeightList.coerce(Z)
    grading = Grading.coerce(grading or (1,) * len(Z.variables))
    if n < 0 or n > len(Z):
        raise BadRank(f"rank {n} is outside 0..{len(Z)}")
    f = _coerce_symmetric(f, n)
    integrand = f * vandermonde(n, f.variables)
    scale = Fraction(1, factorial(n))
    if method == "localized":
        grades = Z.distinct_grades(grading)
        total = Truncation.zero(N)
        for tup in permutations(range(len(Z)), n):
            point = Grading([grades[j] for j in tup])
            num = integrand.restrict(point).univariate()
            den = {}
            for j in tup:
                for l, gl in enumerate(grades):
                    if l != j:
                        den[gl - grades[j]] = den.get(gl - grades[j], 0) + 1
            lower, dense = expand_dense(num, den.items(), N)
            if lower is not None:
                total = total + Truncation(lower, N, dense)
        return total.scale(scale)
    if method == "borel_weil":
        grades = Z.grades(grading)
        top = max((max(e) for e, _ in integrand.items()), default=0)
        h = _complete_homogeneous(grades, max(top, 0))
        out = {}
        for e, c in integrand.items():
            if min(e) < 0:
                continue
            poly = {0: c}
            for m in e:
                nxt = {}
                for d1, c1 in poly.items():
                    for d2, c2 in h[m].items():
                        nxt[d1 + d2] = nxt.get(d1 + d2, 0) + c1 * c2
                poly = nxt
            for d, v in poly.items():
                out[d] = out.get(d, 0) + v
        return _truncation(out, N).scale(scale)
    raise ValueError(f"unknown method {method!r}")


def symmetric_gamma(n, m=0, f=None):
    """``(x_1...x_n)**m f(x_1 + ... + x_n)`` as a Character in ``x1..xn``."""
    variables = tuple(f"x{i + 1}" for i in range(n))
    X = Character({tuple(int(i == j) for j in range(n)): 1 for i in range(n)}, variables)
    return gamma_Am(X, m, f)


def _coeffs(t):
    return {str(d): str(c) for d, c in sorted(t.as_dict().items())}


def euler_report(Z, n, m=0, f=None, grading=None, N=10, cross_check=False):
    """``χ_{G_{n,Z}}(det(U)**m f(U))`` with an optional Martin cross-check.

    The Borel-Weil evaluation is only included for ``m >= 0``.
    """
    chi = euler_localized(Z, n, lambda U: gamma_Am(U, m, f), grading, N)
    out = {"n": n, "m": m, "order": N, "chi": _coeffs(chi)}
    if cross_check:
        g = symmetric_gamma(n, m, f)
        results = {"martin_localized": martin_chi(Z, n, g, grading, N, "localized")}
        if m >= 0:
            results["borel_weil"] = martin_chi(Z, n, g, grading, N, "borel_weil")
        for name, t in results.items():
            out[name] = _coeffs(t)
        out["match"] = all(t.agrees(chi) for t in results.values())
    return out
