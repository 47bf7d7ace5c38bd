"""Bundle data and fixed-point models for the three worked examples.

Each :class:`ExampleSpec` carries the representation ``Z``, the Laurent data
``A, B, C`` defining ``E_γ = Aγ + Bγ* + Cγγ*``, a grading for restriction
to one parameter, and the ``Y``-side fixed points with their (virtual)
cotangent characters.

* ``hilbert-plane``: ``Z = 1/((1-z1)(1-z2))``, fixed points are partitions.
* ``cusp-curve``: ``Z = (1-z^6)/((1-z^2)(1-z^3))``, fixed points are
  semigroup ideals of ``{0,2,3,4,...}``.
* ``affine-sl2``: ``Z = q^{-n}(z+z^{-1})/(1-q)``, fixed points ``U_k``.
"""

import json
from itertools import combinations

from .errors import BadRange, LocProjError, Unstable
from .grassmann import WeightList, enumerate_fixed_points, tangent_character
from .plethysm import SymFun, lambda_power
from .series import Character, Grading, RationalCharacter, Truncation, expand

__all__ = [
    "Partition",
    "partitions",
    "SemigroupIdeal",
    "BundleData",
    "ExampleSpec",
    "hilb_fixed_points",
    "hilb_cotangent",
    "hilb_cotangent_closed",
    "E_at",
    "coloring_counts",
    "is_young_diagram",
    "constant_term_E",
    "curve_fixed_points",
    "curve_virtual_cotangent",
    "affine_fixed_points",
    "affine_virtual_cotangent",
    "affine_cotangent_Y",
    "pochhammer",
    "theta",
    "theta_sum",
    "jtp_check",
    "vanishing_lemma_check",
    "grassmannian_lambda_chi",
    "vanishing_fixed_points",
    "get_spec",
    "load_spec",
    "spec_to_json",
    "EXAMPLES",
]

PLANE = ("z1", "z2")
LINE = ("z",)
AFFINE = ("q", "z")


def _mono(exps, variables, c=1):
    return Character._raw({tuple(exps): c} if c else {}, variables)


def _one(variables):
    return Character.constant(1, variables)


# ---------------------------------------------------------------------------
# partitions and the plane


class Partition(tuple):
    """Weakly decreasing positive parts."""

    __slots__ = ()

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"not a partition: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self):
        return sum(self)

    def boxes(self):
        """``(row, column)`` pairs."""
        return [(i, j) for i, row in enumerate(self) for j in range(row)]

    def weights(self):
        """Lattice weights ``(a, b)`` of ``z1^a z2^b``: column then row."""
        return [(j, i) for i, j in self.boxes()]

    def transpose(self):
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def U(self):
        return Character({w: 1 for w in self.weights()}, PLANE)

    def __repr__(self):
        return f"Partition({tuple(self)})"


def partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield Partition()
        return
    for p in range(min(n, largest), 0, -1):
        for rest in partitions(n - p, p):
            yield Partition((p,) + tuple(rest))


def hilb_fixed_points(n):
    """``[(μ, U_μ)]`` for all partitions of ``n``."""
    if n < 0:
        raise BadRange("n must be nonnegative")
    return [(mu, mu.U()) for mu in partitions(n)]


def _plane_M():
    return Character({(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): 1}, PLANE)


def _total_degree_box(k):
    return Character({(a, b): 1 for a in range(k + 1) for b in range(k + 1 - a)}, PLANE)


def _hilb_pairing_cotangent(U, k):
    """Dual of ``χ(R,R) - χ(I,I)`` with ``Z`` cut at total degree ``k``."""
    Zk = _total_degree_box(k)
    Vk = Zk - U
    pref = _mono((-1, -1), PLANE) * _plane_M()
    T = pref * (Zk.dual() * Zk - Vk.dual() * Vk)
    return T.dual()


def hilb_cotangent_closed(mu):
    """``U* + z1 z2 U - M U U*`` for the partition ``μ``."""
    U = mu.U() if isinstance(mu, Partition) else mu
    return U.dual() + _mono((1, 1), PLANE) * U - _plane_M() * U * U.dual()


def hilb_cotangent(mu, k_trunc=None):
    """Cotangent character at ``I_μ`` from the Ext pairing on a truncated ``Z``.

    Terms of total degree within ``k - deg(U) - 2`` of the origin are
    unaffected by the cut; the result at ``k`` and ``k + 1`` must agree.
    """
    mu = Partition(mu)
    U = mu.U()
    top = max((a + b for a, b in mu.weights()), default=0)
    if k_trunc is None:
        k_trunc = 3 * top + 6
    if k_trunc - top - 2 < top + 1:
        # cotangent weights reach total degree top + 1; a smaller window cannot hold them
        raise Unstable(f"truncation {k_trunc} is below {2 * top + 3} for {tuple(mu)}")
    results = []
    for k in (k_trunc, k_trunc + 1):
        window = k - top - 2
        T = _hilb_pairing_cotangent(U, k)
        results.append(
            Character({e: c for e, c in T.items() if abs(e[0] + e[1]) <= window}, PLANE)
        )
    if results[0] != results[1]:
        raise Unstable(f"cotangent at {tuple(mu)} still changes at truncation {k_trunc}")
    return results[0]


# ---------------------------------------------------------------------------
# bundle data


class BundleData:
    """``Z``, ``A``, ``B`` (factored part plus a polynomial correction), ``C`` and the rank."""

    __slots__ = ("Z", "A", "B", "B_corr", "C", "rank")

    def __init__(self, Z, A, B, B_corr, C, rank):
        self.Z, self.A, self.B, self.B_corr, self.C, self.rank = Z, A, B, B_corr, C, rank

    def replace(self, **kw):
        vals = {s: getattr(self, s) for s in self.__slots__}
        vals.update(kw)
        return BundleData(**vals)


class ExampleSpec:
    """A model for the projection formula.

    ``data`` is a :class:`BundleData` or a function of ``n`` returning one.
    ``y_points(n)`` lists ``(label, U)`` for the fixed points of ``Y`` and
    ``y_cotangent(label, U, n)`` gives the (virtual) cotangent there; when
    omitted both come from the vanishing filter on a truncated Grassmannian.
    ``order_scale`` is the grade of one unit of the reported order (3 for the
    affine model, whose order counts powers of ``q``).
    """

    def __init__(
        self,
        name,
        variables,
        data,
        grading,
        trunc_grading=None,
        n=1,
        m=0,
        f=None,
        min_m=0,
        order_scale=1,
        y_points=None,
        y_cotangent=None,
        y_trunc=None,
        description="",
    ):
        self.name = name
        self.variables = tuple(variables)
        self._data = data
        self.grading = Grading.coerce(grading)
        self.trunc_grading = Grading.coerce(trunc_grading or grading)
        self.n = n
        self.m = m
        self.f = f
        self.min_m = min_m
        self.order_scale = order_scale
        self._y_points = y_points
        self._y_cotangent = y_cotangent
        self.y_trunc = y_trunc
        self.description = description

    def bundle(self, n=None):
        n = self.n if n is None else n
        return self._data(n) if callable(self._data) else self._data

    def replace(self, **kw):
        """Copy with some fields changed; ``bundle_changes`` edits the bundle data."""
        changes = kw.pop("bundle_changes", None)
        args = dict(
            name=self.name,
            variables=self.variables,
            data=self._data,
            grading=self.grading,
            trunc_grading=self.trunc_grading,
            n=self.n,
            m=self.m,
            f=self.f,
            min_m=self.min_m,
            order_scale=self.order_scale,
            y_points=self._y_points,
            y_cotangent=self._y_cotangent,
            y_trunc=self.y_trunc,
            description=self.description,
        )
        args.update(kw)
        if changes:
            base = args["data"]

            def data(n, base=base):
                b = base(n) if callable(base) else base
                return b.replace(**changes(b) if callable(changes) else changes)

            args["data"] = data
        return ExampleSpec(**args)

    # -- truncations (in the model's truncation grading) -----------------
    def Z_trunc(self, k, n=None):
        return self.bundle(n).Z.truncate(self.trunc_grading, k)

    def B_trunc(self, l, n=None):
        b = self.bundle(n)
        return b.B.truncate(self.trunc_grading, l) + b.B_corr.truncate(self.trunc_grading, l)

    def E_at(self, U, l, n=None):
        b = self.bundle(n)
        return b.A * U + self.B_trunc(l, n) * U.dual() + b.C * U * U.dual()

    # -- Y side ---------------------------------------------------------
    def y_points(self, n=None):
        n = self.n if n is None else n
        if self._y_points is not None:
            return self._y_points(n)
        k = self._default_y_trunc(n)
        first = vanishing_fixed_points(self, n, k)
        second = vanishing_fixed_points(self, n, k + 1)
        if sorted(str(U) for _, U in first) != sorted(str(U) for _, U in second):
            raise Unstable(f"non-vanishing fixed points change between truncations {k} and {k + 1}")
        return first

    def y_cotangent(self, label, U, n=None):
        n = self.n if n is None else n
        if self._y_cotangent is not None:
            return self._y_cotangent(label, U, n)
        k = self._default_y_trunc(n)
        first = _virtual_cotangent(self, U, k, n)
        if first != _virtual_cotangent(self, U, k + 1, n):
            raise Unstable(f"virtual cotangent at {U} changes between truncations {k} and {k + 1}")
        return first

    def _default_y_trunc(self, n):
        return self.y_trunc if self.y_trunc is not None else 2 * n + 4

    def gamma(self, U, m=None, f=None):
        from .plethysm import gamma_Am

        return gamma_Am(U, self.m if m is None else m, self.f if f is None else f)

    def __repr__(self):
        return f"ExampleSpec({self.name!r}, n={self.n}, m={self.m}, grading={tuple(self.grading)})"


def E_at(U, spec, l_trunc, n=None):
    """``A U + B_{<=l} U* + C U U*``."""
    return spec.E_at(U, l_trunc, n)


def _virtual_cotangent(spec, U, k, n):
    Zk = spec.Z_trunc(k, n)
    T = U * (Zk - U).dual()
    return T.dual() - spec.E_at(U, k, n)


def constant_term_E(U, spec, l_trunc, n=None):
    return spec.E_at(U, l_trunc, n).constant_term()


def vanishing_fixed_points(spec, n, k):
    """Fixed points of ``G_{rank, Z_{<=k}}`` where ``E`` has zero constant term.

    Where the constant term is positive ``λ(E)`` vanishes; a negative constant
    term would make ``λ(E)`` undefined and is reported as an error.
    """
    b = spec.bundle(n)
    Zk = WeightList.from_character(spec.Z_trunc(k, n))
    out = []
    for p in enumerate_fixed_points(Zk, b.rank):
        ct = spec.E_at(p.U, k, n).constant_term()
        if ct == 0:
            out.append((p.S, p.U))
        elif ct < 0:
            raise LocProjError(f"E has negative constant term {ct} at {p.U}")
    return out


# ---------------------------------------------------------------------------
# coloring


def coloring_counts(U):
    """``(x0, x1)`` for the black/white coloring of the quotient weights ``U``.

    A box is black when its weight lies in ``U`` or outside the quadrant and
    white when it is a weight of ``V``.  ``x0`` counts lattice points whose
    upper-right box is black and lower-left box white; ``x1`` counts edges whose
    upper (horizontal edge) or right (vertical edge) box is black and whose
    opposite box is white.
    """
    U = {tuple(u) for u in U}

    def white(a, b):
        return a >= 0 and b >= 0 and (a, b) not in U

    x0 = sum(1 for a, b in U if white(a - 1, b - 1))
    x1 = sum(1 for a, b in U if white(a, b - 1)) + sum(1 for a, b in U if white(a - 1, b))
    return x0, x1


def is_young_diagram(U):
    """Whether a finite set of weights is closed under moving toward the origin."""
    U = {tuple(u) for u in U}
    return all(
        a >= 0 and b >= 0 and (a == 0 or (a - 1, b) in U) and (b == 0 or (a, b - 1) in U)
        for a, b in U
    )


# ---------------------------------------------------------------------------
# the cusp


GAMMA_CUSP = "0,2,3,..."


class SemigroupIdeal:
    """Monomial ideal of ``C[u^2, u^3]`` given by the exponents it misses."""

    __slots__ = ("complement",)

    def __init__(self, complement):
        comp = tuple(sorted(int(i) for i in complement))
        if any(i == 1 or i < 0 for i in comp):
            raise ValueError("the complement must lie in {0, 2, 3, ...}")
        self.complement = comp

    @property
    def n(self):
        return len(self.complement)

    def __contains__(self, i):
        return i >= 0 and i != 1 and i not in self.complement

    def is_ideal(self):
        top = max(self.complement, default=0) + 4
        return all((i + 2 in self) and (i + 3 in self) for i in range(top) if i in self)

    def U(self):
        return Character({(i,): 1 for i in self.complement}, LINE)

    def __eq__(self, other):
        return isinstance(other, SemigroupIdeal) and self.complement == other.complement

    def __hash__(self):
        return hash(self.complement)

    def __repr__(self):
        return f"SemigroupIdeal(complement={self.complement})"


def curve_fixed_points(n):
    """``[(S, U_S)]`` for all ideals of colength ``n``."""
    if n < 0:
        raise BadRange("n must be nonnegative")
    gamma = [0] + list(range(2, 2 * n + 3))
    out = []
    for comp in combinations(gamma, n):
        S = SemigroupIdeal(comp)
        if S.is_ideal():
            out.append((S, S.U()))
    return out


def _curve_data(n=None):
    z = LINE
    M = Character({(0,): 1, (2,): -1, (3,): -1, (5,): 1}, z)
    Z = RationalCharacter(Character({(0,): 1, (6,): -1}, z), {(2,): 1, (3,): 1})
    A = _mono((5,), z, -1)
    B_corr = Character({(6,): 1, (0,): -1}, z)
    return BundleData(Z, A, Z, B_corr, M - 1, n)


def curve_virtual_cotangent(S, k_trunc=None):
    """``T*_S X_{<=k} - E_S`` with ``B`` cut at the same grade; checked at ``k`` and ``k+1``."""
    if not isinstance(S, SemigroupIdeal):
        S = SemigroupIdeal(S)
    k = 2 * S.n + 8 if k_trunc is None else k_trunc
    spec = EXAMPLES["cusp-curve"].replace(n=S.n)
    a = _virtual_cotangent(spec, S.U(), k, S.n)
    if a != _virtual_cotangent(spec, S.U(), k + 1, S.n):
        raise Unstable(f"virtual cotangent at {S} changes at truncation {k}")
    return a


# ---------------------------------------------------------------------------
# affine Grassmannian of SL2


def affine_fixed_points(n, K=None):
    """``[(k, U_k)]`` for ``|k| <= K`` (default ``K = n``)."""
    if K is None:
        K = n
    if n < 0 or K < 0 or K > n:
        raise BadRange(f"need 0 <= K <= n, got K={K}, n={n}")
    out = []
    for k in range(-K, K + 1):
        terms = {}
        for i in range(-n, k):
            terms[(i, 1)] = terms.get((i, 1), 0) + 1
        for i in range(-n, -k):
            terms[(i, -1)] = terms.get((i, -1), 0) + 1
        out.append((k, Character(terms, AFFINE)))
    return out


def _affine_W(n):
    return Character({(-n, 1): 1, (-n, -1): 1}, AFFINE)


def _affine_data(n):
    W = _affine_W(n)
    M = Character({(0, 0): 1, (1, 0): -1}, AFFINE)
    Z = RationalCharacter(W, {(1, 0): 1})
    zero = Character((), AFFINE)
    return BundleData(Z, zero, Z, -W, M - 1, 2 * n)


def affine_virtual_cotangent(U, n):
    """``T*_k X - E_k = U* W - (1 - q) U U*``."""
    M = Character({(0, 0): 1, (1, 0): -1}, AFFINE)
    return U.dual() * _affine_W(n) - M * U * U.dual()


def affine_cotangent_Y(k, n, order):
    """``T*_k Y``: the virtual cotangent minus ``q/(1-q)``, through ``q^order``."""
    U = dict(affine_fixed_points(n))[k]
    geo = Character({(i, 0): 1 for i in range(1, order + 1)}, AFFINE)
    T = affine_virtual_cotangent(U, n) - geo
    return T.truncate((1, 0), order)


def pochhammer(a, N, inverse=False):
    """``(q^a; q)_∞`` (or its inverse) through ``q^N``, for ``a >= 1``."""
    if a < 1:
        raise ValueError("pochhammer needs a positive q-power")
    num = Character.constant(1, ("q",))
    den = {(i,): 1 for i in range(a, N + 1)}
    if inverse:
        r = RationalCharacter(num, den)
    else:
        for e in den:
            num = (num * (Character.constant(1, ("q",)) - Character.monomial(e, 1, ("q",)))).truncate((1,), N)
        r = RationalCharacter(num, {})
    return expand(r, N)


def _qz_poch(x, start, N):
    """``prod_{i >= start} (1 - x q^i)`` cut at q-degree ``N``; ``x = (qa, zb)``."""
    qa, zb = x
    out = Character.constant(1, AFFINE)
    i = start
    while qa + i <= N:
        out = (out * (_one(AFFINE) - _mono((qa + i, zb), AFFINE))).truncate((1, 0), N)
        i += 1
    return out


def theta(x, N):
    """``θ(x; q) = (q;q)(xq;q)(x^{-1};q)`` through q-degree ``N``; ``x = (qa, zb)`` with ``qa = 0``."""
    qa, zb = x
    if qa != 0:
        raise ValueError("theta is implemented for x a pure power of z")
    out = _qz_poch((0, 0), 1, N)
    out = (out * _qz_poch((0, zb), 1, N)).truncate((1, 0), N)
    return (out * _qz_poch((0, -zb), 0, N)).truncate((1, 0), N)


def theta_sum(K, N):
    """``sum_{|k| <= K} (z^{4k} q^{2k^2+k} - z^{4k-2} q^{2k^2-k})`` through q-degree ``N``."""
    terms = {}
    for k in range(-K, K + 1):
        for e, c in (((2 * k * k + k, 4 * k), 1), ((2 * k * k - k, 4 * k - 2), -1)):
            if e[0] <= N:
                terms[e] = terms.get(e, 0) + c
    return Character(terms, AFFINE)


def jtp_check(K, N):
    """Compare ``θ(z^2; q)`` with ``theta_sum(K, N)`` through q-degree ``N``.

    ``table`` lists, per q-degree, the z-coefficients of both sides.
    """
    lhs = theta((0, 2), N)
    rhs = theta_sum(K, N).truncate((1, 0), N)
    rows = []
    first = None
    for qd in range(N + 1):
        a = {e[1]: c for e, c in lhs.items() if e[0] == qd}
        b = {e[1]: c for e, c in rhs.items() if e[0] == qd}
        if a != b and first is None:
            first = qd
        rows.append(
            {
                "q": qd,
                "theta": {str(z): str(c) for z, c in sorted(a.items())},
                "sum": {str(z): str(c) for z, c in sorted(b.items())},
            }
        )
    return {"range": K, "order": N, "match": first is None, "first_mismatch": first, "table": rows}


def vanishing_lemma_check(n, k, spec=None):
    """Classify every ``n``-subset of plane weights of total degree ``<= k``.

    For each subset ``U`` the constant term of ``E_U`` must be nonnegative,
    zero exactly on Young diagrams, and equal to ``x1 - x0`` of the coloring.
    The z1/z2 swap must preserve the constant term.
    """
    spec = spec or get_spec("hilbert-plane")
    weights = [(a, d - a) for d in range(k + 1) for a in range(d + 1)]
    counts = {"subsets": 0, "young": 0, "zero": 0}
    failures = []
    for U in combinations(weights, n):
        counts["subsets"] += 1
        ct = constant_term_E(Character({u: 1 for u in U}, PLANE), spec, k, n)
        swapped = [(b, a) for a, b in U]
        ct_swap = constant_term_E(Character({u: 1 for u in swapped}, PLANE), spec, k, n)
        young = is_young_diagram(U)
        x0, x1 = coloring_counts(U)
        counts["young"] += young
        counts["zero"] += ct == 0
        problems = []
        if ct < 0:
            problems.append("negative")
        if (ct == 0) != young:
            problems.append("young")
        if x1 - x0 != ct:
            problems.append("coloring")
        if ct_swap != ct:
            problems.append("symmetry")
        if problems:
            failures.append({"U": [list(u) for u in U], "constant_term": ct, "x0": x0, "x1": x1, "problems": problems})
    return {"n": n, "k": k, **counts, "failures": failures, "pass": not failures}


def grassmannian_lambda_chi(Z, k, j, grading=None, N=10):
    """``χ_{G_{k,Z}}(λ^j(T*))`` by localization."""
    from .grassmann import _sum, cotangent_grades
    from .series import expand_dense

    Z = WeightList.coerce(Z)
    grading = Grading.coerce(grading or (1,) * len(Z.variables))
    grades = Z.distinct_grades(grading)
    terms = []
    for p in enumerate_fixed_points(Z, k):
        num = lambda_power(tangent_character(p).dual(), j).restrict(grading).univariate()
        lower, dense = expand_dense(num, cotangent_grades(grades, p.S).items(), N)
        if lower is not None:
            terms.append(Truncation(lower, N, dense))
    return _sum(terms, N)


# ---------------------------------------------------------------------------
# built-in specs


def _hilb_data(n):
    Z = RationalCharacter(_one(PLANE), {(1, 0): 1, (0, 1): 1})
    return BundleData(Z, _mono((1, 1), PLANE, -1), Z, -_one(PLANE), _plane_M() - 1, n)


def _hilb_points(n):
    return hilb_fixed_points(n)


def _hilb_cot(label, U, n):
    return hilb_cotangent_closed(U)


def _curve_points(n):
    return curve_fixed_points(n)


def _curve_cot(label, U, n):
    M = Character({(0,): 1, (2,): -1, (3,): -1, (5,): 1}, LINE)
    return U.dual() + _mono((5,), LINE) * U - _mono((6,), LINE) * U.dual() - M * U * U.dual()


def _affine_points(n):
    return affine_fixed_points(n)


def _affine_cot(label, U, n):
    return affine_virtual_cotangent(U, n)


def hilbert_grading(N):
    return Grading((1, N + 3))


EXAMPLES = {
    "hilbert-plane": ExampleSpec(
        "hilbert-plane",
        PLANE,
        _hilb_data,
        grading=hilbert_grading(10),
        trunc_grading=(1, 1),
        n=2,
        m=0,
        min_m=0,
        y_points=_hilb_points,
        y_cotangent=_hilb_cot,
        description="Hilbert scheme of n points in the plane",
    ),
    "cusp-curve": ExampleSpec(
        "cusp-curve",
        LINE,
        _curve_data,
        grading=(1,),
        n=1,
        m=1,
        min_m=1,
        y_points=_curve_points,
        y_cotangent=_curve_cot,
        description="Hilbert scheme of n points on y^2 = x^3",
    ),
    "affine-sl2": ExampleSpec(
        "affine-sl2",
        AFFINE,
        _affine_data,
        grading=(3, 1),
        trunc_grading=(1, 0),
        n=3,
        m=0,
        min_m=0,
        order_scale=3,
        y_points=_affine_points,
        y_cotangent=_affine_cot,
        description="affine Grassmannian of SL2, finite model of level n",
    ),
}


def get_spec(name):
    try:
        return EXAMPLES[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}") from None


# ---------------------------------------------------------------------------
# JSON


def spec_to_json(spec, n=None):
    n = spec.n if n is None else n
    b = spec.bundle(n)
    return {
        "name": spec.name,
        "variables": list(spec.variables),
        "Z": b.Z.to_json(),
        "A": b.A.to_json(),
        "B": b.B.to_json(),
        "B_corr": b.B_corr.to_json(),
        "C": b.C.to_json(),
        "rank": b.rank,
        "n": n,
        "m": spec.m,
        "f": spec.f.to_json() if spec.f is not None else None,
        "grading": list(spec.grading),
        "trunc_grading": list(spec.trunc_grading),
        "order_scale": spec.order_scale,
        "min_m": spec.min_m,
    }


def load_spec(source):
    """Build a spec from a JSON path, string or dict.

    Required keys: ``variables``, ``Z``, ``A``, ``B``, ``C``, ``grading``.
    Optional: ``B_corr``, ``rank`` (default ``n``), ``n``, ``m``, ``f``,
    ``trunc_grading``, ``order_scale``, ``min_m``, ``y_trunc``, ``name``.
    The Y side always comes from the vanishing filter.
    """
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        if text.lstrip().startswith("{"):
            data = json.loads(text)
        else:
            with open(text) as fh:
                data = json.load(fh)
    variables = tuple(data["variables"])
    Z = RationalCharacter.from_json(data["Z"], variables)
    A = Character.from_json(data["A"], variables)
    B = RationalCharacter.from_json(data["B"], variables)
    B_corr = Character.from_json(data.get("B_corr", []), variables)
    C = Character.from_json(data["C"], variables)
    n = int(data.get("n", 1))
    rank = data.get("rank")
    f = data.get("f")
    f = SymFun.from_json(f) if f else None

    def bundle(nn):
        return BundleData(Z, A, B, B_corr, C, int(rank) if rank is not None else nn)

    return ExampleSpec(
        data.get("name", "user"),
        variables,
        bundle,
        grading=data["grading"],
        trunc_grading=data.get("trunc_grading"),
        n=n,
        m=int(data.get("m", 0)),
        f=f,
        min_m=int(data.get("min_m", 0)),
        order_scale=int(data.get("order_scale", 1)),
        y_trunc=data.get("y_trunc"),
        description=data.get("description", ""),
    )
