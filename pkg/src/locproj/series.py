"""Exact characters, factored rational characters and truncated Laurent series.

A :class:`Character` is a finite integer combination of Laurent monomials in a
fixed ordered list of torus variables.  A :class:`RationalCharacter` divides a
character by a product of ``(1 - x**e)**m`` factors.  A :class:`Grading`
collapses several variables onto one (``z_i = t**a_i``) and :func:`expand`
turns a univariate rational character into a :class:`Truncation`, the Laurent
expansion about ``t = 0`` known exactly through a given order.

Everything is exact: coefficients are Python ints, or ``Fraction`` where a
division forces it.
"""

from fractions import Fraction
from itertools import permutations

from . import _kernels
from .errors import EmptyWindow, OutOfWindow, ZeroGradeDenominator

__all__ = [
    "Character",
    "RationalCharacter",
    "Grading",
    "Truncation",
    "char_dual",
    "char_dim",
    "char_det",
    "restrict",
    "expand",
    "series_add",
    "series_mul",
    "series_scale",
    "coefficient",
]


def _exact(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return x
    raise TypeError(f"expected an exact number, got {type(x).__name__}")


def _add_exps(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Character:
    """Finite integer combination of Laurent monomials.

    ``terms`` maps exponent tuples to integer coefficients; zero coefficients
    are dropped and equal exponents merged.  Instances are treated as
    immutable.

    >>> z1, z2 = Character.variables_of(("z1", "z2"))
    >>> (z1 + 2 * z2**-1).dual()
    Character('z1^-1 + 2*z2', variables=('z1', 'z2'))
    """

    __slots__ = ("_terms", "variables", "_hash")

    def __init__(self, terms=(), variables=("t",)):
        variables = tuple(variables)
        nv = len(variables)
        data = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nv:
                raise ValueError(f"exponent {exps} does not match variables {variables}")
            if c != int(c):
                raise ValueError("character coefficients must be integers")
            data[exps] = data.get(exps, 0) + int(c)
        self._terms = {e: c for e, c in data.items() if c}
        self.variables = variables
        self._hash = None

    @classmethod
    def _raw(cls, terms, variables):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.variables = variables
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exps, coeff=1, variables=None):
        exps = tuple(int(e) for e in exps)
        if variables is None:
            variables = ("t",) if len(exps) == 1 else tuple(f"x{i + 1}" for i in range(len(exps)))
        return cls({exps: coeff}, variables)

    @classmethod
    def constant(cls, c, variables=("t",)):
        variables = tuple(variables)
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def variables_of(cls, variables):
        """One degree-one monomial per variable, in order."""
        variables = tuple(variables)
        n = len(variables)
        return tuple(
            cls._raw({tuple(int(i == j) for j in range(n)): 1}, variables) for i in range(n)
        )

    # -- basic protocol -------------------------------------------------
    @property
    def nvars(self):
        return len(self.variables)

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Character.constant(other, self.variables)
        if not isinstance(other, Character):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    def _coerce(self, other):
        if isinstance(other, Character):
            if other.variables != self.variables:
                raise ValueError(
                    f"variable mismatch: {self.variables} vs {other.variables}"
                )
            return other
        if isinstance(other, int):
            return Character.constant(other, self.variables)
        return None

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Character._raw(out, self.variables)

    __radd__ = __add__

    def __neg__(self):
        return Character._raw({e: -c for e, c in self._terms.items()}, self.variables)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return Character._raw({}, self.variables)
            return Character._raw({e: c * other for e, c in self._terms.items()}, self.variables)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = _add_exps(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return Character._raw({e: c for e, c in out.items() if c}, self.variables)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.is_monomial() or abs(next(iter(self._terms.values()))) != 1:
                raise ValueError("negative powers exist only for unit monomials")
            (e, c), = self._terms.items()
            return Character._raw({tuple(k * x for x in e): c ** (-k)}, self.variables)
        result = Character.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure ------------------------------------------------------
    def is_monomial(self):
        return len(self._terms) == 1

    def coefficient(self, exps):
        return self._terms.get(tuple(exps), 0)

    def constant_term(self):
        return self._terms.get((0,) * self.nvars, 0)

    def dual(self):
        return Character._raw(
            {tuple(-x for x in e): c for e, c in self._terms.items()}, self.variables
        )

    def dim(self):
        return sum(self._terms.values())

    def det(self):
        exps = [0] * self.nvars
        for e, c in self._terms.items():
            for i, x in enumerate(e):
                exps[i] += c * x
        return Character._raw({tuple(exps): 1}, self.variables)

    def has_nonnegative_coefficients(self):
        return all(c > 0 for c in self._terms.values())

    def restrict(self, grading):
        """Substitute ``z_i = t**a_i``; equal grades merge."""
        grading = Grading.coerce(grading)
        if len(grading) != self.nvars:
            raise ValueError("grading length does not match the torus rank")
        out = {}
        for e, c in self._terms.items():
            g = grading.grade(e)
            out[g] = out.get(g, 0) + c
        return Character._raw({(g,): c for g, c in out.items() if c}, ("t",))

    def truncate(self, grading, bound):
        """Terms of grade at most ``bound``."""
        grading = Grading.coerce(grading)
        return Character._raw(
            {e: c for e, c in self._terms.items() if grading.grade(e) <= bound}, self.variables
        )

    def grades(self, grading):
        grading = Grading.coerce(grading)
        return sorted({grading.grade(e) for e in self._terms})

    def is_symmetric(self):
        n = self.nvars
        for perm in permutations(range(n)):
            for e, c in self._terms.items():
                if self._terms.get(tuple(e[p] for p in perm), 0) != c:
                    return False
        return True

    def univariate(self):
        """``{degree: coeff}`` for a one-variable character."""
        if self.nvars != 1:
            raise ValueError("not a univariate character")
        return {e[0]: c for e, c in self._terms.items()}

    @classmethod
    def from_univariate(cls, data, variable="t"):
        return cls._raw({(int(d),): int(c) for d, c in data.items() if c}, (variable,))

    # -- serialization --------------------------------------------------
    def to_json(self):
        return [{"coeff": str(c), "exps": list(e)} for e, c in self.items()]

    @classmethod
    def from_json(cls, data, variables):
        return cls(((tuple(t["exps"]), int(t["coeff"])) for t in data), variables)

    def __repr__(self):
        return f"Character({str(self)!r}, variables={self.variables!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                v if x == 1 else f"{v}^{x}" for v, x in zip(self.variables, e) if x
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


class RationalCharacter:
    """``numerator / prod (1 - x**e)**m`` with nonzero exponents ``e``."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=()):
        if isinstance(numerator, int):
            raise TypeError("numerator must be a Character")
        self.numerator = numerator
        den = {}
        items = denominator.items() if isinstance(denominator, dict) else denominator
        for exps, m in items:
            exps = tuple(int(x) for x in exps)
            if len(exps) != numerator.nvars:
                raise ValueError("denominator exponent has the wrong length")
            if not any(exps):
                raise ValueError("denominator exponent must be nonzero")
            if m < 0:
                raise ValueError("denominator multiplicities must be positive")
            if m:
                den[exps] = den.get(exps, 0) + int(m)
        self.denominator = den

    @classmethod
    def from_character(cls, c):
        return cls(c, {})

    @property
    def variables(self):
        return self.numerator.variables

    @property
    def nvars(self):
        return self.numerator.nvars

    def is_polynomial(self):
        return not self.denominator

    def denominator_character(self):
        out = Character.constant(1, self.variables)
        for e, m in self.denominator.items():
            f = Character.constant(1, self.variables) - Character.monomial(e, 1, self.variables)
            out = out * f**m
        return out

    def _lift(self, other):
        if isinstance(other, RationalCharacter):
            return other
        if isinstance(other, (Character, int)):
            if isinstance(other, int):
                other = Character.constant(other, self.variables)
            return RationalCharacter(other, {})
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        den = dict(self.denominator)
        for e, m in other.denominator.items():
            den[e] = max(den.get(e, 0), m)

        def scaled(r):
            num = r.numerator
            for e, m in den.items():
                extra = m - r.denominator.get(e, 0)
                if extra:
                    f = Character.constant(1, r.variables) - Character.monomial(e, 1, r.variables)
                    num = num * f**extra
            return num

        return RationalCharacter(scaled(self) + scaled(other), den)

    __radd__ = __add__

    def __neg__(self):
        return RationalCharacter(-self.numerator, self.denominator)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        den = dict(self.denominator)
        for e, m in other.denominator.items():
            den[e] = den.get(e, 0) + m
        return RationalCharacter(self.numerator * other.numerator, den)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RationalCharacter):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self):
        return hash((self.numerator, frozenset(self.denominator.items())))

    def restrict(self, grading):
        grading = Grading.coerce(grading)
        den = {}
        for e, m in self.denominator.items():
            g = grading.grade(e)
            if g == 0:
                raise ZeroGradeDenominator(
                    f"factor (1 - x^{list(e)}) has grade 0 under {tuple(grading)}"
                )
            den[(g,)] = den.get((g,), 0) + m
        return RationalCharacter(self.numerator.restrict(grading), den)

    def truncate(self, grading, bound):
        """The terms of grade at most ``bound`` of the expansion about 0.

        Every denominator exponent must have positive grade so that the
        expansion has finitely many terms below any bound.
        """
        grading = Grading.coerce(grading)
        current = dict(self.numerator.truncate(grading, bound)._terms)
        for e, m in self.denominator.items():
            g = grading.grade(e)
            if g <= 0:
                raise ZeroGradeDenominator(
                    f"factor (1 - x^{list(e)}) has grade {g}; truncation needs positive grades"
                )
            for _ in range(m):
                out = {}
                for base, c in current.items():
                    exps, gb = base, grading.grade(base)
                    while gb <= bound:
                        out[exps] = out.get(exps, 0) + c
                        exps = _add_exps(exps, e)
                        gb += g
                current = {k: v for k, v in out.items() if v}
        return Character._raw(current, self.variables)

    def to_json(self):
        return {
            "num": self.numerator.to_json(),
            "den": [{"exps": list(e), "mult": m} for e, m in sorted(self.denominator.items())],
        }

    @classmethod
    def from_json(cls, data, variables):
        if isinstance(data, list):
            return cls(Character.from_json(data, variables), {})
        num = Character.from_json(data.get("num", data.get("terms", [])), variables)
        den = {tuple(d["exps"]): int(d["mult"]) for d in data.get("den", [])}
        return cls(num, den)

    def __repr__(self):
        den = " ".join(f"(1-{list(e)})^{m}" for e, m in sorted(self.denominator.items()))
        return f"RationalCharacter({self.numerator!s} / [{den}])"


class Grading(tuple):
    """Integer weight per torus variable; ``z_i = t**weights[i]``."""

    __slots__ = ()

    def __new__(cls, weights):
        return super().__new__(cls, (int(w) for w in weights))

    @classmethod
    def coerce(cls, g):
        return g if isinstance(g, Grading) else cls(g)

    def grade(self, exps):
        return sum(a * e for a, e in zip(self, exps))

    def __repr__(self):
        return f"Grading({tuple(self)!r})"


class Truncation:
    """A Laurent series in ``t`` known exactly on degrees ``lower..order``.

    Coefficients below ``lower`` are zero; nothing is known above ``order``.
    """

    __slots__ = ("lower", "order", "coeffs")

    def __init__(self, lower, order, coeffs=()):
        lower, order = int(lower), int(order)
        if order < lower:
            raise EmptyWindow(f"empty window [{lower}, {order}]")
        size = order - lower + 1
        if isinstance(coeffs, dict):
            dense = [0] * size
            for d, c in coeffs.items():
                if not lower <= d <= order:
                    if c:
                        raise OutOfWindow(f"degree {d} outside [{lower}, {order}]")
                    continue
                dense[d - lower] = _exact(c)
        else:
            dense = [_exact(c) for c in coeffs]
            if len(dense) > size:
                raise ValueError("too many coefficients for the window")
            dense += [0] * (size - len(dense))
        self.lower = lower
        self.order = order
        self.coeffs = tuple(dense)

    @classmethod
    def zero(cls, order, lower=None):
        return cls(order if lower is None else lower, order)

    @classmethod
    def from_character(cls, c, order, lower=None):
        """A univariate Laurent polynomial viewed as a series."""
        data = c.univariate() if isinstance(c, Character) else dict(c)
        low = min(data, default=order)
        if lower is not None:
            low = min(low, lower)
        low = min(low, order)
        return cls(low, order, {d: v for d, v in data.items() if d <= order})

    # -- access ---------------------------------------------------------
    def coefficient(self, d):
        if d < self.lower:
            # the series vanishes below its lower bound
            return 0
        if d > self.order:
            raise OutOfWindow(f"degree {d} is beyond the known order {self.order}")
        return self.coeffs[d - self.lower]

    def __getitem__(self, d):
        return self.coefficient(d)

    def as_dict(self):
        return {self.lower + i: c for i, c in enumerate(self.coeffs) if c}

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return self.lower + i
        return None

    def is_integral(self):
        return all(isinstance(c, int) for c in self.coeffs)

    def truncated(self, order):
        if order >= self.order:
            return self
        lower = min(self.lower, order)
        return Truncation(lower, order, {d: c for d, c in self.as_dict().items() if d <= order})

    def with_lower(self, lower):
        """Same series stored from a smaller lower bound."""
        if lower > self.lower:
            val = self.valuation()
            if val is not None and val < lower:
                raise ValueError("cannot raise the lower bound above the valuation")
        lower = min(lower, self.order)
        return Truncation(lower, self.order, self.as_dict())

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Truncation):
            return NotImplemented
        return self.order == other.order and self.as_dict() == other.as_dict()

    def __hash__(self):
        return hash((self.order, frozenset(self.as_dict().items())))

    def first_mismatch(self, other):
        """Lowest degree where the two series differ on their common window."""
        top = min(self.order, other.order)
        a, b = self.as_dict(), other.as_dict()
        for d in sorted(set(a) | set(b)):
            if d > top:
                break
            if a.get(d, 0) != b.get(d, 0):
                return d
        return None

    def agrees(self, other):
        return self.first_mismatch(other) is None

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Truncation(0, max(self.order, 0), {0: other}) if other else Truncation.zero(self.order)
        if not isinstance(other, Truncation):
            return NotImplemented
        lower = min(self.lower, other.lower)
        order = min(self.order, other.order)
        if order < lower:
            raise EmptyWindow(f"empty window [{lower}, {order}]")
        out = [0] * (order - lower + 1)
        for t in (self, other):
            for i, c in enumerate(t.coeffs):
                d = t.lower + i
                if d > order:
                    break
                out[d - lower] += c
        return Truncation(lower, order, out)

    __radd__ = __add__

    def __neg__(self):
        return Truncation(self.lower, self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _exact(Fraction(c)) if not isinstance(c, int) else c
        return Truncation(self.lower, self.order, [_exact(x * c) for x in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Truncation):
            return NotImplemented
        lower = self.lower + other.lower
        order = min(self.order + other.lower, other.order + self.lower)
        if order < lower:
            raise EmptyWindow(f"empty window [{lower}, {order}]")
        n = order - lower + 1
        if self.is_integral() and other.is_integral():
            out = _kernels.conv_trunc(list(self.coeffs), list(other.coeffs), n)
        else:
            out = [0] * n
            for i, a in enumerate(self.coeffs[:n]):
                if a:
                    for j, b in enumerate(other.coeffs[: n - i]):
                        out[i + j] += a * b
        return Truncation(lower, order, out)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by ``t**k``."""
        return Truncation(self.lower + k, self.order + k, self.coeffs)

    # -- output ---------------------------------------------------------
    def to_json(self):
        return {
            "lower": self.lower,
            "order": self.order,
            "coeffs": {str(d): str(c) for d, c in self.as_dict().items()},
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            data["lower"],
            data["order"],
            {int(d): _exact(Fraction(c)) for d, c in data["coeffs"].items()},
        )

    def __repr__(self):
        return f"Truncation(lower={self.lower}, order={self.order}, {self})"

    def __str__(self):
        terms = [f"{c}*t^{d}" for d, c in self.as_dict().items()]
        return (" + ".join(terms) if terms else "0") + f" + O(t^{self.order + 1})"


# ---------------------------------------------------------------------------
# operations


def char_dual(gamma):
    return gamma.dual()


def char_dim(gamma):
    return gamma.dim()


def char_det(gamma):
    return gamma.det()


def restrict(gamma, grading):
    return gamma.restrict(grading)


def _normalize_denominator(den):
    """Rewrite ``(1 - t**g)**-m`` with ``g < 0`` as ``(-1)**m t**(|g| m) (1 - t**|g|)**-m``.

    Returns ``(shift, sign, [(|g|, m), ...])``.
    """
    shift, sign, factors = 0, 1, {}
    for g, m in den:
        if g == 0:
            raise ZeroGradeDenominator("denominator factor 1 - t^0")
        if g < 0:
            shift += -g * m
            if m % 2:
                sign = -sign
            g = -g
        factors[g] = factors.get(g, 0) + m
    return shift, sign, sorted(factors.items())


def expand_dense(numerator, den, order):
    """Laurent expansion of ``numerator / prod (1 - t**g)**m`` through ``order``.

    ``numerator`` maps degree to integer coefficient and ``den`` is an iterable
    of ``(g, m)``.  Returns ``(lower, coeffs)`` with ``coeffs`` covering
    ``lower..order``, or ``(None, [])`` when nothing lies at or below ``order``.
    """
    shift, sign, factors = _normalize_denominator(den)
    num = {d + shift: c * sign for d, c in numerator.items() if c}
    if not num:
        return None, []
    lower = min(num)
    if lower > order:
        return None, []
    dense = [0] * (order - lower + 1)
    for d, c in num.items():
        if d <= order:
            dense[d - lower] += c
    for g, m in factors:
        if g <= order - lower:
            dense = _kernels.div_one_minus(dense, g, m)
    return lower, dense


def expand(r, order):
    """Expansion about ``t = 0`` of a univariate (rational) character."""
    if isinstance(r, Character):
        r = RationalCharacter(r, {})
    if r.nvars != 1:
        raise ValueError("expand needs a univariate character; restrict it first")
    lower, dense = expand_dense(
        r.numerator.univariate(), [(e[0], m) for e, m in r.denominator.items()], order
    )
    if lower is None:
        return Truncation.zero(order)
    return Truncation(lower, order, dense)


def series_add(a, b):
    return a + b


def series_mul(a, b):
    return a * b


def series_scale(a, c):
    return a.scale(c)


def coefficient(s, d):
    """Coefficient of ``t**d``; raises :class:`OutOfWindow` outside ``[lower, order]``."""
    if not s.lower <= d <= s.order:
        raise OutOfWindow(f"degree {d} outside [{s.lower}, {s.order}]")
    return s.coeffs[d - s.lower]
