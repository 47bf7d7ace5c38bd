"""λ-operations on characters.

``lambda_w_series`` expands ``prod_I (1 - w x**I)**a_I`` to a fixed order in
``w``; the coefficient of ``(-w)**j`` is ``λ^j``.  ``lambda_total`` gives the
closed form at ``w = 1`` as a factored rational character.
"""

import json

from .errors import IndexTooLarge, UnitWeight
from .series import Character, Grading, RationalCharacter

__all__ = [
    "WSeries",
    "SymFun",
    "lambda_w_series",
    "lambda_total",
    "lambda_power",
    "eval_symfun",
    "gamma_Am",
]


class WSeries:
    """Coefficients of ``w**0 .. w**J`` of a power series with character coefficients."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(rows)
        if not self.rows:
            raise ValueError("a WSeries needs at least the w^0 coefficient")

    @property
    def J(self):
        return len(self.rows) - 1

    @property
    def variables(self):
        return self.rows[0].variables

    def __getitem__(self, j):
        return self.rows[j]

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, WSeries):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def lam(self, j):
        """``λ^j`` read off as ``(-1)**j [w**j]``."""
        return self.rows[j] if j % 2 == 0 else -self.rows[j]

    def __mul__(self, other):
        J = min(self.J, other.J)
        zero = Character((), self.variables)
        out = [zero] * (J + 1)
        for i in range(J + 1):
            if not self.rows[i]:
                continue
            for j in range(J + 1 - i):
                out[i + j] = out[i + j] + self.rows[i] * other.rows[j]
        return WSeries(out)

    def at_one(self):
        """Sum of all stored rows: the ``w = 1`` value of the truncation."""
        total = Character((), self.variables)
        for r in self.rows:
            total = total + r
        return total

    def __repr__(self):
        return f"WSeries({[str(r) for r in self.rows]})"


class SymFun:
    """Integer combination of products ``e_{i1} ... e_{ik}``.

    ``terms`` is a list of ``(coeff, indices)``; the empty index tuple is the
    constant 1.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        merged = {}
        for c, idx in terms:
            idx = tuple(sorted(int(i) for i in idx))
            if any(i <= 0 for i in idx):
                raise ValueError("elementary indices must be positive")
            merged[idx] = merged.get(idx, 0) + int(c)
        self.terms = tuple(sorted((c, idx) for idx, c in merged.items() if c))

    @classmethod
    def one(cls):
        return cls([(1, ())])

    @classmethod
    def e(cls, *indices):
        return cls([(1, indices)])

    def max_index(self):
        return max((max(idx) for _, idx in self.terms if idx), default=0)

    def has_nonnegative_coefficients(self):
        return all(c > 0 for c, _ in self.terms)

    def __add__(self, other):
        return SymFun(self.terms + other.terms)

    def __mul__(self, other):
        if isinstance(other, int):
            return SymFun([(c * other, idx) for c, idx in self.terms])
        return SymFun([(c1 * c2, i1 + i2) for c1, i1 in self.terms for c2, i2 in other.terms])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymFun):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def to_json(self):
        return [{"coeff": c, "indices": list(idx)} for c, idx in self.terms]

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls((int(t["coeff"]), t["indices"]) for t in data)

    def __repr__(self):
        if not self.terms:
            return "SymFun(0)"
        parts = []
        for c, idx in self.terms:
            mono = "*".join(f"e{i}" for i in idx) or "1"
            parts.append(mono if c == 1 else f"{c}*{mono}")
        return "SymFun(" + " + ".join(parts) + ")"


def _ordered_terms(gamma, grading):
    items = gamma.items()
    if grading is not None:
        items.sort(key=lambda t: (grading.grade(t[0]), t[0]))
    return items


def lambda_w_series(gamma, J, grading=None, bound=None):
    """``prod_I (1 - w x**I)**a_I`` modulo ``w**(J+1)``.

    With a ``grading`` and ``bound``, factors are multiplied in increasing
    grade, and while applying factors of nonnegative grade any monomial of
    grade above ``bound`` is discarded.  Grades never decrease after that
    point, so every kept monomial has its exact coefficient.
    """
    if grading is not None:
        grading = Grading.coerce(grading)
    variables = gamma.variables
    nv = len(variables)
    rows = [{(0,) * nv: 1}] + [{} for _ in range(J)]

    for exps, a in _ordered_terms(gamma, grading):
        prune = bound is not None and grading.grade(exps) >= 0

        def keep(e):
            return not prune or grading.grade(e) <= bound

        if a > 0:
            for _ in range(a):
                for j in range(J, 0, -1):
                    prev = rows[j - 1]
                    if not prev:
                        continue
                    row = rows[j]
                    for e, c in prev.items():
                        s = tuple(x + y for x, y in zip(e, exps))
                        if not keep(s):
                            continue
                        v = row.get(s, 0) - c
                        if v:
                            row[s] = v
                        else:
                            row.pop(s, None)
        else:
            for _ in range(-a):
                for j in range(1, J + 1):
                    prev = rows[j - 1]
                    row = rows[j]
                    for e, c in prev.items():
                        s = tuple(x + y for x, y in zip(e, exps))
                        if not keep(s):
                            continue
                        v = row.get(s, 0) + c
                        if v:
                            row[s] = v
                        else:
                            row.pop(s, None)
    return WSeries(Character._raw(r, variables) for r in rows)


def lambda_power(gamma, j):
    """``λ^j(γ)``."""
    return lambda_w_series(gamma, j).lam(j)


def lambda_total(gamma):
    """``λ(γ) = prod_I (1 - x**I)**a_I`` as a factored rational character."""
    zero = (0,) * gamma.nvars
    if gamma.coefficient(zero):
        raise UnitWeight("λ of a character containing the trivial weight is 0 or undefined")
    num = Character.constant(1, gamma.variables)
    den = {}
    for exps, a in gamma.items():
        if a > 0:
            factor = Character.constant(1, gamma.variables) - Character.monomial(
                exps, 1, gamma.variables
            )
            num = num * factor**a
        else:
            den[exps] = -a
    return RationalCharacter(num, den)


def eval_symfun(f, gamma, J=None):
    """Substitute ``λ^i(γ)`` for ``e_i``."""
    top = f.max_index()
    if J is None:
        J = top
    if top > J:
        raise IndexTooLarge(f"e_{top} needs λ^{top} but only λ^0..λ^{J} are available")
    ws = lambda_w_series(gamma, J)
    lams = [ws.lam(j) for j in range(J + 1)]
    total = Character((), gamma.variables)
    for c, idx in f.terms:
        term = Character.constant(c, gamma.variables)
        for i in idx:
            term = term * lams[i]
        total = total + term
    return total


def gamma_Am(A, m, f=None):
    """``det(A)**m f(A)``."""
    det = A.det() ** m
    if f is None:
        return det
    return det * eval_symfun(f, A)
