"""Exact arithmetic: rationals, sparse polynomials, rational functions with affine-linear denominators.

Scalars are :class:`fractions.Fraction`.  Polynomials are immutable sparse maps
from exponent tuples to scalars over a :class:`VariableLayout`.  Rational
functions keep their denominators as a multiset of normalized affine-linear
forms, which is enough for every operator this package builds and lets us
avoid multivariate gcd altogether.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import chain
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch, NonLinearDenominator, NotDivisible, PoleAtPoint

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        if x != int(x):
            raise TypeError("refusing inexact float %r; pass a string or Fraction" % x)
        return Fraction(int(x))
    # gmpy2.mpq and friends
    return Fraction(x.numerator, x.denominator)


def as_vector(xs) -> tuple:
    return tuple(as_scalar(x) for x in xs)


def scalar_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


# ---------------------------------------------------------------------------
# layout


@dataclass(frozen=True)
class VariableLayout:
    """Rows of variables ``x[k, i]`` (1-based) flattened row-major onto ``0..N-1``."""

    row_sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.row_sizes)
        if not sizes or any(n <= 0 for n in sizes):
            raise ValueError("row sizes must be positive, got %r" % (self.row_sizes,))
        object.__setattr__(self, "row_sizes", sizes)

    @property
    def nvars(self) -> int:
        return sum(self.row_sizes)

    @property
    def offsets(self) -> tuple:
        out, acc = [], 0
        for n in self.row_sizes:
            out.append(acc)
            acc += n
        return tuple(out)

    def index(self, k: int, i: int) -> int:
        if not (1 <= k <= len(self.row_sizes) and 1 <= i <= self.row_sizes[k - 1]):
            raise IndexError("no variable x[%d,%d] in layout %r" % (k, i, self.row_sizes))
        return self.offsets[k - 1] + i - 1

    def position(self, j: int) -> tuple:
        for k, (off, n) in enumerate(zip(self.offsets, self.row_sizes), start=1):
            if off <= j < off + n:
                return (k, j - off + 1)
        raise IndexError(j)

    def name(self, j: int) -> str:
        if len(self.row_sizes) == 1:
            return "x%d" % (j + 1)
        k, i = self.position(j)
        return "x%d_%d" % (k, i)

    def unit(self, k: int, i: int, scale=1) -> tuple:
        v = [ZERO] * self.nvars
        v[self.index(k, i)] = as_scalar(scale)
        return tuple(v)

    def zero_vector(self) -> tuple:
        return (ZERO,) * self.nvars


def _layout(layout) -> VariableLayout:
    if isinstance(layout, VariableLayout):
        return layout
    if isinstance(layout, int):
        return VariableLayout((layout,))
    return VariableLayout(tuple(layout))


def _grlex_key(exp: tuple) -> tuple:
    return (sum(exp), exp)


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Immutable sparse multivariate polynomial with rational coefficients."""

    __slots__ = ("layout", "_terms", "_hash")

    def __init__(self, layout, terms: Mapping | None = None, *, _trusted=False):
        self.layout = _layout(layout)
        if _trusted:
            self._terms = terms
        else:
            n = self.layout.nvars
            clean = {}
            for exp, c in (terms or {}).items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != n:
                    raise DimensionMismatch("exponent %r does not match %d variables" % (exp, n))
                if any(e < 0 for e in exp):
                    raise ValueError("negative exponent %r" % (exp,))
                c = as_scalar(c)
                if c:
                    clean[exp] = clean.get(exp, ZERO) + c
                    if not clean[exp]:
                        del clean[exp]
            self._terms = clean
        self._hash = None

    # -- constructors
    @classmethod
    def zero(cls, layout) -> "Polynomial":
        return cls(layout, {}, _trusted=True)

    @classmethod
    def constant(cls, layout, c) -> "Polynomial":
        layout = _layout(layout)
        c = as_scalar(c)
        return cls(layout, {(0,) * layout.nvars: c} if c else {}, _trusted=True)

    @classmethod
    def variable(cls, layout, j: int) -> "Polynomial":
        layout = _layout(layout)
        exp = [0] * layout.nvars
        exp[j] = 1
        return cls(layout, {tuple(exp): ONE}, _trusted=True)

    @classmethod
    def var(cls, layout, k: int, i: int) -> "Polynomial":
        layout = _layout(layout)
        return cls.variable(layout, layout.index(k, i))

    @classmethod
    def linear(cls, layout, coeffs: Sequence, const=0) -> "Polynomial":
        layout = _layout(layout)
        n = layout.nvars
        terms = {}
        for j, c in enumerate(coeffs):
            c = as_scalar(c)
            if c:
                exp = [0] * n
                exp[j] = 1
                terms[tuple(exp)] = c
        const = as_scalar(const)
        if const:
            terms[(0,) * n] = const
        return cls(layout, terms, _trusted=True)

    # -- basic queries
    @property
    def nvars(self) -> int:
        return self.layout.nvars

    def terms(self) -> list:
        """(exponent, coefficient) pairs in canonical (descending graded-lex) order."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def items(self):
        return self._terms.items()

    def coefficient(self, exp) -> Fraction:
        return self._terms.get(tuple(exp), ZERO)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, ZERO)

    @property
    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial(self.layout, {e: c for e, c in self._terms.items() if sum(e) == d}, _trusted=True)

    def truncate(self, d: int) -> "Polynomial":
        return Polynomial(self.layout, {e: c for e, c in self._terms.items() if sum(e) <= d}, _trusted=True)

    def variables(self) -> set:
        out = set()
        for e in self._terms:
            out.update(j for j, k in enumerate(e) if k)
        return out

    # -- arithmetic
    def _check(self, other: "Polynomial"):
        if other.layout != self.layout:
            raise DimensionMismatch("layouts differ: %r vs %r" % (self.layout.row_sizes, other.layout.row_sizes))

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.layout, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial(self.layout, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.layout, {e: -c for e, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = as_scalar(c)
        if not c:
            return Polynomial.zero(self.layout)
        if c == 1:
            return self
        return Polynomial(self.layout, {e: v * c for e, v in self._terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        if not self._terms or not other._terms:
            return Polynomial.zero(self.layout)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out = {}
        get = out.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple([x + y for x, y in zip(e1, e2)])
                out[e] = get(e, ZERO) + c1 * c2
        return Polynomial(self.layout, {e: c for e, c in out.items() if c}, _trusted=True)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.layout, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.layout, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.layout == other.layout and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.layout, frozenset(self._terms.items())))
        return self._hash

    # -- evaluation and substitution
    def evaluate(self, point) -> Fraction:
        point = as_vector(point)
        if len(point) != self.nvars:
            raise DimensionMismatch("point has %d coordinates, expected %d" % (len(point), self.nvars))
        total = ZERO
        for e, c in self._terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def pullback(self, rows, shift=None) -> "Polynomial":
        """Return ``x -> p(A x + b)`` with ``A`` given by ``rows`` (one row per variable)."""
        return _pullback(self, _rows_key(rows, self.nvars), _shift_key(shift, self.nvars))

    def translate(self, shift) -> "Polynomial":
        """Return ``x -> p(x + shift)``."""
        return _pullback(self, None, _shift_key(shift, self.nvars))

    def exact_divide(self, form: "AffineLinearForm") -> "Polynomial":
        """Quotient ``q`` with ``q * form == self``; raises :class:`NotDivisible` otherwise."""
        q = _divide_by_form(self, form)
        if q is None:
            raise NotDivisible("%s is not divisible by %s" % (self, form))
        return q

    def divisible_by(self, form: "AffineLinearForm") -> bool:
        return _divide_by_form(self, form) is not None

    # -- display and serialization
    def __repr__(self):
        return "Polynomial(%s)" % self

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.terms():
            mono = "*".join(
                self.layout.name(j) + ("^%d" % k if k > 1 else "") for j, k in enumerate(e) if k
            )
            if not mono:
                parts.append(scalar_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append("%s*%s" % (scalar_str(c), mono))
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "layout": list(self.layout.row_sizes),
            "terms": [
                {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)} for e, c in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Polynomial":
        layout = VariableLayout(tuple(data["layout"]))
        terms = {}
        for t in data["terms"]:
            terms[tuple(t["exp"])] = Fraction(int(t["num"]), int(t.get("den", 1)))
        return cls(layout, terms)


def _rows_key(rows, n):
    if rows is None:
        return None
    key = tuple(tuple(as_scalar(x) for x in row) for row in rows)
    if len(key) != n or any(len(r) != n for r in key):
        raise DimensionMismatch("expected a %dx%d matrix" % (n, n))
    return key


def _shift_key(shift, n):
    if shift is None:
        return None
    key = as_vector(shift)
    if len(key) != n:
        raise DimensionMismatch("shift has %d coordinates, expected %d" % (len(key), n))
    if not any(key):
        return None
    return key


@lru_cache(maxsize=200_000)
def _pullback(p: Polynomial, rows, shift) -> Polynomial:
    n = p.nvars
    layout = p.layout
    if rows is None and shift is None:
        return p
    perm = None
    if rows is not None:
        perm = []
        for row in rows:
            nz = [k for k, x in enumerate(row) if x]
            if len(nz) == 1 and row[nz[0]] == 1:
                perm.append(nz[0])
            else:
                perm = None
                break
    if rows is None:
        perm = list(range(n))
    if perm is not None and shift is None:
        out = {}
        for e, c in p._terms.items():
            new = [0] * n
            for j, k in enumerate(e):
                if k:
                    new[perm[j]] += k
            out[tuple(new)] = c
        return Polynomial(layout, out, _trusted=True)

    # general linear images x_j -> sum_k rows[j][k] x_k + shift[j]
    images = []
    for j in range(n):
        if perm is not None:
            coeffs = [ZERO] * n
            coeffs[perm[j]] = ONE
        else:
            coeffs = rows[j]
        images.append(Polynomial.linear(layout, coeffs, shift[j] if shift is not None else 0))
    cache = {}

    def power(j, k):
        key = (j, k)
        if key not in cache:
            cache[key] = images[j] if k == 1 else power(j, k - 1) * images[j]
        return cache[key]

    acc = {}
    one = (0,) * n
    for e, c in p._terms.items():
        term = None
        for j, k in enumerate(e):
            if k:
                term = power(j, k) if term is None else term * power(j, k)
        if term is None:
            acc[one] = acc.get(one, ZERO) + c
        else:
            for e2, c2 in term._terms.items():
                acc[e2] = acc.get(e2, ZERO) + c * c2
    return Polynomial(layout, {e: c for e, c in acc.items() if c}, _trusted=True)


# ---------------------------------------------------------------------------
# affine-linear forms


class AffineLinearForm:
    """``sum_j c_j x_j + c0`` normalized so the first nonzero ``c_j`` equals 1."""

    __slots__ = ("coeffs", "const", "lead", "_hash")

    def __init__(self, coeffs: Sequence, const=0):
        coeffs = as_vector(coeffs)
        const = as_scalar(const)
        lead = next((j for j, c in enumerate(coeffs) if c), None)
        if lead is None:
            raise ValueError("affine-linear form needs a nonzero linear part")
        if coeffs[lead] != 1:
            raise ValueError("form is not normalized; use AffineLinearForm.normalize")
        self.coeffs = coeffs
        self.const = const
        self.lead = lead
        self._hash = hash((coeffs, const))

    @classmethod
    def normalize(cls, coeffs: Sequence, const=0):
        """Return ``(scale, form)`` with ``scale * form`` equal to the given affine function."""
        coeffs = as_vector(coeffs)
        const = as_scalar(const)
        lead = next((j for j, c in enumerate(coeffs) if c), None)
        if lead is None:
            raise ValueError("affine-linear form needs a nonzero linear part")
        s = coeffs[lead]
        return s, cls(tuple(c / s for c in coeffs), const / s)

    @classmethod
    def from_polynomial(cls, p: Polynomial):
        if p.degree != 1:
            raise NonLinearDenominator("%s is not affine-linear" % p)
        coeffs = [ZERO] * p.nvars
        for e, c in p.items():
            if any(e):
                coeffs[e.index(1)] = c
        return cls.normalize(coeffs, p.constant_value())

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def key(self):
        return (self.coeffs, self.const)

    def evaluate(self, point) -> Fraction:
        return sum((c * as_scalar(x) for c, x in zip(self.coeffs, point) if c), self.const)

    def as_polynomial(self, layout) -> Polynomial:
        return Polynomial.linear(layout, self.coeffs, self.const)

    def pullback(self, rows, shift):
        """Return ``(scale, form)`` for ``x -> self(A x + b)``."""
        n = self.nvars
        if rows is None:
            new = list(self.coeffs)
        else:
            new = [ZERO] * n
            for j, c in enumerate(self.coeffs):
                if c:
                    row = rows[j]
                    for k in range(n):
                        if row[k]:
                            new[k] += c * row[k]
        const = self.const
        if shift is not None:
            const += sum((c * s for c, s in zip(self.coeffs, shift) if c), ZERO)
        return AffineLinearForm.normalize(new, const)

    def __eq__(self, other):
        return isinstance(other, AffineLinearForm) and self.coeffs == other.coeffs and self.const == other.const

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        return "AffineLinearForm(%s)" % self

    def __str__(self):
        parts = []
        for j, c in enumerate(self.coeffs):
            if c:
                parts.append((c, "x%d" % (j + 1)))
        s = []
        for c, name in parts:
            if c == 1:
                s.append("+ " + name)
            elif c == -1:
                s.append("- " + name)
            elif c > 0:
                s.append("+ %s*%s" % (scalar_str(c), name))
            else:
                s.append("- %s*%s" % (scalar_str(-c), name))
        if self.const > 0:
            s.append("+ " + scalar_str(self.const))
        elif self.const < 0:
            s.append("- " + scalar_str(-self.const))
        out = " ".join(s)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    def to_json(self) -> dict:
        return {"coeffs": [scalar_str(c) for c in self.coeffs], "const": scalar_str(self.const)}

    @classmethod
    def from_json(cls, data):
        scale, form = cls.normalize([Fraction(c) for c in data["coeffs"]], Fraction(data.get("const", "0")))
        if scale != 1:
            raise ValueError("serialized form is not normalized")
        return form


# fixed sample coordinates for cheap non-divisibility rejection
_PROBE = tuple(Fraction(p, q) for p, q in zip(
    [3, -5, 7, 11, -13, 17, 19, -23, 29, 31, -37, 41, 43, -47, 53, 59, -61, 67, 71, -73],
    [7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83],
))


def _probe_point(form: AffineLinearForm):
    n = form.nvars
    pt = [_PROBE[j % len(_PROBE)] + j for j in range(n)]
    rest = sum((c * x for j, (c, x) in enumerate(zip(form.coeffs, pt)) if c and j != form.lead), form.const)
    pt[form.lead] = -rest
    return pt


def _divide_by_form(p: Polynomial, form: AffineLinearForm):
    if p.is_zero():
        return p
    if p.evaluate(_probe_point(form)) != 0:
        return None
    lead = form.lead
    layout = p.layout
    # p = sum_k a_k(x') x_lead^k; divide by x_lead + r(x')
    buckets: dict = {}
    for e, c in p.items():
        k = e[lead]
        rest = e[:lead] + (0,) + e[lead + 1:]
        buckets.setdefault(k, {})[rest] = c
    d = max(buckets)
    a = {k: Polynomial(layout, t, _trusted=True) for k, t in buckets.items()}
    rcoeffs = list(form.coeffs)
    rcoeffs[lead] = ZERO
    r = Polynomial.linear(layout, rcoeffs, form.const)
    zero = Polynomial.zero(layout)
    q = {}
    carry = zero
    for k in range(d, 0, -1):
        qk = a.get(k, zero) - (r * carry if carry else zero) if k < d else a[d]
        q[k - 1] = qk
        carry = qk
    remainder = a.get(0, zero) - r * carry
    if not remainder.is_zero():
        return None
    out = {}
    for k, qk in q.items():
        for e, c in qk.items():
            if k:
                e = e[:lead] + (k,) + e[lead + 1:]
            out[e] = c
    return Polynomial(layout, out, _trusted=True)


def poly_exact_divide(p: Polynomial, l) -> Polynomial:
    """``p / l`` for an affine-linear ``l`` (a form or a degree-one polynomial)."""
    if isinstance(l, Polynomial):
        scale, form = AffineLinearForm.from_polynomial(l)
        return p.exact_divide(form).scale(1 / scale)
    return p.exact_divide(l)


# ---------------------------------------------------------------------------
# rational functions


def _merge(factors: Iterable) -> tuple:
    acc: dict = {}
    for form, m in factors:
        if m:
            acc[form] = acc.get(form, 0) + m
    return tuple(sorted(((f, m) for f, m in acc.items() if m), key=lambda t: t[0].key()))


class FactoredRationalFunction:
    """``numerator / prod(form**mult)`` kept fully cancelled.

    Zero has an empty denominator.  No denominator form divides the numerator,
    which together with the normalization of forms makes the representation
    canonical.
    """

    __slots__ = ("numerator", "den", "_hash")

    def __init__(self, numerator: Polynomial, den=(), *, _cancelled=False):
        self.numerator = numerator
        if numerator.is_zero():
            self.den = ()
        elif _cancelled:
            self.den = den
        else:
            num, den = _cancel(numerator, _merge(den))
            self.numerator, self.den = num, den
        self._hash = None

    # -- constructors
    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "FactoredRationalFunction":
        return cls(p, (), _cancelled=True)

    @classmethod
    def constant(cls, layout, c) -> "FactoredRationalFunction":
        return cls.from_polynomial(Polynomial.constant(layout, c))

    @classmethod
    def zero(cls, layout) -> "FactoredRationalFunction":
        return cls.from_polynomial(Polynomial.zero(layout))

    @classmethod
    def one_over(cls, layout, linear) -> "FactoredRationalFunction":
        """``1 / linear`` for an affine-linear polynomial or a form."""
        layout = _layout(layout)
        if isinstance(linear, Polynomial):
            scale, form = AffineLinearForm.from_polynomial(linear)
        else:
            scale, form = ONE, linear
        return cls(Polynomial.constant(layout, 1 / scale), ((form, 1),), _cancelled=True)

    @classmethod
    def from_factors(cls, numerator: Polynomial, linear_factors: Iterable) -> "FactoredRationalFunction":
        """``numerator / prod(linear_factors)`` where each factor is a degree-one polynomial."""
        scale = ONE
        forms = []
        for f in linear_factors:
            if isinstance(f, AffineLinearForm):
                forms.append((f, 1))
                continue
            s, form = AffineLinearForm.from_polynomial(f)
            scale *= s
            forms.append((form, 1))
        return cls(numerator.scale(1 / scale), forms)

    @property
    def layout(self):
        return self.numerator.layout

    @property
    def nvars(self):
        return self.numerator.nvars

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __bool__(self):
        return not self.numerator.is_zero()

    def is_polynomial(self) -> bool:
        return not self.den

    def as_polynomial(self) -> Polynomial:
        if self.den:
            raise NonLinearDenominator("not a polynomial: %s" % self)
        return self.numerator

    def is_constant(self) -> bool:
        return not self.den and self.numerator.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant: %s" % self)
        return self.numerator.constant_value()

    def denominator_forms(self) -> list:
        return [f for f, _ in self.den]

    def denominator_polynomial(self) -> Polynomial:
        out = Polynomial.constant(self.layout, 1)
        for f, m in self.den:
            out = out * f.as_polynomial(self.layout) ** m
        return out

    # -- arithmetic
    def _coerce(self, other):
        if isinstance(other, FactoredRationalFunction):
            if other.layout != self.layout:
                raise DimensionMismatch("layouts differ")
            return other
        if isinstance(other, Polynomial):
            return FactoredRationalFunction.from_polynomial(other)
        if isinstance(other, (int, Fraction)):
            return FactoredRationalFunction.constant(self.layout, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return FactoredRationalFunction(self.numerator + other.numerator, self.den)
        d1, d2 = dict(self.den), dict(other.den)
        common = {f: max(d1.get(f, 0), d2.get(f, 0)) for f in set(d1) | set(d2)}
        n1 = self.numerator * _form_product(self.layout, {f: m - d1.get(f, 0) for f, m in common.items()})
        n2 = other.numerator * _form_product(self.layout, {f: m - d2.get(f, 0) for f, m in common.items()})
        return FactoredRationalFunction(n1 + n2, tuple(common.items()))

    __radd__ = __add__

    def __neg__(self):
        return FactoredRationalFunction(-self.numerator, self.den, _cancelled=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "FactoredRationalFunction":
        c = as_scalar(c)
        if not c:
            return FactoredRationalFunction.zero(self.layout)
        return FactoredRationalFunction(self.numerator.scale(c), self.den, _cancelled=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return FactoredRationalFunction.zero(self.layout)
        if not other.den and not self.den:
            return FactoredRationalFunction(self.numerator * other.numerator, (), _cancelled=True)
        # only cross-cancellation can occur
        n1, d2 = _cancel(self.numerator, other.den)
        n2, d1 = _cancel(other.numerator, self.den)
        return FactoredRationalFunction(n1 * n2, _merge(chain(d1, d2)), _cancelled=True)

    __rmul__ = __mul__

    def inverse(self) -> "FactoredRationalFunction":
        num = self.numerator
        if num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        top = self.denominator_polynomial()
        if num.is_constant():
            return FactoredRationalFunction(top.scale(1 / num.constant_value()), (), _cancelled=True)
        if num.degree == 1:
            scale, form = AffineLinearForm.from_polynomial(num)
            return FactoredRationalFunction(top.scale(1 / scale), ((form, 1),))
        raise NonLinearDenominator("cannot invert %s: numerator is not affine-linear" % self)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / as_scalar(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def divide_by_form(self, form: AffineLinearForm, mult: int = 1) -> "FactoredRationalFunction":
        return FactoredRationalFunction(self.numerator, _merge(chain(self.den, [(form, mult)])))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = FactoredRationalFunction.constant(self.layout, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            other = self._coerce(other)
        if not isinstance(other, FactoredRationalFunction):
            return NotImplemented
        return self.numerator == other.numerator and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.numerator, self.den))
        return self._hash

    # -- evaluation and substitution
    def evaluate(self, point) -> Fraction:
        point = as_vector(point)
        if len(point) != self.nvars:
            raise DimensionMismatch("point has %d coordinates, expected %d" % (len(point), self.nvars))
        den = ONE
        for f, m in self.den:
            v = f.evaluate(point)
            if not v:
                raise PoleAtPoint("%s vanishes at %s" % (f, [scalar_str(x) for x in point]))
            den *= v ** m
        return self.numerator.evaluate(point) / den

    def poles_at(self, point) -> list:
        """Denominator forms vanishing at ``point``."""
        return [f for f, _ in self.den if not f.evaluate(point)]

    def is_regular_at(self, point) -> bool:
        return not self.poles_at(point)

    def pullback(self, rows, shift=None) -> "FactoredRationalFunction":
        """``x -> f(A x + b)`` for invertible ``A``."""
        return _frf_pullback(self, _rows_key(rows, self.nvars), _shift_key(shift, self.nvars))

    def translate(self, shift) -> "FactoredRationalFunction":
        return _frf_pullback(self, None, _shift_key(shift, self.nvars))

    def taylor(self, point, degree: int) -> Polynomial:
        """Taylor polynomial of ``y -> f(point + y)`` at ``y = 0`` up to total degree ``degree``."""
        point = as_vector(point)
        out = self.numerator.translate(point).truncate(degree)
        layout = self.layout
        for form, m in self.den:
            c = form.evaluate(point)
            if not c:
                raise PoleAtPoint("%s vanishes at the expansion point" % form)
            lam = Polynomial.linear(layout, form.coeffs).scale(-1 / c)
            # (c + l)^-m = c^-m * sum_k binom(m+k-1, k) (-l/c)^k
            series = Polynomial.constant(layout, 1)
            power = Polynomial.constant(layout, 1)
            for k in range(1, degree + 1):
                power = power * lam
                series = series + power.scale(comb(m + k - 1, k))
            out = (out * series).truncate(degree).scale(1 / c ** m)
        return out

    # -- display and serialization
    def __repr__(self):
        return "FactoredRationalFunction(%s)" % self

    def __str__(self):
        if not self.den:
            return str(self.numerator)
        dens = []
        for f, m in self.den:
            dens.append("(%s)" % f.as_polynomial(self.layout) + ("^%d" % m if m > 1 else ""))
        return "(%s)/%s" % (self.numerator, "*".join(dens))

    def to_json(self) -> dict:
        data = self.numerator.to_json()
        data["den_factors"] = [dict(f.to_json(), mult=m) for f, m in self.den]
        return data

    @classmethod
    def from_json(cls, data: dict) -> "FactoredRationalFunction":
        num = Polynomial.from_json(data)
        den = [(AffineLinearForm.from_json(d), int(d.get("mult", 1))) for d in data.get("den_factors", [])]
        return cls(num, den)


FRF = FactoredRationalFunction


def _form_product(layout, powers: Mapping) -> Polynomial:
    out = Polynomial.constant(layout, 1)
    for f, k in powers.items():
        if k:
            out = out * f.as_polynomial(layout) ** k
    return out


def _cancel(num: Polynomial, den: tuple):
    if num.is_zero():
        return num, ()
    kept = []
    for form, m in den:
        while m:
            q = _divide_by_form(num, form)
            if q is None:
                break
            num = q
            m -= 1
        if m:
            kept.append((form, m))
    return num, tuple(kept)


@lru_cache(maxsize=200_000)
def _frf_pullback(f: FactoredRationalFunction, rows, shift) -> FactoredRationalFunction:
    if rows is None and shift is None:
        return f
    num = _pullback(f.numerator, rows, shift)
    scale = ONE
    den = []
    for form, m in f.den:
        s, new = form.pullback(rows, shift)
        scale *= s ** m
        den.append((new, m))
    return FactoredRationalFunction(num.scale(1 / scale), _merge(den), _cancelled=True)


def frf_arith(a: FactoredRationalFunction, b: FactoredRationalFunction, op: str) -> FactoredRationalFunction:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError("op must be 'add' or 'mul', got %r" % op)


def evaluate(f, point) -> Fraction:
    return f.evaluate(point)


def lift(x, layout) -> FactoredRationalFunction:
    """Coerce scalars, polynomials and rational functions into a rational function."""
    if isinstance(x, FactoredRationalFunction):
        return x
    if isinstance(x, Polynomial):
        return FactoredRationalFunction.from_polynomial(x)
    return FactoredRationalFunction.constant(layout, as_scalar(x))


# ---------------------------------------------------------------------------
# small dense matrices over Q


def identity_matrix(n: int) -> tuple:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def mat_mul(a, b) -> tuple:
    n, m = len(a), len(b[0])
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(a[i], cols[j]) if x and y), ZERO) for j in range(m)) for i in range(n))


def mat_vec(a, v) -> tuple:
    return tuple(sum((x * y for x, y in zip(row, v) if x and y), ZERO) for row in a)


def mat_inverse(a) -> tuple:
    """Gauss-Jordan inverse; raises ValueError for singular input."""
    n = len(a)
    rows = [list(map(as_scalar, r)) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [x / p for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return tuple(tuple(r[n:]) for r in rows)


def substitute_affine(p, matrix, shift=None):
    """Move a function along ``x -> matrix x + shift``: returns ``x -> p(matrix^-1 x - shift)``.

    With the identity matrix this is translation ``f(x) -> f(x - shift)``; with a
    group matrix and zero shift it is the action ``g.f(x) = f(g^-1 x)``.  Works on
    polynomials and factored rational functions alike.
    """
    n = p.nvars
    if matrix is None:
        inv = None
    else:
        if len(matrix) != n:
            raise DimensionMismatch("matrix size %d does not match %d variables" % (len(matrix), n))
        inv = mat_inverse(matrix)
    neg = None if shift is None else tuple(-as_scalar(s) for s in shift)
    return p.pullback(inv, neg)
