"""The skew-group ring over ``G`` and a translation lattice, with rational coefficients.

A term ``(f, g, xi)`` is the operator ``F -> f * F(g^-1 (x - xi))``; composition
of such operators gives the product

    (f, g, xi) (f', g', xi') = (f * f'(g^-1 (x - xi)), g g', xi + g xi').

Terms with trivial group part are the usual ``f phi_xi``.  Group parts let the
same type hold divided differences and group-ring elements.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .arith import (
    FactoredRationalFunction,
    Polynomial,
    as_scalar,
    as_vector,
    lift,
    scalar_str,
)
from .errors import DimensionMismatch
from .groups import GroupElement, ReflectionGroup

FRF = FactoredRationalFunction


def _add_vec(a, b):
    return tuple(x + y for x, y in zip(a, b))


def transport(f: FRF, g: GroupElement, shift) -> FRF:
    """``x -> f(g^-1 (x - shift))``: move ``f`` by ``g`` and then translate by ``shift``."""
    if g.is_identity():
        return f.translate(tuple(-x for x in shift)) if any(shift) else f
    ginv = g.inverse()
    s = ginv.act(shift) if any(shift) else None
    return f.pullback(ginv.matrix, None if s is None else tuple(-x for x in s))


class SkewElement:
    """Finite sum of terms ``(coeff, g, shift)``, at most one per ``(g, shift)``."""

    __slots__ = ("group", "_terms", "_hash")

    def __init__(self, group: ReflectionGroup, terms: Mapping | Iterable = ()):
        self.group = group
        n = group.nvars
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            g, shift = key
            if isinstance(g, GroupElement):
                g = g.index
            shift = as_vector(shift)
            if len(shift) != n:
                raise DimensionMismatch("shift has %d coordinates, expected %d" % (len(shift), n))
            c = lift(c, group.layout)
            k = (g, shift)
            if k in acc:
                acc[k] = acc[k] + c
            else:
                acc[k] = c
        self._terms = {k: c for k, c in acc.items() if not c.is_zero()}
        self._hash = None

    @classmethod
    def _raw(cls, group, terms: dict) -> "SkewElement":
        obj = cls.__new__(cls)
        obj.group = group
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors
    @classmethod
    def zero(cls, group) -> "SkewElement":
        return cls._raw(group, {})

    @classmethod
    def identity(cls, group) -> "SkewElement":
        return cls.term(group, 1)

    @classmethod
    def term(cls, group, coeff, g=None, shift=None) -> "SkewElement":
        gi = 0 if g is None else (g.index if isinstance(g, GroupElement) else int(g))
        shift = group.layout.zero_vector() if shift is None else as_vector(shift)
        return cls(group, [((gi, shift), coeff)])

    @classmethod
    def multiplication(cls, group, f) -> "SkewElement":
        """Multiplication by the function ``f``."""
        return cls.term(group, f)

    @classmethod
    def shift(cls, group, xi, coeff=1) -> "SkewElement":
        return cls.term(group, coeff, None, xi)

    @classmethod
    def group_element(cls, group, g: GroupElement) -> "SkewElement":
        return cls.term(group, 1, g)

    # -- access
    @property
    def layout(self):
        return self.group.layout

    def terms(self) -> list:
        """``(coeff, g, shift)`` in canonical order (group index, then shift)."""
        return [(self._terms[k], self.group.elements[k[0]], k[1]) for k in sorted(self._terms)]

    def items(self):
        return self._terms.items()

    def coefficient(self, g=None, shift=None) -> FRF:
        gi = 0 if g is None else (g.index if isinstance(g, GroupElement) else int(g))
        shift = self.layout.zero_vector() if shift is None else as_vector(shift)
        return self._terms.get((gi, shift), FRF.zero(self.layout))

    def shifts(self) -> list:
        return sorted({k[1] for k in self._terms})

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def has_trivial_group_part(self) -> bool:
        return all(k[0] == 0 for k in self._terms)

    # -- linear structure
    def _check(self, other):
        if not isinstance(other, SkewElement):
            return False
        if other.group is not self.group:
            raise DimensionMismatch("skew elements over different groups")
        return True

    def __add__(self, other):
        if not self._check(other):
            if isinstance(other, (int, Fraction, Polynomial, FRF)):
                other = SkewElement.multiplication(self.group, other)
            else:
                return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            if k in out:
                s = out[k] + c
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return SkewElement._raw(self.group, out)

    __radd__ = __add__

    def __neg__(self):
        return SkewElement._raw(self.group, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Polynomial, FRF)):
            other = SkewElement.multiplication(self.group, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SkewElement":
        c = as_scalar(c)
        if not c:
            return SkewElement.zero(self.group)
        return SkewElement._raw(self.group, {k: v.scale(c) for k, v in self._terms.items()})

    def left_multiply_function(self, f) -> "SkewElement":
        """``f * self`` for a function ``f`` (no transport needed)."""
        f = lift(f, self.layout)
        out = {}
        for k, c in self._terms.items():
            p = f * c
            if not p.is_zero():
                out[k] = p
        return SkewElement._raw(self.group, out)

    # -- ring structure
    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, (Polynomial, FRF)):
            other = SkewElement.multiplication(self.group, other)
        if not self._check(other):
            return NotImplemented
        return skew_multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, (Polynomial, FRF)):
            return self.left_multiply_function(other)
        return NotImplemented

    __matmul__ = __mul__

    def __pow__(self, k: int):
        out = SkewElement.identity(self.group)
        for _ in range(k):
            out = out * self
        return out

    def commutator(self, other: "SkewElement") -> "SkewElement":
        return self * other - other * self

    def g_action(self, g: GroupElement) -> "SkewElement":
        return g_action(g, self)

    def is_invariant(self, elements=None) -> bool:
        elems = self.group.simple if elements is None else elements
        return all(g_action(g, self) == self for g in elems)

    # -- as an operator on functions
    def apply(self, F) -> FRF:
        """Apply to a function: ``sum f(x) * F(g^-1 (x - xi))``."""
        F = lift(F, self.layout)
        out = FRF.zero(self.layout)
        for (gi, shift), c in self._terms.items():
            out = out + c * transport(F, self.group.elements[gi], shift)
        return out

    __call__ = apply

    # -- comparison and display
    def __eq__(self, other):
        if not isinstance(other, SkewElement):
            return NotImplemented
        return other.group is self.group and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return "SkewElement(%s)" % self

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for c, g, shift in self.terms():
            s = "(%s)" % c
            if not g.is_identity():
                s += "*[%r]" % g
            if any(shift):
                s += "*phi(%s)" % ",".join(scalar_str(x) for x in shift)
            parts.append(s)
        return " + ".join(parts)

    def to_json(self) -> list:
        return [{"coeff": c.to_json(), "g": [i + 1 for i in g.word], "shift": [scalar_str(x) for x in shift]}
                for c, g, shift in self.terms()]

    @classmethod
    def from_json(cls, group, data) -> "SkewElement":
        terms = []
        for t in data:
            g = group.from_word([i - 1 for i in t.get("g", [])])
            terms.append(((g.index, [Fraction(x) for x in t.get("shift", [0] * group.nvars)]),
                          FRF.from_json(t["coeff"])))
        return cls(group, terms)


def skew_multiply(a: SkewElement, b: SkewElement) -> SkewElement:
    G = a.group
    out: dict = {}
    for (gi, xi), f in a._terms.items():
        g = G.elements[gi]
        for (hi, eta), f2 in b._terms.items():
            h = G.elements[hi]
            c = f * transport(f2, g, xi)
            if c.is_zero():
                continue
            key = (G.multiply(g, h).index, _add_vec(xi, g.act(eta)) if any(eta) else xi)
            if key in out:
                s = out[key] + c
                if s.is_zero():
                    del out[key]
                else:
                    out[key] = s
            else:
                out[key] = c
    return SkewElement._raw(G, out)


def g_action(g: GroupElement, a: SkewElement) -> SkewElement:
    """Conjugation by ``g``: ``(f, h, xi) -> (g.f, g h g^-1, g xi)``."""
    if g.is_identity():
        return a
    G = a.group
    ginv = g.inverse()
    out: dict = {}
    for (hi, xi), f in a._terms.items():
        h = G.elements[hi]
        key = (G.multiply(G.multiply(g, h), ginv).index, g.act(xi))
        c = g.act_on(f)
        out[key] = out[key] + c if key in out else c
    return SkewElement._raw(G, {k: c for k, c in out.items() if not c.is_zero()})


def symmetrize(a: SkewElement, elements=None) -> SkewElement:
    """``sum_g g . a`` over the whole group (or over ``elements``)."""
    G = a.group
    elems = G.elements if elements is None else list(elements)
    out = SkewElement.zero(G)
    for g in elems:
        out = out + g_action(g, a)
    return out


def orbit_sum(a: SkewElement, elements=None) -> SkewElement:
    """Sum over the distinct conjugates of ``a``: ``symmetrize`` divided by the stabilizer order."""
    G = a.group
    elems = G.elements if elements is None else list(elements)
    seen = []
    for g in elems:
        b = g_action(g, a)
        if b not in seen:
            seen.append(b)
    out = SkewElement.zero(G)
    for b in seen:
        out = out + b
    return out


def divided_difference(group: ReflectionGroup, s) -> SkewElement:
    """``(1/gamma_s) (e - s)`` for a simple reflection (given by index or element)."""
    if isinstance(s, int):
        idx = s
        s = group.simple[idx]
    else:
        idx = group.simple.index(s)
    root = group.root_system.simple_roots[idx]
    inv = FRF.one_over(group.layout, group.gamma(root))
    zero = group.layout.zero_vector()
    return SkewElement(group, [((0, zero), inv), ((s.index, zero), -inv)])


def divided_diff_word(group: ReflectionGroup, w) -> SkewElement:
    """``d_{s_1} ... d_{s_p}`` along a word; pass a :class:`GroupElement` to use its reduced word."""
    word = w.word if isinstance(w, GroupElement) else tuple(w)
    cache = group.__dict__.setdefault("_ddiff_cache", {})
    if word in cache:
        return cache[word]
    if not word:
        out = SkewElement.identity(group)
    else:
        out = divided_diff_word(group, word[:-1]) * divided_difference(group, word[-1])
    cache[word] = out
    return out


def longest_ddiff_by_sum(group: ReflectionGroup) -> SkewElement:
    """``sum_tau tau . (1/Delta)`` read as a skew element: coefficient ``tau.(1/Delta)`` on ``tau``."""
    inv = FRF.from_factors(Polynomial.constant(group.layout, 1),
                           [group.gamma(r) for r in group.root_system.positive_roots])
    zero = group.layout.zero_vector()
    return SkewElement(group, [((t.index, zero), t.act_on(inv)) for t in group.elements])


def apply_ddiff(group: ReflectionGroup, w, f) -> FRF:
    """Apply ``d_w`` to a function one reflection at a time (cheaper than building the element)."""
    word = w.word if isinstance(w, GroupElement) else tuple(w)
    f = lift(f, group.layout)
    for s in reversed(word):
        sg = group.simple[s]
        root = group.root_system.simple_roots[s]
        f = (f - sg.act_on(f)) * FRF.one_over(group.layout, group.gamma(root))
    return f


def apply_ddiff_poly(group: ReflectionGroup, w, p: Polynomial) -> Polynomial:
    """``d_w`` on a polynomial via exact division; the result is again a polynomial."""
    from .arith import AffineLinearForm

    word = w.word if isinstance(w, GroupElement) else tuple(w)
    for s in reversed(word):
        sg = group.simple[s]
        root = group.root_system.simple_roots[s]
        scale, form = AffineLinearForm.normalize(group.root_system.covector(root))
        p = (p - sg.act_on(p)).exact_divide(form).scale(1 / scale)
    return p
