"""Constructors for the standard operators: Gelfand-Zeitlin, orthogonal GZ, type I / type II.

Normalization.  A "symmetrized" generator here is the sum over the *distinct*
conjugates of its seed term (:func:`gzskew.skew.orbit_sum`).  Summing over all
of ``G`` multiplies every generator by the order of the seed's stabilizer,
which breaks the ``gl_n`` relations for ``n >= 2``.

Signs.  With the ring convention ``phi_xi(f)(x) = f(x - xi)`` the lowering
operators carry an overall minus sign and the diagonal operators use the
offset ``-(i-1)``; this is the choice under which every ``gl_2`` and ``gl_3``
relation holds exactly (checked in the test-suite).
"""

from __future__ import annotations

from typing import Sequence

from .arith import FactoredRationalFunction, Polynomial, as_scalar, as_vector, lift
from .errors import NotInvariantCoefficient, NotParabolicStabilizer, WrongLongestElement
from .groups import Character, GroupElement, ReflectionGroup, d_chi, typeA_product
from .skew import SkewElement, divided_diff_word, g_action, orbit_sum

FRF = FactoredRationalFunction


def _row_ratio(layout, k: int, other: int | None, n_other: int) -> FRF:
    """``prod_j (v_k1 - v_{other,j}) / prod_{j>=2} (v_k1 - v_kj)``."""
    v = lambda a, b: Polynomial.var(layout, a, b)
    num = Polynomial.constant(layout, 1)
    if other is not None:
        for j in range(1, n_other + 1):
            num = num * (v(k, 1) - v(other, j))
    dens = [v(k, 1) - v(k, j) for j in range(2, layout.row_sizes[k - 1] + 1)]
    return FRF.from_factors(num, dens)


def raising_seed(group: ReflectionGroup, k: int, a=1) -> SkewElement:
    layout = group.layout
    rows = layout.row_sizes
    coeff = _row_ratio(layout, k, k + 1, rows[k] if k < len(rows) else 0)
    return SkewElement.term(group, coeff, None, layout.unit(k, 1, a))


def lowering_seed(group: ReflectionGroup, k: int, a=1) -> SkewElement:
    layout = group.layout
    rows = layout.row_sizes
    other = k - 1 if k > 1 else None
    coeff = _row_ratio(layout, k, other, rows[k - 2] if k > 1 else 0)
    return SkewElement.term(group, -coeff, None, layout.unit(k, 1, -as_scalar(a)))


def build_gz_generators(n: int) -> dict:
    """``E_st`` for ``|s - t| <= 1`` on the Gelfand-Zeitlin layout ``(1, 2, ..., n)``.

    Keys are pairs ``(s, t)``.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    G = typeA_product(list(range(1, n + 1)))
    layout = G.layout
    gens = {}
    for k in range(1, n):
        gens[(k, k + 1)] = orbit_sum(raising_seed(G, k))
        gens[(k + 1, k)] = orbit_sum(lowering_seed(G, k))
    for k in range(1, n + 1):
        h = Polynomial.zero(layout)
        for i in range(1, k + 1):
            h = h + Polynomial.var(layout, k, i) - (i - 1)
        for i in range(1, k):
            h = h - Polynomial.var(layout, k - 1, i) + (i - 1)
        gens[(k, k)] = SkewElement.multiplication(G, h)
    return gens


def gz_full_basis(gens: dict, n: int) -> dict:
    """Extend near-diagonal generators to all ``E_il`` by iterated commutators."""
    out = dict(gens)
    for d in range(2, n):
        for i in range(1, n - d + 1):
            l = i + d
            out[(i, l)] = out[(i, l - 1)].commutator(out[(l - 1, l)])
            out[(l, i)] = out[(l, l - 1)].commutator(out[(l - 1, i)])
    return out


def build_ogz_generators(row_sizes: Sequence[int], a=1) -> dict:
    """``E_k``, ``F_k`` (``k = 1..n-1``) of the orthogonal GZ algebra with shift step ``a``.

    Keys are ``"E1", "F1", ...``.  For ``row_sizes = (1, 2, ..., n)`` and ``a = 1``
    these coincide with the off-diagonal GZ generators.
    """
    a = as_scalar(a)
    if not a:
        raise ValueError("shift step a must be nonzero")
    rows = tuple(row_sizes)
    if len(rows) < 2:
        raise ValueError("need at least two rows")
    G = typeA_product(rows)
    gens = {}
    for k in range(1, len(rows)):
        gens["E%d" % k] = orbit_sum(raising_seed(G, k, a))
        gens["F%d" % k] = orbit_sum(lowering_seed(G, k, a))
    return gens


def invariant_multiplier(group: ReflectionGroup, h) -> SkewElement:
    """Multiplication by a function, checked to be ``G``-invariant."""
    h = lift(h, group.layout)
    if not group.is_invariant(h):
        raise NotInvariantCoefficient("%s is not G-invariant" % h)
    return SkewElement.multiplication(group, h)


# ---------------------------------------------------------------------------
# type I / type II


def _check_part(group: ReflectionGroup, w, p, v):
    v = as_vector(v)
    stab = group.stabilizer(v)
    if not stab.is_parabolic():
        raise NotParabolicStabilizer("stabilizer of %r is not parabolic" % (v,))
    p = lift(p, group.layout)
    if not group.is_invariant(p, stab):
        raise NotInvariantCoefficient("coefficient %s is not invariant under the stabilizer of %r" % (p, v))
    longest = group.longest_coset_rep(stab)
    if w is None:
        w = longest
    elif not isinstance(w, GroupElement):
        w = group.from_word(tuple(w))
    if w != longest:
        raise WrongLongestElement("%r is not the longest shortest coset representative %r" % (w, longest))
    return w, p, v


def build_type_I(group: ReflectionGroup, parts) -> SkewElement:
    """``sum_i d_{w_i} o p_i phi_{v_i}`` (composition in the skew ring)."""
    out = SkewElement.zero(group)
    for w, p, v in parts:
        w, p, v = _check_part(group, w, p, v)
        out = out + divided_diff_word(group, w) * SkewElement.term(group, p, None, v)
    return out


def ddiff_dot(group: ReflectionGroup, w, X: SkewElement) -> SkewElement:
    """``d_w . X`` where each ``d_s`` acts by ``Y -> (Y - s.Y) / gamma_s`` with ``s.Y`` conjugation."""
    word = w.word if isinstance(w, GroupElement) else tuple(w)
    for s in reversed(word):
        root = group.root_system.simple_roots[s]
        inv = FRF.one_over(group.layout, group.gamma(root))
        X = (X - g_action(group.simple[s], X)).left_multiply_function(inv)
    return X


def build_type_II(group: ReflectionGroup, parts) -> SkewElement:
    """``sum_i d_{w_i} . p_i phi_{v_i}`` (action by conjugation instead of composition)."""
    out = SkewElement.zero(group)
    for w, p, v in parts:
        w, p, v = _check_part(group, w, p, v)
        out = out + ddiff_dot(group, w, SkewElement.term(group, p, None, v))
    return out


def structure_symmetrized(group: ReflectionGroup, p, v) -> SkewElement:
    """``sum_tau tau . (Delta'/Delta * p phi_v)`` with ``Delta'`` built from the stabilizer of ``v``."""
    v = as_vector(v)
    stab = group.stabilizer(v)
    if not stab.is_parabolic():
        raise NotParabolicStabilizer("stabilizer of %r is not parabolic" % (v,))
    p = lift(p, group.layout)
    roots = group.root_system.positive_roots
    sub_roots = [r for r in roots if group.reflection_of_root(r) in stab]
    other = [group.gamma(r) for r in roots if r not in sub_roots]
    coeff = FRF.from_factors(Polynomial.constant(group.layout, 1), other) * p
    seed = SkewElement.term(group, coeff, None, v)
    out = SkewElement.zero(group)
    for t in group.elements:
        out = out + g_action(t, seed)
    return out


# ---------------------------------------------------------------------------
# rational Galois order test


def validate_rational_galois_generator(X: SkewElement, chi: Character) -> bool:
    """True iff ``d_chi * coeff`` is a polynomial for every coefficient of ``X``."""
    d = d_chi(X.group, chi)
    for c, g, shift in X.terms():
        if not g.is_identity():
            raise ValueError("generator must have trivial group parts")
        if not (d * c).is_polynomial():
            return False
    return True
