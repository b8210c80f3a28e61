"""Seeded samplers and the checks used by the command line reports and the test-suite."""

from __future__ import annotations

import random
import time
from fractions import Fraction

from .arith import Polynomial, as_vector, scalar_str
from .builders import build_gz_generators, build_type_I, build_type_II, gz_full_basis, structure_symmetrized
from .errors import NotHolomorphicAtGerm, NotInvariantCoefficient
from .fibers import act_on_functional, act_on_functional_structure, act_on_germ_classes, FunctionalBasisElement, fiber_basis
from .germs import InvariantGerm, apply_operator, apply_operator_to_germ
from .groups import ReflectionGroup
from .skew import SkewElement


# ---------------------------------------------------------------------------
# samplers


def random_point(group: ReflectionGroup, rng: random.Random, span: int = 3, repeat_prob: float = 0.4) -> tuple:
    """Integer point; with probability ``repeat_prob`` some coordinates are copied so the stabilizer is larger."""
    n = group.nvars
    pt = [rng.randint(-span, span) for _ in range(n)]
    if n > 1 and rng.random() < repeat_prob:
        for _ in range(rng.randint(1, max(1, n // 2))):
            i, j = rng.randrange(n), rng.randrange(n)
            pt[i] = pt[j]
    return tuple(Fraction(x) for x in pt)


def random_polynomial(layout, rng: random.Random, degree: int = 2, nterms: int = 3, span: int = 3) -> Polynomial:
    n = layout.nvars
    terms = {}
    for _ in range(nterms):
        d = rng.randint(0, degree)
        e = [0] * n
        for _ in range(d):
            e[rng.randrange(n)] += 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + rng.randint(-span, span)
    return Polynomial(layout, terms)


def symmetrize_polynomial(sub, p: Polynomial) -> Polynomial:
    out = Polynomial.zero(p.layout)
    for g in sub:
        out = out + g.act_on(p)
    return out


def random_invariant_germ(group: ReflectionGroup, rng: random.Random, point=None, degree: int = 2,
                          span: int = 3) -> InvariantGerm:
    """A germ at a parabolic point with a random stabilizer-invariant local polynomial (never zero)."""
    if point is None:
        point = random_point(group, rng, span)
    point = group.parabolic_orbit_representative(point)[0]
    stab = group.stabilizer(point)
    local = symmetrize_polynomial(stab, random_polynomial(group.layout, rng, degree))
    if local.is_zero():
        local = Polynomial.constant(group.layout, 1)
    return InvariantGerm(group, point, local)


def random_parabolic_vector(group: ReflectionGroup, rng: random.Random, span: int = 2) -> tuple:
    return group.parabolic_orbit_representative(random_point(group, rng, span, 0.6))[0]


def random_type_parts(group: ReflectionGroup, rng: random.Random, nparts: int = 2, degree: int = 1) -> list:
    """``(w, p, v)`` triples satisfying the type I / type II preconditions."""
    parts = []
    for _ in range(nparts):
        v = random_parabolic_vector(group, rng)
        stab = group.stabilizer(v)
        p = symmetrize_polynomial(stab, random_polynomial(group.layout, rng, degree))
        if p.is_zero():
            p = Polynomial.constant(group.layout, 1)
        parts.append((group.longest_coset_rep(stab), p, v))
    return parts


# ---------------------------------------------------------------------------
# gl_n relations


def perturb(A: SkewElement, c=1) -> SkewElement:
    """Raise the overall scalar of ``A`` from 1 to ``1 + c`` (a negative control for relation checks).

    Adding a constant to the coefficient of ``E_12`` would not do: the extra
    term ``phi_{delta}`` commutes with ``E_21`` and has the same weight, so every
    relation still holds.
    """
    return A.scale(1 + c)


def gl_relations(n: int, gens: dict | None = None) -> list:
    """Check ``[E_ij, E_kl] = d_jk E_il - d_li E_kj`` for every unordered pair of basis elements."""
    if gens is None:
        gens = build_gz_generators(n)
    E = gz_full_basis(gens, n)
    zero = SkewElement.zero(E[(1, 1)].group)
    keys = sorted(E)
    rows = []
    for a, (i, j) in enumerate(keys):
        for (k, l) in keys[a + 1:]:
            lhs = E[(i, j)].commutator(E[(k, l)])
            rhs = zero
            if j == k:
                rhs = rhs + E[(i, l)]
            if l == i:
                rhs = rhs - E[(k, j)]
            diff = lhs - rhs
            ok = diff.is_zero()
            rows.append({"relation": "[E%d%d,E%d%d]" % (i, j, k, l), "ok": ok, "difference": None if ok else str(diff)})
    return rows


# ---------------------------------------------------------------------------
# invariance


def invariance_failures(operators, germs) -> list:
    """One record per application that leaves a pole or produces a non-invariant result.

    Results are formed at every orbit point (``verify=True``), so an operator
    that is not ``G``-invariant is caught even when the representative looks fine.
    """
    fails = []
    for name, A in operators.items():
        for F in germs:
            try:
                apply_operator_to_germ(A, F, verify=True)
            except NotHolomorphicAtGerm as exc:
                fails.append({"operator": name, "germ": F.to_json(), "kind": "pole",
                              "target": [scalar_str(x) for x in exc.target],
                              "factor": str(exc.factor) if exc.factor is not None else None})
            except NotInvariantCoefficient as exc:
                fails.append({"operator": name, "germ": F.to_json(), "kind": "not invariant", "detail": str(exc)})
    return fails


# ---------------------------------------------------------------------------
# structure theorem


def _ratio(X, Y):
    """The scalar ``a`` with ``X = a Y`` for germ vectors, or None if there is none."""
    keys = {F.base_point for F in X} | {F.base_point for F in Y}
    a = None
    for p in sorted(keys):
        fx, fy = X.get(p), Y.get(p)
        if fy is None or fx is None:
            if (fx or fy).is_zero():
                continue
            return None
        ly, lx = fy.local_rep, fx.local_rep
        num = lx.numerator * ly.denominator_polynomial()
        den = ly.numerator * lx.denominator_polynomial()
        lead = next(iter(den.terms()), None)
        if lead is None:
            return None
        exp, c = lead
        cand = num.coefficient(exp) / c
        if num != den.scale(cand):
            return None
        if a is None:
            a = cand
        elif a != cand:
            return None
    return a


def structure_theorem_check(group: ReflectionGroup, p, v, germs) -> dict:
    """Compare the symmetrized element with ``d_w o p phi_v`` on germ samples.

    Returns the recovered scalar (one value for all samples, or None) together
    with the value predicted by ``d_{w'_0} Delta'``.
    """
    from .skew import apply_ddiff_poly

    v = as_vector(v)
    A = structure_symmetrized(group, p, v)
    stab = group.stabilizer(v)
    B = build_type_I(group, [(None, p, v)])
    scalars = []
    for F in germs:
        X = apply_operator(A, F)
        Y = apply_operator(B, F, verify=True)
        if not len(X) and not len(Y):
            continue
        scalars.append(_ratio(X, Y))
    w0v = max(stab, key=lambda g: g.length)
    predicted = apply_ddiff_poly(group, w0v, group.delta_of(stab)).constant_value()
    good = [s for s in scalars if s is not None]
    a = good[0] if good and len(good) == len(scalars) and all(s == good[0] for s in good) else None
    return {"a": a, "predicted": predicted, "ok": a is not None and a != 0,
            "matches_prediction": a == predicted, "samples": len(scalars)}


# ---------------------------------------------------------------------------
# type I vs type II


def type_comparison(group: ReflectionGroup, parts, germs) -> dict:
    """Fiber-level comparison of type I and type II builds on the same data."""
    A = build_type_I(group, parts)
    B = build_type_II(group, parts)
    agree = all(act_on_germ_classes(A, F, verify=True) == act_on_germ_classes(B, F, verify=True) for F in germs)
    return {"agree_on_invariants": agree, "raw_equal": A == B}


# ---------------------------------------------------------------------------
# two routes for the functional action


def two_route_check(group: ReflectionGroup, p, v, point, w=None) -> dict:
    point = group.parabolic_orbit_representative(point)[0]
    reps = fiber_basis(group, point)
    ws = reps if w is None else [w]
    A = structure_symmetrized(group, p, v)
    results = []
    for u in ws:
        f = FunctionalBasisElement(group, point, u)
        r1 = act_on_functional(A, f)
        r2 = act_on_functional_structure(group, p, v, f)
        results.append(r1 == r2)
    return {"ok": all(results), "checked": len(results)}


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
