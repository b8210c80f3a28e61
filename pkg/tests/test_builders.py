import pytest

from gzskew.arith import Polynomial
from gzskew.builders import (build_gz_generators, build_ogz_generators, build_type_I, build_type_II,
                             ddiff_dot, gz_full_basis, invariant_multiplier, structure_symmetrized)
from gzskew.errors import NotInvariantCoefficient, NotParabolicStabilizer, WrongLongestElement
from gzskew.skew import SkewElement, divided_diff_word, g_action
from gzskew.verification import gl_relations, perturb


def test_gl2_and_gl3_relations():
    for n in (2, 3):
        rows = gl_relations(n)
        assert len(rows) == (n * n) * (n * n - 1) // 2
        assert all(r["ok"] for r in rows), [r["relation"] for r in rows if not r["ok"]]


def test_perturbed_generator_breaks_a_relation():
    gens = build_gz_generators(2)
    gens[(1, 2)] = perturb(gens[(1, 2)])
    assert not all(r["ok"] for r in gl_relations(2, gens))


def test_gl2_raising_operator_has_one_term():
    E = build_gz_generators(2)
    assert len(E[(1, 2)]) == 1
    G = E[(1, 2)].group
    L = G.layout
    c = E[(1, 2)].coefficient(None, L.unit(1, 1))
    assert c == (Polynomial.var(L, 1, 1) - Polynomial.var(L, 2, 1)) * (Polynomial.var(L, 1, 1) - Polynomial.var(L, 2, 2))


def test_generators_are_invariant():
    for A in build_gz_generators(3).values():
        assert A.is_invariant()
    for A in build_ogz_generators((2, 3)).values():
        assert A.is_invariant()


def test_ogz_with_single_variable_rows():
    gens = build_ogz_generators((1, 1))
    G = gens["E1"].group
    L = G.layout
    d = Polynomial.var(L, 1, 1) - Polynomial.var(L, 2, 1)
    assert gens["E1"] == SkewElement.term(G, d, None, L.unit(1, 1))
    # F1 lowers row 1; there is no row below it, so only the sign survives
    assert gens["F1"] == SkewElement.term(G, -1, None, L.unit(1, 1, -1))


def test_ogz_specializes_to_gz():
    n = 3
    gz = build_gz_generators(n)
    ogz = build_ogz_generators(range(1, n + 1))
    for k in range(1, n):
        assert ogz["E%d" % k] == gz[(k, k + 1)]
        assert ogz["F%d" % k] == gz[(k + 1, k)]


def test_shift_step_scales_targets():
    gens = build_ogz_generators((1, 2), a="1/2")
    assert {s[0] for s in gens["E1"].shifts()} == {0.5}
    with pytest.raises(ValueError):
        build_ogz_generators((1, 2), a=0)


def test_full_basis_commutators_match_definition():
    gens = build_gz_generators(3)
    E = gz_full_basis(gens, 3)
    assert E[(1, 3)] == gens[(1, 2)].commutator(gens[(2, 3)])
    assert E[(3, 1)] == gens[(3, 2)].commutator(gens[(2, 1)])


def test_invariant_multiplier_rejects_non_invariant(S2):
    x1 = Polynomial.var(S2.layout, 1, 1)
    with pytest.raises(NotInvariantCoefficient):
        invariant_multiplier(S2, x1)


def test_type_I_single_trivial_part_is_identity(S3):
    assert build_type_I(S3, [(None, 1, (0, 0, 0))]) == SkewElement.identity(S3)
    assert build_type_II(S3, [(None, 1, (0, 0, 0))]) == SkewElement.identity(S3)


def test_type_part_validation(S3):
    L = S3.layout
    with pytest.raises(NotInvariantCoefficient):
        build_type_I(S3, [(None, Polynomial.var(L, 1, 1), (1, 1, 0))])
    with pytest.raises(NotParabolicStabilizer):
        build_type_I(S3, [(None, 1, (1, 0, 1))])
    with pytest.raises(WrongLongestElement):
        build_type_I(S3, [([0], 1, (1, 1, 0))])


def test_type_I_and_II_expand_as_defined(S3):
    v = (1, 1, 0)
    w = S3.longest_coset_rep(S3.stabilizer(v))
    seed = SkewElement.term(S3, 1, None, v)
    assert build_type_I(S3, [(None, 1, v)]) == divided_diff_word(S3, w) * seed
    assert build_type_II(S3, [(None, 1, v)]) == ddiff_dot(S3, w, seed)


def test_structure_symmetrized_is_invariant(S3):
    L = S3.layout
    for v, p in [((1, 1, 0), 1), ((0, 0, 2), Polynomial.var(L, 1, 1) + Polynomial.var(L, 1, 2)), ((0, 1, 2), 1)]:
        A = structure_symmetrized(S3, p, v)
        assert all(g_action(g, A) == A for g in S3.elements)
