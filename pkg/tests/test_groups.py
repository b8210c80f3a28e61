from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gzskew.arith import Polynomial, VariableLayout
from gzskew.errors import InconsistentCharacter, NotARootSystem, NotParabolic, OrderCapExceeded
from gzskew.groups import (B2, Character, ReflectionGroup, RootSystem, Subgroup, d_chi, dihedral,
                           parse_group_spec, typeA_product)


def closure_order(group):
    """Brute-force closure of the simple reflection matrices (an oracle independent of the BFS)."""
    from gzskew.arith import mat_mul

    gens = [g.matrix for g in group.simple]
    seen = {tuple(tuple(r) for r in group.identity.matrix)}
    changed = True
    while changed:
        changed = False
        for a in list(seen):
            for b in gens:
                c = mat_mul(a, b)
                if c not in seen:
                    seen.add(c)
                    changed = True
    return len(seen)


def test_orders():
    one = ReflectionGroup(RootSystem(VariableLayout((2,)), [[1, -1]]))
    assert one.order == 2
    assert typeA_product([3]).order == 6
    assert B2().order == 8
    assert typeA_product([1, 2, 3]).order == 12
    for m in (2, 3, 4, 6):
        assert dihedral(m).order == 2 * m
    for G in (typeA_product([3]), B2(), typeA_product([2, 2]), dihedral(6)):
        assert closure_order(G) == G.order


def test_unsupported_dihedral_and_cap():
    with pytest.raises(NotARootSystem):
        dihedral(5)
    with pytest.raises(OrderCapExceeded):
        ReflectionGroup(typeA_product([4]).root_system, order_cap=10)


def test_reduced_words(S3):
    assert S3.reduced_word(S3.identity) == []
    assert S3.reduced_word(S3.simple[0]) == [0]
    w0 = S3.longest
    assert len(S3.reduced_word(w0)) == 3
    assert S3.inversion_count(w0) == 3


def test_lengths_match_inversion_counts():
    for G in (typeA_product([3]), B2(), typeA_product([2, 2]), dihedral(6), typeA_product([4])):
        for g in G.elements:
            assert g.length == G.inversion_count(g) == len(g.word)
            assert G.from_word(g.word) == g


def test_shortest_coset_reps(S3):
    assert S3.shortest_coset_reps(S3.whole()) == [S3.identity]
    assert len(S3.shortest_coset_reps(S3.trivial_subgroup())) == 6
    reps = S3.shortest_coset_reps(S3.parabolic_subgroup([0]))
    assert [w.length for w in reps] == [0, 1, 2]
    # every element factors uniquely as rep * p
    P = S3.parabolic_subgroup([0])
    products = sorted(S3.multiply(w, p).index for w in reps for p in P)
    assert products == list(range(6))


def test_coset_reps_need_parabolic(S3):
    s1s2s1 = S3.from_word([0, 1, 0])
    with pytest.raises(NotParabolic):
        S3.shortest_coset_reps(Subgroup(S3, [0, s1s2s1.index]))


def test_stabilizers(S3):
    assert len(S3.stabilizer((1, 2, 3))) == 1
    assert len(S3.stabilizer((0, 0, 0))) == 6
    st = S3.stabilizer((5, 5, 7))
    assert len(st) == 2 and S3.simple[0] in st


def test_parabolic_orbit_representative(S3):
    rep, g = S3.parabolic_orbit_representative((7, 5, 5))
    assert rep == (5, 5, 7)
    assert g.act((7, 5, 5)) == rep
    assert S3.stabilizer(rep) == S3.parabolic_subgroup([0])
    assert S3.parabolic_orbit_representative((1, 2, 3))[0] == (1, 2, 3)
    assert S3.parabolic_orbit_representative((0, 0, 0)) == ((0, 0, 0), S3.identity)


@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_representative_is_parabolic_and_on_orbit(pt):
    G = typeA_product([3])
    rep, g = G.parabolic_orbit_representative(pt)
    assert G.is_parabolic_point(rep)
    assert rep in G.orbit(pt)
    assert g.act(tuple(Fraction(x) for x in pt)) == rep


@given(st.lists(st.integers(-2, 2), min_size=2, max_size=2))
def test_b2_representatives(pt):
    G = B2()
    rep, g = G.parabolic_orbit_representative(pt)
    assert G.is_parabolic_point(rep)


def test_group_action_is_a_left_action(S3):
    L = S3.layout
    f = Polynomial.var(L, 1, 1) * Polynomial.var(L, 1, 2) ** 2 + Polynomial.var(L, 1, 3)
    for g in S3.elements:
        for h in S3.elements:
            assert S3.multiply(g, h).act_on(f) == g.act_on(h.act_on(f))
            assert S3.multiply(g, h).act((1, 2, 3)) == g.act(h.act((1, 2, 3)))


def test_characters_and_relative_invariants():
    S2 = typeA_product([2])
    S3 = typeA_product([3])
    x = lambda G, i: Polynomial.var(G.layout, 1, i)
    assert d_chi(S3, Character.trivial(S3)) == 1
    assert d_chi(S2, Character.sign(S2)) == x(S2, 1) - x(S2, 2)
    expect = (x(S3, 1) - x(S3, 2)) * (x(S3, 1) - x(S3, 3)) * (x(S3, 2) - x(S3, 3))
    assert d_chi(S3, Character.sign(S3)) == expect
    # s1 and s2 are conjugate in S3, so they must get the same value
    with pytest.raises(InconsistentCharacter):
        Character(S3, [1, -1])
    chi = Character(B2(), [1, -1])
    assert chi(B2().longest) == 1


def test_parse_group_spec():
    assert parse_group_spec("typeA_product([1,2])").order == 2
    assert parse_group_spec("B2").order == 8
    assert parse_group_spec("dihedral(4)").order == 8
    with pytest.raises(NotARootSystem):
        parse_group_spec("E8()")


def test_vandermonde_is_anti_invariant(S3):
    D = S3.vandermonde
    for s in S3.simple:
        assert s.act_on(D) == -D


def test_longest_in_type_a_reverses():
    G = typeA_product([4])
    assert G.longest.act((1, 2, 3, 4)) == (4, 3, 2, 1)
    assert sorted(G.elements[i].perm for i in range(G.order)) == sorted(permutations(range(4)))
