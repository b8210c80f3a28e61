from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gzskew.arith import Polynomial
from gzskew.builders import build_ogz_generators, invariant_multiplier
from gzskew.errors import PoleOnOrbit
from gzskew.groups import typeA_product
from gzskew.lattice import ShiftLattice
from gzskew.simplicity import (CERTIFIED, INCONCLUSIVE, VIOLATED, GammaGraph, build_gamma_regular,
                               build_gamma_singular, certify_canonical_module, check_regular_conditions,
                               fiber_cyclicity, monoid_generates, separate_points, transitive_closure)
from gzskew.skew import SkewElement

T1 = typeA_product([1])
T2 = typeA_product([1, 1])
GENERIC = (Fraction(1, 3), Fraction(2, 7), Fraction(-5, 11))


def ogz12():
    return build_ogz_generators((1, 2))


def shift(G, *xi, coeff=1):
    return SkewElement.shift(G, xi, coeff)


def test_single_shift_gives_a_line():
    g = build_gamma_regular({"up": shift(T1, 1)}, (0,), 3)
    assert len(g.vertices) == 7
    assert g.edge_set() == {((Fraction(k),), (Fraction(k + 1),)) for k in range(-3, 3)}
    assert not g.is_strongly_connected()
    assert len(g.sccs()) == 7


def test_both_directions_connect_the_window():
    g = build_gamma_regular([shift(T1, 1), shift(T1, -1)], (0,), 3)
    assert g.is_strongly_connected()


def test_ogz_generic_window_has_every_edge():
    g = build_gamma_regular(ogz12(), GENERIC, 3)
    assert len(g.vertices) == 7
    assert len(g.edges) == 12
    assert g.is_strongly_connected()


def test_regular_conditions_for_ogz():
    rep = check_regular_conditions(ogz12(), GENERIC, 3)
    assert {k: c["status"] for k, c in rep.conditions.items()} == {
        "separation": "pass", "monoid": "pass", "nonvanishing": "pass"}
    assert rep.verdict == CERTIFIED


def test_one_sided_shifts_fail_the_monoid_condition():
    lat = ShiftLattice.standard(1)
    assert monoid_generates([(1,)], lat, 6)["status"] == "fail"
    assert monoid_generates([(1,), (-1,)], lat, 6)["status"] == "pass"
    assert monoid_generates([(2,), (-3,)], lat, 6)["status"] == "pass"


def test_integer_root_on_orbit_fails_nonvanishing():
    x = Polynomial.var(T1.layout, 1, 1)
    gens = {"up": shift(T1, 1, coeff=x - 2), "down": shift(T1, -1)}
    rep = check_regular_conditions(gens, (0,), 3)
    assert rep.conditions["nonvanishing"]["status"] == "fail"
    assert rep.conditions["nonvanishing"]["witness"]["point"] == ["2"]
    assert rep.verdict == VIOLATED


def test_pole_on_orbit_is_reported():
    from gzskew.arith import FactoredRationalFunction as FRF
    x = Polynomial.var(T1.layout, 1, 1)
    gens = {"up": shift(T1, 1, coeff=FRF.one_over(T1.layout, x - 1)), "down": shift(T1, -1)}
    with pytest.raises(PoleOnOrbit):
        build_gamma_regular(gens, (0,), 2)
    assert check_regular_conditions(gens, (0,), 2).verdict == VIOLATED


def test_separation():
    S2 = typeA_product([2])
    assert separate_points(S2, [(0, 1), (1, 0), (0, 2)])["status"] == "pass"
    assert separate_points(S2, [(0, 1), (0, 1)])["status"] == "pass"


def test_singular_graph_reduces_to_regular_at_generic_point():
    gens = ogz12()
    assert build_gamma_singular(gens, GENERIC, 3).edge_set() == build_gamma_regular(gens, GENERIC, 3).edge_set()


def test_singular_graph_at_integral_point():
    g = build_gamma_singular(ogz12(), (0, 0, 0), 3)
    assert g.local_group.order == 2
    # (k; 0, 0) for k in -3..3: each lattice point is its own orbit of the local group
    assert len(g.vertices) == 7
    assert g.edges
    for (s, d), w in g.edges.items():
        assert Fraction(w["value"]) != 0


def test_multiplication_operators_give_no_edges():
    S2 = typeA_product([2])
    x = Polynomial.var(S2.layout, 1, 1) + Polynomial.var(S2.layout, 1, 2)
    lat = ShiftLattice.standard(2)
    g = build_gamma_singular([invariant_multiplier(S2, x)], (0, 0), 1, lat)
    assert not g.edges
    assert certify_canonical_module([invariant_multiplier(S2, x)], (0, 0), 1, lat).verdict == INCONCLUSIVE


def test_disconnected_shifts_are_violated():
    lat = ShiftLattice.standard(2)
    rep = certify_canonical_module({"right": shift(T2, 1, 0)}, (0, 0), 1, lat)
    assert rep.verdict == VIOLATED
    assert rep.unreachable


def test_tiny_window_is_inconclusive():
    rep = certify_canonical_module(ogz12(), GENERIC, 0)
    assert rep.verdict == INCONCLUSIVE


def test_certificates_for_ogz():
    gens = ogz12()
    rep = certify_canonical_module(gens, GENERIC, 3)
    assert rep.mode == "regular" and rep.verdict == CERTIFIED and rep.strongly_connected
    rep = certify_canonical_module(gens, (0, 0, 0), 3)
    assert rep.mode == "singular" and rep.verdict == CERTIFIED
    assert not rep.unreachable
    # x1_1 - x2_1 vanishes at the target (0; 0, 1): the class of 1 stays below it
    assert certify_canonical_module(gens, (0, 0, 1), 3).verdict == VIOLATED
    assert certify_canonical_module(gens, (Fraction(1, 2), 0, 0), 3).verdict == CERTIFIED


@pytest.mark.parametrize("v", [GENERIC, (0, 0, 0), (Fraction(1, 2), 0, 0)])
def test_edges_are_monotone_in_radius(v):
    gens = ogz12()
    small = certify_canonical_module(gens, v, 2)
    big = certify_canonical_module(gens, v, 3)
    assert small.graph.edge_set() <= big.graph.edge_set()
    assert big.graph.induced(small.graph.vertices).edge_set() == small.graph.edge_set()
    if small.verdict == CERTIFIED:
        assert big.verdict == CERTIFIED


def test_fiber_cyclicity():
    S3 = typeA_product([3])
    assert fiber_cyclicity(S3, (1, 1, 2))["status"] == "pass"
    # a free orbit of six points needs invariants up to degree five
    low = fiber_cyclicity(S3, (0, 1, 2), degree_cap=3)
    assert low["status"] == "inconclusive" and low["rank"] == 3
    assert fiber_cyclicity(S3, (0, 1, 2), degree_cap=6)["status"] == "pass"


def test_graph_exports():
    g = build_gamma_regular(ogz12(), GENERIC, 1)
    data = g.to_json()
    assert len(data["vertices"]) == 3 and len(data["edges"]) == len(g.edges)
    dot = g.to_dot()
    assert dot.startswith("digraph") and dot.count("->") == len(g.edges)


@given(st.integers(1, 8).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n))))
def test_scc_agrees_with_transitive_closure(data):
    n, edges = data
    verts = [(Fraction(i),) for i in range(n)]
    g = GammaGraph(verts, "regular", (0,), n)
    for a, b in edges:
        g.add_edge(verts[a], verts[b], {})
    reach = transitive_closure(g.vertices, g.adjacency())
    for x in verts:
        assert g.reachable_from(x) == reach[x]
    comp = {x: i for i, c in enumerate(g.sccs()) for x in c}
    for x in verts:
        for y in verts:
            assert (comp[x] == comp[y]) == (y in reach[x] and x in reach[y])
