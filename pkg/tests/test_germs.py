import random
from fractions import Fraction

import pytest

from gzskew.arith import AffineLinearForm, Polynomial
from gzskew.builders import build_gz_generators, build_ogz_generators, invariant_multiplier, raising_seed
from gzskew.errors import ModuleStructureMissing, NotHolomorphicAtGerm, NotInvariantCoefficient
from gzskew.germs import (GermVector, InvariantGerm, LatticeOrbitModule, apply_operator, apply_operator_to_germ,
                          check_module_structure, inclusion_P, pi_G, pi_G_inverse, restrict_operator, upsilon)
from gzskew.groups import sub_reflection_group
from gzskew.lattice import ShiftLattice
from gzskew.skew import SkewElement, divided_difference
from gzskew.verification import random_invariant_germ


def test_germ_validation(S3):
    L = S3.layout
    x1 = Polynomial.var(L, 1, 1)
    with pytest.raises(NotInvariantCoefficient):
        InvariantGerm(S3, (0, 0, 1), x1)
    with pytest.raises(ValueError):
        InvariantGerm(S3, (1, 0, 0), 1)          # not the parabolic representative
    F = InvariantGerm.at(S3, (1, 0, 0), x1)      # moved to (0, 0, 1), local rep follows
    assert F.base_point == (0, 0, 1)
    assert F.local_at((1, 0, 0)) == x1
    assert len(F.orbit()) == 3


def test_invariant_multiplier_action(S3):
    L = S3.layout
    H = sum((Polynomial.var(L, 1, i) ** 2 for i in (1, 2, 3)), Polynomial.zero(L))
    F = InvariantGerm(S3, (0, 1, 1), Polynomial.var(L, 1, 1) + 2)
    (out,) = apply_operator_to_germ(invariant_multiplier(S3, H), F)
    assert out.base_point == F.base_point
    assert out.local_rep == H * F.local_rep


def test_repeated_coordinate_factor_cancels():
    E = build_gz_generators(4)
    G = E[(3, 4)].group
    L = G.layout
    xi = list(L.zero_vector())
    xi[L.index(3, 1)] = 1
    out = apply_operator_to_germ(E[(3, 4)], InvariantGerm.at(G, xi, 1), verify=True)
    assert out
    for F in out:
        assert F.local_rep.is_regular_at(F.base_point)
    # at the target with x3_2 = x3_3 = 1 the factor x3_2 - x3_3 has cancelled
    (F,) = [F for F in out if F.base_point[L.index(3, 2)] == F.base_point[L.index(3, 3)] == 1]
    diff = Polynomial.var(L, 3, 2) - Polynomial.var(L, 3, 3)
    assert AffineLinearForm.from_polynomial(diff)[1] not in F.local_rep.denominator_forms()


def test_unsymmetrized_seed_leaves_a_pole(S2xS2):
    seed = raising_seed(S2xS2, 1)
    F = InvariantGerm.at(S2xS2, (0, 1, 0, 0), 1)   # x1_2 = x1_1 + 1
    with pytest.raises(NotHolomorphicAtGerm) as err:
        apply_operator_to_germ(seed, F)
    assert err.value.target == (1, 1, 0, 0)
    # the symmetrized generator is fine on the same germ
    assert apply_operator_to_germ(build_ogz_generators((2, 2))["E1"], F)


def test_non_invariant_operator_is_caught_with_verify(S2):
    x1 = Polynomial.var(S2.layout, 1, 1)
    A = SkewElement.multiplication(S2, x1)
    F = InvariantGerm(S2, (0, 1), 1)
    apply_operator_to_germ(A, F)              # representative alone looks fine
    with pytest.raises(NotInvariantCoefficient):
        apply_operator_to_germ(A, F, verify=True)


def test_germ_vector_arithmetic(S2):
    F = InvariantGerm(S2, (0, 1), 1)
    G = InvariantGerm(S2, (0, 0), 3)
    v = GermVector(S2, [F, G])
    assert len(v + v) == 2
    assert (v - v).germs == {}
    assert v.get((0, 1)).local_rep == 1


def test_operator_is_a_module_action(rng):
    gens = build_ogz_generators((1, 2))
    G = gens["E1"].group
    E, F = gens["E1"], gens["F1"]
    for _ in range(5):
        X = random_invariant_germ(G, rng)
        assert apply_operator(E * F, X) == apply_operator(E, apply_operator(F, X))


def _ogz12_module(v):
    gens = build_ogz_generators((1, 2))
    G = gens["E1"].group
    lat = ShiftLattice.from_operators(gens.values())
    return gens, G, lat, LatticeOrbitModule(G, lat, v)


@pytest.mark.parametrize("v", [(0, 0, 0), (0, 0, 1), (0, Fraction(1, 2), 0), (Fraction(1, 3), Fraction(1, 2), Fraction(1, 2))])
def test_pi_G_round_trip_and_equivariance(v, rng):
    gens, G, lat, mod = _ogz12_module(v)
    H = mod.local_group
    for _ in range(3):
        F = random_invariant_germ(G, rng, point=lat.point(mod.v, [rng.randint(-3, 3)]))
        X = pi_G(F, mod)
        assert pi_G_inverse(X, mod) == F
        assert pi_G(pi_G_inverse(X, mod), mod) == X
        for A in gens.values():
            AH = restrict_operator(A, H)
            assert pi_G(apply_operator(A, F), mod) == apply_operator(AH, X)
            assert inclusion_P(apply_operator(A, F), H) == apply_operator(AH, inclusion_P(F, H))
        assert upsilon(X, mod, H) == inclusion_P(F, H)


def test_pi_G_is_trivial_when_lattice_orbit_is_stable():
    gens, G, lat, mod = _ogz12_module((0, 0, 0))
    assert mod.stabilizer == G.whole()
    F = random_invariant_germ(G, random.Random(1), point=(2, 0, 0))
    assert pi_G(F, mod).local_rep == F.local_rep


def test_upsilon_for_whole_group_is_pi_inverse():
    gens, G, lat, mod = _ogz12_module((0, 0, 0))
    F = random_invariant_germ(G, random.Random(2), point=(1, 0, 0))
    X = pi_G(F, mod)
    assert upsilon(X, mod, G) == GermVector(G, [pi_G_inverse(X, mod)])


def test_inclusion_into_trivial_group_splits_orbit(S2):
    F = InvariantGerm(S2, (0, 1), Polynomial.var(S2.layout, 1, 1) + Polynomial.var(S2.layout, 1, 2))
    T = sub_reflection_group(S2, [])
    out = inclusion_P(F, T)
    assert T.order == 1
    assert sorted(g.base_point for g in out) == [(0, 1), (1, 0)]


def test_restriction_needs_group_parts_in_subgroup(S2):
    T = sub_reflection_group(S2, [])
    with pytest.raises(ModuleStructureMissing):
        restrict_operator(divided_difference(S2, 0), T)


def test_module_structure_probe(S2xS2):
    T = sub_reflection_group(S2xS2, [])
    E1 = build_ogz_generators((2, 2))["E1"]
    probe = InvariantGerm(T, (0, 1, 0, 0), 1)
    with pytest.raises(ModuleStructureMissing):
        check_module_structure([restrict_operator(E1, T)], T, [probe])
