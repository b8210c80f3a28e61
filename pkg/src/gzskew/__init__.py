"""Exact computations in skew group rings of reflection groups acting on shift lattices.

Submodules
----------
arith        rational polynomials and factored rational functions
groups       finite reflection groups, parabolic subgroups, characters
skew         the skew group ring, divided differences, symmetrization
builders     Gelfand-Zeitlin type generators, type I / type II elements
germs        invariant germs and the action of operators on them
fibers       Schubert bases of fibers, the modules M and M*
lattice      shift lattices and windows
simplicity   Gamma-graphs and window certificates
dsl, config  expression language and engine configuration
"""

from .arith import (AffineLinearForm, FactoredRationalFunction, FRF, Polynomial, VariableLayout,
                    substitute_affine)
from .builders import (build_gz_generators, build_ogz_generators, build_type_I, build_type_II,
                       gz_full_basis, invariant_multiplier, structure_symmetrized,
                       validate_rational_galois_generator)
from .errors import *  # noqa: F401,F403
from .fibers import (FiberClass, FunctionalBasisElement, ModuleVector, act_on_fiber_vector, act_on_functional,
                     act_on_functional_structure, check_harish_chandra, pairing, reduce_to_fiber,
                     schubert_polynomials)
from .germs import (GermVector, InvariantGerm, LatticeOrbitModule, apply_operator, apply_operator_to_germ,
                    inclusion_P, pi_G, pi_G_inverse, restrict_operator, upsilon)
from .groups import (B2, Character, GroupElement, ReflectionGroup, RootSystem, Subgroup, d_chi, dihedral,
                     parse_group_spec, typeA_product)
from .lattice import ShiftLattice
from .simplicity import (GammaGraph, SimplicityReport, build_gamma_regular, build_gamma_singular,
                         certify_canonical_module, check_regular_conditions)
from .skew import (SkewElement, divided_difference, divided_diff_word, g_action, orbit_sum, skew_multiply,
                   symmetrize)

__version__ = "0.1.0"
