"""
Fibers, functionals and the module action
=========================================

At a point with a parabolic stabilizer the fiber has one basis functional per
shortest coset representative.  Operators act on functionals by the dual
pairing; a structure formula gives the same answer by a different route.
"""

# %%
from gzskew.arith import Polynomial
from gzskew.builders import build_ogz_generators, invariant_multiplier, structure_symmetrized
from gzskew.fibers import (FunctionalBasisElement, ModuleVector, act_on_functional,
                           act_on_functional_structure, fiber_basis, krylov_dimension)
from gzskew.groups import typeA_product

S3 = typeA_product([3])
for pt in [(1, 2, 3), (1, 1, 2), (0, 0, 0)]:
    print(pt, "basis:", fiber_basis(S3, pt))

# %%
# The symmetrized element attached to v = (0, 0, 1) acting on a functional at
# a singular point, computed two ways.
v = (0, 0, 1)
A = structure_symmetrized(S3, 1, v)
f = FunctionalBasisElement(S3, (0, 1, 1), S3.identity)
print("pairing route:  ", act_on_functional(A, f))
print("structure route:", act_on_functional_structure(S3, 1, v, f))

# %%
# An orthogonal GZ algebra with rows of sizes 1 and 2, at the singular point 0.
gens = build_ogz_generators((1, 2))
G = gens["E1"].group
f0 = ModuleVector.functional(FunctionalBasisElement(G, (0, 0, 0), G.identity))
for name, X in gens.items():
    print(name, "->", act_on_functional(X, f0))

# %%
# Invariant multiplication acts locally finitely: iterating it on a functional
# stays inside a span no bigger than the fibers involved.
B = invariant_multiplier(G, Polynomial.var(G.layout, 2, 1) * Polynomial.var(G.layout, 2, 2))
g = act_on_functional(gens["F1"], f0)
print("span under B of f0: %d, of f0 F1: %d" % (krylov_dimension(B, f0), krylov_dimension(B, g)))
