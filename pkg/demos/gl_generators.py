"""
Gelfand-Tsetlin formulas as skew elements
=========================================

The gl_n generators become finite sums of rational coefficients times shifts
and group elements.  Commutation relations are checked as exact identities,
and applying an operator to an invariant germ shows which denominators cancel.
"""

# %%
import time

from gzskew.arith import scalar_str
from gzskew.builders import build_gz_generators
from gzskew.germs import InvariantGerm, apply_operator_to_germ
from gzskew.verification import gl_relations, perturb

E = build_gz_generators(2)
print("E12 =", E[(1, 2)])
print("E21 =", E[(2, 1)])

# %%
t = time.perf_counter()
rows = gl_relations(3)
print("gl3: %d relations, all hold: %s (%.2fs)" % (len(rows), all(r["ok"] for r in rows), time.perf_counter() - t))

# scaling one generator breaks at least one relation
gens = dict(E)
gens[(1, 2)] = perturb(gens[(1, 2)])
print("perturbed gl2 failures:", [r["relation"] for r in gl_relations(2, gens) if not r["ok"]])

# %%
# E34 on the constant germ at a point where x3_1 = 1 and every other
# coordinate vanishes.  Some targets have x3_2 = x3_3, and the factor
# 1/(x3_2 - x3_3) must cancel in the symmetrized result.  Linear forms print
# in flat coordinates: x4, x5, x6 are x3_1, x3_2, x3_3.
E34 = build_gz_generators(4)[(3, 4)]
G = E34.group
L = G.layout
xi = list(L.zero_vector())
xi[L.index(3, 1)] = 1
for F in apply_operator_to_germ(E34, InvariantGerm.at(G, xi, 1), verify=True):
    point = ", ".join(scalar_str(x) for x in F.base_point)
    print("(%s)  denominator forms: %s" % (point, [str(f) for f in F.local_rep.denominator_forms()]))
