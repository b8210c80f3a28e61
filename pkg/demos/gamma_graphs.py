"""
Window certificates from Gamma-graphs
=====================================

Edges of the graph record nonvanishing coefficients of the generators on a
lattice window.  Strong connectivity (or reachability from the base point in
the singular case) certifies that the constant class generates the module on
that window.
"""

# %%
from fractions import Fraction

from gzskew.builders import build_ogz_generators
from gzskew.simplicity import certify_canonical_module

gens = build_ogz_generators((1, 2))

for v in [(Fraction(1, 3), Fraction(2, 7), Fraction(-5, 11)), (0, 0, 0), (0, 0, 1)]:
    rep = certify_canonical_module(gens, v, 3)
    print("v = %-22s mode %-8s verdict %-20s %d vertices, %d edges, %d unreachable"
          % (tuple(str(x) for x in v), rep.mode, rep.verdict, len(rep.graph.vertices),
             len(rep.graph.edges), len(rep.unreachable)))

# %%
# The graph exports to Graphviz; pipe this into `dot -Tpng` to look at it.
print(certify_canonical_module(gens, (0, 0, 0), 1).graph.to_dot())
