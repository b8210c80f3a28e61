"""
Divided differences and Schubert classes
========================================

Divided differences for S3 acting on polynomials in three variables, the
Schubert polynomials they produce, and the sum formula for the longest one.
"""

# %%
from gzskew.arith import FactoredRationalFunction as FRF, Polynomial
from gzskew.fibers import schubert_polynomials
from gzskew.groups import typeA_product
from gzskew.skew import SkewElement, apply_ddiff_poly, divided_diff_word

S3 = typeA_product([3])
L = S3.layout
x1, x2, x3 = (Polynomial.var(L, 1, i) for i in (1, 2, 3))

# d_1 lowers degree by one and kills symmetric functions
print("d1(x1^2)      =", divided_diff_word(S3, (0,))(x1 * x1))
print("d1(x1 + x2)   =", divided_diff_word(S3, (0,))(x1 + x2))

# %%
# Two reduced words of the longest element give the same operator, and a
# non-reduced word gives zero.
print("braid relation holds:", divided_diff_word(S3, (0, 1, 0)) == divided_diff_word(S3, (1, 0, 1)))
print("d1 d1 == 0:", divided_diff_word(S3, (0, 0)).is_zero())

# %%
# Schubert polynomials, indexed by group elements, with their norms
P, N = schubert_polynomials(S3)
for w in sorted(S3.elements, key=lambda g: g.length):
    print("%-8r P = %-40s norm %s" % (w, P[w], N[w]))

# %%
# The longest divided difference equals sum over tau of tau o (1/Delta).
inv = FRF.from_factors(Polynomial.constant(L, 1), [S3.gamma(r) for r in S3.root_system.positive_roots])
total = SkewElement.zero(S3)
for t in S3.elements:
    total = total + SkewElement.group_element(S3, t) * SkewElement.multiplication(S3, inv)
print("d_w0 == sum:", divided_diff_word(S3, S3.longest) == total)
print("d_w0(Delta) =", apply_ddiff_poly(S3, S3.longest, S3.vandermonde))
