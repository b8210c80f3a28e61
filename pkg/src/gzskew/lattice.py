"""Translation lattices: integer spans of rational shift vectors."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .arith import ZERO, as_vector
from .errors import DimensionMismatch


class ShiftLattice:
    """The integer span of linearly independent rational vectors."""

    def __init__(self, generators, nvars: int | None = None):
        gens = [as_vector(g) for g in generators]
        if nvars is None:
            if not gens:
                raise ValueError("need nvars for an empty lattice")
            nvars = len(gens[0])
        if any(len(g) != nvars for g in gens):
            raise DimensionMismatch("generators must have %d coordinates" % nvars)
        self.nvars = nvars
        self.generators = _independent(gens)

    @classmethod
    def standard(cls, nvars: int) -> "ShiftLattice":
        return cls([tuple(Fraction(int(i == j)) for j in range(nvars)) for i in range(nvars)], nvars)

    @classmethod
    def from_operators(cls, operators) -> "ShiftLattice":
        """Lattice generated by every shift appearing in the operators."""
        ops = list(operators)
        n = ops[0].group.nvars
        shifts = []
        for A in ops:
            shifts.extend(s for s in A.shifts() if any(s))
        return cls(shifts, n)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def coordinates(self, x):
        """Rational coordinates of ``x`` in the generators, or None if outside their span."""
        x = as_vector(x)
        gens = self.generators
        m, n = len(gens), self.nvars
        rows = [[gens[i][r] for i in range(m)] + [x[r]] for r in range(n)]
        r = 0
        pivots = []
        for c in range(m):
            piv = next((k for k in range(r, n) if rows[k][c]), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            p = rows[r][c]
            rows[r] = [a / p for a in rows[r]]
            for k in range(n):
                if k != r and rows[k][c]:
                    f = rows[k][c]
                    rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
            pivots.append(c)
            r += 1
        if any(rows[k][m] for k in range(r, n)):
            return None
        out = [ZERO] * m
        for k, c in enumerate(pivots):
            out[c] = rows[k][m]
        return out

    def __contains__(self, x) -> bool:
        c = self.coordinates(x)
        return c is not None and all(a.denominator == 1 for a in c)

    def point(self, base, coeffs) -> tuple:
        base = as_vector(base)
        out = list(base)
        for c, g in zip(coeffs, self.generators):
            if c:
                out = [a + c * b for a, b in zip(out, g)]
        return tuple(out)

    def window(self, base, radius: int) -> list:
        """``base + sum n_i b_i`` with every ``|n_i| <= radius``."""
        rng = range(-radius, radius + 1)
        return [self.point(base, cs) for cs in product(rng, repeat=self.rank)]

    def window_index(self, base, x):
        """Integer coordinates of ``x - base``, or None."""
        d = tuple(a - b for a, b in zip(as_vector(x), as_vector(base)))
        c = self.coordinates(d)
        if c is None or any(a.denominator != 1 for a in c):
            return None
        return tuple(int(a) for a in c)

    def is_invariant_under(self, group) -> bool:
        return all(g.act(b) in self for g in group.simple for b in self.generators)


def _independent(vectors):
    basis = []
    echelon = []
    for v in vectors:
        w = list(v)
        for piv, row in echelon:
            if w[piv]:
                f = w[piv] / row[piv]
                w = [a - f * b for a, b in zip(w, row)]
        piv = next((i for i, a in enumerate(w) if a), None)
        if piv is not None:
            echelon.append((piv, w))
            basis.append(tuple(v))
    return basis


def orbit_stabilizer(group, lattice: ShiftLattice, v):
    """``{g : g v - v in lattice}``, the subgroup preserving the lattice orbit of ``v``."""
    from .groups import Subgroup

    v = as_vector(v)
    return Subgroup(group, [g.index for g in group.elements
                            if tuple(a - b for a, b in zip(g.act(v), v)) in lattice])
