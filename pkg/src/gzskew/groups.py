"""Finite real reflection groups built from rational root data.

Groups are enumerated exhaustively by breadth-first search over simple
reflections, level by level in lexicographic order of words, so every element
carries its lexicographically smallest reduced word and its length.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .arith import (
    ONE,
    ZERO,
    FactoredRationalFunction,
    Polynomial,
    VariableLayout,
    as_vector,
    identity_matrix,
    mat_mul,
    mat_vec,
)
from .errors import (
    InconsistentCharacter,
    NoParabolicRepresentative,
    NotARootSystem,
    NotParabolic,
    OrderCapExceeded,
)

DEFAULT_ORDER_CAP = 10_000


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def _solve_combination(basis: Sequence[tuple], target: tuple):
    """Coefficients c with sum c_i basis_i == target, or None.  Basis must be independent."""
    m, n = len(basis), len(target)
    # augmented n x (m+1) system
    rows = [[basis[i][r] for i in range(m)] + [target[r]] for r in range(n)]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((k for k in range(r, n) if rows[k][c]), None)
        if piv is None:
            return None
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for k in range(n):
            if k != r and rows[k][c]:
                f = rows[k][c]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
    if any(rows[k][m] for k in range(r, n)):
        return None
    sol = [ZERO] * m
    for k, c in enumerate(pivots):
        sol[c] = rows[k][m]
    return sol



def _rank_code(point: tuple) -> tuple:
    values = sorted(set(point))
    rank = {x: i for i, x in enumerate(values)}
    return tuple(rank[x] for x in point)

class RootSystem:
    """Simple roots plus a symmetric bilinear form; the full root set is derived."""

    def __init__(self, layout, simple_roots: Iterable, form=None):
        self.layout = layout if isinstance(layout, VariableLayout) else VariableLayout(tuple(layout))
        n = self.layout.nvars
        self.simple_roots = tuple(as_vector(r) for r in simple_roots)
        if any(len(r) != n for r in self.simple_roots):
            raise NotARootSystem("simple roots must have %d coordinates" % n)
        if any(not any(r) for r in self.simple_roots):
            raise NotARootSystem("zero simple root")
        if form is None:
            self.form = identity_matrix(n)
        else:
            self.form = tuple(as_vector(row) for row in form)
            if len(self.form) != n or any(len(r) != n for r in self.form):
                raise NotARootSystem("form must be %dx%d" % (n, n))
            if any(self.form[i][j] != self.form[j][i] for i in range(n) for j in range(n)):
                raise NotARootSystem("form must be symmetric")
        for r in self.simple_roots:
            if self.pair(r, r) <= 0:
                raise NotARootSystem("root %r has non-positive norm" % (r,))
        if self.simple_roots and _solve_combination(self.simple_roots, self.simple_roots[0]) is None:
            raise NotARootSystem("simple roots are linearly dependent")
        self.positive_roots = self._close()

    def pair(self, u, v) -> Fraction:
        return _dot(u, mat_vec(self.form, v))

    def covector(self, root) -> tuple:
        """Coefficients of the linear form y -> (root, y)."""
        return mat_vec(self.form, root)

    def reflect(self, root, v) -> tuple:
        c = 2 * self.pair(v, root) / self.pair(root, root)
        return tuple(a - c * b for a, b in zip(v, root))

    def reflection_matrix(self, root) -> tuple:
        n = self.layout.nvars
        cov = self.covector(root)
        k = 2 / self.pair(root, root)
        return tuple(
            tuple((ONE if i == j else ZERO) - k * root[i] * cov[j] for j in range(n)) for i in range(n)
        )

    def _close(self) -> tuple:
        roots = set()
        frontier = list(self.simple_roots) + [tuple(-x for x in r) for r in self.simple_roots]
        roots.update(frontier)
        while frontier:
            nxt = []
            for v in frontier:
                for s in self.simple_roots:
                    w = self.reflect(s, v)
                    if w not in roots:
                        roots.add(w)
                        nxt.append(w)
                        if len(roots) > 2 * DEFAULT_ORDER_CAP:
                            raise NotARootSystem("root closure does not terminate")
            frontier = nxt
        positive = []
        for r in roots:
            c = _solve_combination(self.simple_roots, r)
            if c is None:
                raise NotARootSystem("root %r is outside the span of the simple roots" % (r,))
            if all(x >= 0 for x in c):
                positive.append(r)
            elif not all(x <= 0 for x in c):
                raise NotARootSystem("root %r has mixed signs in simple-root coordinates" % (r,))
        return tuple(sorted(positive, key=lambda r: (tuple(-x for x in r))))

    @classmethod
    def from_json(cls, data: dict) -> "RootSystem":
        return cls(VariableLayout(tuple(data["layout"])), [[Fraction(x) for x in r] for r in data["simple_roots"]],
                   data.get("form"))

    def to_json(self) -> dict:
        out = {"layout": list(self.layout.row_sizes), "simple_roots": [[str(x) for x in r] for r in self.simple_roots]}
        if self.form != identity_matrix(self.layout.nvars):
            out["form"] = [[str(x) for x in r] for r in self.form]
        return out


class GroupElement:
    """An element of an enumerated :class:`ReflectionGroup`; compares by index."""

    __slots__ = ("group", "index", "matrix", "perm", "word", "length")

    def __init__(self, group, index, matrix, perm, word, length):
        self.group = group
        self.index = index
        self.matrix = matrix
        self.perm = perm
        self.word = word
        self.length = length

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.group.multiply(self, other)

    def inverse(self) -> "GroupElement":
        return self.group.inverse(self)

    def act(self, point) -> tuple:
        """``g . point``"""
        if self.perm is not None:
            out = [None] * len(point)
            for j, x in enumerate(point):
                out[self.perm[j]] = x
            return tuple(as_vector(out))
        return mat_vec(self.matrix, as_vector(point))

    def _act_vec(self, point: tuple) -> tuple:
        # same as act, for a point that is already a tuple of Fractions
        if self.perm is not None:
            out = [None] * len(point)
            for j, x in enumerate(point):
                out[self.perm[j]] = x
            return tuple(out)
        return mat_vec(self.matrix, point)

    def act_on(self, f):
        """``g . f`` meaning ``x -> f(g^-1 x)`` for polynomials or rational functions."""
        if self.index == 0:
            return f
        return f.pullback(self.group.inverse(self).matrix)

    def is_identity(self) -> bool:
        return self.index == 0

    def __eq__(self, other):
        return isinstance(other, GroupElement) and other.group is self.group and other.index == self.index

    def __hash__(self):
        return hash(self.index)

    def __lt__(self, other):
        return self.index < other.index

    def __repr__(self):
        if not self.word:
            return "e"
        return "*".join("s%d" % (i + 1) for i in self.word)


class Subgroup:
    """A subgroup of an enumerated group, stored as a frozen set of element indices."""

    def __init__(self, group: "ReflectionGroup", indices: Iterable[int]):
        self.group = group
        self.indices = frozenset(indices)

    @cached_property
    def elements(self) -> list:
        return [self.group.elements[i] for i in sorted(self.indices)]

    def __len__(self):
        return len(self.indices)

    def __contains__(self, g: GroupElement):
        return g.index in self.indices

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.group is self.group and other.indices == self.indices

    def __hash__(self):
        return hash(self.indices)

    @cached_property
    def simple_generators(self) -> tuple:
        return tuple(i for i, s in enumerate(self.group.simple) if s.index in self.indices)

    def is_parabolic(self) -> bool:
        return len(self.group.parabolic_subgroup(self.simple_generators)) == len(self)

    def __repr__(self):
        return "Subgroup(order=%d, simple=%r)" % (len(self), [i + 1 for i in self.simple_generators])


class ReflectionGroup:
    """Exhaustively enumerated finite reflection group."""

    def __init__(self, root_system: RootSystem, order_cap: int = DEFAULT_ORDER_CAP):
        self.root_system = rs = root_system
        self.layout = rs.layout
        self.nvars = rs.layout.nvars
        n = self.nvars
        gens = [rs.reflection_matrix(r) for r in rs.simple_roots]
        self._gen_perms = [_as_perm(m) for m in gens]
        ident = identity_matrix(n)
        elements = [GroupElement(self, 0, ident, tuple(range(n)), (), 0)]
        index = {ident: 0}
        level = [0]
        length = 0
        while level:
            length += 1
            nxt = []
            for i in level:
                g = elements[i]
                for s, sm in enumerate(gens):
                    m = mat_mul(g.matrix, sm)
                    if m in index:
                        continue
                    if len(elements) >= order_cap:
                        raise OrderCapExceeded("group order exceeds cap %d" % order_cap)
                    k = len(elements)
                    index[m] = k
                    elements.append(GroupElement(self, k, m, _as_perm(m), g.word + (s,), length))
                    nxt.append(k)
            nxt.sort(key=lambda k: elements[k].word)
            level = nxt
        self.elements = elements
        self._index = index
        self.simple = tuple(elements[index[m]] for m in gens)
        self._mul_cache: dict = {}
        self._inv = [None] * len(elements)
        for g in elements:
            if self._inv[g.index] is None:
                # inverse of a reduced word is the reversed word
                h = self.from_word(tuple(reversed(g.word)))
                self._inv[g.index] = h.index
                self._inv[h.index] = g.index

    # -- constructors
    @classmethod
    def from_json(cls, data) -> "ReflectionGroup":
        if isinstance(data, str):
            return parse_group_spec(data)
        if "type" in data:
            kind = data["type"]
            if kind == "typeA_product":
                return typeA_product(data["rows"])
            if kind == "dihedral":
                return dihedral(int(data["m"]))
            raise NotARootSystem("unknown group type %r" % kind)
        return cls(RootSystem.from_json(data), data.get("order_cap", DEFAULT_ORDER_CAP))

    # -- basic access
    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def identity(self) -> GroupElement:
        return self.elements[0]

    @cached_property
    def longest(self) -> GroupElement:
        return max(self.elements, key=lambda g: (g.length, -g.index))

    @property
    def w0(self) -> GroupElement:
        return self.longest

    @property
    def rank(self) -> int:
        return len(self.simple)

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        key = (g.index, h.index)
        k = self._mul_cache.get(key)
        if k is None:
            if g.index == 0:
                return h
            if h.index == 0:
                return g
            if g.perm is not None and h.perm is not None:
                m = _perm_matrix(tuple(g.perm[h.perm[j]] for j in range(self.nvars)))
            else:
                m = mat_mul(g.matrix, h.matrix)
            k = self._index[m]
            self._mul_cache[key] = k
        return self.elements[k]

    def inverse(self, g: GroupElement) -> GroupElement:
        return self.elements[self._inv[g.index]]

    def from_word(self, word: Sequence[int]) -> GroupElement:
        g = self.identity
        for s in word:
            g = self.multiply(g, self.simple[s])
        return g

    def element_of_matrix(self, matrix) -> GroupElement:
        key = tuple(tuple(as_vector(r)) for r in matrix)
        if key not in self._index:
            raise KeyError("matrix is not in the group")
        return self.elements[self._index[key]]

    def reduced_word(self, g: GroupElement) -> list:
        return list(g.word)

    def inversion_count(self, g: GroupElement) -> int:
        """Number of positive roots sent to negative roots (independent length oracle)."""
        pos = set(self.root_system.positive_roots)
        return sum(1 for r in pos if mat_vec(g.matrix, r) not in pos)

    # -- subgroups
    def parabolic_subgroup(self, simple_indices: Iterable[int]) -> Subgroup:
        J = tuple(sorted(set(simple_indices)))
        cache = self.__dict__.setdefault("_parabolic_cache", {})
        if J not in cache:
            seen = {0}
            frontier = [self.identity]
            while frontier:
                nxt = []
                for g in frontier:
                    for j in J:
                        h = self.multiply(g, self.simple[j])
                        if h.index not in seen:
                            seen.add(h.index)
                            nxt.append(h)
                frontier = nxt
            cache[J] = Subgroup(self, seen)
        return cache[J]

    def trivial_subgroup(self) -> Subgroup:
        return Subgroup(self, [0])

    def whole(self) -> Subgroup:
        return Subgroup(self, range(self.order))

    def stabilizer(self, point) -> Subgroup:
        point = as_vector(point)
        if self._is_permutation:
            point = _rank_code(point)
        return Subgroup(self, [g.index for g in self.elements if g._act_vec(point) == point])

    def orbit(self, point) -> list:
        """Distinct orbit points, in lexicographic order."""
        point = as_vector(point)
        return sorted({g._act_vec(point) for g in self.elements})

    def shortest_coset_reps(self, P: Subgroup) -> list:
        """Minimal-length representatives of the left cosets ``w P``, sorted by (length, word)."""
        if not P.is_parabolic():
            raise NotParabolic("subgroup is not generated by simple reflections")
        J = P.simple_generators
        reps = [w for w in self.elements if all(self.multiply(w, self.simple[j]).length > w.length for j in J)]
        reps.sort(key=lambda w: (w.length, w.word))
        return reps

    def longest_coset_rep(self, P: Subgroup) -> GroupElement:
        return self.shortest_coset_reps(P)[-1]

    def parabolic_orbit_representative(self, point):
        """``(point', g)`` with ``g . point = point'`` and a parabolic stabilizer at ``point'``.

        The lexicographically smallest qualifying orbit point is used; ``g`` is the
        shortest such transport.
        """
        point = as_vector(point)
        cache = self.__dict__.setdefault("_rep_cache", {})
        if point in cache:
            return cache[point]
        # permutation groups work on integer rank codes: same order, cheap hashing
        values = sorted(set(point)) if self._is_permutation else None
        key = _rank_code(point) if values else point
        by_image: dict = {}
        for g in self.elements:
            by_image.setdefault(g._act_vec(key), g)
        for cand in sorted(by_image):
            stab = Subgroup(self, [g.index for g in self.elements if g._act_vec(cand) == cand])
            if stab.is_parabolic():
                rep = tuple(values[i] for i in cand) if values else cand
                cache[point] = (rep, by_image[cand])
                return cache[point]
        raise NoParabolicRepresentative("no orbit point of %r has a parabolic stabilizer" % (point,))

    @cached_property
    def _is_permutation(self) -> bool:
        return all(g.perm is not None for g in self.elements)

    def is_parabolic_point(self, point) -> bool:
        return self.stabilizer(point).is_parabolic()

    # -- polynomials attached to the root system
    def gamma(self, root) -> Polynomial:
        return Polynomial.linear(self.layout, self.root_system.covector(root))

    def reflection_of_root(self, root) -> GroupElement:
        return self.element_of_matrix(self.root_system.reflection_matrix(root))

    @cached_property
    def vandermonde(self) -> Polynomial:
        """Product of the root forms over all positive roots."""
        out = Polynomial.constant(self.layout, 1)
        for r in self.root_system.positive_roots:
            out = out * self.gamma(r)
        return out

    def delta_of(self, sub: Subgroup) -> Polynomial:
        """Product of root forms over positive roots whose reflections lie in ``sub``."""
        out = Polynomial.constant(self.layout, 1)
        for r in self.root_system.positive_roots:
            if self.reflection_of_root(r) in sub:
                out = out * self.gamma(r)
        return out

    def is_invariant(self, f, sub: Subgroup | None = None) -> bool:
        elems = self.simple if sub is None else [self.elements[i] for i in sub.indices]
        return all(g.act_on(f) == f for g in elems)

    def __repr__(self):
        return "ReflectionGroup(order=%d, rank=%d, layout=%r)" % (self.order, self.rank, self.layout.row_sizes)


def _as_perm(m):
    n = len(m)
    perm = [None] * n
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            if x:
                if x != 1 or perm[j] is not None:
                    return None
                perm[j] = i
    if any(p is None for p in perm):
        return None
    return tuple(perm)


def _perm_matrix(perm) -> tuple:
    # perm[j] = image of coordinate j
    n = len(perm)
    rows = [[ZERO] * n for _ in range(n)]
    for j, i in enumerate(perm):
        rows[i][j] = ONE
    return tuple(tuple(r) for r in rows)


# ---------------------------------------------------------------------------
# built-in groups


def typeA_product(rows: Sequence[int]) -> ReflectionGroup:
    """``S_{n_1} x ... x S_{n_k}`` permuting coordinates within each row."""
    layout = VariableLayout(tuple(rows))
    n = layout.nvars
    simple = []
    for k, nk in enumerate(layout.row_sizes, start=1):
        for i in range(1, nk):
            r = [0] * n
            r[layout.index(k, i)] = 1
            r[layout.index(k, i + 1)] = -1
            simple.append(r)
    return _cached_group(("A", layout.row_sizes), lambda: ReflectionGroup(RootSystem(layout, simple)))


_DIHEDRAL_FORMS = {
    2: [[2, 0], [0, 2]],
    3: [[2, -1], [-1, 2]],
    4: [[2, -1], [-1, 1]],
    6: [[2, -3], [-3, 6]],
}


def dihedral(m: int) -> ReflectionGroup:
    """Dihedral group of order ``2m`` acting on the plane, for the crystallographic ``m``.

    Simple roots are the coordinate vectors and the bilinear form is chosen so
    the angle between them is ``pi - pi/m``.
    """
    if m not in _DIHEDRAL_FORMS:
        raise NotARootSystem("dihedral(%d) has no rational realization; use m in 2, 3, 4, 6" % m)
    return _cached_group(
        ("I", m), lambda: ReflectionGroup(RootSystem(VariableLayout((2,)), [[1, 0], [0, 1]], _DIHEDRAL_FORMS[m]))
    )


def B2() -> ReflectionGroup:
    """Type B2 in standard coordinates: simple roots e1 - e2 and e2."""
    return _cached_group(("B2",), lambda: ReflectionGroup(RootSystem(VariableLayout((2,)), [[1, -1], [0, 1]])))


_GROUPS: dict = {}


def _cached_group(key, build):
    if key not in _GROUPS:
        _GROUPS[key] = build()
    return _GROUPS[key]


def parse_group_spec(text: str) -> ReflectionGroup:
    """Parse ``typeA_product([1,2])``, ``dihedral(4)`` or ``B2``."""
    import ast

    text = text.strip()
    if text == "B2":
        return B2()
    node = ast.parse(text, mode="eval").body
    if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Name) or len(node.args) != 1:
        raise NotARootSystem("cannot parse group spec %r" % text)
    arg = ast.literal_eval(node.args[0])
    if node.func.id == "typeA_product":
        return typeA_product(list(arg))
    if node.func.id == "dihedral":
        return dihedral(int(arg))
    raise NotARootSystem("unknown group constructor %r" % node.func.id)


# ---------------------------------------------------------------------------
# characters


class Character:
    """A linear character given by its values (+1 or -1) on the simple reflections."""

    def __init__(self, group: ReflectionGroup, simple_values: Sequence[int]):
        if len(simple_values) != group.rank:
            raise InconsistentCharacter("need %d values, got %d" % (group.rank, len(simple_values)))
        if any(v not in (1, -1) for v in simple_values):
            raise InconsistentCharacter("values must be +1 or -1")
        self.group = group
        self.simple_values = tuple(int(v) for v in simple_values)
        vals = [None] * group.order
        for g in group.elements:
            v = 1
            for s in g.word:
                v *= self.simple_values[s]
            vals[g.index] = v
        for g in group.elements:
            for s, sg in enumerate(group.simple):
                if vals[group.multiply(g, sg).index] != vals[g.index] * self.simple_values[s]:
                    raise InconsistentCharacter("values %r violate the braid relations" % (self.simple_values,))
        self._values = vals

    @classmethod
    def trivial(cls, group):
        return cls(group, [1] * group.rank)

    @classmethod
    def sign(cls, group):
        return cls(group, [-1] * group.rank)

    def __call__(self, g: GroupElement) -> int:
        return self._values[g.index]


def d_chi(group: ReflectionGroup, chi: Character) -> FactoredRationalFunction:
    """Relative invariant: product of root forms over hyperplanes whose reflection has ``chi = -1``."""
    out = Polynomial.constant(group.layout, 1)
    for r in group.root_system.positive_roots:
        if chi(group.reflection_of_root(r)) == -1:
            out = out * group.gamma(r)
    return FactoredRationalFunction.from_polynomial(out)


def generate_group(rs: RootSystem, order_cap: int = DEFAULT_ORDER_CAP) -> ReflectionGroup:
    return ReflectionGroup(rs, order_cap)


def sub_reflection_group(group: ReflectionGroup, simple_indices: Iterable[int]) -> ReflectionGroup:
    """The parabolic subgroup on the given simple reflections, as a group in its own right.

    It acts on the same space, so its elements can be matched with those of
    ``group`` by matrix.
    """
    J = tuple(sorted(set(simple_indices)))
    if J == tuple(range(group.rank)):
        return group
    cache = group.__dict__.setdefault("_subgroups", {})
    if J not in cache:
        rs = group.root_system
        cache[J] = ReflectionGroup(RootSystem(rs.layout, [rs.simple_roots[j] for j in J], rs.form))
    return cache[J]
