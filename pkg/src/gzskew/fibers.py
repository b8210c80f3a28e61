"""Fibers of invariant germs via Schubert calculus, and the modules M and M*.

For a reflection group ``K`` and a point ``xi`` whose stabilizer ``K'`` is
parabolic, the fiber at the orbit of ``xi`` is spanned by the functionals

    f_{xi,w}(F) = ev_0( d_w( F_xi(x + xi) ) ),   w in (K/K')^short,

(the local representative is moved to the origin first).  Only the
homogeneous part of degree ``l(w)`` of the Taylor expansion matters, so
rational local representatives are handled through a truncated expansion.

Elements of M* are finite combinations of these functionals.  Elements of M
are fiber classes written in the matching coordinates: the coordinate of a
germ at ``(xi, w)`` is ``f_{xi,w}(F) / c_w`` with the Schubert norm
``c_w = ev_0(d_w P_w)``.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import ZERO, FactoredRationalFunction, Polynomial, as_vector, lift, mat_inverse, scalar_str
from .germs import GermVector, InvariantGerm, apply_operator_to_germ
from .groups import GroupElement, ReflectionGroup, Subgroup
from .skew import SkewElement, apply_ddiff_poly

FRF = FactoredRationalFunction

CONVENTIONS = ("to_origin", "from_origin")
_convention = ["to_origin"]


def set_functional_convention(name: str) -> None:
    """Choose how the base point is moved before differentiating (see module docstring)."""
    if name not in CONVENTIONS:
        raise ValueError("convention must be one of %r" % (CONVENTIONS,))
    _convention[0] = name


def functional_convention() -> str:
    return _convention[0]


# ---------------------------------------------------------------------------
# Schubert polynomials


class SchubertData:
    """``P_g = d_{g^-1 w0} Delta`` for every ``g`` and the norms ``c_w = ev_0(d_w P_w)``."""

    def __init__(self, group: ReflectionGroup):
        self.group = group
        delta = group.vandermonde
        w0 = group.longest
        self.polys = {}
        self.norms = {}
        for g in group.elements:
            u = group.multiply(g.inverse(), w0)
            self.polys[g.index] = apply_ddiff_poly(group, u, delta)
        for w in group.elements:
            self.norms[w.index] = apply_ddiff_poly(group, w, self.polys[w.index]).constant_value()

    def poly(self, g: GroupElement) -> Polynomial:
        return self.polys[g.index]

    def norm(self, w: GroupElement) -> Fraction:
        return self.norms[w.index]

    def pairing(self, u: GroupElement, w: GroupElement) -> Fraction:
        """``ev_0(d_u P_w)``"""
        return apply_ddiff_poly(self.group, u, self.polys[w.index]).constant_value()


def schubert(group: ReflectionGroup) -> SchubertData:
    cache = group.__dict__
    if "_schubert" not in cache:
        cache["_schubert"] = SchubertData(group)
    return cache["_schubert"]


def schubert_polynomials(group: ReflectionGroup):
    """``({w: P_w}, {w: c_w})`` keyed by group element."""
    data = schubert(group)
    return ({g: data.polys[g.index] for g in group.elements}, {g: data.norms[g.index] for g in group.elements})


# ---------------------------------------------------------------------------
# functionals


def fiber_basis(group: ReflectionGroup, point) -> list:
    """Shortest coset representatives indexing the fiber basis at a parabolic point."""
    point = as_vector(point)
    cache = group.__dict__.setdefault("_fiber_basis", {})
    if point not in cache:
        cache[point] = group.shortest_coset_reps(group.stabilizer(point))
    return cache[point]


def local_jet(f, point, degree: int) -> Polynomial:
    """Homogeneous part of degree ``degree`` of ``y -> f(point + y)`` (or ``f(y - point)``)."""
    f = lift(f, f.layout) if not isinstance(f, FRF) else f
    if functional_convention() == "from_origin":
        point = tuple(-x for x in point)
    return f.taylor(point, degree).homogeneous_part(degree)


def functional_value(group: ReflectionGroup, point, w: GroupElement, f) -> Fraction:
    """``ev_0(d_w(f moved from point to the origin))`` for a local function ``f`` at ``point``."""
    if isinstance(f, Polynomial):
        f = FRF.from_polynomial(f)
    jet = local_jet(f, as_vector(point), w.length)
    return apply_ddiff_poly(group, w, jet).constant_value()


class FunctionalBasisElement:
    """``ev_0 o d_w o (move xi~ to the origin)`` for a parabolic point ``xi~``."""

    __slots__ = ("group", "point", "w")

    def __init__(self, group: ReflectionGroup, point, w):
        self.group = group
        self.point = as_vector(point)
        rep = group.parabolic_orbit_representative(self.point)[0]
        if rep != self.point:
            raise ValueError("%r is not the parabolic representative %r of its orbit" % (self.point, rep))
        if not isinstance(w, GroupElement):
            w = group.from_word(tuple(w))
        self.w = w
        if w not in fiber_basis(group, self.point):
            raise ValueError("%r is not a shortest coset representative at %r" % (w, self.point))

    def __call__(self, F) -> Fraction:
        """Evaluate on a germ (or germ vector); only the part on this orbit contributes."""
        if isinstance(F, GermVector):
            F = F.get(self.point)
            if F is None:
                return ZERO
        if F.base_point != self.point:
            return ZERO
        return functional_value(self.group, self.point, self.w, F.local_rep)

    def key(self):
        return (self.point, self.w.index)

    def __repr__(self):
        return "f[(%s), %r]" % (",".join(scalar_str(x) for x in self.point), self.w)


class FiberClass:
    """Coordinates of a germ's class in the fiber basis at one parabolic point."""

    def __init__(self, group: ReflectionGroup, point, coords: dict):
        self.group = group
        self.point = as_vector(point)
        self.coords = {k: v for k, v in coords.items() if v}

    def __eq__(self, other):
        return isinstance(other, FiberClass) and self.point == other.point and self.coords == other.coords

    def is_zero(self) -> bool:
        return not self.coords

    def to_vector(self) -> "ModuleVector":
        return ModuleVector(self.group, "M", {(self.point, k): v for k, v in self.coords.items()})

    def __repr__(self):
        return "FiberClass(%s, %s)" % (list(map(scalar_str, self.point)),
                                       {repr(self.group.elements[k]): scalar_str(v) for k, v in self.coords.items()})


def reduce_to_fiber(F: InvariantGerm) -> FiberClass:
    K = F.group
    S = schubert(K)
    coords = {}
    for w in fiber_basis(K, F.base_point):
        val = functional_value(K, F.base_point, w, F.local_rep)
        if val:
            coords[w.index] = val / S.norm(w)
    return FiberClass(K, F.base_point, coords)


# ---------------------------------------------------------------------------
# dual probes


def _stabilizer_symmetrize(group, sub: Subgroup, p: Polynomial) -> Polynomial:
    out = Polynomial.zero(group.layout)
    for k in sub:
        out = out + k.act_on(p)
    return out


def dual_probes(group: ReflectionGroup, point) -> dict:
    """Polynomials ``Q_w`` (centred at the origin, invariant under the stabilizer of ``point``)
    with ``ev_0(d_u Q_w) = [u == w]`` for ``u, w`` in the fiber basis at ``point``."""
    point = as_vector(point)
    cache = group.__dict__.setdefault("_dual_probes", {})
    stab = group.stabilizer(point)
    key = stab.indices
    if key in cache:
        return cache[key]
    reps = fiber_basis(group, point)
    S = schubert(group)
    chosen, cols = [], []
    # greedy: keep a symmetrized Schubert polynomial if it raises the rank of the pairing matrix
    echelon = []
    for g in sorted(group.elements, key=lambda g: (g.length, g.word)):
        sym = _stabilizer_symmetrize(group, stab, S.poly(g))
        if sym.is_zero():
            continue
        col = [apply_ddiff_poly(group, u, sym).constant_value() if u.length == g.length else ZERO for u in reps]
        w = list(col)
        for piv, row in echelon:
            if w[piv]:
                f = w[piv] / row[piv]
                w = [a - f * b for a, b in zip(w, row)]
        piv = next((i for i, a in enumerate(w) if a), None)
        if piv is None:
            continue
        echelon.append((piv, w))
        chosen.append(sym)
        cols.append(col)
        if len(chosen) == len(reps):
            break
    if len(chosen) != len(reps):
        raise ArithmeticError("symmetrized Schubert polynomials do not span the fiber")
    # matrix M[u][j] = pairing of functional u with chosen j; probes are M^-1 columns
    M = [[cols[j][i] for j in range(len(reps))] for i in range(len(reps))]
    Minv = mat_inverse(M)
    out = {}
    for i, w in enumerate(reps):
        q = Polynomial.zero(group.layout)
        for j, sym in enumerate(chosen):
            if Minv[j][i]:
                q = q + sym.scale(Minv[j][i])
        out[w.index] = q
    cache[key] = out
    return out


def probe_germ(group: ReflectionGroup, point, w: GroupElement, scale=1) -> InvariantGerm:
    """Germ at ``point`` on which ``f_{point,u}`` takes the value ``[u == w] * scale``."""
    point = as_vector(point)
    q = dual_probes(group, point)[w.index]
    shift = tuple(x if functional_convention() == "to_origin" else -x for x in point)
    local = FRF.from_polynomial(q.translate(tuple(-x for x in shift)))
    return InvariantGerm(group, point, local.scale(scale), check=False)


# ---------------------------------------------------------------------------
# module vectors


class ModuleVector:
    """Finite combination indexed by ``(point, w)``: kind ``"M*"`` (functionals) or ``"M"`` (fiber classes)."""

    def __init__(self, group: ReflectionGroup, kind: str, coeffs: dict | None = None):
        if kind not in ("M", "M*"):
            raise ValueError("kind must be 'M' or 'M*'")
        self.group = group
        self.kind = kind
        self.coeffs = {}
        for (p, w), c in (coeffs or {}).items():
            if isinstance(w, GroupElement):
                w = w.index
            c = Fraction(c)
            if c:
                key = (as_vector(p), w)
                self.coeffs[key] = self.coeffs.get(key, ZERO) + c
                if not self.coeffs[key]:
                    del self.coeffs[key]

    @classmethod
    def functional(cls, f: FunctionalBasisElement, c=1) -> "ModuleVector":
        return cls(f.group, "M*", {f.key(): c})

    @classmethod
    def basis_class(cls, group, point, w, c=1) -> "ModuleVector":
        return cls(group, "M", {(as_vector(point), w): c})

    def __add__(self, other):
        if other.kind != self.kind:
            raise ValueError("cannot add vectors of M and M*")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, ZERO) + c
        return ModuleVector(self.group, self.kind, out)

    def scale(self, c):
        return ModuleVector(self.group, self.kind, {k: v * c for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        return isinstance(other, ModuleVector) and self.kind == other.kind and self.coeffs == other.coeffs

    def is_zero(self):
        return not self.coeffs

    def points(self):
        return sorted({p for p, _ in self.coeffs})

    def items(self):
        return sorted(self.coeffs.items(), key=lambda t: (t[0][0], self.group.elements[t[0][1]].length,
                                                          self.group.elements[t[0][1]].word))

    def __repr__(self):
        body = ", ".join("(%s|%r): %s" % (",".join(map(scalar_str, p)), self.group.elements[w], scalar_str(c))
                         for (p, w), c in self.items())
        return "%s{%s}" % (self.kind, body)

    def to_json(self) -> list:
        return [{"point": [scalar_str(x) for x in p], "w": [i + 1 for i in self.group.elements[w].word], "coeff": scalar_str(c)}
                for (p, w), c in self.items()]

    @classmethod
    def from_json(cls, group, data, kind="M*") -> "ModuleVector":
        return cls(group, kind, {(tuple(Fraction(x) for x in d["point"]), group.from_word([i - 1 for i in d["w"]]).index):
                                 Fraction(d["coeff"]) for d in data})

    def representative(self) -> GermVector:
        """A germ vector whose class is this element of M."""
        if self.kind != "M":
            raise ValueError("only elements of M have germ representatives")
        S = schubert(self.group)
        by_point: dict = {}
        for (p, w), c in self.coeffs.items():
            g = probe_germ(self.group, p, self.group.elements[w], c * S.norms[w])
            by_point[p] = by_point[p] + g.local_rep if p in by_point else g.local_rep
        return GermVector(self.group, [InvariantGerm(self.group, p, f, check=False) for p, f in by_point.items()])


def pairing(alpha: ModuleVector, m: ModuleVector) -> Fraction:
    """``<alpha, m>`` for ``alpha`` in M* and ``m`` in M."""
    if alpha.kind != "M*" or m.kind != "M":
        raise ValueError("pairing takes (M*, M)")
    S = schubert(alpha.group)
    return sum((c * m.coeffs.get(k, ZERO) * S.norms[k[1]] for k, c in alpha.coeffs.items()), ZERO)


def germ_to_fiber_vector(F) -> ModuleVector:
    group = F.group
    out = ModuleVector(group, "M")
    germs = [F] if isinstance(F, InvariantGerm) else list(F)
    for g in germs:
        out = out + reduce_to_fiber(g).to_vector()
    return out


# ---------------------------------------------------------------------------
# actions


def _source_points(A: SkewElement, target) -> set:
    """Points ``q`` with ``g q + shift == target`` for some term of ``A``."""
    G = A.group
    out = set()
    for (gi, shift), _ in A.items():
        g = G.elements[gi]
        out.add(g.inverse().act(tuple(a - b for a, b in zip(target, shift))))
    return out


def act_on_functional(A: SkewElement, f, group: ReflectionGroup | None = None) -> ModuleVector:
    """``f o A`` expanded in the functional basis, computed by pairing with dual probe germs."""
    if isinstance(f, ModuleVector):
        out = ModuleVector(f.group, "M*")
        for (p, w), c in f.coeffs.items():
            out = out + act_on_functional(A, FunctionalBasisElement(f.group, p, f.group.elements[w])).scale(c)
        return out
    K = f.group
    sources = {K.parabolic_orbit_representative(q)[0] for q in _source_points(A, f.point)}
    coeffs = {}
    for eta in sorted(sources):
        for u in fiber_basis(K, eta):
            probe = probe_germ(K, eta, u)
            res = apply_operator_to_germ(A, probe, targets=[f.point])
            val = sum((f(F) for F in res), ZERO)
            if val:
                coeffs[(eta, u.index)] = val
    return ModuleVector(K, "M*", coeffs)


def act_on_fiber_vector(A: SkewElement, m: ModuleVector) -> ModuleVector:
    """``A`` on an element of M: apply to a representative germ and reduce every output."""
    out = ModuleVector(m.group, "M")
    for F in m.representative():
        for H in apply_operator_to_germ(A, F):
            out = out + reduce_to_fiber(H).to_vector()
    return out


def act_on_germ_classes(A: SkewElement, F, verify: bool = False) -> ModuleVector:
    """Reduce ``A(F)`` to fiber coordinates (``F`` a germ or germ vector)."""
    out = ModuleVector(F.group, "M")
    for germ in ([F] if isinstance(F, InvariantGerm) else list(F)):
        for H in apply_operator_to_germ(A, germ, verify=verify):
            out = out + reduce_to_fiber(H).to_vector()
    return out


# ---------------------------------------------------------------------------
# explicit expansion for symmetrized structure elements


def _coset_data(K: ReflectionGroup, xi, v):
    """Right cosets of ``K' = K_xi`` with representatives ``tau_s`` such that ``K'_{tau_s v}`` is parabolic."""
    Kp = K.stabilizer(xi)
    seen = set()
    out = []
    for tau in sorted(K.elements, key=lambda g: (g.length, g.word)):
        if tau.index in seen:
            continue
        coset = sorted((K.multiply(h, tau) for h in Kp), key=lambda g: (g.length, g.word))
        seen.update(c.index for c in coset)
        for t in coset:
            vs = t.act(v)
            sub = Subgroup(K, Kp.indices & K.stabilizer(vs).indices)
            if sub.is_parabolic():
                out.append((t, vs, sub))
                break
        else:
            raise ArithmeticError("no coset representative with parabolic stabilizer")
    return Kp, out


def structure_expansion(K: ReflectionGroup, p, v, xi):
    """Terms ``(a_s, w_s, t_s, v_s)`` rewriting ``sum_tau tau.(Delta'/Delta p phi_v)`` near the orbit of ``xi``.

    On invariant germs the symmetrized element equals
    ``sum_s a_s d_{w_s} o t_s phi_{v_s}`` with ``w_s`` taken in ``K_xi``.
    """
    v = as_vector(v)
    xi = as_vector(xi)
    p = lift(p, K.layout)
    Kv = K.stabilizer(v)
    delta_p = K.delta_of(Kv)
    Kp, cosets = _coset_data(K, xi, v)
    out = []
    roots = K.root_system.positive_roots
    rest = [K.gamma(r) for r in roots if K.reflection_of_root(r) not in Kp]
    for tau, vs, sub in cosets:
        sign = -1 if tau.length % 2 else 1
        ds = K.delta_of(sub)
        own = [K.gamma(r) for r in roots if K.reflection_of_root(r) in sub]
        t_s = FRF.from_factors(tau.act_on(delta_p).scale(sign), own + rest) * tau.act_on(p)
        ws = max((x for x in sub_short_reps(K, Kp, sub)), key=lambda g: (g.length, g.word))
        w0s = max(sub, key=lambda g: g.length)
        a_s = apply_ddiff_poly(K, w0s, ds).constant_value()
        out.append((a_s, ws, t_s, vs))
    return out


def sub_short_reps(K: ReflectionGroup, P: Subgroup, Q: Subgroup) -> list:
    """Shortest representatives of ``P/Q`` for parabolic ``Q`` inside parabolic ``P``."""
    J = Q.simple_generators
    return [x for x in P if all(K.multiply(x, K.simple[j]).length > x.length for j in J)]


def structure_route_value(K: ReflectionGroup, expansion, xi, w: GroupElement, F: InvariantGerm) -> Fraction:
    """``sum_s a_s ev_0 d_w d_{w_s} [t_s(xi + y) F(xi + y - v_s)]``."""
    xi = as_vector(xi)
    total = ZERO
    for a_s, ws, t_s, vs in expansion:
        q = tuple(a - b for a, b in zip(xi, vs))
        fq = F.local_at(q)
        if fq is None:
            continue
        deg = w.length + ws.length
        jet = (t_s.taylor(xi, deg) * fq.taylor(q, deg)).homogeneous_part(deg)
        val = apply_ddiff_poly(K, w, apply_ddiff_poly(K, ws, jet)).constant_value()
        total += a_s * val
    return total


def act_on_functional_structure(K: ReflectionGroup, p, v, f: FunctionalBasisElement) -> ModuleVector:
    """``f o A`` for ``A = sum_tau tau.(Delta'/Delta p phi_v)`` through the explicit coset expansion."""
    v = as_vector(v)
    expansion = structure_expansion(K, p, v, f.point)
    sources = set()
    for tau in K.elements:
        q = tuple(a - b for a, b in zip(f.point, tau.act(v)))
        sources.add(K.parabolic_orbit_representative(q)[0])
    coeffs = {}
    for eta in sorted(sources):
        for u in fiber_basis(K, eta):
            val = structure_route_value(K, expansion, f.point, f.w, probe_germ(K, eta, u))
            if val:
                coeffs[(eta, u.index)] = val
    return ModuleVector(K, "M*", coeffs)


# ---------------------------------------------------------------------------
# local finiteness


def _rank(vectors: list) -> int:
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
    return len(echelon)


def krylov_dimension(B: SkewElement, f: ModuleVector, max_steps: int = 64) -> int:
    """Dimension of ``span{f, f B, f B^2, ...}`` in M*."""
    vecs = [f]
    keys = set(f.coeffs)
    rank = 1 if not f.is_zero() else 0
    cur = f
    for _ in range(max_steps):
        cur = act_on_functional(B, cur)
        vecs.append(cur)
        keys |= set(cur.coeffs)
        order = sorted(keys)
        new_rank = _rank([[x.coeffs.get(k, ZERO) for k in order] for x in vecs])
        if new_rank == rank:
            return rank
        rank = new_rank
    return rank


def check_harish_chandra(generators, f: FunctionalBasisElement, B_sample, max_steps: int = 64) -> dict:
    """Local finiteness of invariant multiplication on M*, checked on one functional.

    Each sampled invariant ``B`` (a polynomial or a multiplication operator)
    is iterated on ``f`` and on ``f o X`` for every generator ``X``; the span
    dimensions must stay within the fiber dimensions of the points involved,
    and never exceed ``|G|`` per point.
    """
    from .builders import invariant_multiplier

    K = f.group
    ops = list(generators.values()) if isinstance(generators, dict) else list(generators)
    starts = [ModuleVector.functional(f)]
    for X in ops:
        v = act_on_functional(X, f)
        if not v.is_zero():
            starts.append(v)
    dims = []
    ok = True
    for b in B_sample:
        B = b if isinstance(b, SkewElement) else invariant_multiplier(K, b)
        for s in starts:
            d = krylov_dimension(B, s, max_steps)
            bound = sum(len(fiber_basis(K, p)) for p in s.points())
            dims.append({"dimension": d, "bound": bound})
            if d > bound or d > K.order * len(s.points()):
                ok = False
    return {"ok": ok, "dims": dims, "group_order": K.order}
