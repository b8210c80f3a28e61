"""Invariant germs on orbits and the action of skew elements on them.

An :class:`InvariantGerm` is a ``K``-invariant function germ on a single orbit
``K . xi`` (``K`` a reflection group acting on the same space as the operators).
It is stored by one local representative at the orbit's parabolic
representative ``xi~``; at another orbit point ``k . xi~`` the germ is
``k . local_rep``.  Local representatives are rational functions that are
regular at the base point, so holomorphic results whose denominators do not
pass through the base point are kept exactly.

A finite sum of germs on different orbits is a :class:`GermVector`.
"""

from __future__ import annotations

from typing import Iterable

from .arith import FactoredRationalFunction, Polynomial, as_vector, lift, scalar_str
from .errors import ModuleStructureMissing, NotHolomorphicAtGerm, NotInvariantCoefficient
from .groups import ReflectionGroup, sub_reflection_group
from .lattice import ShiftLattice, orbit_stabilizer
from .skew import SkewElement, transport

FRF = FactoredRationalFunction


class InvariantGerm:
    """``K``-invariant germ on the orbit of ``base_point`` with the given local representative."""

    __slots__ = ("group", "base_point", "local_rep")

    def __init__(self, group: ReflectionGroup, base_point, local_rep, *, check: bool = True):
        self.group = group
        self.base_point = as_vector(base_point)
        self.local_rep = lift(local_rep, group.layout)
        if check:
            rep, _ = group.parabolic_orbit_representative(self.base_point)
            if rep != self.base_point:
                raise ValueError("base point %r is not the parabolic representative %r; use InvariantGerm.at"
                                 % (self.base_point, rep))
            bad = self.local_rep.poles_at(self.base_point)
            if bad:
                raise NotHolomorphicAtGerm(self.base_point, bad[0])
            stab = group.stabilizer(self.base_point)
            if not group.is_invariant(self.local_rep, stab):
                raise NotInvariantCoefficient("local representative is not invariant under the stabilizer")

    @classmethod
    def at(cls, group: ReflectionGroup, point, local_rep, check: bool = True) -> "InvariantGerm":
        """Germ with ``local_rep`` at ``point``, moved to the parabolic representative of its orbit."""
        point = as_vector(point)
        rep, g = group.parabolic_orbit_representative(point)
        f = lift(local_rep, group.layout)
        return cls(group, rep, g.act_on(f), check=check)

    @classmethod
    def constant(cls, group, point, c=1) -> "InvariantGerm":
        return cls.at(group, point, c)

    # -- orbit data
    def orbit(self) -> list:
        """``(point, local function)`` for each distinct orbit point, sorted by point."""
        seen = {}
        for g in self.group.elements:
            q = g.act(self.base_point)
            if q not in seen:
                seen[q] = g
        return [(q, seen[q].act_on(self.local_rep)) for q in sorted(seen)]

    def orbit_points(self) -> list:
        return self.group.orbit(self.base_point)

    def local_at(self, point):
        """Local function at an orbit point, or None off the orbit."""
        point = as_vector(point)
        for g in self.group.elements:
            if g.act(self.base_point) == point:
                return g.act_on(self.local_rep)
        return None

    def is_zero(self) -> bool:
        return self.local_rep.is_zero()

    def scale(self, c) -> "InvariantGerm":
        return InvariantGerm(self.group, self.base_point, self.local_rep.scale(c), check=False)

    def __eq__(self, other):
        if not isinstance(other, InvariantGerm):
            return NotImplemented
        return (other.group is self.group and other.base_point == self.base_point
                and other.local_rep == self.local_rep)

    def __hash__(self):
        return hash((self.base_point, self.local_rep))

    def __repr__(self):
        return "InvariantGerm(at=(%s), %s)" % (",".join(scalar_str(x) for x in self.base_point), self.local_rep)

    def to_json(self) -> dict:
        return {"point": [scalar_str(x) for x in self.base_point], "local_rep": self.local_rep.to_json()}

    @classmethod
    def from_json(cls, group, data) -> "InvariantGerm":
        rep = FRF.from_json(data["local_rep"]) if "den_factors" in data["local_rep"] else \
            FRF.from_polynomial(Polynomial.from_json(data["local_rep"]))
        return cls.at(group, [__import__("fractions").Fraction(x) for x in data["point"]], rep)


class GermVector:
    """Finite sum of invariant germs on distinct orbits, keyed by base point."""

    def __init__(self, group: ReflectionGroup, germs: Iterable[InvariantGerm] = ()):
        self.group = group
        self.germs: dict = {}
        for F in germs:
            self._add(F)

    def _add(self, F: InvariantGerm):
        if F.group is not self.group:
            raise ValueError("germ belongs to a different group")
        if F.base_point in self.germs:
            s = self.germs[F.base_point].local_rep + F.local_rep
            if s.is_zero():
                del self.germs[F.base_point]
            else:
                self.germs[F.base_point] = InvariantGerm(self.group, F.base_point, s, check=False)
        elif not F.is_zero():
            self.germs[F.base_point] = F

    def __iter__(self):
        return iter([self.germs[k] for k in sorted(self.germs)])

    def __len__(self):
        return len(self.germs)

    def __add__(self, other: "GermVector") -> "GermVector":
        out = GermVector(self.group, self)
        for F in other:
            out._add(F)
        return out

    def scale(self, c) -> "GermVector":
        return GermVector(self.group, [F.scale(c) for F in self])

    def __sub__(self, other):
        return self + other.scale(-1)

    def get(self, point):
        return self.germs.get(as_vector(point))

    def __eq__(self, other):
        if not isinstance(other, GermVector):
            return NotImplemented
        return self.group is other.group and self.germs == other.germs

    def __repr__(self):
        return "GermVector(%s)" % list(self)

    def to_json(self) -> list:
        return [F.to_json() for F in self]


def _as_vector(group, F) -> GermVector:
    if isinstance(F, GermVector):
        return F
    if isinstance(F, InvariantGerm):
        return GermVector(group, [F])
    return GermVector(group, F)


def _contributions(A: SkewElement, F: InvariantGerm):
    """Map target point -> list of (coeff, g, shift, source point)."""
    targets: dict = {}
    G = A.group
    pts = F.orbit_points()
    for (gi, shift), c in A.items():
        g = G.elements[gi]
        for q in pts:
            gq = g.act(q)
            eta = tuple(a + b for a, b in zip(gq, shift))
            targets.setdefault(eta, []).append((c, g, shift, q))
    return targets


def _collect(A, F, eta, contribs, local_cache):
    H = FRF.zero(F.group.layout)
    for c, g, shift, q in contribs:
        fq = local_cache.get(q)
        if fq is None:
            fq = local_cache[q] = F.local_at(q)
        H = H + c * transport(fq, g, shift)
    return H


def apply_operator_to_germ(A: SkewElement, F: InvariantGerm, *, targets=None, verify: bool = False) -> list:
    """``A(F)`` as a list of invariant germs, one per target orbit with nonzero result.

    For each target orbit the collected coefficient function is formed at one
    point of the orbit, checked for poles there, and moved to the parabolic
    representative.  ``targets`` (an iterable of points) restricts the output
    to the orbits of those points.  With ``verify=True`` the result is formed at
    every orbit point and checked for consistency, which is how operators that
    are invariant only on invariant germs (type I elements) are validated.
    """
    K = F.group
    contribs = _contributions(A, F)
    wanted = None
    if targets is not None:
        wanted = {K.parabolic_orbit_representative(t)[0] for t in targets}
    by_orbit: dict = {}
    for eta in contribs:
        rep = K.parabolic_orbit_representative(eta)[0]
        if wanted is not None and rep not in wanted:
            continue
        by_orbit.setdefault(rep, []).append(eta)
    cache: dict = {}
    out = []
    for rep in sorted(by_orbit):
        pts = sorted(by_orbit[rep])
        first = rep if rep in contribs else pts[0]
        results = []
        for eta in ([first] + [p for p in pts if p != first] if verify else [first]):
            H = _collect(A, F, eta, contribs[eta], cache)
            bad = H.poles_at(eta)
            if bad:
                raise NotHolomorphicAtGerm(eta, bad[0])
            _, k = K.parabolic_orbit_representative(eta)
            results.append((eta, k.act_on(H)))
        H0 = results[0][1]
        if verify:
            for eta, H in results[1:]:
                if H != H0:
                    raise NotInvariantCoefficient("result at %r disagrees with the orbit representative" % (eta,))
            # orbit points without contributions must carry a zero germ
            if not H0.is_zero() and len(pts) != len(K.orbit(rep)):
                raise NotInvariantCoefficient("result is not invariant: some orbit points receive nothing")
        if not H0.is_zero():
            out.append(InvariantGerm(K, rep, H0, check=False))
    return out


def apply_operator(A: SkewElement, F, **kw) -> GermVector:
    """``A`` applied to a germ or a germ vector, returned as a :class:`GermVector`."""
    if isinstance(F, InvariantGerm):
        return GermVector(F.group, apply_operator_to_germ(A, F, **kw))
    out = GermVector(F.group)
    for germ in F:
        out = out + GermVector(F.group, apply_operator_to_germ(A, germ, **kw))
    return out


# ---------------------------------------------------------------------------
# restriction to a lattice orbit and induction back


class LatticeOrbitModule:
    """Bookkeeping for the orbit ``lattice . v`` inside ``(G x lattice) . v``.

    ``v`` is moved inside its ``G``-orbit (if necessary) so that the subgroup
    ``G_{lattice.v} = {g : g v - v in lattice}`` is parabolic; that subgroup is
    then available as the reflection group :attr:`local_group`.
    """

    def __init__(self, group: ReflectionGroup, lattice: ShiftLattice, v):
        self.group = group
        self.lattice = lattice
        v = as_vector(v)
        best = None
        for cand in [v] + group.orbit(v):
            sub = orbit_stabilizer(group, lattice, cand)
            if sub.is_parabolic():
                best = (cand, sub)
                break
        if best is None:
            raise ModuleStructureMissing("no point of the orbit of %r has a parabolic lattice-orbit stabilizer" % (v,))
        self.v, self.stabilizer = best
        self.local_group = sub_reflection_group(group, self.stabilizer.simple_generators)

    def in_lattice_orbit(self, point) -> bool:
        return tuple(a - b for a, b in zip(as_vector(point), self.v)) in self.lattice

    def pi(self, F: InvariantGerm) -> InvariantGerm:
        """Restrict a ``G``-germ to the lattice orbit (a germ for the local group)."""
        for q, f in F.orbit():
            if self.in_lattice_orbit(q):
                return InvariantGerm.at(self.local_group, q, f, check=False)
        raise ValueError("germ orbit does not meet the lattice orbit of v")

    def pi_vector(self, Fs) -> GermVector:
        Fs = _as_vector(self.group, Fs)
        return GermVector(self.local_group, [self.pi(F) for F in Fs])

    def pi_inverse(self, F: InvariantGerm) -> InvariantGerm:
        """Extend a germ on the lattice orbit to the whole ``G``-orbit by invariance."""
        if not self.in_lattice_orbit(F.base_point):
            raise ValueError("germ is not supported on the lattice orbit of v")
        return InvariantGerm.at(self.group, F.base_point, F.local_rep, check=False)

    def pi_inverse_vector(self, Fs) -> GermVector:
        Fs = _as_vector(self.local_group, Fs)
        return GermVector(self.group, [self.pi_inverse(F) for F in Fs])


def pi_G(F, module: LatticeOrbitModule):
    if isinstance(F, InvariantGerm):
        return module.pi(F)
    return module.pi_vector(F)


def pi_G_inverse(F, module: LatticeOrbitModule):
    if isinstance(F, InvariantGerm):
        return module.pi_inverse(F)
    return module.pi_inverse_vector(F)


def inclusion_P(F, H: ReflectionGroup) -> GermVector:
    """View a ``G``-invariant germ as an ``H``-invariant one (``H`` a subgroup acting on the same space)."""
    G = F.group if isinstance(F, InvariantGerm) else F.group
    out = GermVector(H)
    for germ in _as_vector(G, F):
        done = set()
        for q, f in germ.orbit():
            rep, k = H.parabolic_orbit_representative(q)
            if rep in done:
                continue
            done.add(rep)
            out._add(InvariantGerm(H, rep, k.act_on(f), check=False))
    return out


def upsilon(F, module: LatticeOrbitModule, H: ReflectionGroup) -> GermVector:
    """``inclusion_P`` after ``pi_G_inverse``."""
    return inclusion_P(pi_G_inverse(F, module), H)


def check_module_structure(generators, H: ReflectionGroup, probes) -> None:
    """Raise :class:`ModuleStructureMissing` if a generator sends an ``H``-probe germ out of the holomorphic germs."""
    for A in generators:
        for P in probes:
            try:
                apply_operator_to_germ(A, P)
            except NotHolomorphicAtGerm as exc:
                raise ModuleStructureMissing("generator does not preserve H-invariant germs: %s" % exc) from exc


def restrict_operator(A: SkewElement, H: ReflectionGroup) -> SkewElement:
    """The same terms as ``A``, read as an element of the skew ring of a subgroup ``H``.

    Every group part of ``A`` must lie in ``H``; otherwise ``A`` does not act on
    ``H``-invariant germs term by term and :class:`ModuleStructureMissing` is raised.
    """
    if H is A.group:
        return A
    terms = {}
    for (gi, shift), c in A.items():
        g = A.group.elements[gi]
        try:
            h = H.element_of_matrix(g.matrix)
        except (KeyError, ValueError) as exc:
            raise ModuleStructureMissing("group part %r is not in the subgroup" % g) from exc
        terms[(h.index, shift)] = c
    return SkewElement(H, terms)
