"""Gamma-graphs on lattice windows and window-relative simplicity certificates.

Orbits of the shift lattice are infinite, so every verdict here refers to a
finite window ``{v + sum n_i b_i : |n_i| <= R}``.  A verdict of
``"certified-on-window"`` means that every checked condition held on that
window; it is not a proof about the whole orbit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

import networkx as nx

from .arith import ZERO, as_vector, scalar_str
from .errors import PoleAtPoint, PoleOnOrbit
from .fibers import _rank, fiber_basis, reduce_to_fiber
from .germs import InvariantGerm, LatticeOrbitModule, apply_operator_to_germ, restrict_operator
from .lattice import ShiftLattice

CERTIFIED = "certified-on-window"
INCONCLUSIVE = "inconclusive"
VIOLATED = "violated"


def _named(generators):
    if isinstance(generators, dict):
        return [(str(k), A) for k, A in generators.items()]
    generators = list(generators)
    if all(isinstance(x, tuple) and len(x) == 2 for x in generators):
        return generators
    return [(str(i), A) for i, A in enumerate(generators)]


def _add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def _sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def _pt(x):
    return [scalar_str(a) for a in x]


# ---------------------------------------------------------------------------
# graphs


class GammaGraph:
    """Directed graph on window vertices; each edge keeps one witness."""

    def __init__(self, vertices, mode: str, base, radius: int):
        self.vertices = sorted(set(vertices))
        self._vset = set(self.vertices)
        self.mode = mode
        self.base = as_vector(base)
        self.radius = radius
        self.edges: dict = {}

    def add_edge(self, src, dst, witness: dict):
        if src not in self._vset or dst not in self._vset:
            raise KeyError("edge endpoint outside the window")
        self.edges.setdefault((src, dst), witness)

    def successors(self, x) -> list:
        return sorted(d for (s, d) in self.edges if s == x)

    def adjacency(self) -> dict:
        adj = {x: [] for x in self.vertices}
        for s, d in sorted(self.edges):
            adj[s].append(d)
        return adj

    def induced(self, vertices) -> "GammaGraph":
        keep = set(vertices)
        g = GammaGraph(keep, self.mode, self.base, self.radius)
        for (s, d), w in self.edges.items():
            if s in keep and d in keep:
                g.edges[(s, d)] = w
        return g

    def edge_set(self) -> set:
        return set(self.edges)

    def to_networkx(self) -> "nx.DiGraph":
        g = nx.DiGraph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def sccs(self) -> list:
        """Strongly connected components, each sorted, listed by smallest vertex."""
        return sorted(sorted(c) for c in nx.strongly_connected_components(self.to_networkx()))

    def is_strongly_connected(self) -> bool:
        return len(self.vertices) <= 1 or len(self.sccs()) == 1

    def reachable_from(self, x) -> set:
        return nx.descendants(self.to_networkx(), x) | {x}

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "base": _pt(self.base),
            "radius": self.radius,
            "vertices": [_pt(x) for x in self.vertices],
            "edges": [{"source": _pt(s), "target": _pt(d), **w} for (s, d), w in sorted(self.edges.items())],
        }

    def to_dot(self) -> str:
        ids = {x: "v%d" % i for i, x in enumerate(self.vertices)}
        lines = ["digraph gamma {"]
        for x in self.vertices:
            lines.append('  %s [label="(%s)"];' % (ids[x], ",".join(_pt(x))))
        for (s, d), w in sorted(self.edges.items()):
            lines.append('  %s -> %s [label="%s"];' % (ids[s], ids[d], w.get("generator", "")))
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return "GammaGraph(%s, %d vertices, %d edges)" % (self.mode, len(self.vertices), len(self.edges))


# ---------------------------------------------------------------------------
# reports


@dataclass
class SimplicityReport:
    base: tuple
    radius: int
    mode: str
    conditions: dict = field(default_factory=dict)
    sccs: list = field(default_factory=list)
    strongly_connected: bool = False
    unreachable: list = field(default_factory=list)
    verdict: str = INCONCLUSIVE
    graph: GammaGraph | None = None

    def to_json(self) -> dict:
        return {
            "window": {"base": _pt(self.base), "radius": self.radius},
            "mode": self.mode,
            "conditions": self.conditions,
            "scc_count": len(self.sccs),
            "sccs": [[_pt(x) for x in c] for c in self.sccs],
            "strongly_connected": self.strongly_connected,
            "unreachable": [_pt(x) for x in self.unreachable],
            "verdict": self.verdict,
        }

    def __str__(self):
        return json.dumps(self.to_json(), indent=2)


# ---------------------------------------------------------------------------
# regular case


def _lattice_for(generators, nvars, lattice):
    if lattice is not None:
        return lattice
    return ShiftLattice.from_operators([A for _, A in generators])


def build_gamma_regular(generators, v, R: int, lattice: ShiftLattice | None = None) -> GammaGraph:
    """Edge ``x -> x + shift`` whenever a generator term with that shift has a coefficient nonzero at the target."""
    gens = _named(generators)
    v = as_vector(v)
    lat = _lattice_for(gens, len(v), lattice)
    window = lat.window(v, R)
    graph = GammaGraph(window, "regular", v, R)
    wset = set(window)
    for name, A in gens:
        for c, g, shift in A.terms():
            if not g.is_identity():
                raise ValueError("generator %s has a nontrivial group part" % name)
            if not any(shift):
                continue
            for x in window:
                y = _add(x, shift)
                if y not in wset:
                    continue
                try:
                    val = c.evaluate(y)
                except PoleAtPoint as exc:
                    raise PoleOnOrbit(y) from exc
                if val:
                    graph.add_edge(x, y, {"generator": name, "shift": _pt(shift), "value": scalar_str(val)})
    return graph


def _symmetrized_monomial_values(group, point, exps) -> Fraction:
    total = ZERO
    for g in group.elements:
        q = g.act(point)
        term = Fraction(1)
        for a, e in zip(q, exps):
            if e:
                term *= a ** e
        total += term
    return total


def _exponents(nvars: int, degree: int):
    for d in range(1, degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            yield tuple(e)


def separate_points(group, points, degree_cap: int = 3) -> dict:
    """Search symmetrized monomials for values separating the given points (up to their orbits).

    Points in the same orbit of ``group`` are never separated and are grouped
    first.  Returns ``{"status": "pass" | "inconclusive", "degree": d, "witness": ...}``.
    """
    reps = {}
    for p in points:
        reps.setdefault(group.parabolic_orbit_representative(p)[0], p)
    classes = [list(reps.values())]
    used = 0
    for exps in _exponents(group.nvars, degree_cap):
        if all(len(c) == 1 for c in classes):
            break
        used = sum(exps)
        refined = []
        for c in classes:
            buckets: dict = {}
            for p in c:
                buckets.setdefault(_symmetrized_monomial_values(group, p, exps), []).append(p)
            refined.extend(buckets.values())
        classes = refined
    bad = [c for c in classes if len(c) > 1]
    if bad:
        return {"status": "inconclusive", "degree": degree_cap, "witness": [_pt(x) for x in bad[0][:2]]}
    return {"status": "pass", "degree": used}


def monoid_generates(shifts, lattice: ShiftLattice, max_length: int) -> dict:
    """Is every ``+-b_i`` a sum of at most ``max_length`` shifts?  Works in lattice coordinates."""
    steps = set()
    for s in shifts:
        c = lattice.window_index(tuple(ZERO for _ in s), s)
        if c is None:
            return {"status": "fail", "witness": {"shift_outside_lattice": _pt(s)}}
        if any(c):
            steps.add(c)
    r = lattice.rank
    goals = set()
    for i in range(r):
        for sign in (1, -1):
            goals.add(tuple(sign * int(i == j) for j in range(r)))
    seen = {tuple([0] * r)}
    frontier = set(seen)
    for _ in range(max_length):
        nxt = set()
        for x in frontier:
            for s in steps:
                y = tuple(a + b for a, b in zip(x, s))
                if max(abs(a) for a in y) <= max_length and y not in seen:
                    nxt.add(y)
        seen |= nxt
        frontier = nxt
        if goals <= seen or not frontier:
            break
    missing = sorted(goals - seen)
    if missing:
        return {"status": "fail", "witness": {"missing_lattice_vector": list(missing[0])}}
    return {"status": "pass"}


def coefficient_zeros(generators, window) -> dict:
    """Evaluate every shift coefficient on the window; a zero or a pole is a failure."""
    for name, A in _named(generators):
        for c, g, shift in A.terms():
            if not any(shift):
                continue
            for y in window:
                try:
                    val = c.evaluate(y)
                except PoleAtPoint:
                    return {"status": "fail", "witness": {"generator": name, "shift": _pt(shift), "point": _pt(y),
                                                          "kind": "pole"}}
                if not val:
                    return {"status": "fail", "witness": {"generator": name, "shift": _pt(shift), "point": _pt(y),
                                                          "kind": "zero"}}
    return {"status": "pass"}


def check_regular_conditions(generators, v, R: int, lattice: ShiftLattice | None = None,
                             degree_cap: int = 3) -> SimplicityReport:
    gens = _named(generators)
    v = as_vector(v)
    lat = _lattice_for(gens, len(v), lattice)
    window = lat.window(v, R)
    group = gens[0][1].group
    report = SimplicityReport(v, R, "regular")
    report.conditions["separation"] = separate_points(group, window, degree_cap)
    shifts = {s for _, A in gens for s in A.shifts() if any(s)}
    report.conditions["monoid"] = monoid_generates(shifts, lat, 2 * R * max(lat.rank, 1))
    report.conditions["nonvanishing"] = coefficient_zeros(gens, window)
    try:
        graph = build_gamma_regular(gens, v, R, lat)
    except PoleOnOrbit as exc:
        report.verdict = VIOLATED
        report.conditions["nonvanishing"] = {"status": "fail", "witness": {"point": _pt(exc.point), "kind": "pole"}}
        return report
    report.graph = graph
    report.sccs = graph.sccs()
    report.strongly_connected = graph.is_strongly_connected()
    report.unreachable = sorted(set(graph.vertices) - graph.reachable_from(v))
    statuses = [c["status"] for c in report.conditions.values()]
    if "fail" in statuses:
        report.verdict = VIOLATED
    elif "inconclusive" in statuses or not graph.edges:
        report.verdict = INCONCLUSIVE
    else:
        report.verdict = CERTIFIED if report.strongly_connected else VIOLATED
    return report


# ---------------------------------------------------------------------------
# singular case


def build_gamma_singular(generators, v, R: int, lattice: ShiftLattice | None = None) -> GammaGraph:
    """Vertices are orbits of ``G_{lattice.v}`` meeting the window, labelled by parabolic representatives.

    An edge ``X -> Y`` means that some generator applied to the constant germ
    on ``X`` has a collected coefficient nonzero at ``Y``.
    """
    gens = _named(generators)
    K = gens[0][1].group
    lat = _lattice_for(gens, K.nvars, lattice)
    mod = LatticeOrbitModule(K, lat, v)
    L = mod.local_group
    local_ops = [(name, restrict_operator(A, L)) for name, A in gens]
    window = lat.window(mod.v, R)
    reps = sorted({L.parabolic_orbit_representative(x)[0] for x in window})
    graph = GammaGraph(reps, "singular", mod.v, R)
    graph.local_group = L
    rset = set(reps)
    for X in reps:
        one = InvariantGerm.constant(L, X)
        for name, A in local_ops:
            for H in apply_operator_to_germ(A, one):
                Y = H.base_point
                if Y not in rset or Y == X:
                    continue
                val = H.local_rep.evaluate(Y)
                if val:
                    graph.add_edge(X, Y, {"generator": name, "shift": _pt(_sub(Y, X)), "value": scalar_str(val)})
    return graph


def fiber_cyclicity(group, point, degree_cap: int = 3) -> dict:
    """Is the fiber at ``point`` spanned by classes of invariant polynomials times the constant germ?"""
    from .arith import Polynomial

    point = group.parabolic_orbit_representative(point)[0]
    dim = len(fiber_basis(group, point))
    basis = fiber_basis(group, point)
    rows = []
    layout = group.layout
    candidates = [Polynomial.constant(layout, 1)]
    for exps in _exponents(group.nvars, degree_cap):
        m = Polynomial(layout, {exps: Fraction(1)})
        s = Polynomial.zero(layout)
        for g in group.elements:
            s = s + g.act_on(m)
        candidates.append(s)

    rank = 0
    for p in candidates:
        fc = reduce_to_fiber(InvariantGerm(group, point, p, check=False))
        rows.append([fc.coords.get(w.index, ZERO) for w in basis])
        rank = _rank(rows)
        if rank == dim:
            return {"status": "pass", "dimension": dim}
    return {"status": "inconclusive", "dimension": dim, "rank": rank}


def certify_canonical_module(generators, v, R: int, lattice: ShiftLattice | None = None,
                             mode: str = "auto", degree_cap: int = 3) -> SimplicityReport:
    """Window certificate that the class of the constant germ at ``v`` generates the module.

    ``mode`` is ``"regular"``, ``"singular"`` or ``"auto"`` (singular exactly
    when ``G_{lattice.v}`` is nontrivial).
    """
    gens = _named(generators)
    K = gens[0][1].group
    lat = _lattice_for(gens, K.nvars, lattice)
    mod = LatticeOrbitModule(K, lat, v)
    L = mod.local_group
    if mode == "auto":
        mode = "singular" if L.order > 1 else "regular"
    if mode == "regular":
        graph = build_gamma_regular(gens, mod.v, R, lat)
        start = mod.v
    elif mode == "singular":
        graph = build_gamma_singular(gens, mod.v, R, lat)
        start = L.parabolic_orbit_representative(mod.v)[0]
    else:
        raise ValueError("mode must be regular, singular or auto")
    report = SimplicityReport(mod.v, R, mode, graph=graph)
    report.conditions["separation"] = separate_points(L, lat.window(mod.v, R), degree_cap)
    report.conditions["cyclic_fiber"] = fiber_cyclicity(L, mod.v, degree_cap)
    report.sccs = graph.sccs()
    report.strongly_connected = graph.is_strongly_connected()
    report.unreachable = sorted(set(graph.vertices) - graph.reachable_from(start))
    if not graph.edges:
        report.verdict = INCONCLUSIVE
    elif report.unreachable:
        report.verdict = VIOLATED
    elif any(c["status"] != "pass" for c in report.conditions.values()):
        report.verdict = INCONCLUSIVE
    else:
        report.verdict = CERTIFIED
    return report


def transitive_closure(vertices, adj) -> dict:
    """Reachability sets by repeated search; used to cross-check the SCC routine."""
    out = {}
    for x in vertices:
        seen = {x}
        stack = [x]
        while stack:
            y = stack.pop()
            for z in adj.get(y, ()):
                if z not in seen:
                    seen.add(z)
                    stack.append(z)
        out[x] = seen
    return out
