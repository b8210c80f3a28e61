"""Engine configuration: one JSON document describing the group, lattice, base point and operators.

Example::

    {
      "group": "typeA_product([1,2])",
      "v": ["1/3", "2/7", "-5/11"],
      "operators": [{"builder": "ogz", "rows": [1, 2]}],
      "radius": 3
    }

Operator entries are either ``{"name": ..., "expr": "<dsl>"}`` or
``{"builder": ...}`` with one of the builders listed in :data:`BUILDERS`.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import Polynomial
from .builders import (build_gz_generators, build_ogz_generators, build_type_I, build_type_II,
                       invariant_multiplier, structure_symmetrized)
from .dsl import parse_operator, parse_polynomial
from .errors import ConfigError, GZError
from .groups import ReflectionGroup, parse_group_spec
from .lattice import ShiftLattice
from .skew import SkewElement

BUILDERS = ("gz", "ogz", "invariant", "structure", "type_I", "type_II", "expr", "json")


def thread_count() -> int:
    """Worker cap from ``GZ_ENGINE_THREADS`` (default 1)."""
    raw = os.environ.get("GZ_ENGINE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError("GZ_ENGINE_THREADS must be an integer, got %r" % raw) from None


def config_hash(data) -> str:
    blob = json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _vector(x, n=None, what="vector"):
    try:
        v = tuple(Fraction(str(a)) for a in x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError("bad %s %r" % (what, x)) from exc
    if n is not None and len(v) != n:
        raise ConfigError("%s %r should have %d coordinates" % (what, x, n))
    return v


@dataclass
class EngineConfig:
    data: dict
    group: ReflectionGroup | None = None
    lattice: ShiftLattice | None = None
    v: tuple | None = None
    operators: dict = field(default_factory=dict)

    @property
    def hash(self) -> str:
        return config_hash(self.data)

    def get(self, key, default=None):
        return self.data.get(key, default)

    def require_group(self) -> ReflectionGroup:
        if self.group is None:
            raise ConfigError("config needs a group")
        return self.group

    def polynomial(self, text) -> Polynomial:
        return parse_polynomial(str(text), self.require_group())

    def vector(self, x, what="vector"):
        return _vector(x, self.require_group().nvars, what)


def _group_from(entry) -> ReflectionGroup:
    try:
        if isinstance(entry, str):
            return parse_group_spec(entry)
        return ReflectionGroup.from_json(entry)
    except (GZError, ValueError, KeyError, TypeError, SyntaxError) as exc:
        raise ConfigError("bad group %r: %s" % (entry, exc)) from exc


def _parts(cfg: EngineConfig, raw):
    out = []
    for part in raw:
        w = part.get("w")
        if w is not None:
            w = [int(i) - 1 for i in w]
        out.append((w, cfg.polynomial(part.get("p", "1")), cfg.vector(part["v"], "v")))
    return out


def _build(cfg: EngineConfig, spec: dict) -> dict:
    kind = spec.get("builder", "expr" if "expr" in spec else None)
    if kind not in BUILDERS:
        raise ConfigError("unknown operator builder %r (choose from %s)" % (kind, ", ".join(BUILDERS)))
    name = spec.get("name")
    if kind == "gz":
        n = int(spec.get("n", 2))
        gens = build_gz_generators(n)
        made = {"E%d%d" % k: A for k, A in gens.items()}
    elif kind == "ogz":
        made = build_ogz_generators(spec["rows"], Fraction(str(spec.get("a", 1))))
    else:
        G = cfg.require_group()
        if kind == "expr":
            A = parse_operator(spec["expr"], G)
        elif kind == "json":
            A = SkewElement.from_json(G, spec["terms"])
        elif kind == "invariant":
            A = invariant_multiplier(G, cfg.polynomial(spec["h"]))
        elif kind == "structure":
            A = structure_symmetrized(G, cfg.polynomial(spec.get("p", "1")), cfg.vector(spec["v"], "v"))
        elif kind == "type_I":
            A = build_type_I(G, _parts(cfg, spec["parts"]))
        else:
            A = build_type_II(G, _parts(cfg, spec["parts"]))
        made = {name or "%s%d" % (kind, len(cfg.operators)): A}
    select = spec.get("select")
    if select is not None:
        missing = set(select) - set(made)
        if missing:
            raise ConfigError("builder %s has no operators %s" % (kind, sorted(missing)))
        made = {k: made[k] for k in select}
    if name and len(made) > 1:
        made = {"%s.%s" % (name, k): A for k, A in made.items()}
    return made


def load_config(source) -> EngineConfig:
    """Build an :class:`EngineConfig` from a path, a JSON string or a dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = source
        if isinstance(source, (str, os.PathLike)) and os.path.exists(str(source)):
            with open(source) as fh:
                text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("config is not valid JSON: %s" % exc) from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    cfg = EngineConfig(data)
    if "group" in data:
        cfg.group = _group_from(data["group"])
    try:
        for spec in data.get("operators", []):
            if not isinstance(spec, dict):
                raise ConfigError("operator entries must be objects")
            made = _build(cfg, spec)
            for name, A in made.items():
                if cfg.group is None:
                    cfg.group = A.group
                elif (A.group.layout != cfg.group.layout
                      or A.group.root_system.simple_roots != cfg.group.root_system.simple_roots):
                    raise ConfigError("operator %s lives on a different layout than the config group" % name)
                else:
                    A = SkewElement(cfg.group, {(g.index, s): c for c, g, s in A.terms()}) \
                        if A.group is not cfg.group else A
                if name in cfg.operators:
                    raise ConfigError("duplicate operator name %r" % name)
                cfg.operators[name] = A
        if "v" in data:
            cfg.v = cfg.vector(data["v"], "v")
        if "lattice" in data:
            cfg.lattice = ShiftLattice([cfg.vector(b, "lattice generator") for b in data["lattice"]],
                                       cfg.require_group().nvars)
    except ConfigError:
        raise
    except (GZError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError("invalid config: %s: %s" % (type(exc).__name__, exc)) from exc
    return cfg
