"""Command line front-end.

Every command reads an engine configuration (``--config``), runs one library
routine and prints a JSON report (``--pretty`` for indented text).  Reports
carry the configuration hash and the seed.  Exit status: 0 pass,
1 verification failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor

from .arith import scalar_str
from .config import EngineConfig, load_config, thread_count
from .errors import ConfigError, GZError
from .fibers import FunctionalBasisElement, ModuleVector, act_on_functional, schubert_polynomials
from .simplicity import certify_canonical_module, check_regular_conditions
from .skew import SkewElement
from .builders import build_gz_generators
from .verification import (gl_relations, invariance_failures, perturb, random_invariant_germ,
                           structure_theorem_check)


class Failure(Exception):
    """Raised by a command to request exit status 1 after printing its report."""

    def __init__(self, report):
        self.report = report


def _report(args, cfg: EngineConfig | None, command: str, **body) -> dict:
    out = {"command": command, "seed": args.seed}
    out["config_hash"] = cfg.hash if cfg is not None else None
    out.update(body)
    return out


def _germs(cfg: EngineConfig, args):
    rng = random.Random(args.seed)
    G = cfg.require_group()
    points = cfg.get("points")
    if points:
        return [random_invariant_germ(G, rng, cfg.vector(p, "point")) for p in points][: args.samples]
    return [random_invariant_germ(G, rng) for _ in range(args.samples)]


# ---------------------------------------------------------------------------
# commands


def cmd_verify_invariance(cfg: EngineConfig, args) -> dict:
    if not cfg.operators:
        raise ConfigError("verify-invariance needs operators")
    germs = _germs(cfg, args)
    names = sorted(cfg.operators)
    jobs = [{name: cfg.operators[name]} for name in names]
    if thread_count() > 1:
        with ThreadPoolExecutor(max_workers=thread_count()) as pool:
            parts = list(pool.map(lambda ops: invariance_failures(ops, germs), jobs))
    else:
        parts = [invariance_failures(ops, germs) for ops in jobs]
    failures = [f for part in parts for f in part]
    rep = _report(args, cfg, "verify-invariance", operators=names, samples=len(germs),
                  applications=len(germs) * len(names), failures=failures, ok=not failures)
    if failures:
        raise Failure(rep)
    return rep


def cmd_commutators(cfg: EngineConfig, args) -> dict:
    n = int(cfg.get("n", 2))
    if n not in (2, 3, 4):
        raise ConfigError("commutator checks support n = 2, 3 and (opt-in) 4")
    if n == 4 and not cfg.get("allow_n4", False):
        raise ConfigError("n = 4 is slow; set \"allow_n4\": true to run it")
    gens = build_gz_generators(n)
    if cfg.get("perturb"):
        gens = dict(gens)
        gens[(1, 2)] = perturb(gens[(1, 2)], 1)
    rows = gl_relations(n, gens)
    bad = [r for r in rows if not r["ok"]]
    rep = _report(args, cfg, "commutators", n=n, perturbed=bool(cfg.get("perturb")), relations=rows,
                  checked=len(rows), failed=len(bad), ok=not bad)
    if bad:
        raise Failure(rep)
    return rep


def cmd_structure_theorem(cfg: EngineConfig, args) -> dict:
    G = cfg.require_group()
    st = cfg.get("structure") or {}
    if "v" not in st:
        raise ConfigError("structure-theorem needs \"structure\": {\"v\": [...], \"p\": \"...\"}")
    v = cfg.vector(st["v"], "v")
    p = cfg.polynomial(st.get("p", "1"))
    res = structure_theorem_check(G, p, v, _germs(cfg, args))
    rep = _report(args, cfg, "structure-theorem", v=[scalar_str(x) for x in v], p=str(p),
                  a=None if res["a"] is None else scalar_str(res["a"]), predicted=scalar_str(res["predicted"]),
                  samples=res["samples"], ok=res["ok"])
    if not res["ok"]:
        raise Failure(rep)
    return rep


def _load_json_file(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError("cannot read %s: %s" % (path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("%s is not valid JSON: %s" % (path, exc)) from exc


def cmd_act(cfg: EngineConfig, args) -> dict:
    G = cfg.group
    if args.operator:
        data = _load_json_file(args.operator)
        if isinstance(data, dict):
            if "group" in data:
                cfg = load_config(dict(cfg.data, group=data["group"], operators=[]))
                G = cfg.group
            if G is None:
                raise ConfigError("operator file needs a group (in the file or in --config)")
            if "expr" in data:
                A = load_config(dict(cfg.data, operators=[{"name": "A", "expr": data["expr"]}])).operators["A"]
            else:
                A = SkewElement.from_json(G, data.get("terms", data.get("operator", [])))
        else:
            if G is None:
                raise ConfigError("operator file needs a group (in the file or in --config)")
            A = SkewElement.from_json(G, data)
    else:
        if len(cfg.operators) != 1:
            name = cfg.get("operator")
            if name not in cfg.operators:
                raise ConfigError("act needs --operator or a config with one operator (or \"operator\": name)")
            A = cfg.operators[name]
        else:
            A = next(iter(cfg.operators.values()))
        G = A.group
    fdata = _load_json_file(args.functional) if args.functional else cfg.get("functional")
    if fdata is None:
        raise ConfigError("act needs --functional or \"functional\" in the config")
    if isinstance(fdata, dict):
        fdata = [dict(fdata, coeff=fdata.get("coeff", "1"))]
    try:
        f = ModuleVector.from_json(G, fdata, "M*")
        for (p, w), _ in f.coeffs.items():
            FunctionalBasisElement(G, p, G.elements[w])
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError("bad functional: %s" % exc) from exc
    result = act_on_functional(A, f)
    return _report(args, cfg, "act", input=f.to_json(), result=result.to_json())


def cmd_schubert(cfg: EngineConfig, args) -> dict:
    G = cfg.require_group()
    polys, norms = schubert_polynomials(G)
    table = [{"w": repr(w), "word": [i + 1 for i in w.word], "P": str(polys[w]), "norm": scalar_str(norms[w])}
             for w in sorted(G.elements, key=lambda g: (g.length, g.word))]
    return _report(args, cfg, "schubert", order=G.order, table=table)


def cmd_gamma(cfg: EngineConfig, args) -> dict:
    if not cfg.operators:
        raise ConfigError("gamma-graph needs operators")
    if cfg.v is None:
        raise ConfigError("gamma-graph needs a base point v")
    R = args.radius if args.radius is not None else int(cfg.get("radius", 3))
    mode = args.mode or cfg.get("mode", "auto")
    if mode not in ("regular", "singular", "auto"):
        raise ConfigError("mode must be regular, singular or auto")
    gens = cfg.operators
    if mode == "regular" and all(A.has_trivial_group_part() for A in gens.values()):
        report = check_regular_conditions(gens, cfg.v, R, cfg.lattice)
        graph = report.graph
        cert = certify_canonical_module(gens, cfg.v, R, cfg.lattice, mode="regular")
    else:
        cert = certify_canonical_module(gens, cfg.v, R, cfg.lattice, mode=mode)
        graph = cert.graph
        report = cert
    files = []
    if args.out and graph is not None:
        stem = args.out[:-5] if args.out.endswith(".json") else args.out
        with open(stem + ".graph.json", "w") as fh:
            json.dump(graph.to_json(), fh, indent=2)
        with open(stem + ".dot", "w") as fh:
            fh.write(graph.to_dot())
        files = [stem + ".graph.json", stem + ".dot"]
    rep = _report(args, cfg, "gamma-graph", radius=R, mode=graph.mode if graph else mode,
                  conditions=report.to_json(), certificate=cert.to_json(),
                  graph=graph.to_json() if graph is not None else None, files=files,
                  ok=cert.verdict != "violated")
    if cert.verdict == "violated" or report.verdict == "violated":
        raise Failure(rep)
    return rep


COMMANDS = {
    "verify-invariance": cmd_verify_invariance,
    "commutators": cmd_commutators,
    "structure-theorem": cmd_structure_theorem,
    "act": cmd_act,
    "schubert": cmd_schubert,
    "gamma-graph": cmd_gamma,
}


# ---------------------------------------------------------------------------
# plumbing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="engine configuration (JSON file)")
    common.add_argument("--seed", type=int, default=0, help="PRNG seed recorded in the report")
    common.add_argument("--samples", type=int, default=20, help="number of random germs")
    common.add_argument("--radius", type=int, default=None, help="lattice window radius")
    common.add_argument("--mode", choices=("regular", "singular", "auto"), default=None)
    common.add_argument("--out", help="write the report (and graph files) here")
    common.add_argument("--pretty", action="store_true", help="indented text output")
    parser = argparse.ArgumentParser(prog="gzskew", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "act":
            p.add_argument("--operator", help="operator JSON file")
            p.add_argument("--functional", help="functional JSON file")
    return parser


def _render_pretty(rep: dict) -> str:
    lines = []
    for k, v in rep.items():
        if isinstance(v, (dict, list)):
            lines.append("%s:" % k)
            lines.extend("  " + line for line in json.dumps(v, indent=2).splitlines())
        else:
            lines.append("%s: %s" % (k, v))
    return "\n".join(lines)


def _emit(rep: dict, args):
    text = _render_pretty(rep) if args.pretty else json.dumps(rep, sort_keys=False)
    if args.out and args.command != "gamma-graph":
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    elif args.out:
        stem = args.out[:-5] if args.out.endswith(".json") else args.out
        with open(stem + ".json", "w") as fh:
            fh.write(text + "\n")
    print(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.samples < 0:
        parser.error("--samples must be nonnegative")
    try:
        thread_count()
        cfg = load_config(args.config) if args.config else load_config({})
        rep = COMMANDS[args.command](cfg, args)
    except Failure as fail:
        _emit(fail.report, args)
        return 1
    except (ConfigError, OSError) as exc:
        print(json.dumps({"command": args.command, "error": str(exc)}), file=sys.stderr)
        return 2
    except GZError as exc:
        print(json.dumps({"command": args.command, "error": "%s: %s" % (type(exc).__name__, exc)}),
              file=sys.stderr)
        return 1
    _emit(rep, args)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
