"""Command-line front end.

Every verb is a thin wrapper around one library operation: it loads JSON
documents, dispatches, and emits a report whose payload is exactly the
operation's result.  Reports are byte-stable across runs: keys are sorted
and all ordering inside payloads is canonical.

Exit codes: 0 ok, 1 violations found, 2 input/usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import documents as docs
from .errors import InputError, TropModuliError
from .family import fiber, image_strata, induced_alpha, propagate_closure, validate_family, wall_verdict
from .moduli import canonical_string, classify, enumerate_types, resolve_4valent, wall_graph
from .polyhedral import build_skeleton, validate_complex
from .tropcurve import (
    ParameterizedTropicalCurve,
    TropicalCurve,
    check_balanced,
    genus,
    is_stable,
)
from .errors import Disconnected


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}")
    # accept a saved report in place of its payload document, so verbs chain
    if isinstance(doc, dict) and doc.get("schema") == docs.SCHEMA \
            and "verb" in doc and "payload" in doc:
        return doc["payload"]
    return doc


def _report(verb, status, payload, summary):
    return {
        "schema": docs.SCHEMA,
        "verb": verb,
        "status": status,
        "payload": payload,
        "summary": summary,
    }


def _emit(report, fmt, output):
    if fmt == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        lines = [f"status: {report['status']}", report["summary"]]
        payload = report["payload"]
        for v in payload.get("violations", []) if isinstance(payload, dict) else []:
            lines.append(f"AXIOM({v['axiom']}) violated at {v['subject']}: {v['message']}")
        text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# verb handlers: return (status, payload, summary)
# ---------------------------------------------------------------------------

def _cmd_validate_complex(args):
    c = docs.complex_from_doc(_load_json(args.input))
    report = validate_complex(c)
    payload = docs.report_to_doc(report)
    if report.ok:
        return "ok", payload, f"complex with {len(c.faces)} faces is valid"
    return "violations", payload, f"{len(report.violations)} violations"


def _cmd_skeleton(args):
    d = docs.pair_from_doc(_load_json(args.input))
    sk = build_skeleton(d)
    return "ok", docs.complex_to_doc(sk), f"skeleton with {len(sk.faces)} faces"


def _cmd_validate_curve(args):
    t, lengths, positions = docs.type_from_doc(_load_json(args.input))
    violations = []
    balance = check_balanced(t)
    for v, deficit in balance.failures:
        violations.append({"axiom": "balance", "subject": v,
                           "message": f"slope sum {list(deficit)} is nonzero"})
    try:
        g = genus(t.graph)
    except Disconnected:
        g = None
        violations.append({"axiom": "connected", "subject": "graph",
                           "message": "graph is not connected"})
    if lengths is not None and positions is not None:
        missing = [e for e, _, _ in t.graph.edges if e not in lengths]
        if missing:
            violations.append({"axiom": "lengths", "subject": ",".join(missing),
                               "message": "edges without length"})
        else:
            curve = ParameterizedTropicalCurve(
                TropicalCurve(t.graph, dict(lengths)), positions, dict(t.slopes), t.dim)
            for e in curve.edge_relation_violations():
                violations.append({"axiom": "edge-relation", "subject": e,
                                   "message": "positions do not match length * slope"})
    payload = {
        "balanced": balance.ok,
        "stable": is_stable(t.graph),
        "genus": g,
        "violations": violations,
    }
    if violations:
        return "violations", payload, f"{len(violations)} violations"
    return "ok", payload, "curve is balanced"


def _cmd_enumerate(args):
    try:
        degree = json.loads(args.degree)
    except json.JSONDecodeError as exc:
        raise InputError(f"--degree is not valid JSON: {exc}")
    if not isinstance(degree, list) or not all(isinstance(s, list) for s in degree):
        raise InputError("--degree must be a JSON list of integer vectors")
    types = enumerate_types(args.genus, args.contracted, degree, args.max_edges,
                            dim=args.dim)
    payload = docs.types_to_doc(types)
    payload["parameters"] = {
        "genus": args.genus, "contracted": args.contracted,
        "degree": degree, "max_edges": args.max_edges, "seed": args.seed,
    }
    return "ok", payload, f"{len(types)} types"


def _cmd_classify(args):
    t, _, _ = docs.type_from_doc(_load_json(args.input))
    cls = classify(t)
    payload = {"classification": cls.classification.value,
               "four_valent_vertex": cls.four_valent_vertex,
               "canonical": canonical_string(t)}
    return "ok", payload, cls.classification.value


def _cmd_resolve(args):
    t, _, _ = docs.type_from_doc(_load_json(args.input))
    vertex = args.vertex
    if vertex is None:
        cls = classify(t)
        vertex = cls.four_valent_vertex
        if vertex is None:
            raise InputError("type has no 4-valent vertex; pass --vertex explicitly")
    resolutions = resolve_4valent(t, vertex)
    payload = docs.types_to_doc(resolutions)
    return "ok", payload, f"{len(resolutions)} resolutions"


def _cmd_wallgraph(args):
    types = docs.types_from_doc(_load_json(args.input))
    wg = wall_graph(types)
    payload = docs.wallgraph_to_doc(wg)
    payload["seed"] = args.seed
    return "ok", payload, f"{len(wg.nodes)} nodes, {len(wg.walls)} walls"


def _cmd_validate_family(args):
    f = docs.family_from_doc(_load_json(args.input))
    report = validate_family(f)
    payload = docs.report_to_doc(report)
    if report.ok:
        return "ok", payload, f"family over {len(f.base.faces)} faces is valid"
    return "violations", payload, f"{len(report.violations)} violations"


def _cmd_fiber(args):
    f = docs.family_from_doc(_load_json(args.input))
    try:
        point = json.loads(args.point)
    except json.JSONDecodeError as exc:
        raise InputError(f"--point is not valid JSON: {exc}")
    if not isinstance(point, list):
        raise InputError("--point must be a JSON list of rationals")
    coords = [docs.parse_rat(x, f"/point/{i}") for i, x in enumerate(point)]
    p = fiber(f, args.face, coords)
    return "ok", docs.curve_to_doc(p), f"fiber over {args.face} at {args.point}"


def _cmd_alpha(args):
    f = docs.family_from_doc(_load_json(args.input))
    alpha = induced_alpha(f)
    payload = {
        "faces": [docs.lift_to_doc(alpha.lifts[fid]) for fid in sorted(alpha.lifts)],
        "image_strata": [docs.image_stratum_to_doc(s) for s in image_strata(f)],
    }
    return "ok", payload, f"lifts over {len(alpha.lifts)} faces"


def _cmd_verdicts(args):
    f = docs.family_from_doc(_load_json(args.input))
    faces = args.face
    if not faces:
        faces = [fid for fid in sorted(f.base.faces)
                 if f.base.cofacet_inclusions(fid)]
    verdicts = [wall_verdict(f, w) for w in faces]
    payload = {"verdicts": [docs.verdict_to_doc(v) for v in verdicts]}
    summary = ", ".join(f"{v.face}: {v.verdict.value}" for v in verdicts) or "no faces"
    return "ok", payload, summary


def _cmd_propagate(args):
    wg = docs.wallgraph_from_doc(_load_json(args.input))
    if args.seeds_file:
        seed_doc = _load_json(args.seeds_file)
        seeds = seed_doc.get("seeds")
        if not isinstance(seeds, list):
            raise InputError('seeds file needs a "seeds" list', "/seeds")
    elif args.seeds is not None:
        seeds = [s for s in args.seeds.split(",") if s]
    else:
        raise InputError("pass --seeds or --seeds-file")
    result = propagate_closure(wg, seeds)
    payload = {
        "closure": list(result.closure),
        "trace": [{"wall": wid, "added": list(added)} for wid, added in result.trace],
    }
    return "ok", payload, f"closure has {len(result.closure)} nodes"


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json",
                        help="output format (default json)")
    common.add_argument("--output", "-o", metavar="FILE",
                        help="write the report to FILE instead of stdout")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized internals (default 0)")
    common.add_argument("--threads", type=int,
                        default=int(os.environ.get("TROPMODULI_THREADS", "1")),
                        help="worker cap; computations are deterministic either way")

    parser = argparse.ArgumentParser(
        prog="tropmoduli",
        description="Exact tropical moduli toolkit: polyhedral complexes, "
                    "tropical curves, moduli strata and wall crossings.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, handler, help_, configure=None):
        p = sub.add_parser(name, parents=[common], help=help_)
        if configure:
            configure(p)
        p.set_defaults(handler=handler)

    add("validate-complex", _cmd_validate_complex,
        "check the gluing axioms of a polyhedral complex",
        lambda p: p.add_argument("input", help="complex.json"))
    add("skeleton", _cmd_skeleton,
        "build the skeleton of semistable pair data",
        lambda p: p.add_argument("input", help="pair.json"))
    add("validate-curve", _cmd_validate_curve,
        "check balancing (and edge relations, when positions are present)",
        lambda p: p.add_argument("input", help="curve.json or type.json"))

    def conf_enum(p):
        p.add_argument("--genus", type=int, required=True)
        p.add_argument("--contracted", type=int, default=0,
                       help="number of contracted legs (slope zero, first in order)")
        p.add_argument("--degree", required=True,
                       help='JSON list of nonzero slopes, e.g. "[[1,0],[0,1],[-1,-1]]"')
        p.add_argument("--max-edges", type=int, required=True)
        p.add_argument("--dim", type=int, default=None,
                       help="ambient lattice rank (required when the degree is empty)")
    add("enumerate", _cmd_enumerate,
        "enumerate stable balanced types with nonempty strata", conf_enum)

    add("classify", _cmd_classify,
        "weightless 3-valent / almost 3-valent / other",
        lambda p: p.add_argument("input", help="type.json"))

    def conf_resolve(p):
        p.add_argument("input", help="type.json")
        p.add_argument("--vertex", help="4-valent vertex id (default: detected)")
    add("resolve", _cmd_resolve, "resolutions of a 4-valent vertex", conf_resolve)

    add("wallgraph", _cmd_wallgraph,
        "node/wall incidence graph of weightless 3-valent types",
        lambda p: p.add_argument("input", help="types.json"))
    add("validate-family", _cmd_validate_family,
        "check the family conditions over a base complex",
        lambda p: p.add_argument("input", help="family.json"))

    def conf_fiber(p):
        p.add_argument("input", help="family.json")
        p.add_argument("--face", required=True, help="face id the point is given in")
        p.add_argument("--point", required=True,
                       help='chart coordinates as JSON, e.g. \'["1/2", 0]\'')
    add("fiber", _cmd_fiber, "the parameterized tropical curve over a point", conf_fiber)

    add("alpha", _cmd_alpha,
        "per-face lifts of the induced moduli map and image strata",
        lambda p: p.add_argument("input", help="family.json"))

    def conf_verdicts(p):
        p.add_argument("input", help="family.json")
        p.add_argument("--face", action="append", default=[],
                       help="face to test (repeatable; default: all with cofacets)")
    add("verdicts", _cmd_verdicts,
        "harmonic / quasi-harmonic / locally combinatorially surjective", conf_verdicts)

    def conf_propagate(p):
        p.add_argument("input", help="wallgraph.json")
        p.add_argument("--seeds", help="comma-separated node ids")
        p.add_argument("--seeds-file", help='JSON file with {"seeds": [...]}')
    add("propagate", _cmd_propagate,
        "saturate full-dimensional strata through wall incidences", conf_propagate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        status, payload, summary = args.handler(args)
    except InputError as exc:
        _emit(_report(args.verb, "error", {"pointer": exc.pointer, "message": str(exc)},
                      f"input error: {exc}"), args.format, args.output)
        return 2
    except TropModuliError as exc:
        _emit(_report(args.verb, "error",
                      {"error": type(exc).__name__, "message": str(exc)},
                      f"{type(exc).__name__}: {exc}"), args.format, args.output)
        return 2
    _emit(_report(args.verb, status, payload, summary), args.format, args.output)
    return 0 if status == "ok" else 1


if __name__ == "__main__":
    sys.exit(main())
