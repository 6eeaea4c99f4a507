"""Command line entry point.

Every subcommand reads a manifest, runs one pipeline and prints either a
short text summary or (``--json``) a document with the keys ``command``,
``inputs``, ``window``, ``result`` and ``certificates``.  Exit status is
0 when the check passes, 1 on a mathematical failure and 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from ..algebra.constructions import is_free_extension, koszul, tensor_product
from ..algebra.graded import AlgebraError, FreeGradedAlgebra
from ..algebra.morphisms import DgMorphism
from ..cohomology import (amplitude, cotangent_bar, default_window, graph_resolution, h0_ring, h_theta,
                          hn_module, is_etale, is_open_immersion, obstruction_data, relative_dimension)
from ..commalg import ModulePresentation
from ..descent import (ModuleAssignment, cech, descent_morphisms_check, glue_algebras, validate_gluing)
from ..homotopy import pi_module
from .dsl import ManifestError, format_manifest, parse_file

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


class Outcome:
    def __init__(self, ok: bool, result: dict, certificates: Optional[list] = None, window=None,
                 text: Optional[List[str]] = None):
        self.ok = ok
        self.result = result
        self.certificates = certificates or []
        self.window = window
        self.text = text or []


def _threads() -> int:
    raw = os.environ.get("DGS_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"DGS_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise InputError(f"DGS_THREADS must be a positive integer, got {raw!r}")
    return n


def _algebra(m, name: str) -> FreeGradedAlgebra:
    if name not in m.algebras:
        raise InputError(f"unknown algebra {name!r}")
    return m.algebras[name]


def _morphism(m, name: str) -> DgMorphism:
    if name not in m.morphisms:
        raise InputError(f"unknown morphism {name!r}")
    return m.morphisms[name]


def _relative(m, arg: str):
    """``C->B`` (free extension) or a morphism name (resolved through its graph)."""
    if "->" in arg:
        c, b = (s.strip() for s in arg.split("->", 1))
        C, B = _algebra(m, c), _algebra(m, b)
        if not is_free_extension(C, B):
            raise InputError(f"{b} is not a free extension of {c}")
        return C, B, None
    phi = _morphism(m, arg)
    fac = graph_resolution(phi)
    return phi.source, fac[0], fac


def _window(text: Optional[str], A: FreeGradedAlgebra):
    if text is None:
        return default_window(A)
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise InputError(f"window must look like lo..hi, got {text!r}")
    if lo > hi or hi > 0:
        raise InputError("window must satisfy lo <= hi <= 0")
    return lo, hi


def _levels(text: str) -> List[int]:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"levels must be comma separated integers, got {text!r}")
    if not out:
        raise InputError("no levels given")
    return out


# -- commands -------------------------------------------------------------

def cmd_check(m, args) -> Outcome:
    result = {"objects": m.names(), "algebras": {}, "gluings": {}}
    ok = True
    certs = []
    for name, A in m.algebras.items():
        result["algebras"][name] = {"generators": [f"{g.name}:{g.degree}" for g in A.insertion]}
    for name, G in m.gluings.items():
        rep = validate_gluing(G)
        result["gluings"][name] = {"valid": rep.ok, "failures": rep.failures}
        certs += rep.certificates
        ok = ok and rep.ok
    text = [f"{len(m.decls)} objects: " + ", ".join(m.names())]
    text += [f"gluing {n}: {'valid' if r['valid'] else 'INVALID'}" for n, r in result["gluings"].items()]
    if args.print:
        result["canonical"] = format_manifest(m)
        text.append(result["canonical"].rstrip())
    return Outcome(ok, result, certs, text=text)


def cmd_cohomology(m, args) -> Outcome:
    A = _algebra(m, args.algebra)
    lo, hi = _window(args.window, A)
    mods = {}
    text = []
    for n in range(hi, lo - 1, -1):
        H = hn_module(A, n)
        d = H.to_dict()
        d["cycles"] = len(H.cycles)
        d["dim_q"] = H.dim_q() if not H.is_zero() else 0
        mods[str(n)] = d
        text.append(f"h^{n}: " + ("0" if d["is_zero"] else H.describe()
                                  + (f", dim {d['dim_q']}" if d["dim_q"] is not None else "")))
    return Outcome(True, {"modules": mods}, window=[lo, hi], text=text)


def cmd_truncate(m, args) -> Outcome:
    A = _algebra(m, args.algebra)
    R = h0_ring(A)
    rels = [str(r) for r in R.relations]
    gb = [str(p) for p in R.gb]
    om = cotangent_bar(FreeGradedAlgebra([]), A)
    res = {"variables": list(R.variables), "relations": rels, "groebner_basis": gb,
           "cotangent_ranks": {str(n): om.rank(n) for n in range(om.window[0], 1)}}
    text = [f"h^0({args.algebra}) = Q[{', '.join(R.variables)}] / ({', '.join(rels)})"]
    return Outcome(True, res, [{"kind": "groebner_basis", "size": len(gb)}], text=text)


def cmd_tangent(m, args) -> Outcome:
    C, B, fac = _relative(m, args.pair)
    if fac is not None:
        raise InputError("tangent needs a free extension C->B")
    f = _morphism(m, args.at) if args.at else DgMorphism(B, B, {})
    if f.source != B:
        raise InputError("--at must be a morphism out of B")
    levels = [args.level] if args.level is not None else [0, 1, 2]
    res = {}
    text = []
    for lvl in levels:
        H = h_theta(C, B, f, lvl)
        res[str(lvl)] = H.to_dict()
        text.append(f"h_{lvl} Der: " + ("0" if H.is_zero() else f"{H.n_generators} generators, "
                                        f"{len(H.relations)} relations"))
    return Outcome(True, {"levels": res}, text=text)


def cmd_pi(m, args) -> Outcome:
    C, B, fac = _relative(m, args.pair)
    if fac is not None:
        raise InputError("pi needs a free extension C->B")
    P = _morphism(m, args.at)
    if P.source != B:
        raise InputError("--at must be a morphism out of B")
    if args.level < 1:
        raise InputError("--level must be at least 1")
    pm = pi_module(C, B, P, args.level)
    d = pm.to_dict()
    return Outcome(True, d, text=[f"pi_{args.level}: " + ("trivial" if pm.is_trivial() else
                                                        f"{pm.module.n_generators} generators")])


def cmd_etale(m, args) -> Outcome:
    C, B, fac = _relative(m, args.pair)
    ok = is_etale(C, B, fac)
    om = cotangent_bar(C, fac[0] if fac else B)
    res = {"etale": ok, "cotangent_ranks": {str(n): om.rank(n) for n in range(om.window[0], 1)}}
    return Outcome(ok, res, [{"kind": "acyclicity", "acyclic": ok}],
                   text=[f"etale: {'yes' if ok else 'no'}"])


def cmd_open_immersion(m, args) -> Outcome:
    C, B, fac = _relative(m, args.pair)
    try:
        ok, cert = is_open_immersion(C, B, args.witness, fac)
    except (AlgebraError, ValueError) as exc:
        raise InputError(f"bad witness: {exc}")
    return Outcome(ok, {"open_immersion": ok, **cert}, [dict(kind="open_immersion", **cert)],
                   text=[f"open immersion: {'yes' if ok else 'no'}"])


def cmd_tensor(m, args) -> Outcome:
    B, C, A = _algebra(m, args.left), _algebra(m, args.right), _algebra(m, args.over)
    T, jB, jC = tensor_product(B, C, A, name=f"{args.left}x{args.right}")
    gens = [f"{g.name}:{g.degree}" for g in T.insertion]
    diffs = {g.name: str(T.differential_of(g.name)) for g in T.insertion
             if not T.differential_of(g.name).is_zero()}
    text = ["gens " + ", ".join(gens)] + [f"d {k} = {v}" for k, v in diffs.items()]
    return Outcome(True, {"generators": gens, "differentials": diffs}, text=text)


def cmd_koszul(m, args) -> Outcome:
    variables = [v.strip() for v in args.vars.split(",") if v.strip()]
    seq = [s.strip() for s in args.seq.split(";") if s.strip()]
    if not variables:
        raise InputError("--vars needs at least one variable")
    try:
        K = koszul(variables, seq, name="K")
    except AlgebraError as exc:
        raise InputError(str(exc))
    lo = -len(seq)
    mods = {}
    acyclic = True
    for n in range(0, lo - 1, -1):
        H = hn_module(K, n)
        mods[str(n)] = H.to_dict()
        if n < 0 and not H.is_zero():
            acyclic = False
    R = h0_ring(K)
    res = {"generators": [f"{g.name}:{g.degree}" for g in K.insertion],
           "differentials": {g.name: str(K.differential_of(g.name)) for g in K.insertion if g.degree < 0},
           "h0_relations": [str(r) for r in R.gb], "negative_cohomology_vanishes": acyclic, "modules": mods}
    text = [f"d {k} = {v}" for k, v in res["differentials"].items()]
    text.append("regular sequence (h^n = 0 for n < 0)" if acyclic else "not regular: negative cohomology")
    return Outcome(acyclic, res, window=[lo, 0], text=text)


def cmd_cech(m, args) -> Outcome:
    if args.cover not in m.covers:
        raise InputError(f"unknown cover {args.cover!r}")
    if args.module not in m.modules:
        raise InputError(f"unknown module {args.module!r}")
    if args.p < 0:
        raise InputError("--p must be non-negative")
    cover, M = m.covers[args.cover], m.modules[args.module]
    if M.ring.ambient != cover.R.ambient:
        raise InputError("module and cover live over different algebras")
    assign = ModuleAssignment.from_module(cover, M)
    out, rep = cech(assign, args.p)
    ok = rep.ok and out is not None
    if args.p == 0 and out is not None:
        mod = out.module.to_dict()
    else:
        mod = out.to_dict() if out is not None else None
    return Outcome(ok, {"p": args.p, "module": mod, "failures": rep.failures}, rep.certificates,
                   text=[f"H^{args.p}: " + ("0" if mod and mod["is_zero"] else
                                            ("module computed" if ok else "FAILED"))])


def cmd_descent_check(m, args) -> Outcome:
    C, B, fac = _relative(m, args.pair)
    if fac is not None:
        raise InputError("descent-check needs a free extension C->B")
    if args.cover not in m.covers:
        raise InputError(f"unknown cover {args.cover!r}")
    cover = m.covers[args.cover]
    f = _morphism(m, args.at)
    if f.source != B or f.target != cover.base:
        raise InputError("--at must be a morphism from B to the cover's base")
    rep = descent_morphisms_check(C, B, f, cover, _levels(args.levels))
    return Outcome(rep.ok, {"ok": rep.ok, "failures": rep.failures, "details": rep.details},
                   rep.certificates, text=[f"descent for morphisms: {'pass' if rep.ok else 'FAIL'}"])


def cmd_glue(m, args) -> Outcome:
    if args.gluing not in m.gluings:
        raise InputError(f"unknown gluing {args.gluing!r}")
    G = m.gluings[args.gluing]
    if args.cover not in m.covers or m.covers[args.cover] is not G.cover:
        raise InputError(f"gluing {args.gluing!r} is not defined on cover {args.cover!r}")
    if args.budget < 0:
        raise InputError("--budget must be non-negative")
    g = glue_algebras(G, args.budget)
    B = g.algebra
    res = {"ok": g.report.ok, "generators": [f"{x.name}:{x.degree}" for x in B.insertion],
           "differentials": {x.name: str(B.differential_of(x.name)) for x in B.insertion
                             if x.name not in G.cover.base.index},
           "stages": [{"degree": s.degree, "kill": s.kill, "module": s.module_gens, "ok": s.report.ok}
                      for s in g.stages],
           "failures": g.report.failures}
    iso = sorted({c["degree"] for c in g.report.certificates if c.get("kind") == "isomorphism"}, reverse=True)
    text = [f"glued to budget {args.budget}: {'pass' if g.report.ok else 'FAIL'}",
            "isomorphisms on h^" + ", h^".join(map(str, iso)) if iso else "no isomorphism certificates"]
    return Outcome(g.report.ok, res, g.report.certificates, window=[-args.budget, 0], text=text)


def cmd_amplitude(m, args) -> Outcome:
    C, B, fac = _relative(m, args.pair)
    N = amplitude(C, B, fac)
    dim = relative_dimension(C, B, fac)
    return Outcome(True, {"amplitude": N, "relative_dimension": dim}, window=[-N, 0],
                   text=[f"amplitude [{-N}, 0], relative dimension {dim}"])


def cmd_obstruction(m, args) -> Outcome:
    C, B, fac = _relative(m, args.pair)
    if fac is not None:
        raise InputError("obstruction needs a free extension C->B")
    try:
        data = obstruction_data(C, B)
    except AlgebraError as exc:
        return Outcome(False, {"error": str(exc)}, text=[str(exc)])
    return Outcome(True, data, window=[-1, 0],
                   text=[f"ranks {data['ranks']}, virtual dimension {data['virtual_dimension']}"])


# -- wiring ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dgdescent", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, manifest=True):
        sp = sub.add_parser(name)
        if manifest:
            sp.add_argument("manifest")
        sp.add_argument("--json", action="store_true", help="emit the structured report")
        sp.set_defaults(func=func)
        return sp

    add("check", cmd_check).add_argument("--print", action="store_true", help="print the canonical form")
    sp = add("cohomology", cmd_cohomology)
    sp.add_argument("algebra")
    sp.add_argument("--window")
    add("truncate", cmd_truncate).add_argument("algebra")
    sp = add("tangent", cmd_tangent)
    sp.add_argument("pair")
    sp.add_argument("--at")
    sp.add_argument("--level", type=int)
    sp = add("pi", cmd_pi)
    sp.add_argument("pair")
    sp.add_argument("--at", required=True)
    sp.add_argument("--level", type=int, required=True)
    add("etale", cmd_etale).add_argument("pair")
    sp = add("open-immersion", cmd_open_immersion)
    sp.add_argument("pair")
    sp.add_argument("--witness", required=True)
    sp = add("tensor", cmd_tensor)
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--over", required=True)
    sp = add("koszul", cmd_koszul, manifest=False)
    sp.add_argument("--vars", required=True, help="comma separated variables")
    sp.add_argument("--seq", required=True, help="semicolon separated sequence")
    sp = add("cech", cmd_cech)
    sp.add_argument("cover")
    sp.add_argument("module")
    sp.add_argument("--p", type=int, default=0)
    sp = add("descent-check", cmd_descent_check)
    sp.add_argument("pair")
    sp.add_argument("cover")
    sp.add_argument("--at", required=True)
    sp.add_argument("--levels", default="1,2")
    sp = add("glue", cmd_glue)
    sp.add_argument("cover")
    sp.add_argument("gluing")
    sp.add_argument("--budget", type=int, required=True)
    add("amplitude", cmd_amplitude).add_argument("pair")
    add("obstruction", cmd_obstruction).add_argument("pair")
    return p


def _inputs(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "json", "command")}


def _emit(args, doc: dict, text: List[str]):
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=False, default=str))
    else:
        for line in text:
            print(line)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    doc = {"command": args.command, "inputs": _inputs(args), "window": None, "result": None,
           "certificates": []}
    try:
        doc["inputs"]["threads"] = _threads()
        m = parse_file(args.manifest) if getattr(args, "manifest", None) else None
        out = args.func(m, args)
    except ManifestError as exc:
        doc["result"] = {"ok": False, "error": exc.to_dict()}
        _emit(args, doc, [f"{args.manifest}:{exc.line}:{exc.col}: {exc.kind} error: {exc.message}"])
        return EXIT_INPUT
    except (InputError, AlgebraError, OSError) as exc:
        doc["result"] = {"ok": False, "error": {"kind": "input", "message": str(exc)}}
        _emit(args, doc, [f"input error: {exc}"])
        return EXIT_INPUT
    doc["window"] = list(out.window) if out.window is not None else None
    doc["result"] = {"ok": out.ok, **out.result}
    doc["certificates"] = out.certificates
    _emit(args, doc, out.text)
    return EXIT_PASS if out.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
