"""Command-line front end: derive objects from a workspace and run the law suite.

Exit status: 0 all pass, 1 a check failed, 2 a budget was exceeded, 3 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, replace
from typing import Dict, List, Optional, Sequence

from . import __version__, derived
from .lcc import restrict
from .presheaf import BudgetExceeded, Presheaf, PresheafMorphism, PresheafTopos
from .sublattice import all_subobjects
from .verify.checks import CATALOG, CHECK_IDS, run_suite
from .verify.generate import Instance, InstanceGenerator, curated_instances, generate_instances
from .verify.oracle import native_coproduct_oracle
from .workspace import Config, Workspace, WorkspaceError, parse_workspace

EXIT_PASS, EXIT_FAIL, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3
DEFAULT_COUNT = 200


class InputError(ValueError):
    pass


def _sizes(p: Presheaf) -> Dict[str, int]:
    return {obj: p.size(c) for c, obj in enumerate(p.base.objects)}


def _element_names(data: derived.CoproductData, left: str, right: str) -> List[List[str]]:
    """Name each element of the derived coproduct after the summand element it comes from."""
    base = data.obj.base
    names = [[""] * data.obj.size(c) for c in range(base.n_objects)]
    for inj, tag, src in ((data.inl, left, data.left), (data.inr, right, data.right)):
        for c in range(base.n_objects):
            for x, y in enumerate(inj.components[c]):
                names[c][y] = f"{tag}.{src.carrier[c][x]}"
    return names


def _morphism_table(f: PresheafMorphism, src_names=None, dst_names=None) -> Dict[str, Dict[str, str]]:
    base = f.src.base
    src_names = src_names or [[str(x) for x in f.src.carrier[c]] for c in range(base.n_objects)]
    dst_names = dst_names or [[str(x) for x in f.dst.carrier[c]] for c in range(base.n_objects)]
    return {obj: {src_names[c][x]: dst_names[c][y] for x, y in enumerate(f.components[c])}
            for c, obj in enumerate(base.objects)}


def _presheaf_doc(p: Presheaf, names: List[List[str]]) -> Dict:
    base = p.base
    action = {}
    for m in range(base.n_morphisms):
        if base.is_identity(m):
            continue
        c, c2 = base.src[m], base.dst[m]
        action[base.morphisms[m]] = {names[c2][y]: names[c][p.action[m][y]] for y in range(p.size(c2))}
    return {"sizes": _sizes(p),
            "carrier": {obj: names[c] for c, obj in enumerate(base.objects)},
            "action": action}


# -- commands --------------------------------------------------------------

def derive_initial(ws: Workspace, base_name: str) -> Dict:
    try:
        base = ws.base(base_name)
    except KeyError as e:
        raise InputError(e.args[0])
    topos = PresheafTopos(base, ws.config.budget)
    ctx = restrict(topos)
    zero = derived.initial_object(ctx)
    corpus = {"1": ctx.terminal(), "Omega": ctx.omega().omega}
    corpus.update({n: p for n, (b, p) in ws.presheaves.items() if p.base == base})
    homs_out = {n: len(ctx.hom_set(zero.obj, p)) for n, p in corpus.items()}
    strict = {n: all(ctx.is_iso(f) for f in ctx.hom_set(p, zero.obj)) for n, p in corpus.items()}
    n_sub = len(all_subobjects(zero.obj, ctx.budget))
    ok = (all(v == 1 for v in homs_out.values()) and all(strict.values()) and n_sub == 1)
    return {"status": "pass" if ok else "fail",
            "initial": {"sizes": _sizes(zero.obj), "hom_from_initial": homs_out,
                        "maps_into_initial_are_iso": strict, "subobjects_of_initial": n_sub}}


def _coproduct(ws: Workspace, a_name: str, b_name: str):
    try:
        a, b = ws.presheaf(a_name), ws.presheaf(b_name)
    except KeyError as e:
        raise InputError(e.args[0])
    if a.base != b.base:
        raise InputError(f"{a_name} and {b_name} live over different bases")
    ctx = restrict(PresheafTopos(a.base, ws.config.budget))
    return ctx, a, b, derived.binary_coproduct(ctx, a, b)


def derive_coproduct(ws: Workspace, a_name: str, b_name: str) -> Dict:
    ctx, a, b, data = _coproduct(ws, a_name, b_name)
    names = _element_names(data, a_name, b_name)
    nat = native_coproduct_oracle(a, b)
    nat_names = [[f"{a_name if t == 'L' else b_name}.{x}" for t, x in nat.obj.carrier[c]]
                 for c in range(a.base.n_objects)]
    fwd = derived.copair_via_graph(ctx, data, nat.inl, nat.inr)
    bwd = nat.copair(data.inl, data.inr)
    witness = derived.IsoWitness(fwd, bwd)
    holds = witness.holds(ctx)
    disjoint = data.disjoint.obj.total_size == 0 and data.disjoint_iso.holds(ctx)
    return {"status": "pass" if holds and disjoint else "fail",
            "coproduct": _presheaf_doc(data.obj, names),
            "injections": {"left": _morphism_table(data.inl, dst_names=names),
                           "right": _morphism_table(data.inr, dst_names=names)},
            "disjoint": disjoint,
            "iso_witness": {"holds": holds,
                            "forward": _morphism_table(fwd, names, nat_names),
                            "backward": _morphism_table(bwd, nat_names, names)}}


def derive_copair(ws: Workspace, a_name: str, b_name: str, f_name: str, g_name: str) -> Dict:
    ctx, a, b, data = _coproduct(ws, a_name, b_name)
    try:
        f, g = ws.morphism(f_name), ws.morphism(g_name)
    except KeyError as e:
        raise InputError(e.args[0])
    if f.src != a or g.src != b:
        raise InputError(f"{f_name} and {g_name} must start at {a_name} and {b_name}")
    if f.dst != g.dst:
        raise InputError(f"{f_name} and {g_name} have different targets")
    names = _element_names(data, a_name, b_name)
    try:
        h = derived.copair(ctx, data, f, g)
    except derived.ConstructionError as e:
        return {"status": "fail", "copair": {"error": f"{type(e).__name__}: {e}"}}
    return {"status": "pass",
            "copair": {"target": ws.morphisms[f_name].dst, "map": _morphism_table(h, src_names=names),
                       "restricts_left": ctx.equal(ctx.compose(h, data.inl), f),
                       "restricts_right": ctx.equal(ctx.compose(h, data.inr), g)}}


def workspace_instances(ws: Workspace) -> List[Instance]:
    """One instance per base with declared presheaves, padded to three presheaves."""
    out = []
    by_base: Dict[str, List[str]] = {}
    for name, (bname, _) in ws.presheaves.items():
        by_base.setdefault(bname, []).append(name)
    for bname, pnames in by_base.items():
        ps = [ws.presheaf(n) for n in pnames]
        while len(ps) < 3:
            ps.append(ps[len(ps) % len(pnames)])
        ms = tuple(d.morphism for d in ws.morphisms.values() if d.morphism.src.base == ps[0].base)
        subs = tuple(d.sub for d in ws.subs.values() if d.sub.ambient == ps[0])
        out.append(Instance(f"workspace:{bname}", ps[0].base, tuple(ps[:3]), ms, subs))
    return out


def verify(ws: Workspace, suite: Sequence[str], count: int) -> Dict:
    ids = list(CHECK_IDS) if list(suite) in (["all"], []) else list(suite)
    unknown = [c for c in ids if c not in CATALOG]
    if unknown:
        raise InputError(f"unknown check id {unknown[0]!r}")
    cfg = ws.config
    gen = InstanceGenerator(cfg.seed, cfg.max_objects, cfg.max_morphisms, cfg.max_carrier)
    instances = list(generate_instances(gen, count)) + curated_instances() + workspace_instances(ws)
    results = run_suite(ids, instances, cfg.budget)
    verdicts = [r.verdict for r in results]
    summary = {v: verdicts.count(v) for v in ("pass", "fail", "budget-exceeded")}
    status = "fail" if summary["fail"] else "budget-exceeded" if summary["budget-exceeded"] else "pass"
    return {"status": status, "checks": ids, "instances": len(instances), "summary": summary,
            "results": [r.as_dict() for r in results]}


def explain(check_id: str) -> Dict:
    if check_id not in CATALOG:
        raise InputError(f"unknown check id {check_id!r}")
    anchor, fn = CATALOG[check_id]
    return {"status": "pass", "check": check_id, "statement": anchor,
            "procedure": " ".join((fn.__doc__ or "").split()) or None}


# -- rendering -------------------------------------------------------------

def render(doc: Dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    lines = []

    def walk(prefix: str, v) -> None:
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else str(k), v[k])
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            for i, item in enumerate(v):
                walk(f"{prefix}[{i}]", item)
        else:
            lines.append(f"{prefix}: {json.dumps(v, sort_keys=True)}")

    if "results" in doc:
        body = {k: v for k, v in doc.items() if k != "results"}
        walk("", body)
        for r in doc["results"]:
            line = f"{r['verdict']:<16} {r['check']:<18} {r['instance']}"
            if "witness" in r:
                line += f"  {r['witness'].get('reason', '')}"
            lines.append(line)
    else:
        walk("", doc)
    return "\n".join(lines) + "\n"


EXIT_FOR = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "budget-exceeded": EXIT_BUDGET}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pshtopos", description=__doc__.splitlines()[0])
    p.add_argument("--workspace", "-w", help="workspace file (default: empty workspace)")
    p.add_argument("--seed", type=int)
    p.add_argument("--max-objects", type=int)
    p.add_argument("--max-morphisms", type=int)
    p.add_argument("--max-carrier", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--count", type=int, default=DEFAULT_COUNT, help="generated instances for verify")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("derive-initial")
    s.add_argument("base")
    s = sub.add_parser("derive-coproduct")
    s.add_argument("A")
    s.add_argument("B")
    s = sub.add_parser("derive-copair")
    for name in ("A", "B", "f", "g"):
        s.add_argument(name)
    s = sub.add_parser("verify")
    s.add_argument("--suite", nargs="+", default=["all"])
    s = sub.add_parser("explain")
    s.add_argument("check_id")
    return p


def run(args: argparse.Namespace, ws: Workspace) -> Dict:
    if args.command == "derive-initial":
        return derive_initial(ws, args.base)
    if args.command == "derive-coproduct":
        return derive_coproduct(ws, args.A, args.B)
    if args.command == "derive-copair":
        return derive_copair(ws, args.A, args.B, args.f, args.g)
    if args.command == "verify":
        return verify(ws, args.suite, args.count)
    return explain(args.check_id)


def _load(args: argparse.Namespace) -> Workspace:
    ws = Workspace()
    if args.workspace:
        try:
            with open(args.workspace, encoding="utf-8") as fh:
                ws = parse_workspace(fh.read())
        except OSError as e:
            raise InputError(f"cannot read workspace: {e.strerror}")
    keys = ("seed", "max_objects", "max_morphisms", "max_carrier", "budget")
    overrides = {k: getattr(args, k) for k in keys if getattr(args, k) is not None}
    try:
        ws.config = replace(ws.config, **overrides)
        InstanceGenerator(ws.config.seed, ws.config.max_objects, ws.config.max_morphisms,
                          ws.config.max_carrier)
    except ValueError as e:
        raise InputError(str(e))
    return ws


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    hidden = {"command", "format", "out", "workspace", *Config.__dataclass_fields__}
    if args.command != "verify":
        hidden.add("count")
    doc = {"artifact": "pshtopos", "version": __version__, "command": args.command,
           "arguments": {k: v for k, v in vars(args).items() if k not in hidden}}
    try:
        ws = _load(args)
        doc["config"] = asdict(ws.config)
        doc.update(run(args, ws))
        code = EXIT_FOR[doc["status"]]
    except WorkspaceError as e:
        doc.update(status="input-error", errors=[{"line": x.line, "col": x.col, "message": x.message}
                                                 for x in e.errors])
        code = EXIT_INPUT
    except InputError as e:
        doc.update(status="input-error", errors=[{"message": str(e)}])
        code = EXIT_INPUT
    except BudgetExceeded as e:
        doc.update(status="budget-exceeded", errors=[{"message": str(e)}])
        code = EXIT_BUDGET
    except derived.ConstructionError as e:
        doc.update(status="fail", errors=[{"message": f"{type(e).__name__}: {e}"}])
        code = EXIT_FAIL
    text = render(doc, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
