"""Acceptance suite: one test per release criterion, each printing a PASS/FAIL line.

The full coproduct sweep over the graph base takes a few minutes.
"""
import ast
import inspect
import json
import time

import pytest

from pshtopos import derived
from pshtopos.cli import main
from pshtopos.fincat import curated_bases
from pshtopos.lcc import FORBIDDEN_CAPABILITIES, LccContext
from pshtopos.presheaf import omega
from pshtopos.verify import CHECK_IDS, MUTANTS, curated_instances, run_suite
from pshtopos.verify.sweeps import coproduct_sweep, initial_sweep, join_sweep

from conftest import brute_sieves

BASES = ("terminal", "arrow", "graph")


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
        assert ok, detail
    return emit


@pytest.fixture(scope="module")
def verify_runs(tmp_path_factory):
    out = []
    for k in range(2):
        path = tmp_path_factory.mktemp("verify") / f"run{k}.json"
        t0 = time.perf_counter()
        code = main(["--seed", "0", "--max-objects", "2", "--max-morphisms", "6", "--max-carrier", "3",
                     "--count", "200", "--out", str(path), "verify", "--suite", "all"])
        out.append((code, path.read_bytes(), time.perf_counter() - t0))
    return out


def test_criterion_1_law_suite(verify_runs, report):
    code, raw, elapsed = verify_runs[0]
    doc = json.loads(raw)
    generated = sum(1 for r in doc["results"] if r["instance"].startswith("gen:")) // len(CHECK_IDS)
    curated = {r["instance"].split(":")[1] for r in doc["results"] if r["instance"].startswith("curated:")}
    ok = (code == 0 and doc["status"] == "pass" and doc["summary"]["fail"] == 0
          and doc["summary"]["budget-exceeded"] == 0 and sorted(doc["checks"]) == sorted(CHECK_IDS)
          and generated >= 200 and curated == set(BASES) and elapsed <= 300)
    report(1, ok, f"{doc['summary']} over {doc['instances']} instances "
                  f"({generated} generated), {elapsed:.0f}s")


def test_criterion_2_omega_cardinalities(report):
    pinned = {"terminal": (2,), "arrow": (2, 3), "graph": (2, 5)}
    got, oracle = {}, {}
    for name in BASES:
        base = curated_bases()[name]
        got[name] = omega(base).omega.sizes
        oracle[name] = tuple(len(brute_sieves(base, c)) for c in range(base.n_objects))
    report(2, got == oracle == pinned, f"computed {got}, sieve oracle {oracle}")


def test_criterion_3_derived_equals_native_coproduct(report):
    t0 = time.perf_counter()
    sweeps = {name: coproduct_sweep(curated_bases()[name]) for name in BASES}
    elapsed = time.perf_counter() - t0
    ok = all(s.ok for s in sweeps.values()) and elapsed <= 600
    detail = ", ".join(f"{n}: {s.examined} pairs, {len(s.failures)} failures" for n, s in sweeps.items())
    report(3, ok, f"{detail}; {elapsed:.0f}s")


def test_criterion_4_initial_object(report):
    sweeps = {name: initial_sweep(curated_bases()[name]) for name in BASES}
    ok = all(s.ok for s in sweeps.values())
    report(4, ok, ", ".join(f"{n}: {s.examined} objects, {len(s.failures)} failures"
                            for n, s in sweeps.items()))


def test_criterion_5_join_formula(report):
    sweeps = {name: join_sweep(curated_bases()[name]) for name in BASES}
    ok = all(s.ok for s in sweeps.values())
    report(5, ok, ", ".join(f"{n}: {s.examined} pairs, {len(s.failures)} failures"
                            for n, s in sweeps.items()))


def _structural_violations():
    tree = ast.parse(inspect.getsource(derived))
    allowed_fields = set(LccContext.__dataclass_fields__) | {"is_mono", "is_iso", "slice"}
    bad = []
    for node in tree.body:
        if isinstance(node, ast.If) and getattr(node.test, "id", None) == "TYPE_CHECKING":
            continue
        for sub in ast.walk(node):
            if isinstance(sub, ast.ImportFrom) and sub.module not in ("__future__", "dataclasses",
                                                                       "typing", "lcc"):
                bad.append(f"imports {sub.module}")
            if isinstance(sub, ast.Import):
                bad.append(f"imports {sub.names[0].name}")
            if isinstance(sub, ast.Attribute) and getattr(sub.value, "id", None) == "ctx" \
                    and sub.attr not in allowed_fields:
                bad.append(f"ctx.{sub.attr}")
            if isinstance(sub, (ast.Name, ast.Attribute)):
                name = sub.id if isinstance(sub, ast.Name) else sub.attr
                if name in FORBIDDEN_CAPABILITIES | {"native_coproduct_oracle", "PresheafTopos"}:
                    bad.append(name)
    return bad


def test_criterion_6_non_circularity(report):
    bad = _structural_violations()
    watched = ["BC_right", "MONO_REFL", "COPROD_NATIVE_ISO"]
    results = run_suite(watched, curated_instances(), backend=MUTANTS["broken-pushforward"])
    caught = sorted({r.check_id for r in results if r.verdict == "fail" and r.witness})
    ok = not bad and bool(caught)
    report(6, ok, f"structural violations {bad or 'none'}; mutant f_* caught by {caught}")


def test_criterion_7_determinism(verify_runs, report):
    (_, a, _), (_, b, _) = verify_runs
    report(7, a == b, f"two verify reports of {len(a)} bytes are "
                      f"{'identical' if a == b else 'different'}")
