"""
Acceptance criteria for the CP¹ preset.  Prints one PASS/FAIL line per
criterion; also runnable directly with ``python tests/test_acceptance.py``.
"""

import json
import subprocess
import sys
from math import comb

import pytest

from qhs import geometry as G
from qhs.mutation import PRESET_MUTATIONS, perturbed_christoffel_report, run_preset_mutation
from qhs.preset import default_data, load_preset

PRESET = "podles-cp1"
GENERIC_TAGS = ("real(1,1)", "real(2,3)", "real(q,q^2 + 1)")
LC_CHECKS = ("torsion", "nabla_g", "cotorsion", "bimodule", "compatibility.H", "covariance")


def _verify_cmd():
    return [sys.executable, "-m", "qhs", "verify", PRESET, "--suite", "all", "--canonical"]


def collect():
    """Two independent verify runs, the validate command, and the mutation harness."""
    procs = [subprocess.Popen(_verify_cmd(), stdout=subprocess.PIPE, stderr=subprocess.PIPE)
             for _ in range(2)]
    outs = [p.communicate() for p in procs]
    validate = subprocess.run([sys.executable, "-m", "qhs", "validate", PRESET],
                              capture_output=True, text=True)
    data = default_data(PRESET)
    return {
        "payloads": [o[0] for o in outs],
        "codes": [p.returncode for p in procs],
        "report": json.loads(outs[0][0]) if outs[0][0] else {"checks": [], "info": {}},
        "validate_code": validate.returncode,
        "preset": load_preset(PRESET),
        "mutations": [(m.name, run_preset_mutation(data, m)) for m in PRESET_MUTATIONS],
    }


def _checks(ctx):
    return {c["check"]: c for c in ctx["report"]["checks"]}


def _all_pass(ctx, names):
    checks = _checks(ctx)
    missing = [n for n in names if n not in checks]
    if missing:
        return False, f"missing checks {missing[:3]}"
    bad = [n for n in names if checks[n]["status"] != "pass"]
    return (not bad), (f"failing: {bad[:3]}" if bad else f"{len(names)} checks")


def _prefixed(ctx, *prefixes):
    return [n for n in _checks(ctx) if n.startswith(prefixes)]


def c1_preset_soundness(ctx):
    names = _prefixed(ctx, "algebra.", "action.", "subalgebra.", "calculus.", "fibers.comodule")
    need = {"algebra.A.confluence", "algebra.A.hopf_axioms", "algebra.projection", "calculus.leibniz",
            "calculus.d_squared", "calculus.star_compatibility", "calculus.factorizable",
            "calculus.dual_basis_reconstruction", "calculus.projector_idempotent"}
    if not need <= set(names):
        return False, f"missing {sorted(need - set(names))}"
    ok, note = _all_pass(ctx, names)
    return ok and ctx["validate_code"] == 0, f"{note}; validate exit {ctx['validate_code']}"


def c2_dimensions(ctx):
    dims = ctx["preset"].fiber_dims()
    ok, _ = _all_pass(ctx, ["fibers.dimensions"])
    return ok and dims == tuple(comb(2, k) for k in range(3)), f"dims {dims}"


def c3_metric_moduli(ctx):
    checks = _checks(ctx)
    fam = checks.get("metrics.axioms.family", {})
    pairs = fam.get("detail", {}).get("pairs", 0)
    p = ctx["preset"]
    nperts = len(G.like_block_perturbations(p, *G.base_metrics(p)))
    ok, note = _all_pass(ctx, ["metrics.axioms.family", "metrics.axioms.perturbations_rejected"])
    return ok and pairs >= 20 and nperts >= 5, f"{pairs} family pairs, {nperts} perturbations rejected"


def c4_qsym_uniqueness(ctx):
    lam = ctx["report"]["info"].get("lambda_qsym")
    ok, _ = _all_pass(ctx, ["metrics.qsym_uniqueness_scan", "metrics.lambda_qsym.conjugation_fixed",
                            "metrics.lambda_qsym.unit_monomial"])
    return ok and lam == "-q^2", f"lambda_qsym = {lam}"


def c5_reality(ctx):
    return _all_pass(ctx, ["metrics.reality_biconditional"])


def c6_hermitian(ctx):
    names = _prefixed(ctx, "metrics.hermitian.")
    tags = {n.split(".")[2] for n in names}
    ok, note = _all_pass(ctx, names)
    return ok and "qsym" in tags and len(tags) >= 2, f"{note} over {sorted(tags)}"


def c7_christoffel(ctx):
    return _all_pass(ctx, _prefixed(ctx, "connection.qsym.christoffel.gamma.",
                                    "connection.qsym.christoffel.s."))


def c8_two_routes(ctx):
    names = [f"connection.{t}.two_route.(1,0)" for t in ("qsym",) + GENERIC_TAGS]
    return _all_pass(ctx, names + ["connection.qsym.two_route.well_defined"])


def c9_levi_civita(ctx):
    names = [f"connection.{t}.{c}" for t in ("qsym",) + GENERIC_TAGS for c in LC_CHECKS]
    return _all_pass(ctx, names)


def c10_certificate(ctx):
    chars = ctx["report"]["info"].get("central_characters", {})
    ok, note = _all_pass(ctx, _prefixed(ctx, "certificate."))
    vals = sorted(chars.values())
    return ok and vals == sorted(["q^-6", "q^-2", "q^2", "q^6"]), f"{note}; characters {vals}"


def c11_mutations(ctx):
    caught = []
    for name, rep in ctx["mutations"]:
        fails = rep.failures()
        if fails and all(c.witness for c in fails):
            caught.append(name)
    rep = perturbed_christoffel_report(ctx["preset"])
    if rep.failures() and all(c.witness for c in rep.failures()):
        caught.append("christoffel entry")
    total = len(ctx["mutations"]) + 1
    return len(caught) == total and total >= 5, f"{len(caught)}/{total} mutations caught"


def c12_determinism(ctx):
    a, b = ctx["payloads"]
    return bool(a) and a == b and ctx["codes"] == [0, 0], \
        f"payloads identical: {a == b}, exit codes {ctx['codes']}"


CRITERIA = [
    (1, "preset soundness", c1_preset_soundness),
    (2, "dimensions (1, 2, 1)", c2_dimensions),
    (3, "metric moduli", c3_metric_moduli),
    (4, "quantum-symmetric uniqueness", c4_qsym_uniqueness),
    (5, "reality biconditional", c5_reality),
    (6, "hermitian matrix identities", c6_hermitian),
    (7, "christoffel identities", c7_christoffel),
    (8, "two-route agreement", c8_two_routes),
    (9, "levi-civita instance", c9_levi_civita),
    (10, "uniqueness certificate", c10_certificate),
    (11, "mutation sensitivity", c11_mutations),
    (12, "determinism", c12_determinism),
]


def evaluate(ctx):
    out = []
    for num, title, fn in CRITERIA:
        try:
            ok, note = fn(ctx)
        except Exception as exc:
            ok, note = False, f"{type(exc).__name__}: {exc}"
        out.append((num, title, ok, note))
    return out


def render(results):
    return "\n".join(f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {title} ({note})"
                     for num, title, ok, note in results)


@pytest.fixture(scope="module")
def results():
    return evaluate(collect())


def test_acceptance_summary(results, capsys):
    with capsys.disabled():
        print("\n" + render(results))
    assert len(results) == 12


@pytest.mark.parametrize("num", [c[0] for c in CRITERIA])
def test_criterion(results, num):
    _, title, ok, note = results[num - 1]
    assert ok, f"criterion {num} ({title}): {note}"


if __name__ == "__main__":
    res = evaluate(collect())
    print(render(res))
    sys.exit(0 if all(r[2] for r in res) else 1)
