"""
Command-line entry point.

    qhs validate <preset> [--degree N] [--force]
    qhs metrics <preset> [--lambda1 S --lambda2 S] [--samples N] [--eval]
    qhs lc <preset> --lambda1 S --lambda2 S [--degree N]
    qhs verify <preset> --suite all|metrics|connection [--degree N]

Exit codes: 0 pass, 1 check failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import connection as C
from . import geometry as G
from .calculus import validate_preset
from .config import CommandConfig, ConfigError
from .preset import PresetError, PresetValidationError, load_preset
from .report import Report
from .scalar import ScalarError
from .verify import SuiteConfig, connection_checks, family_pairs, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load(cfg, validate=True):
    """Load a preset; validation failures are input errors unless forced."""
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            p = load_preset(cfg.preset, validate=validate, force=cfg.force)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        return p
    except FileNotFoundError as exc:
        raise InputError(str(exc)) from None
    except PresetError as exc:
        raise InputError(f"{cfg.preset}: {exc}") from None


def _degree(cfg, p):
    return cfg.degree if cfg.degree is not None else p.degree_bound


def _emit(cfg, payload, text, out):
    if cfg.fmt == "json":
        out.write(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")


def _q0s(cfg, p):
    return cfg.q0 or p.samples


def cmd_validate(cfg, out=sys.stdout):
    p = _load(cfg, validate=False)
    rep = validate_preset(p, _degree(cfg, p))
    rep.title = f"validate {p.name}"
    _emit(cfg, rep.to_dict(), rep.render_text(), out)
    if not rep.ok and cfg.force:
        print(f"warning: {p.name} failed validation; continuing because of --force", file=sys.stderr)
        return EXIT_OK, rep
    return (EXIT_OK if rep.ok else EXIT_FAIL), rep


def _metric_descriptor(p, m, lam):
    real = G.is_real(p, m).real
    return {
        "lambda1": str(m.lambda1), "lambda2": str(m.lambda2),
        "real": real, "quantum_symmetric": G.is_quantum_symmetric(p, m),
        "lambda_qsym": str(lam),
    }


def _evaluated(x, q0s):
    out = {}
    for q0 in q0s:
        try:
            out[str(q0)] = str(x.eval(q0))
        except ScalarError as exc:
            out[str(q0)] = f"undefined ({exc})"
    return out


def cmd_metrics(cfg, out=sys.stdout):
    p = _load(cfg)
    q0s = _q0s(cfg, p)
    g10, g01 = G.base_metrics(p)
    lam = G.qsym_lambda(p, g10, g01)
    rep = Report(f"metrics {p.name}", _degree(cfg, p))
    payload = {
        "preset": p.name,
        "lambda_qsym": str(lam),
        "quantum_symmetric_ray": {"lambda2_over_lambda1": str(-lam)},
        "base_metrics": {
            "g10": str(g10.g), "g01": str(g01.g),
            "positive": {str(q0): g10.inner.is_positive_at(q0) and g01.inner.is_positive_at(q0)
                         for q0 in q0s},
        },
    }
    if cfg.evaluate:
        payload["lambda_qsym_eval"] = _evaluated(lam, q0s)
    if cfg.lambdas is not None:
        l1, l2 = cfg.lambdas
        m = G.metric_family(g10, g01, l1, l2, p)
        rep.run("metric.axioms", lambda: G.metric_axiom_failure(p, m))
        payload["metric"] = _metric_descriptor(p, m, lam)
    pairs = family_pairs(cfg.scan_samples)
    pairs += [(l1, -lam * l1) for l1, _ in pairs]
    rows = G.qsym_uniqueness_scan(p, g10, g01, pairs, lam)
    payload["scan"] = [{"lambda1": str(r.lambda1), "lambda2": str(r.lambda2),
                        "wedge_zero": r.wedge_zero, "on_ray": r.predicted} for r in rows]
    bad = [r for r in rows if not r.agrees]
    rep.add("metrics.qsym_uniqueness_scan", not bad,
            f"({bad[0].lambda1}, {bad[0].lambda2})" if bad else None)
    payload["report"] = rep.to_dict()
    lines = [f"preset: {p.name}", f"lambda_qsym: {lam}",
             f"quantum symmetric ray: lambda2/lambda1 = {-lam}",
             f"g10 = {g10.g}", f"g01 = {g01.g}"]
    if "metric" in payload:
        lines.append("metric: " + ", ".join(f"{k}={v}" for k, v in payload["metric"].items()))
    if cfg.evaluate:
        lines.append("lambda_qsym at q0: " + ", ".join(f"{k} -> {v}" for k, v in
                                                        payload["lambda_qsym_eval"].items()))
    lines.append(f"scan: {len(rows)} pairs, {sum(r.wedge_zero for r in rows)} quantum symmetric, "
                 f"{len(bad)} disagreements")
    lines.append(rep.render_text())
    _emit(cfg, payload, "\n".join(lines), out)
    return (EXIT_OK if rep.ok else EXIT_FAIL), rep


def _matrix_strings(M):
    return [[str(x) for x in row] for row in M]


def cmd_lc(cfg, out=sys.stdout):
    if cfg.lambdas is None:
        raise InputError("lc needs --lambda1 and --lambda2")
    p = _load(cfg)
    g10, g01 = G.base_metrics(p)
    l1, l2 = cfg.lambdas
    m = G.metric_family(g10, g01, l1, l2, p)
    if not G.is_real(p, m).real:
        raise InputError(f"the metric with (lambda1, lambda2) = ({l1}, {l2}) is not real")
    degree = _degree(cfg, p)
    rep = Report(f"lc {p.name} ({l1}, {l2})", degree)
    lc = connection_checks(p, m, "metric", SuiteConfig(degree=degree), rep)
    cert = C.uniqueness_certificate(p)
    for name, dim in cert["dims"].items():
        rep.add(f"certificate.dim {name}", dim == 0, f"dimension {dim}")
    rep.add("certificate.characters", cert["distinct"] and not cert["formula_mismatches"],
            f"exponents {cert['exponents']}")
    payload = {"preset": p.name, "metric": _metric_descriptor(p, m, G.qsym_lambda(p, g10, g01)),
               "report": rep.to_dict()}
    lines = [f"preset: {p.name}", f"metric: lambda1 = {l1}, lambda2 = {l2}"]
    if lc is not None:
        payload["christoffel"] = _matrix_strings(lc.gamma)
        payload["sigma"] = {"source": [" ".join(l) for l in lc.sigma.source.basis],
                            "matrix": _matrix_strings(lc.sigma.matrix)}
        lines.append("sigma: " + "; ".join(
            f"{' '.join(lab)} -> " + " + ".join(f"({c})·{' '.join(t)}"
                                                for t, c in zip(lc.sigma.target.basis,
                                                                (r[j] for r in lc.sigma.matrix)) if c)
            for j, lab in enumerate(lc.sigma.source.basis)))
        for i, row in enumerate(lc.gamma):
            for j, x in enumerate(row):
                if x:
                    lines.append(f"Gamma[{i}][{j}] = {x}")
    lines.append(rep.render_text())
    _emit(cfg, payload, "\n".join(lines), out)
    return (EXIT_OK if rep.ok else EXIT_FAIL), rep


def cmd_verify(cfg, out=sys.stdout):
    p = _load(cfg, validate=False)
    rep = run_suite(p, cfg.suite, SuiteConfig(degree=_degree(cfg, p)))
    if cfg.canonical:
        out.write(rep.canonical_payload() + "\n")
        return (EXIT_OK if rep.ok else EXIT_FAIL), rep
    _emit(cfg, rep.to_dict(), rep.render_text() + f"\n   canonical sha256: {rep.digest()}", out)
    return (EXIT_OK if rep.ok else EXIT_FAIL), rep


COMMAND_FUNCS = {"validate": cmd_validate, "metrics": cmd_metrics, "lc": cmd_lc, "verify": cmd_verify}


def build_parser():
    ap = argparse.ArgumentParser(prog="qhs", description="Exact metrics and connections on "
                                 "quantum homogeneous spaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("preset", help="preset name or path (searched in $QHS_PRESET_PATH)")
        sp.add_argument("--degree", type=int, help="degree bound for sweeps")
        sp.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
        sp.add_argument("--force", action="store_true", help="load a preset that fails validation")
        sp.add_argument("--q0", action="append", default=[], metavar="Q0",
                        help="sample value of q for positivity and evaluation (repeatable)")

    sp = sub.add_parser("validate", help="check a preset")
    common(sp)
    sp = sub.add_parser("metrics", help="base metrics, lambda_qsym and the symmetry scan")
    common(sp)
    sp.add_argument("--lambda1")
    sp.add_argument("--lambda2")
    sp.add_argument("--samples", type=int, default=6, dest="scan_samples")
    sp.add_argument("--eval", action="store_true", dest="evaluate",
                    help="add columns evaluated at the q0 samples")
    sp = sub.add_parser("lc", help="assemble and check the Levi-Civita connection")
    common(sp)
    sp.add_argument("--lambda1", required=True)
    sp.add_argument("--lambda2", required=True)
    sp = sub.add_parser("verify", help="run a verification suite")
    common(sp)
    sp.add_argument("--suite", choices=("all", "metrics", "connection"), default="all")
    sp.add_argument("--canonical", action="store_true",
                    help="print the canonical payload (no timings) instead of the report")
    return ap


def config_from_args(argv):
    ns = build_parser().parse_args(argv)
    return CommandConfig(**{k: v for k, v in vars(ns).items()})


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        cfg = config_from_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        code, _ = COMMAND_FUNCS[cfg.command](cfg, out)
        return code
    except (InputError, G.MetricError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PresetValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main_entry():
    sys.exit(main())
