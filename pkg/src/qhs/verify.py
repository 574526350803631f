"""
Verification suites over a preset: metric classification and the
Levi-Civita checks.  Every suite returns a :class:`Report`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import connection as C
from . import geometry as G
from .calculus import validate_preset
from .report import Report
from .scalar import Scalar

# deterministic (λ1, λ2) grid for the axiom sweep; all entries nonzero
FAMILY_GRID = [
    "1", "2", "-1", "1/3", "q", "q^-1", "-q^2", "i", "1+i", "q+1",
    "2*q - 1", "q^3", "-i", "(q+1)/(q-1)", "5/7",
]
GENERIC_REAL = [("1", "1"), ("2", "3"), ("q", "q^2 + 1")]
NON_REAL = [("i", "1"), ("1", "1+i")]


@dataclass
class SuiteConfig:
    degree: int = 4
    axiom_pairs: int = 20
    generic_real: list = field(default_factory=lambda: list(GENERIC_REAL))
    non_real: list = field(default_factory=lambda: list(NON_REAL))
    covariance: bool = True


def family_pairs(n):
    """The first ``n`` pairs (λ1, λ2) of a fixed grid."""
    vals = [Scalar.parse(s) for s in FAMILY_GRID]
    out = []
    k = 0
    while len(out) < n:
        l1 = vals[k % len(vals)]
        l2 = vals[(3 * k + 1) % len(vals)]
        out.append((l1, l2))
        k += 1
    return out


def _scan_samples(lam):
    """Pairs on and off the ray λ2/λ1 = −λ."""
    pts = [Scalar.parse(s) for s in ("1", "2", "q", "-1/3", "i")]
    out = []
    for l1 in pts:
        out.append((l1, -lam * l1))
        out.append((l1, l1))
        out.append((l1, lam * l1))
    return out


def metric_suite(p, cfg=None):
    cfg = cfg or SuiteConfig()
    rep = Report("metrics", cfg.degree)
    g10, g01 = G.base_metrics(p)
    lam = G.qsym_lambda(p, g10, g01)
    rep.info["lambda_qsym"] = str(lam)
    rep.info["quantum_symmetric_ray"] = f"lambda2/lambda1 = {-lam}"

    rep.run("metrics.lambda_qsym.conjugation_fixed",
            lambda: None if lam.conj() == lam else f"conj(λ) = {lam.conj()}")
    rep.run("metrics.lambda_qsym.unit_monomial",
            lambda: None if lam.unit_monomial() is not None else f"λ = {lam}")

    forms = G.default_test_forms(p, 2)
    pairs = family_pairs(cfg.axiom_pairs)

    def family():
        for l1, l2 in pairs:
            m = G.metric_family(g10, g01, l1, l2, p)
            w = G.metric_axiom_failure(p, m, forms)
            if w:
                return f"(λ1, λ2) = ({l1}, {l2}): {w}"
        return None

    rep.run("metrics.axioms.family", family, {"pairs": len(pairs)})

    def perturbations():
        passed = [n for n, m in G.like_block_perturbations(p, g10, g01)
                  if G.metric_axiom_failure(p, m, forms) is None]
        return f"perturbations satisfy the axioms: {passed}" if passed else None

    rep.run("metrics.axioms.perturbations_rejected", perturbations)
    rep.run("metrics.support", lambda: G.support_failure(p, G.metric_family(g10, g01, 1, 1, p)))

    def scan():
        bad = [r for r in G.qsym_uniqueness_scan(p, g10, g01, _scan_samples(lam), lam) if not r.agrees]
        return f"(λ1, λ2) = ({bad[0].lambda1}, {bad[0].lambda2})" if bad else None

    rep.run("metrics.qsym_uniqueness_scan", scan)

    def reality():
        ms = [G.metric_family(g10, g01, l1, l2, p) for l1, l2 in pairs]
        ms += [G.metric_family(g10, g01, Scalar.parse(a), Scalar.parse(b), p) for a, b in cfg.non_real]
        seen = set()
        for m in ms:
            r = G.is_real(p, m, forms)
            if not r.agree:
                return f"({m.lambda1}, {m.lambda2}): g-form {r.g_form}, pairing form {r.pairing_form}"
            seen.add(r.g_form)
        if seen != {True, False}:
            return f"only {'real' if True in seen else 'non-real'} instances were constructed"
        return None

    rep.run("metrics.reality_biconditional", reality)

    metrics = [("qsym", G.metric_family(g10, g01, 1, -lam, p))]
    metrics += [(f"real({a},{b})", G.metric_family(g10, g01, Scalar.parse(a), Scalar.parse(b), p))
                for a, b in cfg.generic_real[:1]]
    for tag, m in metrics:
        H, H1, H2 = G.hermitian_from_real(p, m)
        for hname, HH in (("H", H), ("H1", H1), ("H2", H2)):
            for ident, w in G.hermitian_identity_failures(p, HH).items():
                rep.add(f"metrics.hermitian.{tag}.{hname}.{ident}", w is None, w)
            rep.run(f"metrics.hermitian.{tag}.{hname}.sesquisymmetry",
                    lambda HH=HH: G.sesquisymmetry_failure(p, HH))
        rep.run(f"metrics.hermitian.{tag}.round_trip",
                lambda H=H, m=m: None if G.metric_from_hermitian(p, H) == m.g else "g from h̃ differs")
    return rep


def connection_checks(p, m, tag, cfg, rep, covariance=True, degree=None):
    """
    The Levi-Civita checks for one metric, added to ``rep`` under
    ``connection.<tag>``.  Torsion and covariance sweep the spanning set up
    to ``degree``.  Leibniz and the bimodule law are checked against every
    B-generator, on the dual-basis forms and (at the full degree) on their
    B-generator multiples; left B-linearity makes this enough.
    """
    pre = f"connection.{tag}."
    try:
        lc = C.levi_civita(p, m)
    except Exception as exc:
        rep.add(pre + "assemble", False, f"{type(exc).__name__}: {exc}")
        return None
    rep.add(pre + "assemble", True)
    H, H1, H2 = lc.parts["hermitian"]
    c10, c01 = lc.parts["chern"], lc.parts["chern_op"]
    forms = C.test_forms(p, "omega1", degree=cfg.degree if degree is None else degree)
    base = C.test_forms(p, "omega1", extra=False)
    layer = C.test_forms(p, "omega1", degree=2) if degree is None else base
    rep.add(pre + "sigma.unique", lc.parts["sigma_nullity"] == 0,
            f"solution space of dimension {lc.parts['sigma_nullity']}")
    rep.run(pre + "sigma.mixed_blocks", lambda: C.sigma_closed_form_failure(p, lc))
    rep.run(pre + "torsion", lambda: C.torsion_failure(p, lc, forms))

    def ng():
        r = C.nabla_g(p, m, lc)
        return None if not r else f"∇g = {r}"

    rep.run(pre + "nabla_g", ng)

    def cot():
        r = C.cotorsion(p, m, lc)
        return None if not r else f"coT = {r}"

    rep.run(pre + "cotorsion", cot)
    rep.run(pre + "bimodule", lambda: C.bimodule_failure(p, lc, layer))
    rep.run(pre + "leibniz", lambda: C.leibniz_failure(p, lc, base))
    rep.run(pre + "compatibility.H", lambda: C.compatibility_failure(p, H, lc))
    rep.run(pre + "compatibility.H1", lambda: C.compatibility_failure(p, H1, c10))
    rep.run(pre + "compatibility.H2", lambda: C.compatibility_failure(p, H2, c01))
    if covariance:
        rep.run(pre + "covariance", lambda: C.covariance_failure(p, lc, forms))
    else:
        rep.add(pre + "covariance", "skip")
    for name, w in C.christoffel_failures(p, lc.gamma, "omega1", "d").items():
        rep.add(pre + f"christoffel.gamma.{name}", w is None, w)
    for name, w in C.christoffel_failures(p, c10.parts["plus"], "omega10", "del").items():
        rep.add(pre + f"christoffel.s.{name}", w is None, w)
    for name, w in C.christoffel_failures(p, c01.parts["plus"], "omega01", "delbar").items():
        rep.add(pre + f"christoffel.s_op.{name}", w is None, w)
    rep.run(pre + "two_route.(1,0)", lambda: C.gamma_difference(
        C.nabla_hat(p, H1, lc.parts["dbar"]).gamma, c10.parts["plus"]))
    rep.run(pre + "two_route.(0,1)", lambda: C.gamma_difference(
        C.nabla_hat(p, H2, lc.parts["dbar_op"], opposite=True).gamma, c01.parts["plus"]))
    rep.run(pre + "two_route.well_defined", lambda: C.gamma_difference(
        C.nabla_hat(p, H1, lc.parts["dbar"], normalize=True).gamma,
        C.nabla_hat(p, H1, lc.parts["dbar"]).gamma))
    rep.run(pre + "chern.holomorphic_part", lambda: C.holomorphic_parts_failure(p, c10))
    rep.run(pre + "chern_op.holomorphic_part", lambda: C.holomorphic_parts_failure(p, c01))
    return lc


def _constant_matrix(rows):
    return [[Scalar.parse(x) for x in r] for r in rows]


def connection_suite(p, cfg=None):
    cfg = cfg or SuiteConfig()
    rep = Report("connection", cfg.degree)
    g10, g01 = G.base_metrics(p)
    lam = G.qsym_lambda(p, g10, g01)
    qsym = G.metric_family(g10, g01, 1, -lam, p)

    d10, dop = C.dbar_connection_10(p), C.dbar_connection_op(p)
    delbar = lambda b: p.differential("delbar", b)
    delop = lambda b: p.differential("del", b)
    rep.run("holomorphic.dbar_10.leibniz", lambda: C.leibniz_failure(p, d10))
    rep.run("holomorphic.dbar_10.bimodule", lambda: C.bimodule_failure(p, d10, derivation=delbar))
    rep.run("holomorphic.dbar_op.leibniz", lambda: C.leibniz_failure(p, dop))
    rep.run("holomorphic.dbar_op.bimodule", lambda: C.bimodule_failure(p, dop, derivation=delop))
    for name, w in C.christoffel_failures(p, d10.gamma, "omega10", "delbar").items():
        rep.add(f"holomorphic.dbar_10.christoffel.{name}", w is None, w)
    rep.run("covariance.d_baseline", lambda: C.d_covariance_failure(p))

    lc = connection_checks(p, qsym, "qsym", cfg, rep, cfg.covariance)
    for a, b in cfg.generic_real:
        m = G.metric_family(g10, g01, Scalar.parse(a), Scalar.parse(b), p)
        connection_checks(p, m, f"real({a},{b})", cfg, rep, cfg.covariance, degree=2)

    if lc is not None:
        M10 = _constant_matrix([["2", "1", "0"], ["0", "1", "0"], ["0", "q", "1"]])
        M01 = _constant_matrix([["1", "0", "0"], ["-1", "q^-1", "0"], ["0", "0", "3"]])
        rep.run("connection.qsym.basis_independence",
                lambda: C.basis_independence_failure(p, qsym, lc, M10, M01))

    cert = C.uniqueness_certificate(p)
    rep.info["hom_dimensions"] = cert["dims"]
    rep.info["central_characters"] = cert["characters"]
    for name, dim in cert["dims"].items():
        rep.add(f"certificate.dim {name}", dim == 0, f"dimension {dim}")
    rep.add("certificate.characters.formula", not cert["formula_mismatches"],
            f"engine and formula differ on {cert['formula_mismatches'][:3]}")
    rep.add("certificate.characters.distinct", cert["distinct"] and cert["trivial_absent"],
            f"exponents {cert['exponents']}")
    # Hom-vanishing paired with the direct computations that rely on it
    nabla_ok = lc is not None and rep.get("connection.qsym.nabla_g").passed
    cot_ok = lc is not None and rep.get("connection.qsym.cotorsion").passed
    rep.add("certificate.agrees.nabla_g", nabla_ok == (cert["dims"]["Hom(C, V⊗V⊗V)"] == 0),
            "∇g and Hom(C, V⊗V⊗V) disagree")
    rep.add("certificate.agrees.cotorsion", cot_ok == (cert["dims"]["Hom(C, V2⊗V)"] == 0),
            "cotorsion and Hom(C, V2⊗V) disagree")
    return rep


def preset_suite(p, cfg=None):
    cfg = cfg or SuiteConfig()
    rep = validate_preset(p, cfg.degree)
    rep.title = "preset"
    return rep


SUITES = {"metrics": [metric_suite], "connection": [connection_suite],
          "all": [preset_suite, metric_suite, connection_suite]}


def run_suite(p, name="all", cfg=None):
    cfg = cfg or SuiteConfig()
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    rep = Report(f"{p.name}: {name}", cfg.degree)
    for fn in SUITES[name]:
        rep.extend(fn(p, cfg))
    return rep
