"""
Single-datum mutations of a preset, and of a Christoffel matrix, that the
verification checks must detect.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import connection as C
from . import geometry as G
from .calculus import validate_preset
from .preset import build_preset, mutate
from .report import Report


@dataclass(frozen=True)
class PresetMutation:
    name: str
    path: tuple
    value: str


PRESET_MUTATIONS = [
    PresetMutation("wedge sign", ("wedge", "w10 w01"), "q^-2*vol"),
    PresetMutation("rewrite coefficient", ("algebra", "A", "rules", "b a"), "q^-2*a*b"),
    PresetMutation("maurer-cartan constant", ("maurer_cartan", "omega10", 0, "vol"), "(-q - q^-2)*c*d"),
    PresetMutation("fiber star entry", ("star", "vol"), "vol"),
    PresetMutation("algebra star entry", ("algebra", "A", "star", "b"), "-q^2*c"),
]


def run_preset_mutation(data, mut, degree=4):
    """Validate the mutated preset; a build error counts as a failing check."""
    rep = Report(f"mutation: {mut.name}", degree)
    try:
        p = build_preset(mutate(data, mut.path, mut.value), source=f"<mutated {mut.name}>")
    except Exception as exc:
        rep.add("preset.build", False, f"{type(exc).__name__}: {exc}")
        return rep
    rep.extend(validate_preset(p, degree))
    return rep


def perturbed_christoffel_report(p, entry=(0, 1), multiplier="c*d"):
    """
    The Levi-Civita connection of the qsym metric with Γⁱ_j shifted by
    eⁱ·b; ∇g and covariance must notice.
    """
    g10, g01 = G.base_metrics(p)
    lam = G.qsym_lambda(p, g10, g01)
    m = G.metric_family(g10, g01, 1, -lam, p)
    lc = C.levi_civita(p, m)
    i, j = entry
    gamma = [row[:] for row in lc.gamma]
    gamma[i][j] = gamma[i][j] + p.dual_bases["omega1"].forms[i].right_mul(p.A.parse(multiplier))
    bad = lc.with_gamma(gamma, "perturbed")
    rep = Report("mutation: christoffel entry", None)

    def ng():
        r = C.nabla_g(p, m, bad)
        return None if not r else f"∇g = {r}"

    rep.run("connection.perturbed.nabla_g", ng)
    rep.run("connection.perturbed.covariance",
            lambda: C.covariance_failure(p, bad, C.test_forms(p, "omega1", extra=False)))
    return rep
