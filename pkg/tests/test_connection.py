from types import SimpleNamespace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qhs import connection as C
from qhs import geometry as G
from qhs.mutation import perturbed_christoffel_report
from qhs.scalar import Scalar
from qhs.takeuchi import CotensorElement, tensor
from strategies import b_elements


def test_sigma_is_unique_and_mixed_blocks_match(preset, lc):
    assert lc.parts["sigma_nullity"] == 0
    assert C.sigma_closed_form_failure(preset, lc) is None
    V11 = tensor(preset.V1, preset.V1)
    j = V11.index(("w10", "w01"))
    assert lc.sigma.matrix[V11.index(("w01", "w10"))][j] == Scalar.parse("q^-2")
    j = V11.index(("w01", "w10"))
    assert lc.sigma.matrix[V11.index(("w10", "w01"))][j] == Scalar.parse("q^2")


def test_levi_civita_conditions(preset, qsym_metric, lc):
    assert C.torsion_failure(preset, lc) is None
    assert not C.nabla_g(preset, qsym_metric, lc)
    assert not C.cotorsion(preset, qsym_metric, lc)
    assert C.bimodule_failure(preset, lc) is None
    assert C.compatibility_failure(preset, lc.parts["hermitian"][0], lc) is None


def test_leibniz_on_random_coefficients(preset, lc):
    forms = preset.dual_bases["omega1"].forms

    @given(st.sampled_from(forms), b_elements(preset, 1))
    def run(e, b):
        lhs = lc.apply(e.left_mul(b))
        rhs = lc.apply(e).left_mul(b) + C.tensor_over_B(preset.d(b), e)
        assert lhs == rhs
    run()


def test_torsion_on_exact_forms_is_wedge_of_nabla(preset, lc):
    for b in preset.B_generators:
        db = preset.d(b)
        assert not preset.d_one_form(db)
        [(_, residual)] = C.torsion(preset, lc, [db])
        assert residual == preset.wedge_map.apply(lc.apply(db))


def test_christoffel_identities(preset, lc):
    c10 = lc.parts["chern"]
    assert not any(C.christoffel_failures(preset, lc.gamma, "omega1", "d").values())
    assert not any(C.christoffel_failures(preset, c10.parts["plus"], "omega10", "del").values())
    assert not any(C.christoffel_failures(preset, c10.parts["minus"], "omega10", "delbar").values())


def test_two_routes_agree(preset, lc):
    H, H1, H2 = lc.parts["hermitian"]
    c10, c01 = lc.parts["chern"], lc.parts["chern_op"]
    assert C.gamma_difference(C.nabla_hat(preset, H1, lc.parts["dbar"]).gamma, c10.parts["plus"]) is None
    assert C.gamma_difference(C.nabla_hat(preset, H2, lc.parts["dbar_op"], opposite=True).gamma,
                              c01.parts["plus"]) is None
    assert C.gamma_difference(C.nabla_hat(preset, H1, lc.parts["dbar"], normalize=True).gamma,
                              c10.parts["plus"]) is None


def test_chern_parts(preset, lc):
    assert C.holomorphic_parts_failure(preset, lc.parts["chern"]) is None
    assert C.holomorphic_parts_failure(preset, lc.parts["chern_op"]) is None
    H1 = lc.parts["hermitian"][1]
    assert C.compatibility_failure(preset, H1, lc.parts["chern"]) is None


def test_rank_one_constant_metric_has_zero_gamma_plus(preset):
    one = preset.A.one()
    zero = CotensorElement.zero(preset.V1, preset.A)
    H = SimpleNamespace(h=[[one]], htilde=[[one]])
    dbar = SimpleNamespace(gamma=[[zero]])
    gp = C.chern_gamma_plus(preset, H, dbar)
    assert not gp[0][0]


def test_holomorphic_structures(preset):
    d10, dop = C.dbar_connection_10(preset), C.dbar_connection_op(preset)
    assert C.leibniz_failure(preset, d10) is None
    assert C.bimodule_failure(preset, d10, derivation=lambda b: preset.differential("delbar", b)) is None
    assert C.bimodule_failure(preset, dop, derivation=lambda b: preset.differential("del", b)) is None


def test_covariance(preset, lc):
    forms = C.test_forms(preset, "omega1", extra=False)
    assert C.covariance_failure(preset, lc, forms) is None
    assert C.d_covariance_failure(preset) is None


def test_perturbed_christoffel_entry_is_detected(preset):
    rep = perturbed_christoffel_report(preset)
    assert {c.check for c in rep.failures()} == {"connection.perturbed.nabla_g",
                                                 "connection.perturbed.covariance"}
    assert all(c.witness for c in rep.failures())


def test_nabla_g_needs_sigma(preset, qsym_metric, lc):
    bare = C.Connection(preset, "omega1", lc.gamma)
    with pytest.raises(C.ConnectionError_):
        C.nabla_g(preset, qsym_metric, bare)


def test_non_real_metric_is_rejected(preset, base):
    m = G.metric_family(*base, Scalar.i(), 1, preset)
    with pytest.raises(G.MetricError):
        C.levi_civita(preset, m)


def test_independent_dual_basis_gives_same_connection(preset, qsym_metric, lc):
    M10 = [[Scalar.parse(x) for x in r] for r in (("1", "1", "0"), ("0", "q", "0"), ("0", "0", "1"))]
    M01 = [[Scalar.parse(x) for x in r] for r in (("2", "0", "0"), ("0", "1", "0"), ("1", "0", "1"))]
    assert C.basis_independence_failure(preset, qsym_metric, lc, M10, M01) is None


def test_uniqueness_certificate(preset):
    cert = C.uniqueness_certificate(preset)
    assert all(d == 0 for d in cert["dims"].values())
    assert cert["exponents"] == [-6, -2, 2, 6]
    assert cert["distinct"] and cert["trivial_absent"] and not cert["formula_mismatches"]


def test_generic_real_metric(preset, base):
    m = G.metric_family(*base, 2, 3, preset)
    conn = C.levi_civita(preset, m)
    assert C.torsion_failure(preset, conn, C.test_forms(preset, "omega1", extra=False)) is None
    assert not C.nabla_g(preset, m, conn)
    assert not C.cotorsion(preset, m, conn)
