import pytest
from hypothesis import given

from qhs import geometry as G
from qhs.scalar import Scalar
from strategies import scalars

I = Scalar.i()


def test_lambda_qsym_is_pinned(lam):
    # derived once by the engine, then pinned
    assert lam == Scalar.parse("-q^2")
    assert lam.conj() == lam
    assert lam.unit_monomial() is not None


def test_base_metrics_are_unit_coevaluations(base):
    g10, g01 = base
    assert str(g10.g) == "(1)·[w01⊗w10]"
    assert str(g01.g) == "(1)·[w10⊗w01]"


def test_family_satisfies_metric_axioms(preset, base):
    forms = G.default_test_forms(preset, 2)

    @given(scalars(nonzero=True), scalars(nonzero=True))
    def run(l1, l2):
        m = G.metric_family(*base, l1, l2, preset)
        assert G.metric_axiom_failure(preset, m, forms) is None
    run()


def test_zero_parameter_is_rejected(preset, base):
    with pytest.raises(G.MetricError):
        G.metric_family(*base, 0, 1, preset)


def test_structured_perturbations_fail(preset, base):
    perts = G.like_block_perturbations(preset, *base)
    assert len(perts) >= 5
    for name, m in perts:
        assert G.metric_axiom_failure(preset, m) is not None, name


def test_quantum_symmetry_exactly_on_the_ray(preset, base, lam):
    @given(scalars(nonzero=True), scalars(nonzero=True))
    def run(l1, l2):
        m = G.metric_family(*base, l1, l2, preset)
        assert G.is_quantum_symmetric(preset, m) == (l2 / l1 == -lam)
        on_ray = G.metric_family(*base, l1, -lam * l1, preset)
        assert G.is_quantum_symmetric(preset, on_ray)
    run()


def test_reality_biconditional(preset, base):
    @given(scalars(nonzero=True), scalars(nonzero=True))
    def run(l1, l2):
        r = G.is_real(preset, G.metric_family(*base, l1, l2, preset))
        assert r.agree
        assert r.g_form == (l1.conj() == l1 and l2.conj() == l2)
    run()


def test_real_and_non_real_instances(preset, base):
    assert G.is_real(preset, G.metric_family(*base, 1, Scalar.parse("q^2"), preset)).real
    assert not G.is_real(preset, G.metric_family(*base, I, 1, preset)).real


def test_hermitian_identities(preset, base, qsym_metric):
    generic = G.metric_family(*base, 2, 3, preset)
    for m in (qsym_metric, generic):
        for H in G.hermitian_from_real(preset, m):
            fails = {k: v for k, v in G.hermitian_identity_failures(preset, H).items() if v}
            assert not fails
            assert G.sesquisymmetry_failure(preset, H) is None


def test_hermitian_round_trip(preset, base):
    @given(scalars(real=True, nonzero=True), scalars(real=True, nonzero=True))
    def run(l1, l2):
        m = G.metric_family(*base, l1, l2, preset)
        H = G.hermitian_from_real(preset, m)[0]
        assert G.metric_from_hermitian(preset, H) == m.g
    run()


def test_hermitian_needs_real_metric(preset, base):
    with pytest.raises(G.MetricError):
        G.hermitian_from_real(preset, G.metric_family(*base, I, 1, preset))
