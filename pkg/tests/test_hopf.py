import pytest
from hypothesis import given

from qhs.hopf import confluence_report, hopf_axiom_failures, is_coinvariant, normal_monomials, projection_failures
from qhs.preset import build_preset, mutate
from strategies import elements


def test_confluence(preset):
    for alg in (preset.A, preset.H, preset.U):
        rep = confluence_report(alg, 6)
        assert rep.ok, rep.witness


def test_broken_rewrite_rule_is_not_confluent(preset_data):
    p = build_preset(mutate(preset_data, ("algebra", "A", "rules", "b a"), "q^-2*a*b"))
    rep = confluence_report(p.A, 6)
    assert not rep.ok
    assert rep.witness is not None


def test_hopf_axioms_on_monomials(preset):
    for alg in (preset.A, preset.H, preset.U):
        assert hopf_axiom_failures(alg, 3) == []


def test_projection_is_a_hopf_star_map(preset):
    assert projection_failures(preset.A) == []


def test_normal_monomials_are_irreducible(preset):
    mons = normal_monomials(preset.A, 2)
    assert all(preset.A.is_irreducible(w) for w in mons)
    # 1 + 4 + 10 quadratic words, one of them removed by the determinant relation
    assert len(mons) == 14


def test_coproduct_is_multiplicative(preset):
    @given(elements(preset.A), elements(preset.A))
    def run(x, y):
        A = preset.A
        assert A.coproduct(x * y) == A.coproduct(x) * A.coproduct(y)
        assert A.counit(x * y) == A.counit(x) * A.counit(y)
    run()


def test_star_is_antimultiplicative_involution(preset):
    @given(elements(preset.A), elements(preset.A))
    def run(x, y):
        assert (x * y).star() == y.star() * x.star()
        assert x.star().star() == x
    run()


def test_antipode_is_antimultiplicative(preset):
    @given(elements(preset.A, max_len=2), elements(preset.A, max_len=2))
    def run(x, y):
        A = preset.A
        assert A.antipode(x * y) == A.antipode(y) * A.antipode(x)
    run()


def test_module_algebra_actions(preset):
    assert preset.tangent_action.failures() == []
    assert preset.translation_action.failures() == []


def test_tangent_action_values(preset):
    A, U = preset.A, preset.U
    act = preset.tangent_action.act
    assert act(U.gen("E"), A.gen("a")) == A.gen("b")
    assert act(U.gen("F"), A.gen("d")) == A.gen("c")
    assert act(U.gen("E"), A.gen("b")) == A.zero()


def test_subalgebra_generators_are_coinvariant(preset):
    assert all(is_coinvariant(b) for b in preset.B_generators)
    assert not is_coinvariant(preset.A.gen("a"))


def test_step_budget_is_enforced(preset_data):
    from qhs.hopf import RewriteError
    p = build_preset(mutate(preset_data, ("algebra", "A", "step_budget"), 3))
    with pytest.raises(RewriteError):
        p.A.parse("d^3*a^3")
