from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qhs.takeuchi import (
    ConstraintError, CotensorElement, FiberMap, conjugate, dual_pairing_from_inner, fiber_project,
    hom_space, make_element, satisfies_constraint, solve_invariant_inner_product, spanning_set,
    tensor, tensor_over_B, unit_comodule,
)


def test_fiber_comodule_axioms(preset):
    for V in list(preset.fibers.values()) + [preset.V1, preset.V2, tensor(preset.V1, preset.V1)]:
        assert V.failures() == []


def test_fiber_dimensions(preset):
    assert preset.fiber_dims() == (1, 2, 1)


def test_hom_space_dimensions(preset):
    V10, V01 = preset.fiber((1, 0)), preset.fiber((0, 1))
    V11 = tensor(preset.V1, preset.V1)
    assert len(hom_space(V10, V10)) == 1
    assert len(hom_space(V10, V01)) == 0
    # weights -4, 0, 0, +4 on V1⊗V1: 1 + 4 + 1 colinear maps
    assert len(hom_space(V11, V11)) == 6
    assert len(hom_space(unit_comodule(preset.H), tensor(V10, V01))) == 1


def test_hom_space_elements_are_colinear(preset):
    V11 = tensor(preset.V1, preset.V1)
    assert all(f.is_colinear() for f in hom_space(V11, V11))


def test_wrong_weight_coefficient_is_rejected(preset):
    with pytest.raises(ConstraintError):
        make_element(preset.V1, preset.A, {("w10",): preset.A.gen("a")})
    assert satisfies_constraint(CotensorElement(preset.V1, preset.A, {("w10",): preset.A.parse("d^2")}))


def test_spanning_set_satisfies_constraint(preset):
    forms = spanning_set(preset.V1, preset.A, 2)
    assert forms and all(satisfies_constraint(x) for x in forms)


def test_tensor_over_B_is_associative(preset):
    forms = spanning_set(preset.V1, preset.A, 2)

    @given(st.sampled_from(forms), st.sampled_from(forms), st.sampled_from(forms),
           st.sampled_from(preset.B_generators))
    def run(x, y, z, b):
        assert tensor_over_B(tensor_over_B(x, y), z) == tensor_over_B(x, tensor_over_B(y, z))
        # balanced over B
        assert tensor_over_B(x.right_mul(b), y) == tensor_over_B(x, y.left_mul(b))
    run()


def test_fiber_projection_of_coinvariant_element(preset):
    e = spanning_set(preset.V1, preset.A, 2)[0]
    vec = fiber_project(e)
    assert len(vec) == preset.V1.dim


def test_conjugate_is_involutive(preset):
    V = preset.V1
    Vbb = conjugate(conjugate(V))
    assert Vbb.basis == V.basis


def test_invariant_inner_products(preset):
    for bd in ((1, 0), (0, 1)):
        ip = solve_invariant_inner_product(preset.fiber(bd), [Fraction(1, 2)])
        assert ip.is_invariant() and ip.is_hermitian()
        assert ip.is_positive_at(Fraction(1, 2))


def test_dual_pair_snake_identities(preset):
    V = preset.fiber((1, 0))
    pair = dual_pairing_from_inner(V, solve_invariant_inner_product(V))
    assert pair.snake_residuals() == []
    tau = FiberMap.identity(V).scale(preset.A.parse("2").constant_term())
    assert pair.twisted(tau).snake_residuals() == []


def test_fiber_map_composition_and_tensor(preset):
    V = preset.V1
    idV = FiberMap.identity(V)
    assert idV.compose(idV).matrix == idV.matrix
    assert idV.tensor(idV).matrix == FiberMap.identity(tensor(V, V)).matrix
