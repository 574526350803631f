import pytest
from hypothesis import given
from hypothesis import strategies as st

from qhs.calculus import validate_preset
from qhs.preset import build_preset, mutate
from qhs.takeuchi import tensor_over_B
from strategies import b_elements


def test_preset_validates(preset):
    rep = validate_preset(preset)
    assert rep.ok, [(c.check, c.witness) for c in rep.failures()]


def test_leibniz_and_d_squared(preset):
    @given(b_elements(preset), b_elements(preset))
    def run(x, y):
        p = preset
        assert p.d(x * y) == p.d(x).right_mul(y) + p.d(y).left_mul(x)
        assert not p.d_one_form(p.d(x))
    run()


def test_d_splits_into_del_and_delbar(preset):
    @given(b_elements(preset))
    def run(x):
        p = preset
        assert p.d(x) == p.differential("del", x) + p.differential("delbar", x)
        assert p.d(p.star(x)) == p.star(p.d(x))
        assert p.differential("del", x.star()) == p.star(p.differential("delbar", x))
    run()


def test_exterior_route_agrees_with_dual_basis_route(preset):
    forms = preset.spanning_one_forms(degree=3)

    @given(st.sampled_from(forms), b_elements(preset, 1))
    def run(x, b):
        y = x.left_mul(b)
        assert preset.d_one_form(y) == preset.d_exterior(y)
    run()


def test_star_reverses_wedge(preset):
    forms = preset.spanning_one_forms(degree=2)

    @given(st.sampled_from(forms), st.sampled_from(forms))
    def run(x, y):
        p = preset
        assert p.star(p.wedge(x, y)) == -p.wedge(p.star(y), p.star(x))
    run()


def test_dual_basis_reconstruction_and_projector(preset):
    for name, db in preset.dual_bases.items():
        P = preset.projector(name)
        n = db.rank
        for i in range(n):
            for j in range(n):
                acc = sum((P[i][k] * P[k][j] for k in range(n)), preset.A.zero())
                assert acc == P[i][j]
    for x in preset.spanning_one_forms(degree=3):
        assert preset.dual_bases["omega1"].reconstruct(preset.left_decompose(x)) == x


def test_factorizability_inverts_restricted_wedge(preset):
    p = preset
    e10, e01 = p.dual_bases["omega10"].forms[0], p.dual_bases["omega01"].forms[0]
    for side, (x, y) in (("l", (e01, e10)), ("r", (e10, e01))):
        t = tensor_over_B(x, y)
        assert p.theta(side, p.wedge_map.apply(t)) == t


def test_like_bidegree_wedges_vanish(preset):
    p = preset
    e10 = p.dual_bases["omega10"].forms[0]
    e01 = p.dual_bases["omega01"].forms[0]
    assert not p.wedge(e10, e10) and not p.wedge(e01, e01)


@pytest.mark.parametrize("path, value, expected", [
    (("maurer_cartan", "omega10", 0, "vol"), "(-q - q^-2)*c*d", "calculus.maurer_cartan"),
    (("wedge", "w10 w01"), "q^-2*vol", "calculus.d_squared"),
    (("star", "vol"), "vol", "calculus.star_wedge"),
    (("tangent", "w01"), "-F", "calculus.d_two_routes"),
])
def test_single_datum_mutations_are_caught(preset_data, path, value, expected):
    p = build_preset(mutate(preset_data, path, value))
    rep = validate_preset(p, include_algebra=False)
    failed = {c.check for c in rep.failures()}
    assert expected in failed
    assert all(c.witness for c in rep.failures())
