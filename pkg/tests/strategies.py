"""Hypothesis strategies for scalars and algebra elements."""

from hypothesis import strategies as st

from qhs.scalar import Scalar

Q = Scalar.q()
I = Scalar.i()
DENOMINATORS = [Scalar.coerce(1), Q + 1, Q * Q + 1, Q - 2, Q * Q * Q - 3]


@st.composite
def gaussian(draw, bound=4):
    a = draw(st.integers(-bound, bound))
    b = draw(st.integers(-bound, bound))
    return Scalar.coerce(a) + I * b


@st.composite
def scalars(draw, real=False, nonzero=False):
    terms = draw(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
                          min_size=1, max_size=3))
    x = Scalar.coerce(0)
    for a, b, k in terms:
        c = Scalar.coerce(a) if real else Scalar.coerce(a) + I * b
        x = x + c * Q ** k
    x = x / draw(st.sampled_from(DENOMINATORS))
    if nonzero and not x:
        x = Scalar.coerce(1)
    return x


@st.composite
def words(draw, alg, max_len=3):
    n = draw(st.integers(0, max_len))
    return tuple(draw(st.integers(0, len(alg.generators) - 1)) for _ in range(n))


@st.composite
def elements(draw, alg, max_terms=3, max_len=3):
    out = alg.zero()
    for _ in range(draw(st.integers(1, max_terms))):
        w = draw(words(alg, max_len))
        out = out + alg.word_element(w).scale(draw(scalars()))
    return out


@st.composite
def b_elements(draw, preset, max_factors=2):
    """Linear combinations of products of B-generators."""
    prods = preset.B_products(max_factors)
    out = preset.A.zero()
    for _ in range(draw(st.integers(1, 3))):
        out = out + draw(st.sampled_from(prods)).scale(draw(scalars()))
    return out
