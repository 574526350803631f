"""
Metrics on the one-forms, reality, quantum symmetry and Hermitian metrics.

A metric is a pair ``(g, (·,·))`` with ``g`` a coinvariant element of
``Ω¹ ⊗_B Ω¹`` and the pairing a FiberMap ``V¹⊗V¹ → C`` extended to
``Ω¹ ⊗_B Ω¹ → B``.  Covariant metrics come from invariant inner products
on the fibers: the pairing ``(ω, η) = ⟨[ω], [η*]⟩`` on the mixed summands
and its coevaluation.  Twisting the two base pairs by ``λ1, λ2`` gives the
two-parameter family.

Hermitian metrics are recorded through their matrices relative to a dual
basis: ``h^{ij} = ⟨e^i, e^j‾⟩ = (e^i, e^j*)`` and ``h̃`` from the inverse
map, ``h̃_ij = e_j(((id ⊗ e_i) g)*)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .calculus import first_nonzero, mat_dagger, mat_is_zero, mat_mul, mat_sub
from .scalar import ONE, ZERO, Scalar, ScalarError
from .takeuchi import (
    CotensorElement,
    FiberMap,
    solve_invariant_inner_product,
    spanning_set,
    tensor,
    tensor_over_B,
    unit_comodule,
)


class MetricError(ValueError):
    pass


# ---------------------------------------------------------------------------
# pairings and metrics
# ---------------------------------------------------------------------------

def pair(pairing, x, y):
    """(x, y) ∈ B for one-forms x, y."""
    return pairing.apply(tensor_over_B(x, y)).coeff(())


def contract_left(pairing, x, t):
    """((x, ·) ⊗ id)(t) for a one-form x and t over V¹⊗V¹."""
    return pairing.apply(tensor_over_B(x, t), 0)


def contract_right(pairing, t, y):
    """(id ⊗ (·, y))(t)."""
    return pairing.apply(tensor_over_B(t, y), 1)


def apply_functional_right(t, f):
    """(id ⊗ f)(t) for t over V¹⊗V¹ and a left-linear functional f on Ω¹."""
    out = {}
    for (u, v), c in t.coeffs.items():
        fv = f.coeffs.get((v,))
        if fv is None:
            continue
        x = c * fv
        key = (u,)
        out[key] = out[key] + x if key in out else x
    return CotensorElement(f.module, t.A, out)


@dataclass
class BasePair:
    """One base metric: g in a mixed summand and its pairing."""

    name: str
    g: CotensorElement
    pairing: FiberMap
    inner: object = None


@dataclass
class Metric:
    preset: object
    g: CotensorElement
    pairing: FiberMap
    lambda1: Scalar | None = None
    lambda2: Scalar | None = None
    note: str = ""

    def pair(self, x, y):
        return pair(self.pairing, x, y)

    def descriptor(self):
        return {"lambda1": str(self.lambda1), "lambda2": str(self.lambda2)}


def _pairing_matrix_to_map(p, entries):
    """entries: {(label, label): Scalar} → FiberMap V¹⊗V¹ → C."""
    V11 = tensor(p.V1, p.V1)
    row = [ZERO] * V11.dim
    for lab, x in entries.items():
        row[V11.index(lab)] = Scalar.coerce(x)
    return FiberMap(V11, unit_comodule(p.H), [row])


def _coev_element(p, entries):
    V11 = tensor(p.V1, p.V1)
    return CotensorElement(V11, p.A, {lab: p.A.scalar(x) for lab, x in entries.items() if x})


def base_metrics(p, ip10=None, ip01=None):
    """
    The base pairs ``(g10, pairing10)`` and ``(g01, pairing01)``:
    ``pairing10(v ⊗ u) = ⟨v, J u⟩`` on ``V^{(1,0)} ⊗ V^{(0,1)}`` and ``g10``
    its coevaluation in ``Ω^{(0,1)} ⊗ Ω^{(1,0)}``; likewise with the
    bidegrees exchanged.
    """
    V10, V01 = p.fiber((1, 0)), p.fiber((0, 1))
    if ip10 is None:
        ip10 = solve_invariant_inner_product(V10, p.samples)
    if ip01 is None:
        ip01 = solve_invariant_inner_product(V01, p.samples)
    J = p.star_tables[1]
    V1 = p.V1
    out = []
    for name, (Va, Vb, ip) in (("g10", (V10, V01, ip10)), ("g01", (V01, V10, ip01))):
        la, lb = list(Va.basis), list(Vb.basis)
        G = ip.gram
        # pairing(v_k ⊗ u_l) = ⟨v_k, J u_l⟩ with J u_l = Σ_i J[i][l] v_i
        Pm = [[ZERO] * len(lb) for _ in la]
        for k, vk in enumerate(la):
            for l, ul in enumerate(lb):
                acc = ZERO
                for i, vi in enumerate(la):
                    jil = J[V1.index(vi)][V1.index(ul)]
                    if jil:
                        acc = acc + G[k][i] * jil.conj()
                Pm[k][l] = acc
        try:
            M = linalg.inverse(Pm)
        except ScalarError:
            raise MetricError(f"{name}: degenerate pairing") from None
        pairing = _pairing_matrix_to_map(
            p, {vk + ul: Pm[k][l] for k, vk in enumerate(la) for l, ul in enumerate(lb)})
        g = _coev_element(p, {ul + vm: M[l][m] for l, ul in enumerate(lb) for m, vm in enumerate(la)})
        out.append(BasePair(name, g, pairing, ip))
    return tuple(out)


def metric_family(g10, g01, lambda1, lambda2, preset=None):
    """g = λ1 g10 + λ2 g01 with pairing λ1⁻¹ pairing10 + λ2⁻¹ pairing01."""
    l1, l2 = Scalar.coerce(lambda1), Scalar.coerce(lambda2)
    if not l1 or not l2:
        raise MetricError("the twist parameters must be nonzero")
    g = g10.g.scale(l1) + g01.g.scale(l2)
    pairing = g10.pairing.scale(l1.inverse()) + g01.pairing.scale(l2.inverse())
    return Metric(preset, g, pairing, l1, l2)


def default_test_forms(p, degree=2):
    """Spanning one-forms used for metric checks: monomials up to ``degree``."""
    return p.spanning_one_forms(degree=degree)


def metric_axiom_failure(p, m, forms=None):
    """None if (g, pairing) is a metric on the test forms, else a witness."""
    forms = default_test_forms(p) if forms is None else forms
    for w in forms:
        left = contract_left(m.pairing, w, m.g)
        if left != w:
            return f"((ω,·)⊗id)g ≠ ω for ω = {w}: got {left}"
        right = contract_right(m.pairing, m.g, w)
        if right != w:
            return f"(id⊗(·,ω))g ≠ ω for ω = {w}: got {right}"
    for b in p.B_generators:
        if m.g.left_mul(b) != m.g.right_mul(b):
            return f"g is not central: fails for b = {b}"
    for w in forms:
        for v in forms:
            val = m.pair(w, v)
            if val and not p.in_B(val):
                return f"pairing value ({w}, {v}) = {val} is not in B"
    return None


def support_failure(p, m):
    """Pairing vanishes and g has no component on like-bidegree summands."""
    for lab in m.g.coeffs:
        if p.label_bidegree[lab[:1]] == p.label_bidegree[lab[1:]]:
            return f"g has a component on {lab}"
    V11 = m.pairing.source
    for j, lab in enumerate(V11.basis):
        if p.label_bidegree[lab[:1]] == p.label_bidegree[lab[1:]] and m.pairing.matrix[0][j]:
            return f"pairing is nonzero on {lab}"
    return None


# ---------------------------------------------------------------------------
# dagger and reality
# ---------------------------------------------------------------------------

def dagger(p, x):
    """(Σ c ⊗ u1⊗…⊗un)† = Σ c* ⊗ J(un)⊗…⊗J(u1) for tensors of V¹."""
    J = p.star_tables[1]
    V1 = p.V1
    out = {}
    for lab, c in x.coeffs.items():
        cs = c.star()
        images = []
        for l in reversed(lab):
            k = V1.index((l,))
            images.append([(V1.basis[i][0], J[i][k]) for i in range(V1.dim) if J[i][k]])
        combos = [((), ONE)]
        for imgs in images:
            combos = [(key + (l,), s * t) for key, s in combos for l, t in imgs]
        for key, s in combos:
            term = cs.scale(s)
            out[key] = out[key] + term if key in out else term
    return CotensorElement(x.module, x.A, out)


@dataclass
class RealityResult:
    g_form: bool
    pairing_form: bool
    witness: str | None = None

    @property
    def agree(self):
        return self.g_form == self.pairing_form

    @property
    def real(self):
        if not self.agree:
            raise MetricError(f"reality forms disagree: g† = g is {self.g_form}, "
                              f"pairing form is {self.pairing_form}")
        return self.g_form


def is_real(p, m, forms=None):
    """Check g† = g and (ω, η) = (η*, ω*)* on the test forms."""
    forms = default_test_forms(p, 2) if forms is None else forms
    gd = dagger(p, m.g)
    g_form = gd == m.g
    witness = None if g_form else f"g† − g = {gd - m.g}"
    pairing_form = True
    for w in forms:
        for v in forms:
            lhs = m.pair(w, v)
            rhs = m.pair(p.star(v), p.star(w)).star()
            if lhs != rhs:
                pairing_form = False
                if witness is None:
                    witness = f"(ω,η) ≠ (η*,ω*)* for ω = {w}, η = {v}"
                break
        if not pairing_form:
            break
    if pairing_form and not g_form and witness is None:
        witness = "g† ≠ g"
    return RealityResult(g_form, pairing_form, witness)


# ---------------------------------------------------------------------------
# quantum symmetry
# ---------------------------------------------------------------------------

def wedge_g(p, x):
    return p.wedge_map.apply(x)


def qsym_lambda(p, g10, g01):
    """The λ with ∧g10 = λ ∧g01."""
    w10, w01 = wedge_g(p, g10.g), wedge_g(p, g01.g)
    if not w01:
        raise MetricError("∧g01 = 0, the preset is not factorizable")
    lab = next(iter(w01.coeffs))
    c01 = w01.coeffs[lab].constant_term()
    c10 = w10.coeff(lab).constant_term()
    lam = c10 / c01
    if w10 != w01.scale(lam):
        raise MetricError("∧g10 is not proportional to ∧g01")
    return lam


def is_quantum_symmetric(p, m):
    return not wedge_g(p, m.g)


@dataclass
class ScanRow:
    lambda1: Scalar
    lambda2: Scalar
    wedge_zero: bool
    predicted: bool

    @property
    def agrees(self):
        return self.wedge_zero == self.predicted


def qsym_uniqueness_scan(p, g10, g01, samples, lam=None):
    """For each (λ1, λ2): is ∧g zero, and is λ2/λ1 = −λ?"""
    lam = qsym_lambda(p, g10, g01) if lam is None else lam
    rows = []
    for l1, l2 in samples:
        m = metric_family(g10, g01, l1, l2, p)
        l1, l2 = Scalar.coerce(l1), Scalar.coerce(l2)
        rows.append(ScanRow(l1, l2, is_quantum_symmetric(p, m), l2 / l1 == -lam))
    return rows


# ---------------------------------------------------------------------------
# Hermitian metrics
# ---------------------------------------------------------------------------

@dataclass
class HermitianMetric:
    """⟨ω, η̄⟩ = (ω, η*) on the module spanned by a dual basis."""

    preset: object
    metric: Metric
    basis: str
    h: list = field(default_factory=list)
    htilde: list = field(default_factory=list)

    def value(self, x, y):
        return self.metric.pair(x, self.preset.star(y))


def hermitian_matrices(p, m, basis):
    db = p.dual_bases[basis]
    h = [[m.pair(ei, p.star(ej)) for ej in db.forms] for ei in db.forms]
    etas = [apply_functional_right(m.g, f) for f in db.functionals]
    ht = [[f(p.star(eta)) for f in db.functionals] for eta in etas]
    return h, ht


def hermitian_from_real(p, m, require_real=True):
    """(H on Ω¹, H1 on Ω^{(1,0)}, H2 on Ω^{(0,1)}) from a real metric."""
    if require_real and not is_real(p, m).real:
        raise MetricError("Hermitian metrics need a real metric")
    out = []
    for basis in ("omega1", "omega10", "omega01"):
        h, ht = hermitian_matrices(p, m, basis)
        out.append(HermitianMetric(p, m, basis, h, ht))
    return tuple(out)


def metric_matrices(H):
    return H.h, H.htilde


def matrix_apply(p, X, fn):
    return [[fn(x) for x in row] for row in X]


def form_matrix_mul(A_mat, F_mat, B_mat=None):
    """A·F (and ·B): A, B with entries in the algebra, F with one-form entries."""
    out = mat_mul(A_mat, F_mat, lambda a, w: w.left_mul(a))
    if B_mat is not None:
        out = mat_mul(out, B_mat, lambda w, b: w.right_mul(b))
    return out


def hermitian_identity_failures(p, H, derivations=("delbar", "del")):
    """
    The six matrix identities and h̃ D(P) h = 0 for D = ∂̄ (and ∂).
    Returns {name: witness or None}.
    """
    h, ht = H.h, H.htilde
    P = p.projector(H.basis)
    star = lambda x: x.star()
    res = {}

    def chk(name, X):
        res[name] = None if mat_is_zero(X) else first_nonzero(X)

    chk("h htilde = P", mat_sub(mat_mul(h, ht), P))
    chk("htilde h = P†", mat_sub(mat_mul(ht, h), mat_dagger(P, star)))
    chk("h† = h", mat_sub(mat_dagger(h, star), h))
    chk("htilde† = htilde", mat_sub(mat_dagger(ht, star), ht))
    chk("htilde P = htilde", mat_sub(mat_mul(ht, P), ht))
    chk("P h = h", mat_sub(mat_mul(P, h), h))
    for D in derivations:
        DP = [[p.differential(D, x) for x in row] for row in P]
        X = form_matrix_mul(ht, DP, h)
        sym = "∂̄" if D == "delbar" else "∂"
        res[f"htilde {sym}(P) h = 0"] = None if mat_is_zero(X) else first_nonzero(X)
    return res


def sesquisymmetry_failure(p, H, forms=None):
    forms = default_test_forms(p, 2) if forms is None else forms
    for e in forms:
        for f in forms:
            if H.value(f, e).star() != H.value(e, f):
                return f"⟨f, ē⟩* ≠ ⟨e, f̄⟩ for e = {e}, f = {f}"
    return None


def metric_from_hermitian(p, H):
    """g := Σ_i ⋆⁻¹𝓗⁻¹(e_i) ⊗ e^i = Σ_{ij} (h̃_ij e^j)* ⊗ e^i on Ω¹."""
    db = p.dual_bases[H.basis]
    V11 = tensor(p.V1, p.V1)
    g = CotensorElement.zero(V11, p.A)
    for i, ei in enumerate(db.forms):
        eta = None
        for j, ej in enumerate(db.forms):
            if H.htilde[i][j]:
                t = ej.left_mul(H.htilde[i][j])
                eta = t if eta is None else eta + t
        if eta is not None:
            g = g + tensor_over_B(p.star(eta), ei)
    return g


def like_block_perturbations(p, g10, g01, lambda1=1, lambda2=1):
    """
    Structured perturbations off the family: pairing rescaled on one block,
    g extended into a like-bidegree summand, and a like-bidegree pairing.
    Returns (name, Metric) pairs, none of which should be a metric.
    """
    base = metric_family(g10, g01, lambda1, lambda2, p)
    out = []
    out.append(("pairing10 block doubled",
                Metric(p, base.g, g10.pairing.scale(Scalar.coerce(2) / base.lambda1)
                       + g01.pairing.scale(base.lambda2.inverse()))))
    out.append(("pairing01 block tripled",
                Metric(p, base.g, g10.pairing.scale(base.lambda1.inverse())
                       + g01.pairing.scale(Scalar.coerce(3) / base.lambda2))))
    e10, e01 = p.dual_bases["omega10"].forms[0], p.dual_bases["omega01"].forms[0]
    out.append(("g moved into (1,0)⊗(1,0)", Metric(p, base.g + tensor_over_B(e10, e10), base.pairing)))
    out.append(("g moved into (0,1)⊗(0,1)", Metric(p, base.g + tensor_over_B(e01, e01), base.pairing)))
    V11 = base.pairing.source
    row = list(base.pairing.matrix[0])
    for j, lab in enumerate(V11.basis):
        if p.label_bidegree[lab[:1]] == p.label_bidegree[lab[1:]] == (1, 0):
            row[j] = ONE
    out.append(("pairing extended to (1,0)⊗(1,0)", Metric(p, base.g, FiberMap(V11, base.pairing.target, [row]))))
    out.append(("g10 block rescaled only", Metric(p, g10.g.scale(base.lambda1 * 2) + g01.g.scale(base.lambda2),
                                                 base.pairing)))
    return out


__all__ = [
    "MetricError", "BasePair", "Metric", "HermitianMetric", "RealityResult", "ScanRow",
    "pair", "contract_left", "contract_right", "apply_functional_right", "base_metrics",
    "metric_family", "metric_axiom_failure", "support_failure", "dagger", "is_real",
    "qsym_lambda", "is_quantum_symmetric", "qsym_uniqueness_scan", "hermitian_from_real",
    "hermitian_matrices", "metric_matrices", "hermitian_identity_failures",
    "sesquisymmetry_failure", "metric_from_hermitian", "like_block_perturbations",
    "form_matrix_mul", "spanning_set",
]
