"""
Covariant differential calculi with complex structure, as validated data.

A :class:`CalculusPreset` bundles the algebras, the fiber comodules of the
form modules, and the tables that realize the calculus in the cotensor
model:

* ``tangent``: for each one-form label ``v`` an element ``X_v`` of U with
  ``db = Σ_v (X_v ▷ b) ⊗ v`` for ``b`` in B;
* ``exterior``: for each one-form label ``v`` a list of (two-form label,
  element of U) pairs with ``d(a ⊗ v) = Σ (Y ▷ a) ⊗ u`` on one-form
  coefficients;
* ``wedge``: a FiberMap ``V¹⊗V¹ → V²``;
* ``star``: conjugate-linear matrices on ``V¹`` and ``V²``;
* ``dual_bases`` with their Maurer-Cartan constants ``d(e^i)``.

Forms of degree 0 are AlgebraElements in B; forms of degree 1 and 2 are
CotensorElements over ``V¹`` and ``V²`` whose labels carry bidegrees.
The differential of a one-form is computed through the dual basis and the
Maurer-Cartan constants; the exterior table is an independent second route
used for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .hopf import AlgebraElement, ModuleAlgebraAction, is_coinvariant
from .report import Report
from .scalar import ONE, ZERO, Scalar, ScalarError
from .takeuchi import (
    ConstraintError,
    CotensorElement,
    DualFunctional,
    FiberComodule,
    FiberMap,
    constraint_violation,
    spanning_set,
    tensor,
    tensor_over_B,
)

Form = CotensorElement  # forms of positive degree; degree 0 forms are AlgebraElements


class CalculusError(ValueError):
    pass


@dataclass
class DualBasis:
    """Forms e^i and functionals e_i with m = Σ e_i(m) e^i."""

    name: str
    forms: list
    functionals: list

    @property
    def rank(self):
        return len(self.forms)

    def decompose(self, x):
        return [f(x) for f in self.functionals]

    def reconstruct(self, coeffs):
        out = CotensorElement.zero(self.forms[0].module, self.forms[0].A)
        for b, e in zip(coeffs, self.forms):
            if b:
                out = out + e.left_mul(b)
        return out


@dataclass
class LieData:
    """Data for the central-character certificate."""

    cartan: list
    varpi_alpha: int
    character: dict

    @property
    def cartan_det(self):
        return linalg.det(linalg.as_scalar_matrix(self.cartan))


@dataclass
class CalculusPreset:
    name: str
    A: object
    H: object
    U: object
    tangent_action: ModuleAlgebraAction
    translation_action: ModuleAlgebraAction
    B_generators: list
    fibers: dict
    V1: FiberComodule
    V2: FiberComodule
    tangent: dict
    exterior: dict
    wedge_map: FiberMap
    star_tables: dict
    dual_bases: dict
    maurer_cartan: dict
    lie: LieData
    samples: list = field(default_factory=list)
    degree_bound: int = 4
    raw: dict = field(default_factory=dict, repr=False)
    source: str = "<memory>"

    def __post_init__(self):
        self.label_bidegree = {}
        for f in self.fibers.values():
            for lab in f.basis:
                self.label_bidegree[lab] = tuple(f.bidegree)
        self._theta = {}

    def __hash__(self):
        return id(self)

    # -- fibers and labels ---------------------------------------------------

    def labels(self, bidegree):
        return [l for l, bd in self.label_bidegree.items() if bd == tuple(bidegree)]

    def fiber(self, bidegree):
        for f in self.fibers.values():
            if tuple(f.bidegree) == tuple(bidegree):
                return f
        raise KeyError(bidegree)

    def fiber_dims(self):
        """dim Φ(Ω^k) for k = 0, 1, 2."""
        return (1, self.V1.dim, self.V2.dim)

    def bidegree_part(self, x, bidegree):
        return x.restrict(self.labels(bidegree))

    def bidegrees_of(self, x):
        return sorted({self.label_bidegree[l] for l in x.coeffs})

    def in_B(self, b):
        return is_coinvariant(b)

    # -- differentials -------------------------------------------------------

    def _require_B(self, b):
        if not isinstance(b, AlgebraElement) or b.alg is not self.A:
            raise CalculusError("differential needs an element of A")
        if not self.in_B(b):
            raise CalculusError(f"{b} is not coinvariant")

    def differential(self, which, b):
        """d, ∂ (``"del"``) or ∂̄ (``"delbar"``) of an element of B."""
        self._require_B(b)
        want = {"d": None, "del": (1, 0), "delbar": (0, 1)}[which]
        out = {}
        for lab in self.V1.basis:
            if want is not None and self.label_bidegree[lab] != want:
                continue
            c = self.tangent_action.act(self.tangent[lab], b)
            if c:
                out[lab] = c
        return CotensorElement(self.V1, self.A, out)

    def d(self, b):
        return self.differential("d", b)

    def d_exterior(self, x):
        """d of a one-form through the exterior table (second route)."""
        out = CotensorElement.zero(self.V2, self.A)
        for lab, a in x.coeffs.items():
            for tgt, Y in self.exterior[lab]:
                c = self.tangent_action.act(Y, a)
                if c:
                    out = out + CotensorElement(self.V2, self.A, {tgt: c})
        return out

    def d_one_form(self, x, basis="omega1"):
        """d(Σ bᵢ eⁱ) = Σ dbᵢ ∧ eⁱ + Σ bᵢ d(eⁱ) using the stored constants."""
        db = self.dual_bases[basis]
        coeffs = self.left_decompose(x, basis)
        out = CotensorElement.zero(self.V2, self.A)
        for b, e, mc in zip(coeffs, db.forms, self.maurer_cartan[basis]):
            if not b:
                continue
            out = out + self.wedge(self.d(b), e) + mc.left_mul(b)
        return out

    def bidegree_of_one_form(self, x):
        bds = self.bidegrees_of(x)
        return bds[0] if len(bds) == 1 else None

    def partial(self, x, which):
        """
        ∂ or ∂̄ of a one-form of pure bidegree: the component of dx in
        bidegree raised by one in the first (∂) or second (∂̄) slot.
        """
        bd = self.bidegree_of_one_form(x)
        if bd is None:
            if not x:
                return CotensorElement.zero(self.V2, self.A)
            raise CalculusError("partial derivatives need a pure bidegree")
        tgt = (bd[0] + 1, bd[1]) if which == "del" else (bd[0], bd[1] + 1)
        return self.bidegree_part(self.d_one_form(x), tgt)

    # -- wedge, theta, star --------------------------------------------------

    def wedge(self, x, y):
        if isinstance(x, AlgebraElement):
            return y.left_mul(x) if isinstance(y, CotensorElement) else x * y
        if isinstance(y, AlgebraElement):
            return x.right_mul(y)
        if x.module is not self.V1 or y.module is not self.V1:
            raise CalculusError("wedge beyond total degree 2")
        return self.wedge_map.apply(tensor_over_B(x, y))

    def theta_map(self, side):
        """θ_l: V^{(1,1)} → V^{(0,1)}⊗V^{(1,0)} or θ_r: → V^{(1,0)}⊗V^{(0,1)}, into V¹⊗V¹."""
        hit = self._theta.get(side)
        if hit is not None:
            return hit
        first, second = ((0, 1), (1, 0)) if side == "l" else ((1, 0), (0, 1))
        src = [a + b for a in self.labels(first) for b in self.labels(second)]
        tgt = self.labels((1, 1))
        if len(src) != len(tgt):
            raise CalculusError(f"restricted wedge for theta_{side} is not square")
        W = [[self.wedge_map.entry(t, s) for s in src] for t in tgt]
        try:
            Winv = linalg.inverse(W) if W else []
        except ScalarError:
            raise CalculusError(f"restricted wedge for theta_{side} is not invertible") from None
        V11 = tensor(self.V1, self.V1)
        M = [[ZERO] * self.V2.dim for _ in range(V11.dim)]
        for i, s in enumerate(src):
            for j, t in enumerate(tgt):
                M[V11.index(s)][self.V2.index(t)] = Winv[i][j]
        fm = FiberMap(self.V2, V11, M)
        self._theta[side] = fm
        return fm

    def theta(self, side, x):
        return self.theta_map(side).apply(x)

    def star_matrix(self, module):
        if module is self.V1:
            return self.star_tables[1]
        if module is self.V2:
            return self.star_tables[2]
        raise CalculusError(f"no star table for {module.name}")

    def star(self, x):
        """(Σ a_k ⊗ v_k)* = Σ a_k* ⊗ J(v_k); on degree 0 the algebra star."""
        if isinstance(x, AlgebraElement):
            return x.star()
        J = self.star_matrix(x.module)
        V = x.module
        out = {}
        for lab, a in x.coeffs.items():
            k = V.index(lab)
            s = a.star()
            for i, tl in enumerate(V.basis):
                if J[i][k]:
                    term = s.scale(J[i][k])
                    out[tl] = out[tl] + term if tl in out else term
        return CotensorElement(V, self.A, out)

    # -- dual bases ----------------------------------------------------------

    def left_decompose(self, x, basis="omega1", check=True):
        db = self.dual_bases[basis]
        coeffs = db.decompose(x)
        if check and db.reconstruct(coeffs) != x:
            raise CalculusError(f"{x} is not reconstructed by the dual basis {basis}")
        return coeffs

    def projector(self, basis):
        """P_ij = ev(e^i ⊗ e_j) = e_j(e^i)."""
        db = self.dual_bases[basis]
        return [[f(e) for f in db.functionals] for e in db.forms]

    def spanning_one_forms(self, bidegree=None, degree=None):
        degree = self.degree_bound if degree is None else degree
        out = spanning_set(self.V1, self.A, degree)
        if bidegree is not None:
            out = [x for x in out if self.bidegrees_of(x) == [tuple(bidegree)]]
        return out

    def B_products(self, degree=2):
        """Products of B-generators with up to ``degree`` factors (1 included)."""
        out = [self.A.one()]
        layer = [self.A.one()]
        for _ in range(degree):
            layer = [x * g for x in layer for g in self.B_generators]
            out.extend(layer)
        return out


# ---------------------------------------------------------------------------
# matrices over A
# ---------------------------------------------------------------------------

def mat_mul(X, Y, mul=None):
    """Product of matrices with entries in a ring (AlgebraElements or forms)."""
    mul = mul or (lambda a, b: a * b)
    n, m = len(X), len(Y[0]) if Y else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for k in range(len(Y)):
                t = mul(X[i][k], Y[k][j])
                acc = t if acc is None else acc + t
            row.append(acc)
        out.append(row)
    return out


def mat_sub(X, Y):
    return [[a - b for a, b in zip(r, s)] for r, s in zip(X, Y)]


def mat_is_zero(X):
    return all(not x for row in X for x in row)


def mat_dagger(X, star):
    return [[star(X[j][i]) for j in range(len(X))] for i in range(len(X[0]))]


def first_nonzero(X):
    for i, row in enumerate(X):
        for j, x in enumerate(row):
            if x:
                return f"entry ({i}, {j}) = {x}"
    return None


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def _pairs(xs):
    return [(x, y) for x in xs for y in xs]


def validate_preset(p, degree_bound=None, include_algebra=True, confluence_bound=6,
                    hopf_degree=3):
    """
    Check every preset invariant; each check records a witness on failure.
    ``include_algebra`` adds confluence and Hopf-axiom checks of A, H, U.
    """
    from .hopf import confluence_report, hopf_axiom_failures, projection_failures

    bound = p.degree_bound if degree_bound is None else degree_bound
    rep = Report(f"validate {p.name}", degree_bound=bound)
    A = p.A

    if include_algebra:
        for alg in (p.A, p.H, p.U):
            def conf(alg=alg):
                r = confluence_report(alg, confluence_bound)
                return None if r.ok else f"critical pair at {alg.render_word(r.witness.word)}"
            rep.run(f"algebra.{alg.name}.confluence", conf)

            def axioms(alg=alg):
                f = hopf_axiom_failures(alg, hopf_degree)
                return None if not f else f"{f[0].check}: {f[0].witness}"
            rep.run(f"algebra.{alg.name}.hopf_axioms", axioms)

        def proj():
            f = projection_failures(p.A)
            return None if not f else f"{f[0].check}: {f[0].witness}"
        rep.run("algebra.projection", proj)

        for act in (p.tangent_action, p.translation_action):
            def act_ok(act=act):
                f = act.failures()
                return None if not f else f"{f[0].check}: {f[0].witness}"
            rep.run(f"action.{act.name}", act_ok)

    def fibers_ok():
        for f in p.fibers.values():
            bad = f.failures()
            if bad:
                return bad[0]
        return None
    rep.run("fibers.comodule_axioms", fibers_ok)

    def dims():
        got = p.fiber_dims()
        want = (1, 2, 1)
        return None if got == want else f"dimensions {got}, expected {want}"
    rep.run("fibers.dimensions", dims, detail={"dims": list(p.fiber_dims())})

    def B_ok():
        for g in p.B_generators:
            if not p.in_B(g):
                return f"{g} is not coinvariant"
            if not p.in_B(g.star()):
                return f"({g})* is not coinvariant"
        return None
    rep.run("subalgebra.coinvariant_generators", B_ok)

    gens = p.B_generators
    prods = p.B_products(2)

    def d_lands():
        for b in prods:
            x = p.d(b)
            bad = constraint_violation(x)
            if bad is not None:
                return f"d({b}) violates the constraint at {bad}"
        return None
    rep.run("calculus.d_covariant_target", d_lands)

    def leibniz():
        for b1, b2 in _pairs(gens):
            lhs = p.d(b1 * b2)
            rhs = p.d(b1).right_mul(b2) + p.d(b2).left_mul(b1)
            if lhs != rhs:
                return f"d(({b1})({b2}))"
        for b in gens:
            if p.d(b) != p.differential("del", b) + p.differential("delbar", b):
                return f"d ≠ ∂ + ∂̄ on {b}"
        if p.d(A.one()):
            return "d(1) ≠ 0"
        return None
    rep.run("calculus.leibniz", leibniz)

    def d_squared():
        for b in prods:
            x = p.d(b)
            r = p.d_one_form(x)
            if r:
                return f"d(d({b})) = {r}"
            r2 = p.d_exterior(x)
            if r2:
                return f"exterior d(d({b})) = {r2}"
        return None
    rep.run("calculus.d_squared", d_squared)

    def bigraded():
        for b in prods:
            db, dbb = p.differential("del", b), p.differential("delbar", b)
            if p.partial(db, "del") if db else False:
                return f"∂∂({b}) ≠ 0"
            if p.partial(dbb, "delbar") if dbb else False:
                return f"∂̄∂̄({b}) ≠ 0"
            s = CotensorElement.zero(p.V2, A)
            if db:
                s = s + p.partial(db, "delbar")
            if dbb:
                s = s + p.partial(dbb, "del")
            if s:
                return f"(∂∂̄ + ∂̄∂)({b}) = {s}"
        return None
    rep.run("calculus.bigrading", bigraded)

    def star_compat():
        for b in prods:
            lhs = p.star(p.differential("del", b))
            rhs = p.differential("delbar", b.star())
            if lhs != rhs:
                return f"(∂({b}))* ≠ ∂̄(({b})*)"
        return None
    rep.run("calculus.star_compatibility", star_compat)

    def star_fibers():
        for deg, V in ((1, p.V1), (2, p.V2)):
            J = p.star_tables[deg]
            Jbar = [[x.conj() for x in row] for row in J]
            if linalg.matmul(J, Jbar) != linalg.identity(V.dim):
                return f"star on degree {deg} fiber is not involutive"
            for k, lab in enumerate(V.basis):
                bd = p.label_bidegree[lab]
                for i, tl in enumerate(V.basis):
                    if J[i][k] and p.label_bidegree[tl] != (bd[1], bd[0]):
                        return f"star sends {lab} out of bidegree {(bd[1], bd[0])}"
        return None
    rep.run("calculus.star_fibers", star_fibers)

    ones = p.spanning_one_forms(degree=bound)

    def star_wedge():
        for x in ones[:12]:
            for y in ones[:12]:
                lhs = p.star(p.wedge(x, y))
                rhs = -p.wedge(p.star(y), p.star(x))
                if lhs != rhs:
                    return f"(x∧y)* ≠ −y*∧x* for x = {x}, y = {y}"
        return None
    rep.run("calculus.star_wedge", star_wedge)

    def wedge_colinear():
        bad = p.wedge_map.colinearity_failures()
        return None if not bad else f"wedge not colinear at {bad[0]}"
    rep.run("calculus.wedge_colinear", wedge_colinear)

    def factorizable():
        for side in ("l", "r"):
            th = p.theta_map(side)
            # ∧∘θ = id on V^{(1,1)}
            comp = p.wedge_map.compose(th)
            for t in p.labels((1, 1)):
                for s in p.V2.basis:
                    want = ONE if s == t else ZERO
                    if p.label_bidegree[s] == (1, 1) and comp.entry(s, t) != want:
                        return f"∧∘θ_{side} ≠ id at {t}"
        two = spanning_set(p.V2, A, bound)
        for side in ("l", "r"):
            for x in two:
                if p.bidegrees_of(x) != [(1, 1)]:
                    continue
                if p.wedge_map.apply(p.theta(side, x)) != x:
                    return f"∧∘θ_{side}({x}) ≠ {x}"
        ten = spanning_set(tensor(p.V1, p.V1), A, bound)
        for side, first in (("l", (0, 1)), ("r", (1, 0))):
            for x in ten:
                lab = next(iter(x.coeffs))
                if (p.label_bidegree[lab[:1]], p.label_bidegree[lab[1:]]) != \
                        (first, (first[1], first[0])):
                    continue
                if p.theta(side, p.wedge_map.apply(x)) != x:
                    return f"θ_{side}∘∧({x}) ≠ {x}"
        return None
    rep.run("calculus.factorizable", factorizable)

    def dual_bases():
        for name, db in p.dual_bases.items():
            for e in db.forms:
                bad = constraint_violation(e)
                if bad is not None:
                    return f"{name}: form {e} violates the constraint"
            labs = {l for e in db.forms for l in e.coeffs}
            span = [x for x in ones if set(x.coeffs) <= labs] if labs else []
            for x in span:
                for f in db.functionals:
                    v = f(x)
                    if not p.in_B(v):
                        return f"{name}: functional value {v} on {x} is not in B"
                if db.reconstruct(db.decompose(x)) != x:
                    return f"{name}: reconstruction fails on {x}"
        return None
    rep.run("calculus.dual_basis_reconstruction", dual_bases)

    def projectors():
        for name in p.dual_bases:
            P = p.projector(name)
            R = mat_sub(mat_mul(P, P), P)
            if not mat_is_zero(R):
                return f"{name}: P² ≠ P, {first_nonzero(R)}"
            for row in P:
                for x in row:
                    if not p.in_B(x):
                        return f"{name}: projector entry {x} not in B"
        return None
    rep.run("calculus.projector_idempotent", projectors)

    def maurer_cartan():
        for name, db in p.dual_bases.items():
            for i, (e, mc) in enumerate(zip(db.forms, p.maurer_cartan[name])):
                direct = p.d_exterior(e)
                if direct != mc:
                    return f"{name}[{i}]: stored d(e^i) = {mc}, exterior route gives {direct}"
        return None
    rep.run("calculus.maurer_cartan", maurer_cartan)

    def exterior_leibniz():
        for x in ones[:16]:
            for b in gens:
                lhs = p.d_exterior(x.left_mul(b))
                rhs = p.wedge(p.d(b), x) + p.d_exterior(x).left_mul(b)
                if lhs != rhs:
                    return f"d(b·ω) ≠ db∧ω + b dω for b = {b}, ω = {x}"
                lhs = p.d_exterior(x.right_mul(b))
                rhs = p.d_exterior(x).right_mul(b) - p.wedge(x, p.d(b))
                if lhs != rhs:
                    return f"d(ω·b) ≠ dω·b − ω∧db for b = {b}, ω = {x}"
        return None
    rep.run("calculus.exterior_leibniz", exterior_leibniz)

    def two_routes():
        for x in ones:
            a, b = p.d_one_form(x), p.d_exterior(x)
            if a != b:
                return f"d({x}): dual-basis route {a} vs exterior route {b}"
        return None
    rep.run("calculus.d_two_routes", two_routes)

    return rep


__all__ = [
    "Form", "CalculusError", "CalculusPreset", "DualBasis", "LieData", "validate_preset",
    "mat_mul", "mat_sub", "mat_is_zero", "mat_dagger", "first_nonzero", "DualFunctional",
    "ConstraintError",
]
