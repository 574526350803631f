"""
Relative Hopf modules in the cotensor model.

By Takeuchi's equivalence a relative Hopf module ``M`` over ``B = A^{co H}``
is recovered from its fiber ``V = M/B⁺M`` as ``A □_H V``: families of
``A``-coefficients indexed by a basis of ``V`` that satisfy the colinearity
constraint ``(id ⊗ π)Δ(a_k) = Σ_j a_j ⊗ C_kj`` where ``C`` is the coaction
matrix of ``V``.  Both ``B``-actions multiply coefficients, and the tensor
product over ``B`` multiplies coefficients of the two factors, so every
bimodule in the engine is a :class:`CotensorElement` over some
:class:`FiberComodule`, and every covariant bimodule map is a
:class:`FiberMap` (a Scalar matrix between fibers).

Fiber labels are tuples of strings, one entry per tensor factor; the unit
comodule has the single label ``()``.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass

from . import linalg
from .hopf import AlgebraElement, TensorElement, is_coinvariant, normal_monomials
from .scalar import ONE, ZERO, Scalar, ScalarError


class ConstraintError(ValueError):
    """An element violates the cotensor constraint of its fiber."""


# ---------------------------------------------------------------------------
# comodules
# ---------------------------------------------------------------------------

_registry_lock = threading.Lock()
_tensor_registry = {}


class FiberComodule:
    """
    A finite-dimensional left ``H``-comodule with coaction
    ``δ(v_j) = Σ_k C[k][j] ⊗ v_k``.

    Atomic comodules have one-entry labels; tensor products are built with
    :func:`tensor` and keep their factor list.
    """

    def __init__(self, name, H, basis, coaction, factors=None, bidegree=None):
        self.name = name
        self.H = H
        self.basis = tuple(basis)
        self.coaction = coaction
        self.factors = (self,) if factors is None else tuple(factors)
        self.bidegree = bidegree
        self._pos = {l: k for k, l in enumerate(self.basis)}
        if len(self._pos) != len(self.basis):
            raise ValueError(f"{name}: repeated basis labels")
        self._grades = self._diagonal_grades()

    def __repr__(self):
        return f"FiberComodule({self.name}, dim={self.dim})"

    @property
    def dim(self):
        return len(self.basis)

    def index(self, label):
        return self._pos[label]

    def __contains__(self, label):
        return label in self._pos

    def _diagonal_grades(self):
        """For a diagonal coaction with monomial entries, the H-word per label."""
        grades = {}
        for j, lab in enumerate(self.basis):
            for k in range(self.dim):
                if k != j and self.coaction[k][j]:
                    return None
            entry = self.coaction[j][j]
            if len(entry.terms) != 1:
                return None
            (w, c), = entry.terms.items()
            if not c.is_one():
                return None
            grades[lab] = w
        return grades

    @property
    def grades(self):
        return self._grades

    def grade_of(self, label):
        return None if self._grades is None else self._grades[label]

    def failures(self):
        """Counit and coassociativity of the coaction matrix."""
        H, n = self.H, self.dim
        out = []
        for k in range(n):
            for j in range(n):
                if H.counit(self.coaction[k][j]) != (ONE if k == j else ZERO):
                    out.append(f"{self.name}: counit fails at ({k}, {j})")
                lhs = H.coproduct(self.coaction[k][j])
                rhs = TensorElement((H, H), {})
                for l in range(n):
                    if self.coaction[k][l] and self.coaction[l][j]:
                        rhs = rhs + TensorElement.pure(self.coaction[k][l], self.coaction[l][j])
                if lhs != rhs:
                    out.append(f"{self.name}: coassociativity fails at ({k}, {j})")
        return out


def unit_comodule(H):
    key = ("unit", id(H))
    with _registry_lock:
        hit = _tensor_registry.get(key)
        if hit is None:
            hit = FiberComodule("C", H, [()], [[H.one()]], factors=())
            _tensor_registry[key] = hit
    return hit


def tensor(*mods):
    """Tensor product of comodules (associative, unit-aware, cached)."""
    factors = []
    for m in mods:
        factors.extend(m.factors)
    H = mods[0].H
    if not factors:
        return unit_comodule(H)
    if len(factors) == 1:
        return factors[0]
    key = tuple(id(f) for f in factors)
    with _registry_lock:
        hit = _tensor_registry.get(key)
    if hit is not None:
        return hit
    basis = [sum(labs, ()) for labs in itertools.product(*[f.basis for f in factors])]
    idx = [list(itertools.product(*[range(f.dim) for f in factors]))][0]
    n = len(basis)
    coaction = [[None] * n for _ in range(n)]
    for a, ka in enumerate(idx):
        for b, kb in enumerate(idx):
            x = H.one()
            for f, i, j in zip(factors, ka, kb):
                x = x * f.coaction[i][j]
                if not x:
                    break
            coaction[a][b] = x
    mod = FiberComodule("⊗".join(f.name for f in factors), H, basis, coaction, factors=factors)
    with _registry_lock:
        _tensor_registry.setdefault(key, mod)
        return _tensor_registry[key]


def direct_sum(name, *mods, bidegree=None):
    """Direct sum of atomic comodules (labels must be distinct)."""
    H = mods[0].H
    basis = [l for m in mods for l in m.basis]
    n = len(basis)
    coaction = [[H.zero()] * n for _ in range(n)]
    off = 0
    for m in mods:
        for k in range(m.dim):
            for j in range(m.dim):
                coaction[off + k][off + j] = m.coaction[k][j]
        off += m.dim
    out = FiberComodule(name, H, basis, coaction, bidegree=bidegree)
    out.summands = tuple(mods)
    return out


def bar_label(label):
    return tuple(s[:-1] if s.endswith("~") else s + "~" for s in label)


def conjugate(V):
    """The conjugate comodule: labels barred, coaction entries starred."""
    if len(V.factors) != 1:
        return tensor(*[conjugate(f) for f in reversed(V.factors)])
    cached = getattr(V, "_conjugate", None)
    if cached is not None:
        return cached
    H = V.H
    coaction = [[H.star(x) for x in row] for row in V.coaction]
    name = V.name[:-1] if V.name.endswith("~") else V.name + "~"
    bideg = None if V.bidegree is None else (V.bidegree[1], V.bidegree[0])
    W = FiberComodule(name, H, [bar_label(l) for l in V.basis], coaction, bidegree=bideg)
    V._conjugate, W._conjugate = W, V
    return W


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

class CotensorElement:
    """
    An element of ``A □_H V``: a map from fiber labels to coefficients in A.
    Zero coefficients are not stored.
    """

    __slots__ = ("module", "A", "coeffs")

    def __init__(self, module, A, coeffs):
        self.module = module
        self.A = A
        self.coeffs = {l: c for l, c in coeffs.items() if c}

    @classmethod
    def zero(cls, module, A):
        return cls(module, A, {})

    @classmethod
    def basis_vector(cls, module, A, label, coeff=None):
        return cls(module, A, {label: A.one() if coeff is None else coeff})

    def coeff(self, label):
        return self.coeffs.get(label) or self.A.zero()

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _check(self, other):
        if other.module is not self.module:
            raise TypeError(f"fiber mismatch: {self.module.name} vs {other.module.name}")

    def __eq__(self, other):
        if not isinstance(other, CotensorElement):
            return NotImplemented
        return self.module is other.module and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for l, c in other.coeffs.items():
            out[l] = out[l] + c if l in out else c
        return CotensorElement(self.module, self.A, out)

    def __neg__(self):
        return CotensorElement(self.module, self.A, {l: -c for l, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = Scalar.coerce(s)
        return CotensorElement(self.module, self.A, {l: c.scale(s) for l, c in self.coeffs.items()})

    def left_mul(self, b):
        """b · x (b an AlgebraElement of A)."""
        return CotensorElement(self.module, self.A, {l: b * c for l, c in self.coeffs.items()})

    def right_mul(self, b):
        """x · b."""
        return CotensorElement(self.module, self.A, {l: c * b for l, c in self.coeffs.items()})

    def restrict(self, labels):
        keep = set(labels)
        return CotensorElement(self.module, self.A, {l: c for l, c in self.coeffs.items() if l in keep})

    def max_degree(self):
        return max((c.degree() for c in self.coeffs.values()), default=-1)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for l in self.module.basis:
            if l in self.coeffs:
                lab = "⊗".join(l) if l else "1"
                parts.append(f"({self.coeffs[l]})·[{lab}]")
        return " + ".join(parts)

    __repr__ = __str__


def constraint_violation(x):
    """
    Return None if x satisfies the cotensor constraint, else the offending
    label.  Diagonal monomial fibers use the per-word grade comparison.
    """
    V, A = x.module, x.A
    grades = V.grades
    if grades is not None:
        for lab, c in x.coeffs.items():
            g = grades[lab]
            for w in c.terms:
                co = A.coact_word(w)
                if len(co.terms) != 1 or (w, g) not in co.terms or not co.terms[(w, g)].is_one():
                    return lab
        return None
    from .hopf import coact_right
    H = V.H
    for k, lab in enumerate(V.basis):
        lhs = coact_right(x.coeff(lab))
        rhs = TensorElement((A, H), {})
        for j, lj in enumerate(V.basis):
            if V.coaction[k][j] and lj in x.coeffs:
                rhs = rhs + TensorElement.pure(x.coeffs[lj], V.coaction[k][j])
        if lhs != rhs:
            return lab
    return None


def spanning_set(V, A, degree):
    """
    Monomial elements ``w ⊗ v`` with the grade of ``w`` matching ``v``, for
    coefficient degree up to ``degree``.  Needs a diagonal monomial fiber.
    """
    grades = V.grades
    if grades is None:
        raise ValueError(f"{V.name}: spanning sets need a diagonal monomial coaction")
    mons = normal_monomials(A, degree)
    out = []
    for lab in V.basis:
        g = grades[lab]
        for w in mons:
            if A.coact_word(w).terms == {(w, g): ONE}:
                out.append(CotensorElement(V, A, {lab: AlgebraElement(A, {w: ONE})}))
    return out


def satisfies_constraint(x):
    return constraint_violation(x) is None


def make_element(module, A, coeffs, check=True):
    x = CotensorElement(module, A, coeffs)
    if check:
        bad = constraint_violation(x)
        if bad is not None:
            raise ConstraintError(f"coefficient at {bad} violates the constraint of {module.name}")
    return x


def fiber_project(x, check=True):
    """[x] ∈ V, computed as the counit applied to every coefficient."""
    if check and constraint_violation(x) is not None:
        raise ConstraintError(f"element is not in A □ {x.module.name}")
    A = x.A
    return [A.counit(x.coeff(l)) for l in x.module.basis]


def lift_vector(module, A, vec):
    """The element 1 ⊗ v for a vector with coinvariant grade (trivial fibers)."""
    return CotensorElement(module, A, {l: A.scalar(c) for l, c in zip(module.basis, vec) if c})


def tensor_over_B(*xs):
    """(a⊗v) ⊗_B (a'⊗w) ↦ aa' ⊗ (v⊗w), extended to several factors."""
    A = xs[0].A
    mod = tensor(*[x.module for x in xs])
    out = {(): A.one()}
    for x in xs:
        nxt = {}
        for l0, c0 in out.items():
            for l1, c1 in x.coeffs.items():
                c = c0 * c1
                if c:
                    key = l0 + l1
                    nxt[key] = nxt[key] + c if key in nxt else c
        out = nxt
    return CotensorElement(mod, A, out)


def conjugate_elem(x):
    """x̄: coefficients starred, labels barred."""
    V = conjugate(x.module)
    rev = len(x.module.factors) > 1
    out = {}
    for l, c in x.coeffs.items():
        if rev:
            # conjugate of a tensor product reverses the factor order
            parts, pos = [], 0
            for f in x.module.factors:
                n = len(f.basis[0]) if f.basis else 1
                parts.append(l[pos:pos + n])
                pos += n
            lab = sum((bar_label(p) for p in reversed(parts)), ())
        else:
            lab = bar_label(l)
        out[lab] = c.star()
    return CotensorElement(V, x.A, out)


def unit_U(x):
    """
    m ↦ m₍₋₁₎ ⊗ [m₍₀₎], computed from the coproduct of each coefficient and
    the counit on the second leg; lands back in the cotensor model.
    """
    A = x.A
    out = {}
    for l, c in x.coeffs.items():
        acc = A.zero()
        for (u, v), s in A.coproduct(c).terms.items():
            e = A.counit_word(v)
            if e:
                acc = acc + A.word_element(u).scale(s * e)
        out[l] = acc
    return CotensorElement(x.module, A, out)


def unit_U_inverse(t, lift):
    """
    Σ a_k ⊗ [m_k] ↦ Σ a_k S((m_k)₍₋₁₎)(m_k)₍₀₎.  ``t`` is an element of
    ``A ⊗ V`` given as a CotensorElement, and ``lift(label)`` returns a
    representative m with fiber projection equal to the basis vector.
    """
    A = t.A
    acc = CotensorElement.zero(t.module, A)
    for lab, a in t.coeffs.items():
        m = lift(lab)
        for l2, c in m.coeffs.items():
            coef = A.zero()
            for (u, v), s in A.coproduct(c).terms.items():
                coef = coef + (a * A.antipode_word(u) * A.word_element(v)).scale(s)
            acc = acc + CotensorElement(t.module, A, {l2: coef})
    return acc


def induced_right_action(x, b):
    """m·b := m₍₋₂₎ b S(m₍₋₁₎) m₍₀₎ for a cotensor element m and b ∈ B."""
    A = x.A
    out = {}
    for l, c in x.coeffs.items():
        acc = A.zero()
        for (u, v), s in A.coproduct(c).terms.items():
            for (v1, v2), s2 in A.coproduct_word(v).terms.items():
                acc = acc + (A.word_element(u) * b * A.antipode_word(v1)
                             * A.word_element(v2)).scale(s * s2)
        out[l] = acc
    return CotensorElement(x.module, A, out)


# ---------------------------------------------------------------------------
# fiber maps
# ---------------------------------------------------------------------------

class FiberMap:
    """A Scalar matrix between fibers: ``matrix[i][j]`` maps source j to target i."""

    def __init__(self, source, target, matrix):
        self.source, self.target = source, target
        self.matrix = [[Scalar.coerce(x) for x in row] for row in matrix]
        if len(self.matrix) != target.dim or any(len(r) != source.dim for r in self.matrix):
            raise ValueError(f"matrix shape does not match {source.name} -> {target.name}")

    @classmethod
    def identity(cls, V):
        return cls(V, V, linalg.identity(V.dim))

    @classmethod
    def zero(cls, V, W):
        return cls(V, W, linalg.zeros(W.dim, V.dim))

    def __repr__(self):
        return f"FiberMap({self.source.name} -> {self.target.name})"

    def entry(self, tgt_label, src_label):
        return self.matrix[self.target.index(tgt_label)][self.source.index(src_label)]

    def is_zero(self):
        return all(not x for row in self.matrix for x in row)

    def __eq__(self, other):
        return (self.source is other.source and self.target is other.target
                and self.matrix == other.matrix)

    def __add__(self, other):
        return FiberMap(self.source, self.target,
                        [[x + y for x, y in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def scale(self, c):
        c = Scalar.coerce(c)
        return FiberMap(self.source, self.target, [[x * c for x in r] for r in self.matrix])

    def compose(self, other):
        """self ∘ other."""
        return FiberMap(other.source, self.target, linalg.matmul(self.matrix, other.matrix))

    def tensor(self, other):
        src, tgt = tensor(self.source, other.source), tensor(self.target, other.target)
        m = [[a * b for a in ra for b in rb] for ra in self.matrix for rb in other.matrix]
        # rows are (i, i') and columns (j, j') in product order
        rows = []
        for i in range(self.target.dim):
            for i2 in range(other.target.dim):
                rows.append([self.matrix[i][j] * other.matrix[i2][j2]
                             for j in range(self.source.dim) for j2 in range(other.source.dim)])
        del m
        return FiberMap(src, tgt, rows)

    def colinearity_failures(self):
        """Positions where δ_W∘T ≠ (id⊗T)∘δ_V."""
        V, W, T, H = self.source, self.target, self.matrix, self.source.H
        bad = []
        for k in range(W.dim):
            for j in range(V.dim):
                lhs = H.zero()
                for i in range(W.dim):
                    if T[i][j]:
                        lhs = lhs + W.coaction[k][i].scale(T[i][j])
                rhs = H.zero()
                for l in range(V.dim):
                    if T[k][l]:
                        rhs = rhs + V.coaction[l][j].scale(T[k][l])
                if lhs != rhs:
                    bad.append((W.basis[k], V.basis[j]))
        return bad

    def is_colinear(self):
        return not self.colinearity_failures()

    def apply(self, x, offset=0):
        """
        Apply to the tensor factors of x starting at factor ``offset``; the
        other factors are untouched (B-bilinearity makes this well defined).
        """
        A = x.A
        src_factors = self.source.factors
        nf = len(src_factors)
        xf = x.module.factors
        if tuple(xf[offset:offset + nf]) != tuple(src_factors):
            raise TypeError(f"{self} cannot act on {x.module.name} at factor {offset}")
        parts = list(xf[:offset]) + list(self.target.factors) + list(xf[offset + nf:])
        mod = tensor(*parts) if parts else unit_comodule(x.module.H)
        out = {}
        for lab, c in x.coeffs.items():
            pre, mid, post = lab[:offset], lab[offset:offset + nf], lab[offset + nf:]
            j = self.source.index(mid)
            for i, tl in enumerate(self.target.basis):
                s = self.matrix[i][j]
                if s:
                    key = pre + tl + post
                    term = c.scale(s)
                    out[key] = out[key] + term if key in out else term
        return CotensorElement(mod, A, out)


def apply_fiber_map(fmap, x, offset=0):
    return fmap.apply(x, offset)


# ---------------------------------------------------------------------------
# linear solvers over the fibers
# ---------------------------------------------------------------------------

def _expand_equations(entries, nunk):
    """
    entries: list of equations, each a list of (unknown index, H-element
    coefficient) pairs meaning Σ coef·x_idx = 0 in H.  Returns scalar rows.
    """
    rows = []
    for eq in entries:
        words = {}
        for idx, el in eq:
            for w, c in el.terms.items():
                words.setdefault(w, {})
                words[w][idx] = words[w].get(idx, ZERO) + c
        for w in sorted(words, key=lambda w: (len(w), w)):
            row = [ZERO] * nunk
            for idx, c in words[w].items():
                row[idx] = c
            if any(row):
                rows.append(row)
    return rows


def hom_space(V, W):
    """A basis of the colinear maps V → W, as FiberMaps."""
    nV, nW = V.dim, W.dim
    nunk = nV * nW

    def u(i, j):
        return i * nV + j

    eqs = []
    for k in range(nW):
        for j in range(nV):
            eq = []
            for i in range(nW):
                if W.coaction[k][i]:
                    eq.append((u(i, j), W.coaction[k][i]))
            for l in range(nV):
                if V.coaction[l][j]:
                    eq.append((u(k, l), -V.coaction[l][j]))
            eqs.append(eq)
    rows = _expand_equations(eqs, nunk)
    basis = linalg.nullspace(rows, nunk) if nunk else []
    return [FiberMap(V, W, [[vec[u(i, j)] for j in range(nV)] for i in range(nW)]) for vec in basis]


@dataclass
class InnerProduct:
    """Hermitian gram matrix G[k][l] = ⟨v_k, v_l⟩ on a fiber."""

    on: FiberComodule
    gram: list

    def value(self, v, w):
        """⟨v, w⟩ for coefficient vectors (linear in v, conjugate-linear in w)."""
        out = ZERO
        for k, x in enumerate(v):
            if x:
                for l, y in enumerate(w):
                    if y and self.gram[k][l]:
                        out = out + x * self.gram[k][l] * y.conj()
        return out

    def invariance_residual(self):
        """Σ C_kj C*_lm G_kl − G_jm·1 for all (j, m); all zero when invariant."""
        V, H, G = self.on, self.on.H, self.gram
        out = []
        for j in range(V.dim):
            for m in range(V.dim):
                acc = H.scalar(-G[j][m])
                for k in range(V.dim):
                    for l in range(V.dim):
                        if G[k][l] and V.coaction[k][j] and V.coaction[l][m]:
                            acc = acc + (V.coaction[k][j] * H.star(V.coaction[l][m])).scale(G[k][l])
                out.append(acc)
        return out

    def is_invariant(self):
        return all(not r for r in self.invariance_residual())

    def is_hermitian(self):
        G = self.gram
        return all(G[k][l] == G[l][k].conj() for k in range(len(G)) for l in range(len(G)))

    def is_positive_at(self, q0):
        G = self.gram
        n = len(G)
        for k in range(1, n + 1):
            sub = [[G[i][j] for j in range(k)] for i in range(k)]
            val = linalg.det(sub).eval(q0)
            if val.b != 0 or val.real <= 0:
                return False
        return True


def solve_invariant_inner_product(V, q0s=(), normalize_at=0):
    """
    Solve the invariance system for a Hermitian gram matrix, normalized so
    that basis vector ``normalize_at`` has norm 1, and check positivity at
    each sample value of q.
    """
    n = V.dim
    if n == 0:
        return InnerProduct(V, [])
    H = V.H
    nunk = n * n

    def u(k, l):
        return k * n + l

    eqs = []
    for j in range(n):
        for m in range(n):
            eq = [(u(j, m), -H.one())]
            for k in range(n):
                for l in range(n):
                    if V.coaction[k][j] and V.coaction[l][m]:
                        eq.append((u(k, l), V.coaction[k][j] * H.star(V.coaction[l][m])))
            eqs.append(eq)
    rows = _expand_equations(eqs, nunk)
    sols = linalg.nullspace(rows, nunk)
    herm = []
    for s in sols:
        S = [[s[u(k, l)] for l in range(n)] for k in range(n)]
        St = linalg.conj_transpose(S)
        herm.append([[S[k][l] + St[k][l] for l in range(n)] for k in range(n)])
        herm.append([[Scalar.i() * (S[k][l] - St[k][l]) for l in range(n)] for k in range(n)])
    flat = [[M[k][l] for k in range(n) for l in range(n)] for M in herm]
    red, _ = linalg.rref(flat, nunk) if flat else ([], [])
    if not red:
        raise ScalarError(f"{V.name}: no invariant inner product")
    G = [[ZERO] * n for _ in range(n)]
    for row in red:
        for k in range(n):
            for l in range(n):
                G[k][l] = G[k][l] + row[u(k, l)]
    norm = G[normalize_at][normalize_at]
    if not norm:
        raise ScalarError(f"{V.name}: designated vector has zero norm")
    G = [[x / norm for x in row] for row in G]
    ip = InnerProduct(V, G)
    for q0 in q0s:
        if not ip.is_positive_at(q0):
            raise ScalarError(f"{V.name}: inner product not positive at q = {q0}")
    return ip


@dataclass
class DualPair:
    """Evaluation V⊗V̄ → C and coevaluation C → V̄⊗V."""

    V: FiberComodule
    ev: FiberMap
    coev: FiberMap

    def snake_residuals(self):
        """(ev⊗id)(id⊗coev) − id on V and (id⊗ev)(coev⊗id) − id on V̄."""
        V, ev, coev = self.V, self.ev, self.coev
        Vb = conjugate(V)
        n = V.dim
        out = []
        # matrices: ev[0][(k,l)] with k in V, l in V̄; coev[(l,m)][0] with l in V̄, m in V
        E = [[ev.matrix[0][k * n + l] for l in range(n)] for k in range(n)]
        Cm = [[coev.matrix[l * n + m][0] for m in range(n)] for l in range(n)]
        first = linalg.matmul(E, Cm)
        second = linalg.matmul(Cm, E)
        I = linalg.identity(n)
        for M in (first, second):
            for k in range(n):
                for m in range(n):
                    r = M[k][m] - I[k][m]
                    if r:
                        out.append(r)
        del Vb
        return out

    def twisted(self, tau):
        """ev_τ = ev∘(τ⁻¹⊗id), coev_τ = (id⊗τ)∘coev for τ ∈ Aut(V)."""
        Vb = conjugate(self.V)
        tinv = FiberMap(self.V, self.V, linalg.inverse(tau.matrix))
        ev = self.ev.compose(tinv.tensor(FiberMap.identity(Vb)))
        coev = FiberMap.identity(Vb).tensor(tau).compose(self.coev)
        return DualPair(self.V, ev, coev)


def dual_pairing_from_inner(V, ip):
    """ev(v_k ⊗ v̄_l) = ⟨v_k, v_l⟩ and coev(1) = Σ (G⁻¹)_lm v̄_l ⊗ v_m."""
    n = V.dim
    Vb = conjugate(V)
    C = unit_comodule(V.H)
    G = ip.gram
    M = linalg.inverse(G)
    ev = FiberMap(tensor(V, Vb), C, [[G[k][l] for k in range(n) for l in range(n)]])
    coev = FiberMap(C, tensor(Vb, V), [[M[l][m]] for l in range(n) for m in range(n)])
    return DualPair(V, ev, coev)


# ---------------------------------------------------------------------------
# left duals: functionals m ↦ Σ_k m_k x_k
# ---------------------------------------------------------------------------

class DualFunctional:
    """
    A left B-linear functional on ``A □ V`` given by coefficients ``x_k``:
    ``f(Σ a_k ⊗ v_k) = Σ a_k x_k``.  Right multiplication by B acts on the
    coefficients: ``(f·b)(m) = f(m) b``.
    """

    __slots__ = ("module", "A", "coeffs")

    def __init__(self, module, A, coeffs):
        self.module, self.A = module, A
        self.coeffs = {l: c for l, c in coeffs.items() if c}

    def __call__(self, x):
        out = self.A.zero()
        for l, c in x.coeffs.items():
            f = self.coeffs.get(l)
            if f is not None:
                out = out + c * f
        return out

    def right_mul(self, b):
        return DualFunctional(self.module, self.A, {l: c * b for l, c in self.coeffs.items()})

    def __add__(self, other):
        out = dict(self.coeffs)
        for l, c in other.coeffs.items():
            out[l] = out[l] + c if l in out else c
        return DualFunctional(self.module, self.A, out)

    def __eq__(self, other):
        return self.module is other.module and self.coeffs == other.coeffs

    def __str__(self):
        return " + ".join(f"[{'⊗'.join(l)}]*·({c})" for l, c in self.coeffs.items()) or "0"


def functional_values_in_B(f, xs):
    """True if f(x) is coinvariant for every x in xs."""
    return all(is_coinvariant(f(x)) for x in xs)


__all__ = [
    "ConstraintError", "FiberComodule", "CotensorElement", "FiberMap", "InnerProduct",
    "DualPair", "DualFunctional", "unit_comodule", "tensor", "direct_sum", "conjugate",
    "conjugate_elem", "constraint_violation", "satisfies_constraint", "make_element",
    "fiber_project", "tensor_over_B", "unit_U", "unit_U_inverse", "induced_right_action",
    "hom_space", "solve_invariant_inner_product", "spanning_set", "dual_pairing_from_inner", "apply_fiber_map",
    "AlgebraElement",
]
