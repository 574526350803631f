"""
Presented Hopf ``*``-algebras with rewriting normal forms.

A :class:`HopfPresentation` carries an ordered generator list, a rewrite
system compatible with the degree-lexicographic word order, and tables for
the coproduct, counit, antipode and ``*``.  Elements are
:class:`AlgebraElement` objects: finite maps from irreducible words to
:class:`~qhs.scalar.Scalar` coefficients.

Words are tuples of generator indices.  Normal forms are computed by
appending one letter at a time to an already irreducible prefix; only rules
whose left side is a suffix of the new word can fire, which keeps the
search local.  Results are memoized per presentation.

Confluence is checked, not assumed: :func:`confluence_report` enumerates
critical pairs (overlaps and inclusions of left-hand sides) up to a degree
bound and compares the normal forms of both one-step reducts.

The module also houses :class:`ModuleAlgebraAction`, the action of an
enveloping-type Hopf algebra on another presentation via generator tables
extended by the module-algebra law, and :func:`coact_right`, the right
coaction ``(id ⊗ π)Δ`` onto a quotient Hopf algebra.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

from .scalar import ONE, ZERO, ExpressionParser, ParseError, Scalar

DEFAULT_STEP_BUDGET = 10 ** 6


class RewriteError(RuntimeError):
    """Raised when a normal form exceeds the step budget."""


class PresentationError(ValueError):
    """Malformed presentation data (unknown symbols, non-decreasing rules)."""


def deglex_key(word):
    return (len(word), word)


# ---------------------------------------------------------------------------
# raw (not yet normalized) combinations of words, used by the parser
# ---------------------------------------------------------------------------

class RawElement:
    """Linear combination of arbitrary words; normalized by the presentation."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms or {}

    @classmethod
    def scalar(cls, c):
        c = Scalar.coerce(c)
        return cls({(): c} if c else {})

    def scalar_value(self):
        if any(w for w in self.terms):
            return None
        return self.terms.get((), ZERO)

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, ZERO) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return RawElement(out)

    def __neg__(self):
        return RawElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                s = out.get(w, ZERO) + c1 * c2
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return RawElement(out)


def parse_raw(text, names):
    """
    Parse the word grammar.  ``names`` maps generator names to indices;
    ``q`` and ``i`` are the scalar symbols.  Division is allowed only by
    scalar-valued subexpressions.
    """
    def atom(name, pos):
        if name == "q":
            return RawElement.scalar(Scalar.q())
        if name == "i":
            return RawElement.scalar(Scalar.i())
        if name not in names:
            raise ParseError(f"unknown symbol {name!r}", text, pos)
        return RawElement({(names[name],): ONE})

    def divide(x, y, pos):
        s = y.scalar_value()
        if s is None:
            raise ParseError("division by a non-scalar", text, pos)
        if not s:
            raise ParseError("division by zero", text, pos)
        return x * RawElement.scalar(s.inverse())

    def power(x, k, pos):
        if k < 0:
            s = x.scalar_value()
            if s is None:
                raise ParseError("negative power of a non-scalar", text, pos)
            if not s:
                raise ParseError("zero to a negative power", text, pos)
            return RawElement.scalar(s ** k)
        out = RawElement.scalar(ONE)
        for _ in range(k):
            out = out * x
        return out

    return ExpressionParser(text, atom, RawElement.scalar, divide, power).parse()


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

class AlgebraElement:
    """
    Normal-form linear combination of irreducible words.

    Zero has an empty term map.  Instances are treated as immutable.
    """

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = terms

    # -- basic protocol ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.alg is other.alg and self.terms == other.terms
        if isinstance(other, (int, Scalar)):
            return self.terms == self.alg.scalar(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            if other.alg is not self.alg:
                raise TypeError(f"elements of {self.alg.name} and {other.alg.name} do not mix")
            return other
        return self.alg.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for w, c in other.terms.items():
            prev = out.get(w)
            if prev is None:
                out[w] = c
            else:
                s = prev + c
                if s:
                    out[w] = s
                else:
                    del out[w]
        return AlgebraElement(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.alg, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = Scalar.coerce(c)
        if not c:
            return self.alg.zero()
        if c.is_one():
            return self
        return AlgebraElement(self.alg, {w: x * c for w, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        other = self._coerce(other)
        return self.alg.multiply(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        out = self.alg.one()
        for _ in range(k):
            out = out * self
        return out

    # -- structure --------------------------------------------------------

    def coefficient(self, word):
        return self.terms.get(word, ZERO)

    def constant_term(self):
        return self.terms.get((), ZERO)

    def degree(self):
        return max((len(w) for w in self.terms), default=-1)

    def star(self):
        return self.alg.star(self)

    def conj_coefficients(self):
        return AlgebraElement(self.alg, {w: c.conj() for w, c in self.terms.items()})

    def __str__(self):
        return self.alg.render(self)

    def __repr__(self):
        return f"{self.alg.name}({self.alg.render(self)!r})"


class TensorElement:
    """
    Element of a tensor product of presented algebras: a map from tuples of
    irreducible words to Scalars.
    """

    __slots__ = ("algs", "terms")

    def __init__(self, algs, terms):
        self.algs = tuple(algs)
        self.terms = terms

    @classmethod
    def pure(cls, *factors):
        """The elementary tensor x1 ⊗ ... ⊗ xn of AlgebraElements."""
        algs = [f.alg for f in factors]
        out = {(): ONE}
        for f in factors:
            nxt = {}
            for key, c in out.items():
                for w, d in f.terms.items():
                    nxt[key + (w,)] = c * d
            out = nxt
        return cls(algs, {k: c for k, c in out.items() if c})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.terms == other.terms and all(
            a is b for a, b in zip(self.algs, other.algs))

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, ZERO) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return TensorElement(self.algs, out)

    def __neg__(self):
        return TensorElement(self.algs, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Scalar.coerce(c)
        return TensorElement(self.algs, {k: x * c for k, x in self.terms.items() if x * c})

    def __mul__(self, other):
        """Factorwise product."""
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                parts = [alg.nf(w1 + w2) for alg, w1, w2 in zip(self.algs, k1, k2)]
                c = c1 * c2
                for combo in itertools.product(*parts):
                    key = tuple(w for w, _ in combo)
                    coef = c
                    for _, x in combo:
                        if not x.is_one():
                            coef = coef * x
                    s = out.get(key, ZERO) + coef
                    if s:
                        out[key] = s
                    else:
                        out.pop(key, None)
        return TensorElement(self.algs, out)

    def map_factor(self, pos, fn, target_alg=None):
        """Apply a linear map (word -> AlgebraElement) to one tensor factor."""
        algs = list(self.algs)
        if target_alg is not None:
            algs[pos] = target_alg
        out = {}
        for key, c in self.terms.items():
            img = fn(key[pos])
            for w, d in img.terms.items():
                k2 = key[:pos] + (w,) + key[pos + 1:]
                s = out.get(k2, ZERO) + c * d
                if s:
                    out[k2] = s
                else:
                    out.pop(k2, None)
        return TensorElement(algs, out)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=lambda k: [deglex_key(w) for w in k]):
            c = self.terms[key]
            body = " ⊗ ".join(alg.render_word(w) for alg, w in zip(self.algs, key))
            parts.append(f"({c})*({body})" if not c.is_one() else f"({body})")
        return " + ".join(parts)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------

@dataclass
class HopfPresentation:
    """
    Generators, rewrite rules and Hopf structure tables.

    ``rules`` maps a left-hand word to a RawElement right-hand side; every
    word on the right must be strictly smaller in the deglex order.  The
    ``*_table`` entries are RawElements (TensorElements keyed by raw word
    pairs for the coproduct).  ``projection`` optionally names a target
    presentation and generator images (the map ``π``).
    """

    name: str
    generators: tuple
    rules: dict
    coproduct_table: dict = field(default_factory=dict)
    counit_table: dict = field(default_factory=dict)
    antipode_table: dict = field(default_factory=dict)
    star_table: dict = field(default_factory=dict)
    projection_target: "HopfPresentation | None" = None
    projection_table: dict = field(default_factory=dict)
    step_budget: int = DEFAULT_STEP_BUDGET

    def __post_init__(self):
        self.generators = tuple(self.generators)
        self.index = {g: k for k, g in enumerate(self.generators)}
        for g in self.generators:
            if g in ("q", "i") or not g.isidentifier():
                raise PresentationError(f"bad generator name {g!r}")
        if len(self.index) != len(self.generators):
            raise PresentationError("duplicate generator names")
        self._by_last = {}
        for lhs, rhs in self.rules.items():
            if not lhs:
                raise PresentationError("empty left-hand side")
            for w in rhs.terms:
                if deglex_key(w) >= deglex_key(lhs):
                    raise PresentationError(
                        f"rule {self.render_word(lhs)} -> ... does not decrease the word order "
                        f"(term {self.render_word(w)})")
            self._by_last.setdefault(lhs[-1], []).append(lhs)
        for v in self._by_last.values():
            v.sort(key=deglex_key)
        self._nf_cache = {}
        self._lock = threading.Lock()
        self._steps = 0
        self._delta_cache = {}
        self._coact_cache = {}

    # -- construction helpers --------------------------------------------

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other

    def zero(self):
        return AlgebraElement(self, {})

    def one(self):
        return AlgebraElement(self, {(): ONE})

    def scalar(self, c):
        c = Scalar.coerce(c)
        return AlgebraElement(self, {(): c} if c else {})

    def gen(self, name):
        return AlgebraElement(self, {(self.index[name],): ONE})

    def word_element(self, word):
        return self.normal_form(RawElement({tuple(word): ONE}))

    def parse(self, text):
        """Parse the word grammar and reduce to normal form."""
        return self.normal_form(parse_raw(text, self.index))

    def parse_raw(self, text):
        return parse_raw(text, self.index)

    # -- rendering --------------------------------------------------------

    def render_word(self, word):
        if not word:
            return "1"
        parts = []
        for g, grp in itertools.groupby(word):
            n = len(list(grp))
            parts.append(self.generators[g] + (f"^{n}" if n > 1 else ""))
        return "*".join(parts)

    def render(self, x):
        if not x.terms:
            return "0"
        out = []
        for idx, w in enumerate(sorted(x.terms, key=deglex_key)):
            c = x.terms[w]
            cs = str(c)
            neg = False
            if _single_real_term(c):
                if cs.startswith("-"):
                    neg, cs = True, cs[1:]
                if not w:
                    body = cs
                elif cs == "1":
                    body = self.render_word(w)
                else:
                    body = f"{cs}*{self.render_word(w)}"
            else:
                body = f"({cs})" + (f"*{self.render_word(w)}" if w else "")
            if idx == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    # -- normal forms -----------------------------------------------------

    def nf(self, word):
        """Normal form of a single word as a tuple of (word, Scalar) pairs."""
        hit = self._nf_cache.get(word)
        if hit is not None:
            return hit
        self._steps = 0
        return self._nf(word)

    def _nf(self, word):
        hit = self._nf_cache.get(word)
        if hit is not None:
            return hit
        if len(word) <= 1 and word not in self.rules:
            res = ((word, ONE),)
        else:
            prefix, last = word[:-1], word[-1]
            pre = self._nf(prefix) if prefix else (((), ONE),)
            if len(pre) == 1 and pre[0][0] == prefix and pre[0][1].is_one():
                lhs = self._match_suffix(word, last)
                if lhs is None:
                    res = ((word, ONE),)
                else:
                    self._steps += 1
                    if self._steps > self.step_budget:
                        raise RewriteError(
                            f"{self.name}: step budget {self.step_budget} exceeded "
                            f"reducing {self.render_word(word)}")
                    p = word[:len(word) - len(lhs)]
                    acc = {}
                    for r, c in self.rules[lhs].terms.items():
                        _accumulate(acc, self._nf(p + r), c)
                    res = _freeze(acc)
            else:
                acc = {}
                for u, c in pre:
                    _accumulate(acc, self._nf(u + (last,)), c)
                res = _freeze(acc)
        with self._lock:
            self._nf_cache[word] = res
        return res

    def _match_suffix(self, word, last):
        for lhs in self._by_last.get(last, ()):
            n = len(lhs)
            if n <= len(word) and word[len(word) - n:] == lhs:
                return lhs
        return None

    def is_irreducible(self, word):
        for k in range(1, len(word) + 1):
            sub = word[:k]
            if self._match_suffix(sub, sub[-1]) is not None:
                return False
        return True

    def normal_form(self, raw):
        """Reduce a RawElement (or a single word) to an AlgebraElement."""
        if isinstance(raw, tuple):
            raw = RawElement({raw: ONE})
        self._steps = 0
        acc = {}
        for w, c in raw.terms.items():
            _accumulate(acc, self._nf(w), c)
        return AlgebraElement(self, acc)

    def multiply(self, x, y):
        acc = {}
        self._steps = 0
        for w1, c1 in x.terms.items():
            for w2, c2 in y.terms.items():
                _accumulate(acc, self._nf(w1 + w2), c1 * c2)
        return AlgebraElement(self, acc)

    def element_from_raw_table(self, raw):
        return self.normal_form(raw)

    # -- Hopf structure maps ------------------------------------------------

    def counit_word(self, word):
        out = ONE
        for g in word:
            out = out * self._counit_gen(g)
            if not out:
                break
        return out

    def _counit_gen(self, g):
        name = self.generators[g]
        if name not in self.counit_table:
            raise PresentationError(f"{self.name}: no counit for {name}")
        return self.counit_table[name]

    def counit(self, x):
        out = ZERO
        for w, c in x.terms.items():
            out = out + c * self.counit_word(w)
        return out

    def coproduct_word(self, word):
        hit = self._delta_cache.get(word)
        if hit is not None:
            return hit
        if not word:
            res = TensorElement((self, self), {((), ()): ONE})
        elif len(word) == 1:
            name = self.generators[word[0]]
            if name not in self.coproduct_table:
                raise PresentationError(f"{self.name}: no coproduct for {name}")
            res = self.coproduct_table[name]
        else:
            res = self.coproduct_word(word[:-1]) * self.coproduct_word(word[-1:])
        with self._lock:
            self._delta_cache[word] = res
        return res

    def coproduct(self, x):
        out = TensorElement((self, self), {})
        for w, c in x.terms.items():
            out = out + self.coproduct_word(w).scale(c)
        return out

    def antipode_word(self, word):
        out = self.one()
        for g in reversed(word):
            name = self.generators[g]
            if name not in self.antipode_table:
                raise PresentationError(f"{self.name}: no antipode for {name}")
            out = out * self.antipode_table[name]
        return out

    def antipode(self, x):
        out = self.zero()
        for w, c in x.terms.items():
            out = out + self.antipode_word(w).scale(c)
        return out

    def star_word(self, word):
        out = self.one()
        for g in reversed(word):
            name = self.generators[g]
            if name not in self.star_table:
                raise PresentationError(f"{self.name}: no star for {name}")
            out = out * self.star_table[name]
        return out

    def star(self, x):
        out = self.zero()
        for w, c in x.terms.items():
            out = out + self.star_word(w).scale(c.conj())
        return out

    # -- projection onto the quotient Hopf algebra ---------------------------

    def project_word(self, word):
        H = self.projection_target
        out = H.one()
        for g in word:
            out = out * self.projection_table[self.generators[g]]
            if not out:
                break
        return out

    def project(self, x):
        H = self.projection_target
        out = H.zero()
        for w, c in x.terms.items():
            out = out + self.project_word(w).scale(c)
        return out

    def coact_word(self, word):
        """(id ⊗ π)Δ(word) as a TensorElement over (self, H)."""
        hit = self._coact_cache.get(word)
        if hit is not None:
            return hit
        H = self.projection_target
        if H is None:
            raise PresentationError(f"{self.name}: no projection target")
        if not word:
            res = TensorElement((self, H), {((), ()): ONE})
        elif len(word) == 1:
            res = self.coproduct_word(word).map_factor(1, self.project_word, H)
        else:
            res = self.coact_word(word[:-1]) * self.coact_word(word[-1:])
        with self._lock:
            self._coact_cache[word] = res
        return res


def _single_real_term(c):
    if not c.is_laurent():
        return False
    nz = [x for x in c.num if x]
    return len(nz) == 1 and nz[0].b == 0


def _accumulate(acc, pairs, c):
    for w, d in pairs:
        x = c if d.is_one() else c * d
        prev = acc.get(w)
        if prev is None:
            acc[w] = x
        else:
            s = prev + x
            if s:
                acc[w] = s
            else:
                del acc[w]


def _freeze(acc):
    return tuple((w, c) for w, c in acc.items() if c)


# ---------------------------------------------------------------------------
# operations named by the interface
# ---------------------------------------------------------------------------

def normal_form(alg, expr):
    """Normal form of a raw combination, a word, or a string."""
    if isinstance(expr, str):
        return alg.parse(expr)
    return alg.normal_form(expr)


def hopf_apply(which, x):
    """Apply coproduct, counit, antipode or star to an AlgebraElement."""
    alg = x.alg
    if which == "coproduct":
        return alg.coproduct(x)
    if which == "counit":
        return alg.counit(x)
    if which == "antipode":
        return alg.antipode(x)
    if which == "star":
        return alg.star(x)
    raise ValueError(f"unknown structure map {which!r}")


def coact_right(x):
    """The right coaction (id ⊗ π)Δ(x) onto the projection target."""
    alg = x.alg
    out = TensorElement((alg, alg.projection_target), {})
    for w, c in x.terms.items():
        out = out + alg.coact_word(w).scale(c)
    return out


def is_coinvariant(x):
    H = x.alg.projection_target
    return coact_right(x) == TensorElement.pure(x, H.one())


@dataclass
class CriticalPair:
    word: tuple
    left: AlgebraElement
    right: AlgebraElement

    @property
    def joins(self):
        return self.left == self.right


@dataclass
class ConfluenceReport:
    presentation: str
    degree_bound: int
    pairs: list

    @property
    def ok(self):
        return all(p.joins for p in self.pairs)

    @property
    def witness(self):
        for p in self.pairs:
            if not p.joins:
                return p
        return None


def _one_step(alg, word, lhs, pos):
    """Apply rule lhs at position pos of word, returning a RawElement."""
    pre, post = word[:pos], word[pos + len(lhs):]
    return RawElement({pre + r + post: c for r, c in alg.rules[lhs].terms.items()})


def confluence_report(alg, degree_bound=6):
    """
    Enumerate critical pairs of the rewrite system up to ``degree_bound``
    and test whether both one-step reducts share a normal form.
    """
    max_rule = max((len(l) for l in alg.rules), default=0)
    if degree_bound < max_rule:
        raise ValueError("degree bound below the longest rule")
    pairs = []
    seen = set()
    lhss = sorted(alg.rules, key=deglex_key)
    for l1 in lhss:
        for l2 in lhss:
            # overlaps: a proper suffix of l1 equals a proper prefix of l2
            for k in range(1, min(len(l1), len(l2))):
                if l1[len(l1) - k:] == l2[:k]:
                    w = l1 + l2[k:]
                    if len(w) <= degree_bound and (w, l1, l2) not in seen:
                        seen.add((w, l1, l2))
                        pairs.append(CriticalPair(
                            w,
                            alg.normal_form(_one_step(alg, w, l1, 0)),
                            alg.normal_form(_one_step(alg, w, l2, len(l1) - k))))
            # inclusions: l2 is a proper factor of l1
            if l1 != l2 and len(l2) < len(l1):
                for pos in range(len(l1) - len(l2) + 1):
                    if l1[pos:pos + len(l2)] == l2 and len(l1) <= degree_bound:
                        pairs.append(CriticalPair(
                            l1,
                            alg.normal_form(_one_step(alg, l1, l1, 0)),
                            alg.normal_form(_one_step(alg, l1, l2, pos))))
    return ConfluenceReport(alg.name, degree_bound, pairs)


def words_up_to(alg, degree):
    for n in range(degree + 1):
        yield from itertools.product(range(len(alg.generators)), repeat=n)


def normal_monomials(alg, degree):
    """Irreducible words of length <= degree."""
    return [w for w in words_up_to(alg, degree) if alg.is_irreducible(w)]


def _mult_map(T):
    """m: A ⊗ A -> A applied to a TensorElement."""
    alg = T.algs[0]
    acc = {}
    for (w1, w2), c in T.terms.items():
        _accumulate(acc, alg.nf(w1 + w2), c)
    return AlgebraElement(alg, acc)


@dataclass
class AxiomFailure:
    check: str
    witness: str


def hopf_axiom_failures(alg, degree=3):
    """
    Check the Hopf and ``*`` axioms on all monomials up to ``degree`` and the
    compatibility of every structure map with the rewrite rules.  Returns a
    list of failures (empty when everything holds).
    """
    fails = []
    # structure maps must respect the relations
    for lhs, rhs in alg.rules.items():
        lw = RawElement({lhs: ONE})
        label = f"{alg.render_word(lhs)} -> {alg.render(alg.normal_form(rhs))}"
        if _raw_coproduct(alg, lw) != _raw_coproduct(alg, rhs):
            fails.append(AxiomFailure("coproduct respects relations", label))
        if _raw_counit(alg, lw) != _raw_counit(alg, rhs):
            fails.append(AxiomFailure("counit respects relations", label))
        if _raw_map(alg, lw, alg.antipode_word) != _raw_map(alg, rhs, alg.antipode_word):
            fails.append(AxiomFailure("antipode respects relations", label))
        if alg.star_table and _raw_star(alg, lw) != _raw_star(alg, rhs):
            fails.append(AxiomFailure("star respects relations", label))
    for word in normal_monomials(alg, degree):
        x = alg.word_element(word)
        label = alg.render(x)
        D = alg.coproduct(x)
        left = _coproduct_on(alg, D, 0)
        right = _coproduct_on(alg, D, 1)
        if left != right:
            fails.append(AxiomFailure("coassociativity", label))
        if _counit_on(alg, D, 0) != x or _counit_on(alg, D, 1) != x:
            fails.append(AxiomFailure("counit law", label))
        eps = alg.scalar(alg.counit(x))
        if _mult_map(D.map_factor(0, alg.antipode_word)) != eps or \
                _mult_map(D.map_factor(1, alg.antipode_word)) != eps:
            fails.append(AxiomFailure("antipode law", label))
        if alg.star_table:
            if alg.star(alg.star(x)) != x:
                fails.append(AxiomFailure("star involutive", label))
            lhs = alg.coproduct(alg.star(x))
            rhs = _star_tensor(alg, D)
            if lhs != rhs:
                fails.append(AxiomFailure("coproduct is a *-map", label))
    return fails


def _raw_coproduct(alg, raw):
    out = TensorElement((alg, alg), {})
    for w, c in raw.terms.items():
        out = out + alg.coproduct_word(w).scale(c)
    return out


def _raw_counit(alg, raw):
    return sum((c * alg.counit_word(w) for w, c in raw.terms.items()), ZERO)


def _raw_map(alg, raw, fn):
    out = alg.zero()
    for w, c in raw.terms.items():
        out = out + fn(w).scale(c)
    return out


def _raw_star(alg, raw):
    out = alg.zero()
    for w, c in raw.terms.items():
        out = out + alg.star_word(w).scale(c.conj())
    return out


def _coproduct_on(alg, T, pos):
    """Apply Δ to tensor factor ``pos`` of a two-fold tensor."""
    out = {}
    for (w1, w2), c in T.terms.items():
        if pos == 0:
            for (u, v), d in alg.coproduct_word(w1).terms.items():
                _acc_key(out, (u, v, w2), c * d)
        else:
            for (u, v), d in alg.coproduct_word(w2).terms.items():
                _acc_key(out, (w1, u, v), c * d)
    return TensorElement((alg, alg, alg), out)


def _counit_on(alg, T, pos):
    acc = {}
    for (w1, w2), c in T.terms.items():
        e = alg.counit_word(w1 if pos == 0 else w2)
        if e:
            _acc_key(acc, w2 if pos == 0 else w1, c * e)
    return AlgebraElement(alg, acc)


def _star_tensor(alg, T):
    out = TensorElement((alg, alg), {})
    for (w1, w2), c in T.terms.items():
        out = out + TensorElement.pure(alg.star_word(w1), alg.star_word(w2)).scale(c.conj())
    return out


def _acc_key(acc, key, c):
    s = acc.get(key, ZERO) + c
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


def projection_failures(alg):
    """π must be a Hopf *-algebra map on generators and respect relations."""
    H = alg.projection_target
    fails = []
    if H is None:
        return [AxiomFailure("projection present", alg.name)]
    for lhs, rhs in alg.rules.items():
        l = alg.project_word(lhs)
        r = H.zero()
        for w, c in rhs.terms.items():
            r = r + alg.project_word(w).scale(c)
        if l != r:
            fails.append(AxiomFailure("projection respects relations", alg.render_word(lhs)))
    for k, name in enumerate(alg.generators):
        g = (k,)
        pg = alg.project_word(g)
        lhs = H.coproduct(pg)
        rhs = TensorElement((H, H), {})
        for (u, v), c in alg.coproduct_word(g).terms.items():
            rhs = rhs + TensorElement.pure(alg.project_word(u), alg.project_word(v)).scale(c)
        if lhs != rhs:
            fails.append(AxiomFailure("projection is a coalgebra map", name))
        if H.counit(pg) != alg.counit_word(g):
            fails.append(AxiomFailure("projection preserves the counit", name))
        if H.antipode(pg) != alg.project(alg.antipode_word(g)):
            fails.append(AxiomFailure("projection preserves the antipode", name))
        if alg.star_table and H.star(pg) != alg.project(alg.star_word(g)):
            fails.append(AxiomFailure("projection is a *-map", name))
    return fails


# ---------------------------------------------------------------------------
# actions of an enveloping-type algebra
# ---------------------------------------------------------------------------

class ModuleAlgebraAction:
    """
    Action of the Hopf algebra ``U`` on the algebra ``A`` given by generator
    tables ``table[(X, a)] = X ▷ a`` and extended by the module-algebra law
    ``X ▷ (fg) = (X₍₁₎ ▷ f)(X₍₂₎ ▷ g)`` using the stored coproducts of ``U``.
    Words of ``U`` act by composition, rightmost letter first; with
    ``side="right"`` the leftmost letter acts first, which is the convention
    for translations ``Y ▶ f = ⟨Y, f₍₁₎⟩ f₍₂₎``.
    """

    def __init__(self, U, A, table, name="action", side="left"):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.U, self.A, self.name, self.side = U, A, name, side
        self.table = table
        self._cache = {}
        self._lock = threading.Lock()

    def _gen_on_word(self, g, word):
        key = (g, word)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        U, A = self.U, self.A
        if not word:
            res = A.scalar(U.counit_word((g,)))
        elif len(word) == 1:
            k = (U.generators[g], A.generators[word[0]])
            if k not in self.table:
                raise PresentationError(f"{self.name}: no table entry for {k[0]} ▷ {k[1]}")
            res = self.table[k]
        else:
            head, rest = word[:1], word[1:]
            res = A.zero()
            for (u, v), c in U.coproduct_word((g,)).terms.items():
                left = self._word_on_word(u, head)
                if not left:
                    continue
                right = self._word_on_word(v, rest)
                if right:
                    res = res + (left * right).scale(c)
        with self._lock:
            self._cache[key] = res
        return res

    def _word_on_word(self, uword, aword):
        x = self.A.normal_form(RawElement({aword: ONE})) if len(aword) > 1 else \
            AlgebraElement(self.A, {aword: ONE})
        return self._word_on_element(uword, x, raw_word=aword)

    def _word_on_element(self, uword, x, raw_word=None):
        if raw_word is not None and len(uword) == 1:
            return self._gen_on_word(uword[0], raw_word)
        cur = x
        for g in (reversed(uword) if self.side == "left" else uword):
            nxt = self.A.zero()
            for w, c in cur.terms.items():
                nxt = nxt + self._gen_on_word(g, w).scale(c)
            cur = nxt
            if not cur:
                break
        return cur

    def act(self, X, x):
        """X ▷ x for X in U and x in A (AlgebraElements)."""
        out = self.A.zero()
        for uw, c in X.terms.items():
            out = out + self._word_on_element(uw, x).scale(c)
        return out

    def act_raw_word(self, g, word):
        """Generator g (index) on an arbitrary, possibly reducible, word."""
        return self._gen_on_word(g, tuple(word))

    def failures(self):
        """
        Well-definedness checks: the action respects the relations of ``A``
        and of ``U`` (on generators of ``A``), and the module-algebra law
        holds on all products of two generators.
        """
        U, A = self.U, self.A
        fails = []
        for g in range(len(U.generators)):
            for lhs, rhs in A.rules.items():
                l = self._gen_on_word(g, lhs)
                r = A.zero()
                for w, c in rhs.terms.items():
                    r = r + self._gen_on_word(g, w).scale(c)
                if l != r:
                    fails.append(AxiomFailure(
                        f"{self.name} respects relations of {A.name}",
                        f"{U.generators[g]} ▷ ({A.render_word(lhs)} - ...)"))
            for a1 in range(len(A.generators)):
                for a2 in range(len(A.generators)):
                    prod = A.word_element((a1, a2))
                    lhs = self.act(U.gen(U.generators[g]), prod)
                    rhs = A.zero()
                    for (u, v), c in U.coproduct_word((g,)).terms.items():
                        rhs = rhs + (self._word_on_element(u, A.word_element((a1,))) *
                                     self._word_on_element(v, A.word_element((a2,)))).scale(c)
                    if lhs != rhs:
                        fails.append(AxiomFailure(
                            f"{self.name} module-algebra law",
                            f"{U.generators[g]} ▷ {A.render_word((a1, a2))}"))
        for lhs, rhs in U.rules.items():
            for a in range(len(A.generators)):
                x = A.word_element((a,))
                l = self._word_on_element(lhs, x)
                r = A.zero()
                for w, c in rhs.terms.items():
                    r = r + self._word_on_element(w, x).scale(c)
                if l != r:
                    fails.append(AxiomFailure(
                        f"{self.name} respects relations of {U.name}",
                        f"({U.render_word(lhs)} - ...) ▷ {A.generators[a]}"))
        return fails


def uq_act(action, X, x):
    """The interface name for :meth:`ModuleAlgebraAction.act`."""
    return action.act(X, x)
