"""
Exact rational functions in ``q`` over the Gaussian rationals.

Every coefficient in the engine lives in the field ``Q(i)(q)``.  A
:class:`Scalar` is stored as a pair of dense polynomials in ``q`` whose
coefficients are :class:`GaussianRational` numbers; the denominator is
monic and coprime to the numerator, so the stored pair is canonical and
equality is a tuple comparison.

``q`` is a real formal parameter: conjugation fixes ``q`` and sends
``i`` to ``-i`` on the coefficients.

EXAMPLES::

    >>> x = Scalar.parse("q - q^-1") * Scalar.parse("q + q^-1")
    >>> str(x)
    'q^2 - q^-2'
    >>> Scalar.parse("(q^2 - 1)/(q + 1)").inverse()
    Scalar('(1)/(q - 1)')
"""

from __future__ import annotations

from functools import lru_cache
from fractions import Fraction
from math import gcd


class ScalarError(ArithmeticError):
    """Raised on division by zero or evaluation at a pole."""


class ParseError(ValueError):
    """Syntax error in the scalar/word grammar, with a character offset."""

    def __init__(self, message, text="", pos=0):
        self.text = text
        self.pos = pos
        self.line, self.column = _line_col(text, pos)
        super().__init__(f"{message} (line {self.line}, column {self.column})")
        self.message = message


def _line_col(text, pos):
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, column


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

class GaussianRational:
    """
    The number ``(a + b*i)/d`` with integers ``a, b`` and ``d > 0``,
    stored in lowest terms.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=1):
        if d == 1:
            self.a, self.b, self.d = a, b, 1
            return
        if d == 0:
            raise ScalarError("zero denominator")
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(gcd(a, b), d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self.a, self.b, self.d = a, b, d

    @classmethod
    def coerce(cls, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, int):
            return cls(x, 0, 1)
        if isinstance(x, Fraction):
            return cls(x.numerator, 0, x.denominator)
        if isinstance(x, complex):
            raise TypeError("floating point values are not exact")
        raise TypeError(f"cannot coerce {x!r} to a Gaussian rational")

    @property
    def real(self):
        return Fraction(self.a, self.d)

    @property
    def imag(self):
        return Fraction(self.b, self.d)

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def is_real(self):
        return self.b == 0

    def __eq__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __add__(self, other):
        if self.d == other.d:
            return GaussianRational(self.a + other.a, self.b + other.b, self.d)
        return GaussianRational(self.a * other.d + other.a * self.d,
                                self.b * other.d + other.b * self.d,
                                self.d * other.d)

    def __sub__(self, other):
        if self.d == other.d:
            return GaussianRational(self.a - other.a, self.b - other.b, self.d)
        return GaussianRational(self.a * other.d - other.a * self.d,
                                self.b * other.d - other.b * self.d,
                                self.d * other.d)

    def __neg__(self):
        return GaussianRational(-self.a, -self.b, self.d) if self.d != 1 else \
            _gr1(-self.a, -self.b)

    def __mul__(self, other):
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        if b1 == 0 and b2 == 0:
            return GaussianRational(a1 * a2, 0, self.d * other.d)
        return GaussianRational(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1,
                                self.d * other.d)

    def inverse(self):
        n = self.a * self.a + self.b * self.b
        if n == 0:
            raise ScalarError("division by zero")
        # d/(a+bi) = d(a-bi)/(a^2+b^2)
        return GaussianRational(self.d * self.a, -self.d * self.b, n)

    def __truediv__(self, other):
        return self * other.inverse()

    def conj(self):
        return GaussianRational(self.a, -self.b, self.d) if self.b else self

    def __repr__(self):
        return f"GaussianRational({self._render()!r})"

    def __str__(self):
        return self._render()

    def _render(self):
        re, im = Fraction(self.a, self.d), Fraction(self.b, self.d)
        if im == 0:
            return str(re)
        ims = "i" if abs(im) == 1 else f"{abs(im)}*i"
        if re == 0:
            return ("-" if im < 0 else "") + ims
        return f"{re} {'-' if im < 0 else '+'} {ims}"


def _gr1(a, b):
    g = GaussianRational.__new__(GaussianRational)
    g.a, g.b, g.d = a, b, 1
    return g


ZERO_C = _gr1(0, 0)
ONE_C = _gr1(1, 0)
I_C = _gr1(0, 1)


# ---------------------------------------------------------------------------
# dense polynomials: tuples of GaussianRational, lowest degree first,
# no trailing zeros (the zero polynomial is ())
# ---------------------------------------------------------------------------

def _trim(c):
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


def _padd(f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for k, c in enumerate(g):
        out[k] = out[k] + c
    return _trim(out)


def _pneg(f):
    return tuple(-c for c in f)


def _psub(f, g):
    return _padd(f, _pneg(g))


def _pscale(f, c):
    if not c:
        return ()
    return tuple(x * c for x in f)


def _pmul(f, g):
    if not f or not g:
        return ()
    out = [ZERO_C] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if not x:
            continue
        for j, y in enumerate(g):
            if y:
                out[i + j] = out[i + j] + x * y
    return _trim(out)


def _pshift(f, k):
    """Multiply by q^k, k >= 0."""
    if not f or k == 0:
        return f
    return (ZERO_C,) * k + f


def _pdivmod(f, g):
    if not g:
        raise ScalarError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    lead_inv = g[-1].inverse()
    if len(f) < len(g):
        return (), _trim(r)
    quot = [ZERO_C] * (len(f) - dg)
    for k in range(len(f) - 1, dg - 1, -1):
        c = r[k]
        if not c:
            continue
        c = c * lead_inv
        quot[k - dg] = c
        for j, y in enumerate(g):
            r[k - dg + j] = r[k - dg + j] - c * y
    return _trim(quot), _trim(r[:dg])


def _pmonic(f):
    if not f:
        return f
    lc = f[-1]
    if lc == ONE_C:
        return f
    return _pscale(f, lc.inverse())


def _pgcd(f, g):
    """Monic gcd by the Euclidean algorithm."""
    f, g = _pmonic(f), _pmonic(g)
    while g:
        _, r = _pdivmod(f, g)
        f, g = g, _pmonic(r)
    return f


def _peval(f, x):
    acc = ZERO_C
    for c in reversed(f):
        acc = acc * x + c
    return acc


def _low_order(f):
    """Number of leading zero coefficients (the q-adic valuation)."""
    k = 0
    while k < len(f) and not f[k]:
        k += 1
    return k


@lru_cache(maxsize=4096)
def _is_monomial(f):
    """True if f = q^k with coefficient 1."""
    return bool(f) and f[-1] == ONE_C and _low_order(f) == len(f) - 1


# ---------------------------------------------------------------------------
# the field Q(i)(q)
# ---------------------------------------------------------------------------

class Scalar:
    """
    An element of ``Q(i)(q)`` in canonical form.

    ``num`` and ``den`` are coefficient tuples (lowest degree first); ``den``
    is monic and ``gcd(num, den) = 1``.  Instances are immutable.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=(), den=(ONE_C,), _canonical=False):
        if _canonical:
            self.num, self.den = num, den
        else:
            self.num, self.den = _canonical_pair(_trim(num), _trim(den))
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def coerce(cls, x):
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction, GaussianRational)):
            c = GaussianRational.coerce(x)
            return cls((c,) if c else (), (ONE_C,), _canonical=True)
        if isinstance(x, str):
            return cls.parse(x)
        raise TypeError(f"cannot coerce {x!r} to Scalar")

    @classmethod
    def q(cls, k=1):
        """The monomial q^k (k may be negative)."""
        if k >= 0:
            return cls((ZERO_C,) * k + (ONE_C,), (ONE_C,), _canonical=True)
        return cls((ONE_C,), (ZERO_C,) * (-k) + (ONE_C,), _canonical=True)

    @classmethod
    def i(cls):
        return cls((I_C,), (ONE_C,), _canonical=True)

    @classmethod
    def parse(cls, text):
        return parse_scalar(text)

    # -- predicates -------------------------------------------------------

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_one(self):
        return self.num == (ONE_C,) and self.den == (ONE_C,)

    def is_laurent(self):
        return _is_monomial(self.den)

    def is_constant(self):
        return len(self.num) <= 1 and len(self.den) == 1

    def constant_value(self):
        if not self.is_constant():
            raise ScalarError(f"{self} is not constant")
        return self.num[0] if self.num else ZERO_C

    def unit_monomial(self):
        """Return (sign, k) if self = sign*q^k with sign = +1 or -1, else None."""
        if len(self.num) == 0 or not _is_monomial(self.den):
            return None
        lo = _low_order(self.num)
        if lo != len(self.num) - 1:
            return None
        c = self.num[-1]
        if c == ONE_C:
            sign = 1
        elif c == -ONE_C:
            sign = -1
        else:
            return None
        return sign, lo - (len(self.den) - 1)

    # -- arithmetic -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        if not self.num:
            return other
        if not other.num:
            return self
        d1, d2 = self.den, other.den
        if d1 == d2 and len(d1) == 1:
            n = _padd(self.num, other.num)
            return Scalar(n, d1, _canonical=True) if n else ZERO
        if _is_monomial(d1) and _is_monomial(d2):
            k1, k2 = len(d1) - 1, len(d2) - 1
            k = max(k1, k2)
            n = _padd(_pshift(self.num, k - k1), _pshift(other.num, k - k2))
            return _laurent(n, k)
        if d1 == d2:
            return Scalar(_padd(self.num, other.num), d1)
        return Scalar(_padd(_pmul(self.num, d2), _pmul(other.num, d1)),
                      _pmul(d1, d2))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(_pneg(self.num), self.den, _canonical=True)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        if not self.num or not other.num:
            return ZERO
        d1, d2 = self.den, other.den
        if len(d1) == 1 and len(d2) == 1:
            return Scalar(_pmul(self.num, other.num), d1, _canonical=True)
        if _is_monomial(d1) and _is_monomial(d2):
            return _laurent(_pmul(self.num, other.num), len(d1) + len(d2) - 2)
        return Scalar(_pmul(self.num, other.num), _pmul(d1, d2))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ScalarError("division by zero")
        return Scalar(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("integer exponents only")
        base = self if k >= 0 else self.inverse()
        out = ONE
        for _ in range(abs(k)):
            out = out * base
        return out

    def conj(self):
        """Coefficient conjugation i -> -i; q is fixed."""
        if all(c.b == 0 for c in self.num) and all(c.b == 0 for c in self.den):
            return self
        return Scalar(tuple(c.conj() for c in self.num),
                      tuple(c.conj() for c in self.den), _canonical=True)

    def is_real(self):
        return self.conj() == self

    def eval(self, q0):
        """Substitute an exact (Gaussian) rational for q."""
        x = GaussianRational.coerce(q0)
        d = _peval(self.den, x)
        if not d:
            raise ScalarError(f"pole at q = {x._render()}")
        return _peval(self.num, x) / d

    # -- rendering --------------------------------------------------------

    def __str__(self):
        return render_scalar(self)

    def __repr__(self):
        return f"Scalar({render_scalar(self)!r})"


def _laurent(num, k):
    """Canonical form of num / q^k."""
    if not num:
        return ZERO
    lo = min(_low_order(num), k)
    if lo:
        num = num[lo:]
        k -= lo
    return Scalar(num, (ZERO_C,) * k + (ONE_C,), _canonical=True)


def _canonical_pair(num, den):
    if not den:
        raise ScalarError("division by zero")
    if not num:
        return (), (ONE_C,)
    if _is_monomial(den):
        s = _laurent(num, len(den) - 1)
        return s.num, s.den
    lo = min(_low_order(num), _low_order(den))
    if lo:
        num, den = num[lo:], den[lo:]
    g = _pgcd(num, den)
    if len(g) > 1:
        num, _ = _pdivmod(num, g)
        den, _ = _pdivmod(den, g)
    lc = den[-1]
    if lc != ONE_C:
        inv = lc.inverse()
        num, den = _pscale(num, inv), _pscale(den, inv)
    return num, den


ZERO = Scalar((), (ONE_C,), _canonical=True)
ONE = Scalar((ONE_C,), (ONE_C,), _canonical=True)


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------

def _render_terms(pairs):
    """pairs: list of (GaussianRational coefficient, exponent), highest first."""
    if not pairs:
        return "0"
    out = []
    for idx, (c, e) in enumerate(pairs):
        mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
        if c.b == 0:
            neg = c.a < 0
            mag = abs(Fraction(c.a, c.d))
            if mag == 1 and mono:
                body = mono
            else:
                body = str(mag) + ("*" + mono if mono else "")
        elif c.a == 0:
            neg = c.b < 0
            mag = abs(Fraction(c.b, c.d))
            body = ("i" if mag == 1 else f"{mag}*i") + ("*" + mono if mono else "")
        else:
            neg = False
            body = f"({c._render()})" + ("*" + mono if mono else "")
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _poly_pairs(f, shift=0):
    return [(c, k - shift) for k, c in reversed(list(enumerate(f))) if c]


def render_scalar(x):
    """Render in the grammar accepted by :func:`parse_scalar`."""
    if not x.num:
        return "0"
    if _is_monomial(x.den):
        return _render_terms(_poly_pairs(x.num, len(x.den) - 1))
    return f"({_render_terms(_poly_pairs(x.num))})/({_render_terms(_poly_pairs(x.den))})"


# ---------------------------------------------------------------------------
# parsing: a small expression grammar shared with the word grammar
# ---------------------------------------------------------------------------

def tokenize(text):
    """
    Split text into (kind, value, pos) tokens.  Kinds: 'int', 'name',
    'op' (one of + - * / ^ ( ) ), and a final 'end'.
    """
    toks = []
    k, n = 0, len(text)
    while k < n:
        ch = text[k]
        if ch.isspace():
            k += 1
        elif ch.isdigit():
            j = k
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[k:j]), k))
            k = j
        elif ch.isalpha() or ch == "_":
            j = k
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[k:j], k))
            k = j
        elif ch in "+-*/^()":
            toks.append(("op", ch, k))
            k += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", text, k)
    toks.append(("end", None, n))
    return toks


class ExpressionParser:
    """
    Recursive-descent parser for sums of products with integer powers.

    ``atom(name, pos)`` maps identifiers to values and ``const(n)`` maps
    integers to values; values must support ``+ - *`` and ``/`` by a
    scalar-valued divisor via ``divide(x, y, pos)``, and ``power(x, k, pos)``.
    """

    def __init__(self, text, atom, const, divide, power):
        self.text = text
        self.toks = tokenize(text)
        self.k = 0
        self.atom, self.const, self.divide, self.power = atom, const, divide, power

    def error(self, msg, pos=None):
        if pos is None:
            pos = self.toks[self.k][2]
        raise ParseError(msg, self.text, pos)

    def peek(self):
        return self.toks[self.k]

    def take(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        v = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        neg = False
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            if self.take()[1] == "-":
                neg = not neg
        v = self.power_expr()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                v = v * self.power_expr()
            elif kind == "op" and val == "/":
                self.take()
                pos = self.peek()[2]
                v = self.divide(v, self.power_expr(), pos)
            elif kind in ("int", "name") or (kind == "op" and val == "("):
                v = v * self.power_expr()
            else:
                break
        return -v if neg else v

    def power_expr(self):
        v = self.atom_expr()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, val, pos = self.take()
            if kind != "int":
                self.error("integer exponent expected", pos)
            v = self.power(v, sign * val, pos)
        return v

    def atom_expr(self):
        kind, val, pos = self.take()
        if kind == "int":
            return self.const(val)
        if kind == "name":
            return self.atom(val, pos)
        if kind == "op" and val == "(":
            v = self.expr()
            kind2, val2, pos2 = self.take()
            if kind2 != "op" or val2 != ")":
                self.error("')' expected", pos2)
            return v
        self.error("unexpected " + ("end of input" if kind == "end" else repr(val)), pos)


def parse_scalar(text):
    """
    Parse the scalar grammar: integers, ``i``, ``q``, ``+ - * /``, integer
    powers ``^k`` (negative allowed) and parentheses.

    >>> parse_scalar("(1 + 2*i)*q^-1 - 3/4") == Scalar.q(-1) * Scalar.parse("1+2i") - Fraction(3, 4)
    True
    """
    def atom(name, pos):
        if name == "q":
            return Scalar.q()
        if name == "i":
            return Scalar.i()
        raise ParseError(f"unknown symbol {name!r}", text, pos)

    def divide(x, y, pos):
        if y.is_zero():
            raise ParseError("division by zero", text, pos)
        return x / y

    def power(x, k, pos):
        if k < 0 and x.is_zero():
            raise ParseError("zero to a negative power", text, pos)
        return x ** k

    return ExpressionParser(text, atom, Scalar.coerce, divide, power).parse()
