"""Exact coefficient arithmetic for all algebras.

Four scalar variants share one interface: rationals, Gaussian rationals
Q(i), rational functions in a formal variable s with q = s^2 over Q(i),
and complex floats with a configured tolerance.  Arithmetic never crosses
variants silently; conversions go through the field objects.

Representing q as s^2 keeps the half-integer powers q^(1/2), q^(-1/2)
inside a single rational-function field.  Conjugation fixes s (the
deformation parameter is treated as real), so self-adjointness checks
stay exact.
"""
from __future__ import annotations

from fractions import Fraction


class ScalarError(Exception):
    """Base class for scalar arithmetic errors."""


class ScalarMismatchError(ScalarError):
    """Raised when arithmetic would mix two scalar variants."""


class ScalarDivisionError(ScalarError):
    """Raised on inversion of zero."""


class PoleError(ScalarError):
    """Raised when a rational function is evaluated at a pole."""


_F0 = Fraction(0)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# Rational
# ---------------------------------------------------------------------------

class Rational:
    """Arbitrary-precision rational number (reduced, positive denominator)."""

    __slots__ = ("_v",)

    def __init__(self, numerator=0, denominator=1):
        if isinstance(numerator, Fraction) and denominator == 1:
            self._v = numerator
        else:
            self._v = Fraction(numerator, denominator)

    @property
    def numerator(self) -> int:
        return self._v.numerator

    @property
    def denominator(self) -> int:
        return self._v.denominator

    @property
    def field(self):
        return QQ

    def _check(self, other):
        if type(other) is not Rational:
            raise ScalarMismatchError(f"rational vs {type(other).__name__}")

    def __add__(self, other):
        self._check(other)
        return Rational(self._v + other._v)

    def __sub__(self, other):
        self._check(other)
        return Rational(self._v - other._v)

    def __mul__(self, other):
        self._check(other)
        return Rational(self._v * other._v)

    def __truediv__(self, other):
        self._check(other)
        return self * other.invert()

    def __neg__(self):
        return Rational(-self._v)

    def invert(self) -> Rational:
        if self._v == 0:
            raise ScalarDivisionError("inverting zero rational")
        return Rational(1 / self._v)

    def conjugate(self) -> Rational:
        return self

    def is_zero(self) -> bool:
        return self._v == 0

    def is_one(self) -> bool:
        return self._v == 1

    def as_fraction(self) -> Fraction:
        return self._v

    def __eq__(self, other):
        return type(other) is Rational and self._v == other._v

    def __hash__(self):
        return hash(("Q", self._v))

    def __repr__(self):
        return f"Rational({self._v})"

    def __str__(self):
        return str(self._v)


# ---------------------------------------------------------------------------
# GaussianRational
# ---------------------------------------------------------------------------

class GaussianRational:
    """Element of Q(i): re + im*i with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_fraction(re)
        self.im = _as_fraction(im)

    @property
    def field(self):
        return QQI

    def _check(self, other):
        if type(other) is not GaussianRational:
            raise ScalarMismatchError(f"gaussian vs {type(other).__name__}")

    def __add__(self, other):
        self._check(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        self._check(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        self._check(other)
        a, b = self.re, self.im
        c, d = other.re, other.im
        if not b:
            if not d:
                return GaussianRational(a * c, _F0)
            return GaussianRational(a * c, a * d)
        if not d:
            return GaussianRational(a * c, b * c)
        return GaussianRational(a * c - b * d, a * d + b * c)

    def __truediv__(self, other):
        self._check(other)
        return self * other.invert()

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def invert(self) -> GaussianRational:
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ScalarDivisionError("inverting zero gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_one(self) -> bool:
        return self.re == 1 and self.im == 0

    def __eq__(self, other):
        return type(other) is GaussianRational and self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash(("Qi", self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return _render_gaussian(self)


def _render_fraction(f: Fraction) -> str:
    return str(f)


def _render_gaussian(g: GaussianRational) -> str:
    if g.im == 0:
        return _render_fraction(g.re)
    if g.im == 1:
        im = "i"
    elif g.im == -1:
        im = "-i"
    else:
        im = f"{_render_fraction(g.im)}*i"
    if g.re == 0:
        return im
    joiner = "+" if not im.startswith("-") else ""
    return f"{_render_fraction(g.re)}{joiner}{im}"


_GR_ZERO = GaussianRational(0, 0)
_GR_ONE = GaussianRational(1, 0)


# ---------------------------------------------------------------------------
# Polynomials in s over Q(i), internal to RationalFunctionQ
# ---------------------------------------------------------------------------

class SPoly:
    """Dense polynomial in s with GaussianRational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def const(g: GaussianRational) -> SPoly:
        return SPoly([g])

    @staticmethod
    def monomial(k: int, g: GaussianRational = _GR_ONE) -> SPoly:
        if k < 0:
            raise ValueError("monomial exponent must be >= 0")
        return SPoly([_GR_ZERO] * k + [g])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> GaussianRational:
        if self.is_zero():
            raise ScalarDivisionError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: SPoly) -> SPoly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return SPoly(out)

    def __neg__(self) -> SPoly:
        return SPoly([-c for c in self.coeffs])

    def __sub__(self, other: SPoly) -> SPoly:
        return self + (-other)

    def __mul__(self, other: SPoly) -> SPoly:
        if self.is_zero() or other.is_zero():
            return SPoly([])
        out = [_GR_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for j, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for k, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                out[j + k] = out[j + k] + a * b
        return SPoly(out)

    def scale(self, g: GaussianRational) -> SPoly:
        if g.is_one():
            return self
        return SPoly([c * g for c in self.coeffs])

    def divmod(self, other: SPoly):
        if other.is_zero():
            raise ScalarDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dv = other.coeffs
        lead_inv = other.leading().invert()
        qdeg = len(rem) - len(dv)
        if qdeg < 0:
            return SPoly([]), self
        quot = [_GR_ZERO] * (qdeg + 1)
        for k in range(qdeg, -1, -1):
            top = rem[k + len(dv) - 1]
            if top.is_zero():
                continue
            f = top * lead_inv
            quot[k] = f
            for j, d in enumerate(dv):
                rem[k + j] = rem[k + j] - f * d
        return SPoly(quot), SPoly(rem)

    def conjugate(self) -> SPoly:
        return SPoly([c.conjugate() for c in self.coeffs])

    def eval(self, x: GaussianRational) -> GaussianRational:
        acc = _GR_ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def even_only(self) -> bool:
        return all(c.is_zero() for k, c in enumerate(self.coeffs) if k % 2 == 1)

    def eval_even(self, q0: GaussianRational) -> GaussianRational:
        acc = _GR_ZERO
        for k in range(len(self.coeffs) - 1 - (len(self.coeffs) - 1) % 2, -1, -2):
            acc = acc * q0 + self.coeffs[k]
        return acc

    def __eq__(self, other):
        return isinstance(other, SPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)


def _spoly_gcd(a: SPoly, b: SPoly) -> SPoly:
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    if a.is_zero():
        return a
    return a.scale(a.leading().invert())


def _spoly_valuation(p: SPoly) -> int:
    for k, c in enumerate(p.coeffs):
        if not c.is_zero():
            return k
    return 0


def _reduce_fraction(num: SPoly, den: SPoly):
    if num.is_zero():
        return num, _SP_ONE
    if den.degree == 0:
        lead = den.coeffs[0]
        if not lead.is_one():
            num = num.scale(lead.invert())
        return num, _SP_ONE
    if all(c.is_zero() for c in den.coeffs[:-1]):
        # monomial denominator: reduce by the s-valuation
        lead = den.leading()
        if not lead.is_one():
            num = num.scale(lead.invert())
        k = den.degree
        r = min(k, _spoly_valuation(num))
        if r:
            num = SPoly(num.coeffs[r:])
            k -= r
        return num, (SPoly.monomial(k) if k else _SP_ONE)
    g = _spoly_gcd(num, den)
    if g.degree > 0:
        num, _ = num.divmod(g)
        den, _ = den.divmod(g)
    lead = den.leading()
    if not lead.is_one():
        inv = lead.invert()
        num = num.scale(inv)
        den = den.scale(inv)
    if den.degree == 0:
        den = _SP_ONE
    return num, den


def _render_spoly(p: SPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if c.is_zero():
            continue
        if k == 0:
            piece = _render_gaussian(c)
        else:
            base = "s" if k == 1 else f"s^{k}"
            if c.is_one():
                piece = base
            elif (-c).is_one():
                piece = f"-{base}"
            else:
                cstr = _render_gaussian(c)
                if c.re != 0 and c.im != 0:
                    cstr = f"({cstr})"
                piece = f"{cstr}*{base}"
        if not parts:
            parts.append(piece)
        elif piece.startswith("-"):
            parts.append(piece)
        else:
            parts.append("+" + piece)
    return "".join(parts)


def _has_toplevel(text: str, ops: str) -> bool:
    depth = 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in ops and k > 0:
            return True
    return False


_SP_ONE = SPoly([_GR_ONE])


# ---------------------------------------------------------------------------
# RationalFunctionQ
# ---------------------------------------------------------------------------

class RationalFunctionQ:
    """Reduced fraction of polynomials in s over Q(i), monic denominator.

    Denominators are usually pure powers of s (the half-integer powers of
    q), so monomial denominators reduce by valuation shifts without a gcd.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: SPoly, den: SPoly = _SP_ONE, _reduced=False):
        if den is not _SP_ONE:
            if den.is_zero():
                raise ScalarDivisionError("zero denominator")
            if not _reduced:
                num, den = _reduce_fraction(num, den)
            elif den.degree == 0 and den.coeffs[0].is_one():
                den = _SP_ONE
        self.num = num
        self.den = den

    @property
    def field(self):
        return QS

    def _check(self, other):
        if type(other) is not RationalFunctionQ:
            raise ScalarMismatchError(f"qfunction vs {type(other).__name__}")

    def __add__(self, other):
        self._check(other)
        if self.den is _SP_ONE:
            if other.den is _SP_ONE:
                return RationalFunctionQ(self.num + other.num, _SP_ONE, _reduced=True)
            return RationalFunctionQ(self.num * other.den + other.num, other.den)
        if other.den is _SP_ONE:
            return RationalFunctionQ(self.num + other.num * self.den, self.den)
        if self.den == other.den:
            return RationalFunctionQ(self.num + other.num, self.den)
        return RationalFunctionQ(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other):
        self._check(other)
        if self.den is _SP_ONE:
            if other.den is _SP_ONE:
                return RationalFunctionQ(self.num - other.num, _SP_ONE, _reduced=True)
            return RationalFunctionQ(self.num * other.den - other.num, other.den)
        if other.den is _SP_ONE:
            return RationalFunctionQ(self.num - other.num * self.den, self.den)
        if self.den == other.den:
            return RationalFunctionQ(self.num - other.num, self.den)
        return RationalFunctionQ(self.num * other.den - other.num * self.den, self.den * other.den)

    def __mul__(self, other):
        self._check(other)
        if self.den is _SP_ONE and other.den is _SP_ONE:
            return RationalFunctionQ(self.num * other.num, _SP_ONE, _reduced=True)
        return RationalFunctionQ(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        self._check(other)
        return self * other.invert()

    def __neg__(self):
        return RationalFunctionQ(-self.num, self.den, _reduced=True)

    def invert(self) -> RationalFunctionQ:
        if self.num.is_zero():
            raise ScalarDivisionError("inverting zero rational function")
        return RationalFunctionQ(self.den, self.num)

    def conjugate(self) -> RationalFunctionQ:
        # s is fixed; only i is negated, so the reduced/monic shape survives
        # up to a real leading factor handled by the constructor.
        return RationalFunctionQ(self.num.conjugate(), self.den.conjugate())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == _SP_ONE and self.den == _SP_ONE

    def evaluate_at(self, s0: GaussianRational) -> GaussianRational:
        d = self.den.eval(s0)
        if d.is_zero():
            raise PoleError(f"denominator vanishes at s = {s0}")
        return self.num.eval(s0) * d.invert()

    def evaluate_at_q(self, q0: GaussianRational) -> GaussianRational:
        if not (self.num.even_only() and self.den.even_only()):
            raise ScalarError("rational function has odd powers of s; substitute s0 instead")
        d = self.den.eval_even(q0)
        if d.is_zero():
            raise PoleError(f"denominator vanishes at q = {q0}")
        return self.num.eval_even(q0) * d.invert()

    def __eq__(self, other):
        return (
            type(other) is RationalFunctionQ
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash(("Qs", self.num, self.den))

    def __repr__(self):
        return f"RationalFunctionQ({self})"

    def __str__(self):
        num = _render_spoly(self.num)
        if self.den == _SP_ONE:
            return num
        den = _render_spoly(self.den)
        if _has_toplevel(num, "+-"):
            num = f"({num})"
        if _has_toplevel(den, "+-*"):
            den = f"({den})"
        return f"{num}/{den}"


# ---------------------------------------------------------------------------
# ComplexFloat
# ---------------------------------------------------------------------------

class ComplexFloat:
    """Complex float scalar; equality uses the field's relative tolerance."""

    __slots__ = ("value", "_field")

    def __init__(self, value, field):
        self.value = complex(value)
        self._field = field

    @property
    def field(self):
        return self._field

    def _check(self, other):
        if type(other) is not ComplexFloat:
            raise ScalarMismatchError(f"float vs {type(other).__name__}")
        if other._field.tolerance != self._field.tolerance:
            raise ScalarMismatchError("float fields with different tolerances")

    def __add__(self, other):
        self._check(other)
        return ComplexFloat(self.value + other.value, self._field)

    def __sub__(self, other):
        self._check(other)
        return ComplexFloat(self.value - other.value, self._field)

    def __mul__(self, other):
        self._check(other)
        return ComplexFloat(self.value * other.value, self._field)

    def __truediv__(self, other):
        self._check(other)
        return self * other.invert()

    def __neg__(self):
        return ComplexFloat(-self.value, self._field)

    def invert(self) -> ComplexFloat:
        if self.is_zero():
            raise ScalarDivisionError("inverting (numerically) zero float")
        return ComplexFloat(1.0 / self.value, self._field)

    def conjugate(self) -> ComplexFloat:
        return ComplexFloat(self.value.conjugate(), self._field)

    def is_zero(self) -> bool:
        return abs(self.value) <= self._field.tolerance

    def is_one(self) -> bool:
        return abs(self.value - 1.0) <= self._field.tolerance

    def __eq__(self, other):
        if type(other) is not ComplexFloat:
            return NotImplemented
        a, b = self.value, other.value
        return abs(a - b) <= self._field.tolerance * max(1.0, abs(a), abs(b))

    __hash__ = None

    def __repr__(self):
        return f"ComplexFloat({self.value})"

    def __str__(self):
        v = self.value
        if v.imag == 0.0:
            return repr(v.real)
        if v.real == 0.0:
            return f"{v.imag!r}*i"
        joiner = "+" if v.imag >= 0 else ""
        return f"{v.real!r}{joiner}{v.imag!r}*i"


# ---------------------------------------------------------------------------
# Field objects
# ---------------------------------------------------------------------------

class RationalFieldType:
    name = "rational"
    has_imag = False

    @property
    def zero(self):
        return Rational(0)

    @property
    def one(self):
        return Rational(1)

    def from_int(self, n: int) -> Rational:
        return Rational(n)

    def from_fraction(self, fr) -> Rational:
        return Rational(_as_fraction(fr))

    @property
    def imag_unit(self):
        raise ScalarError("rational field has no imaginary unit")

    def coefficient_pool(self):
        one = Fraction(1)
        return [Rational(one), Rational(-one), Rational(one / 2), Rational(-one / 2), Rational(2)]

    def __repr__(self):
        return "QQ"


class GaussianFieldType:
    name = "gaussian"
    has_imag = True

    @property
    def zero(self):
        return GaussianRational(0, 0)

    @property
    def one(self):
        return GaussianRational(1, 0)

    @property
    def imag_unit(self):
        return GaussianRational(0, 1)

    def from_int(self, n: int) -> GaussianRational:
        return GaussianRational(n, 0)

    def from_fraction(self, fr) -> GaussianRational:
        return GaussianRational(_as_fraction(fr), 0)

    def coefficient_pool(self):
        return [
            GaussianRational(1), GaussianRational(-1),
            GaussianRational(0, 1), GaussianRational(0, -1),
            GaussianRational(Fraction(1, 2)), GaussianRational(Fraction(-1, 2)),
        ]

    def __repr__(self):
        return "QQI"


class FunctionFieldType:
    name = "qfunction"
    has_imag = True

    @property
    def zero(self):
        return RationalFunctionQ(SPoly([]), _SP_ONE, _reduced=True)

    @property
    def one(self):
        return RationalFunctionQ(_SP_ONE, _SP_ONE, _reduced=True)

    @property
    def imag_unit(self):
        return RationalFunctionQ(SPoly.const(GaussianRational(0, 1)))

    @property
    def s(self):
        return self.s_power(1)

    @property
    def q(self):
        return self.s_power(2)

    def s_power(self, k: int) -> RationalFunctionQ:
        if k >= 0:
            return RationalFunctionQ(SPoly.monomial(k), _SP_ONE, _reduced=True)
        return RationalFunctionQ(_SP_ONE, SPoly.monomial(-k), _reduced=True)

    def q_power(self, k: int) -> RationalFunctionQ:
        return self.s_power(2 * k)

    def from_int(self, n: int) -> RationalFunctionQ:
        return self.from_gaussian(GaussianRational(n, 0))

    def from_fraction(self, fr) -> RationalFunctionQ:
        return self.from_gaussian(GaussianRational(_as_fraction(fr), 0))

    def from_gaussian(self, g: GaussianRational) -> RationalFunctionQ:
        return RationalFunctionQ(SPoly.const(g), _SP_ONE, _reduced=True)

    def coefficient_pool(self):
        return [
            self.one, -self.one, self.imag_unit, -self.imag_unit,
            self.from_fraction(Fraction(1, 2)), -self.from_fraction(Fraction(1, 2)),
            self.s, self.s_power(-1),
        ]

    def __repr__(self):
        return "QS"


class FloatField:
    name = "float"
    has_imag = True

    def __init__(self, tolerance: float = 1e-9):
        self.tolerance = float(tolerance)

    @property
    def zero(self):
        return ComplexFloat(0.0, self)

    @property
    def one(self):
        return ComplexFloat(1.0, self)

    @property
    def imag_unit(self):
        return ComplexFloat(1j, self)

    def from_int(self, n: int) -> ComplexFloat:
        return ComplexFloat(float(n), self)

    def from_fraction(self, fr) -> ComplexFloat:
        fr = _as_fraction(fr)
        return ComplexFloat(fr.numerator / fr.denominator, self)

    def from_complex(self, z) -> ComplexFloat:
        return ComplexFloat(z, self)

    def from_gaussian(self, g: GaussianRational) -> ComplexFloat:
        return ComplexFloat(complex(g.re, g.im), self)

    def coefficient_pool(self):
        return [self.one, -self.one, self.imag_unit, -self.imag_unit,
                ComplexFloat(0.5, self), ComplexFloat(-0.5, self)]

    def __repr__(self):
        return f"FloatField(tol={self.tolerance})"


QQ = RationalFieldType()
QQI = GaussianFieldType()
QS = FunctionFieldType()


def q_integer(n: int) -> RationalFunctionQ:
    """The q-bracket of n: 1 + q + ... + q^(n-1), with q = s^2; 0 for n = 0."""
    if n < 0:
        raise ValueError("q_integer needs n >= 0")
    acc = QS.zero
    for j in range(n):
        acc = acc + QS.q_power(j)
    return acc


def evaluate_at(x: RationalFunctionQ, s0):
    """Substitute s = s0 (exact for GaussianRational s0, float otherwise)."""
    if isinstance(s0, GaussianRational):
        return x.evaluate_at(s0)
    s0 = complex(s0)
    num = _spoly_eval_complex(x.num, s0)
    den = _spoly_eval_complex(x.den, s0)
    if den == 0:
        raise PoleError(f"denominator vanishes at s = {s0}")
    return num / den


def evaluate_at_q(x: RationalFunctionQ, q0) -> GaussianRational:
    """Substitute q = q0 exactly; requires only even powers of s."""
    if not isinstance(q0, GaussianRational):
        q0 = GaussianRational(_as_fraction(q0))
    return x.evaluate_at_q(q0)


def _spoly_eval_complex(p: SPoly, s0: complex) -> complex:
    acc = 0j
    for c in reversed(p.coeffs):
        acc = acc * s0 + complex(c.re, c.im)
    return acc


# ---------------------------------------------------------------------------
# Parsing (canonical scalar syntax; also reused by the element parser)
# ---------------------------------------------------------------------------

class SyntaxParseError(ScalarError):
    """Raised for malformed canonical-syntax input."""


def tokenize(text: str):
    toks = []
    k = 0
    n = len(text)
    while k < n:
        ch = text[k]
        if ch.isspace():
            k += 1
            continue
        if ch in "+-*/^()":
            toks.append((ch, ch))
            k += 1
            continue
        if ch.isdigit() or (ch == "." and k + 1 < n and text[k + 1].isdigit()):
            j = k
            seen_dot = False
            seen_exp = False
            while j < n:
                c = text[j]
                if c.isdigit():
                    j += 1
                elif c == "." and not seen_dot and not seen_exp:
                    seen_dot = True
                    j += 1
                elif c in "eE" and not seen_exp and j + 1 < n and (text[j + 1].isdigit() or text[j + 1] in "+-"):
                    seen_exp = True
                    j += 1
                    if text[j] in "+-":
                        j += 1
                else:
                    break
            toks.append(("num", text[k:j]))
            k = j
            continue
        if ch.isalpha() or ch == "_":
            j = k
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[k:j]))
            k = j
            continue
        raise SyntaxParseError(f"unexpected character {ch!r} at position {k}")
    toks.append(("end", ""))
    return toks


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def next(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            raise SyntaxParseError(f"expected {kind!r}, got {t[1]!r}")
        return t

    def parse_expr(self):
        node = self.parse_term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.parse_term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.peek()[0] in ("*", "/"):
            op = self.next()[0]
            rhs = self.parse_unary()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def parse_unary(self):
        if self.peek()[0] == "-":
            self.next()
            return ("neg", self.parse_unary())
        if self.peek()[0] == "+":
            self.next()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        if self.peek()[0] == "^":
            self.next()
            sign = 1
            if self.peek()[0] == "-":
                self.next()
                sign = -1
            t = self.expect("num")
            if not t[1].isdigit():
                raise SyntaxParseError(f"exponent must be an integer, got {t[1]!r}")
            return ("pow", base, sign * int(t[1]))
        return base

    def parse_atom(self):
        t = self.next()
        if t[0] == "num":
            return ("num", t[1])
        if t[0] == "name":
            return ("name", t[1])
        if t[0] == "(":
            node = self.parse_expr()
            self.expect(")")
            return node
        raise SyntaxParseError(f"unexpected token {t[1]!r}")


def parse_ast(text: str):
    p = _Parser(tokenize(text))
    node = p.parse_expr()
    p.expect("end")
    return node


def _int_pow(x, k: int):
    if k == 0:
        return x.field.one if hasattr(x, "field") else 1
    if k < 0:
        return _int_pow(x.invert(), -k)
    acc = x
    for _ in range(k - 1):
        acc = acc * x
    return acc


def eval_scalar_ast(node, field):
    kind = node[0]
    if kind == "num":
        text = node[1]
        if "." in text or "e" in text or "E" in text:
            if not isinstance(field, FloatField):
                raise SyntaxParseError(f"float literal {text!r} in exact field")
            return ComplexFloat(float(text), field)
        return field.from_int(int(text))
    if kind == "name":
        name = node[1]
        if name == "i":
            return field.imag_unit
        if name == "s":
            if isinstance(field, FunctionFieldType):
                return field.s
            raise SyntaxParseError("the variable s only exists in the q-function field")
        if name == "q":
            if isinstance(field, FunctionFieldType):
                return field.q
            raise SyntaxParseError("the variable q only exists in the q-function field")
        raise SyntaxParseError(f"unknown name {name!r} in scalar")
    if kind == "neg":
        return -eval_scalar_ast(node[1], field)
    if kind == "add":
        return eval_scalar_ast(node[1], field) + eval_scalar_ast(node[2], field)
    if kind == "sub":
        return eval_scalar_ast(node[1], field) - eval_scalar_ast(node[2], field)
    if kind == "mul":
        return eval_scalar_ast(node[1], field) * eval_scalar_ast(node[2], field)
    if kind == "div":
        return eval_scalar_ast(node[1], field) / eval_scalar_ast(node[2], field)
    if kind == "pow":
        return _int_pow(eval_scalar_ast(node[1], field), node[2])
    raise SyntaxParseError(f"bad node {kind!r}")


def parse_scalar(text: str, field):
    """Parse canonical scalar syntax, e.g. ``(1+2*i)*s^3/(s^2-1)``."""
    return eval_scalar_ast(parse_ast(text), field)


def render_scalar(x) -> str:
    return str(x)
