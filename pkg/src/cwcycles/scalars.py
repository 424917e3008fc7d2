"""Exact scalar fields: QQ, GF(p) for odd p, and simple extensions K[z]/(m).

Fields expose two layers.  The *raw* layer (``K.add(a, b)`` on plain Python
values: ``Fraction``, ``int`` or coefficient tuples) is what the polynomial
and matrix code runs on.  :class:`FieldElem` wraps a raw value with its field
and gives operator syntax for user-facing code.

Square classes need integer factorization over QQ; it is done by trial
division up to a configurable bound (see :func:`set_trial_division_bound`).
"""

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from . import univariate as up
from ._parse import Algebra, parse_expression
from .errors import FieldMismatch, ParseError, RejectedInput, UnsupportedCase

DEFAULT_TRIAL_DIVISION_BOUND = 10 ** 6
_trial_division_bound = DEFAULT_TRIAL_DIVISION_BOUND


def set_trial_division_bound(bound):
    global _trial_division_bound
    if bound < 2:
        raise ValueError("trial division bound must be at least 2")
    _trial_division_bound = int(bound)


def get_trial_division_bound():
    return _trial_division_bound


def factor_integer(n, bound=None):
    """Prime factorization {p: e} of |n| by trial division.

    A cofactor left after dividing out all primes <= bound is accepted as prime
    only when it is below bound**2; otherwise UnsupportedCase is raised.
    """
    bound = bound or _trial_division_bound
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor zero")
    out = {}
    d = 2
    while d * d <= n:
        if d > bound:
            raise UnsupportedCase(f"integer {n} has no factor below trial-division bound {bound}")
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def squarefree_part(n, bound=None):
    """Signed squarefree integer in the square class of the nonzero rational n."""
    q = Fraction(n)
    m = q.numerator * q.denominator
    sign = -1 if m < 0 else 1
    core = 1
    for p, e in factor_integer(m, bound).items():
        if e % 2:
            core *= p
    return sign * core


def _is_perfect_square(n):
    return n >= 0 and isqrt(n) ** 2 == n


def _rational_is_square(q):
    q = Fraction(q)
    return _is_perfect_square(q.numerator) and _is_perfect_square(q.denominator)


def _rational_sqrt(q):
    q = Fraction(q)
    return Fraction(isqrt(q.numerator), isqrt(q.denominator))


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Field:
    """Base class of exact fields of characteristic != 2."""

    characteristic = 0
    degree = 1
    zero = None
    one = None

    # raw arithmetic; subclasses implement these
    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def from_int(self, n):
        raise NotImplementedError

    def from_fraction(self, q):
        q = Fraction(q)
        return self.div(self.from_int(q.numerator), self.from_int(q.denominator))

    def is_zero(self, a):
        return a == self.zero

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a = self.inv(a)
            e = -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def format(self, a):
        raise NotImplementedError

    def sort_key(self, a):
        raise NotImplementedError

    def random_raw(self, rng, nonzero=False):
        raise NotImplementedError

    def is_square_raw(self, a):
        raise NotImplementedError

    def square_class_raw(self, a):
        """Return (representative, canonical?) of a modulo squares."""
        raise NotImplementedError

    @property
    def is_finite(self):
        return self.characteristic != 0

    @property
    def order(self):
        if not self.is_finite:
            return None
        return self.characteristic ** self.degree

    # user-facing layer
    def __call__(self, value):
        if isinstance(value, FieldElem):
            if value.field != self:
                raise FieldMismatch(f"element of {value.field} given where {self} expected")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (int, Fraction)):
            return FieldElem(self, self.from_fraction(value))
        raise TypeError(f"cannot convert {value!r} into {self}")

    def elem(self, raw):
        return FieldElem(self, raw)

    def parse(self, text):
        return FieldElem(self, parse_expression(text, _ElementAlgebra(self)))

    def parse_raw(self, text):
        return self.parse(text).value

    def random_element(self, rng=None, nonzero=False):
        rng = rng or random.Random()
        return FieldElem(self, self.random_raw(rng, nonzero))

    def __str__(self):
        return self.descriptor()

    def __repr__(self):
        return f"Field({self.descriptor()!r})"

    def __eq__(self, other):
        return isinstance(other, Field) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(self.descriptor())


class RationalField(Field):
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def descriptor(self):
        return "QQ"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return 1 / a

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def format(self, a):
        return str(a)

    def sort_key(self, a):
        return (a,)

    def random_raw(self, rng, nonzero=False, height=10):
        while True:
            q = Fraction(rng.randint(-height, height), rng.randint(1, height))
            if q or not nonzero:
                return q

    def is_square_raw(self, a):
        if a == 0:
            raise RejectedInput("square test of zero")
        return _rational_is_square(a)

    def square_class_raw(self, a):
        if a == 0:
            raise RejectedInput("square class of zero")
        return Fraction(squarefree_part(a)), True


QQ = RationalField()


class PrimeField(Field):
    def __init__(self, p):
        p = int(p)
        if p == 2:
            raise RejectedInput("characteristic 2 is not supported (1/2 must exist)")
        if not _is_prime(p):
            raise RejectedInput(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1
        self._nonresidue = None

    def descriptor(self):
        return f"GF({self.p})"

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return pow(a, -1, self.p)

    def from_int(self, n):
        return n % self.p

    def format(self, a):
        return str(a)

    def sort_key(self, a):
        return (a,)

    def random_raw(self, rng, nonzero=False):
        return rng.randrange(1 if nonzero else 0, self.p)

    def is_square_raw(self, a):
        if a == 0:
            raise RejectedInput("square test of zero")
        return pow(a, (self.p - 1) // 2, self.p) == 1

    @property
    def least_nonresidue(self):
        if self._nonresidue is None:
            self._nonresidue = next(a for a in range(2, self.p) if not self.is_square_raw(a))
        return self._nonresidue

    def square_class_raw(self, a):
        if a == 0:
            raise RejectedInput("square class of zero")
        return (1 if self.is_square_raw(a) else self.least_nonresidue), True

    def elements(self):
        return range(self.p)


class SimpleExtension(Field):
    """K[name]/(modulus) for a monic irreducible modulus over QQ or GF(p)."""

    def __init__(self, base, modulus, name="z"):
        if isinstance(base, SimpleExtension):
            raise UnsupportedCase("towers of extensions are not supported")
        modulus = up.trim(base, [base.from_fraction(c) for c in modulus])
        if up.degree(modulus) < 1:
            raise RejectedInput("minimal polynomial must have degree >= 1")
        modulus = up.monic(base, modulus)
        if not up.is_irreducible(base, modulus):
            raise RejectedInput(f"minimal polynomial {up_format(base, modulus, name)} is reducible over {base}")
        self.base = base
        self.modulus = tuple(modulus)
        self.name = name
        self.degree = up.degree(modulus)
        self.characteristic = base.characteristic
        self.zero = (base.zero,) * self.degree
        self.one = (base.one,) + (base.zero,) * (self.degree - 1)
        self._nonresidue = None

    def descriptor(self):
        return f"{self.base.descriptor()}[{self.name}]/({up_format(self.base, list(self.modulus), self.name)})"

    def _pad(self, f):
        return tuple(f) + (self.base.zero,) * (self.degree - len(f))

    def _reduce(self, f):
        return self._pad(up.rem(self.base, up.trim(self.base, f), list(self.modulus)))

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        B = self.base
        return self._reduce(up.mul(B, up.trim(B, a), up.trim(B, b)))

    def inv(self, a):
        B = self.base
        r0, r1 = list(self.modulus), up.trim(B, a)
        if not r1:
            raise ZeroDivisionError(f"division by zero in {self}")
        s0, s1 = [], [B.one]
        while r1:
            q, r = up.divmod_(B, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, up.sub(B, s0, up.mul(B, q, s1))
        # r0 is a nonzero constant since the modulus is irreducible
        return self._reduce(up.scale(B, B.inv(r0[0]), s0))

    def from_int(self, n):
        return (self.base.from_int(n),) + (self.base.zero,) * (self.degree - 1)

    def from_fraction(self, q):
        return (self.base.from_fraction(q),) + (self.base.zero,) * (self.degree - 1)

    def from_base(self, c):
        return (c,) + (self.base.zero,) * (self.degree - 1)

    def generator(self):
        return self._reduce([self.base.zero, self.base.one])

    def format(self, a):
        return up_format(self.base, up.trim(self.base, a), self.name)

    def sort_key(self, a):
        return tuple(self.base.sort_key(c) for c in a)

    def random_raw(self, rng, nonzero=False):
        while True:
            a = tuple(self.base.random_raw(rng) for _ in range(self.degree))
            if a != self.zero or not nonzero:
                return a

    def elements(self):
        if not self.is_finite:
            raise UnsupportedCase("cannot enumerate an infinite field")
        p = self.characteristic
        for k in range(p ** self.degree):
            yield tuple((k // p ** i) % p for i in range(self.degree))

    def is_square_raw(self, a):
        if a == self.zero:
            raise RejectedInput("square test of zero")
        if self.is_finite:
            return self.pow(a, (self.order - 1) // 2) == self.one
        if self.degree == 2:
            return self._sqrt_quadratic(a) is not None
        raise UnsupportedCase("square test in QQ-extensions of degree > 2")

    def _sqrt_quadratic(self, a):
        """Square root in QQ[z]/(z^2 + b z + c), or None."""
        c0, b0 = self.modulus[0], self.modulus[1]
        # w = z + b/2 satisfies w^2 = D
        D = b0 * b0 / 4 - c0
        u, v = a
        s, t = u - v * b0 / 2, v
        candidates = []
        if t == 0:
            if _rational_is_square(s):
                candidates.append((_rational_sqrt(s), Fraction(0)))
            if _rational_is_square(s / D):
                candidates.append((Fraction(0), _rational_sqrt(s / D)))
        else:
            N = s * s - D * t * t
            if _rational_is_square(N):
                r = _rational_sqrt(N)
                for x2 in ((s + r) / 2, (s - r) / 2):
                    if x2 != 0 and _rational_is_square(x2):
                        x = _rational_sqrt(x2)
                        candidates.append((x, t / (2 * x)))
        for x, y in candidates:
            root = (x + y * b0 / 2, y)
            if self.mul(root, root) == tuple(a):
                return root
        return None

    @property
    def least_nonresidue(self):
        if self._nonresidue is None:
            self._nonresidue = next(a for a in self.elements()
                                    if a != self.zero and not self.is_square_raw(a))
        return self._nonresidue

    def square_class_raw(self, a):
        if a == self.zero:
            raise RejectedInput("square class of zero")
        if self.is_finite:
            return (self.one if self.is_square_raw(a) else self.least_nonresidue), True
        if self.is_square_raw(a):
            return self.one, True
        # no canonical representatives in QQ(sqrt d); classes still compare via is_square
        return tuple(a), False


def up_format(K, f, name):
    """Format a univariate polynomial (raw coefficients) as ASCII."""
    f = up.trim(K, f)
    if not f:
        return "0"
    parts = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if K.is_zero(c):
            continue
        mono = "" if i == 0 else (name if i == 1 else f"{name}^{i}")
        parts.append(_join_coeff(K.format(c), mono))
    return _join_terms(parts)


def _join_coeff(cstr, mono):
    """Combine a coefficient string with a monomial string; returns (sign, body)."""
    neg = cstr.startswith("-") and not _needs_parens(cstr[1:])
    if neg:
        cstr = cstr[1:]
    if _needs_parens(cstr):
        cstr = f"({cstr})"
    if not mono:
        body = cstr
    elif cstr == "1":
        body = mono
    else:
        body = f"{cstr}*{mono}"
    return ("-" if neg else "+", body)


def _needs_parens(s):
    return any(ch in s[1:] for ch in "+-") or ("*" in s and not s.startswith("("))


def _join_terms(parts):
    out = ""
    for i, (sign, body) in enumerate(parts):
        if i == 0:
            out = body if sign == "+" else f"-{body}"
        else:
            out += f" {sign} {body}"
    return out


class _ElementAlgebra(Algebra):
    """Parse field elements; an extension's generator name is the only variable."""

    def __init__(self, K):
        self.K = K

    def const(self, q):
        return self.K.from_fraction(q)

    def var(self, name):
        if isinstance(self.K, SimpleExtension) and name == self.K.name:
            return self.K.generator()
        raise KeyError(name)

    def add(self, a, b):
        return self.K.add(a, b)

    def sub(self, a, b):
        return self.K.sub(a, b)

    def mul(self, a, b):
        return self.K.mul(a, b)

    def neg(self, a):
        return self.K.neg(a)

    def pow(self, a, e):
        return self.K.pow(a, e)

    def as_constant(self, a):
        K = self.K
        if isinstance(K, SimpleExtension):
            if any(not K.base.is_zero(c) for c in a[1:]):
                return None
            a = a[0]
            K = K.base
        if K.characteristic == 0:
            return Fraction(a)
        return Fraction(a)

    def div_const(self, a, q):
        K = self.K
        if K.characteristic and q.numerator % K.characteristic == 0:
            raise ZeroDivisionError("division by zero")
        return K.div(a, K.from_fraction(q))


_GF = re.compile(r"^GF\((\d+)\)$")
_EXT = re.compile(r"^(QQ|GF\(\d+\))\[([A-Za-z_][A-Za-z_0-9]*)\]/\((.*)\)$")


def parse_field(text):
    """Parse ``QQ``, ``GF(p)`` or ``BASE[name]/(poly)`` into a Field."""
    s = text.strip().replace(" ", "")
    if s == "QQ":
        return QQ
    m = _GF.match(s)
    if m:
        return PrimeField(int(m.group(1)))
    m = _EXT.match(s)
    if m:
        base = parse_field(m.group(1))
        name = m.group(2)
        coeffs = parse_expression(m.group(3), _UnivariateAlgebra(base, name))
        return SimpleExtension(base, coeffs, name)
    raise ParseError("unrecognized field descriptor", text, 1)


class _UnivariateAlgebra(Algebra):
    def __init__(self, K, name):
        self.K, self.name = K, name

    def const(self, q):
        return up.trim(self.K, [self.K.from_fraction(q)])

    def var(self, name):
        if name != self.name:
            raise KeyError(name)
        return [self.K.zero, self.K.one]

    def add(self, a, b):
        return up.add(self.K, a, b)

    def sub(self, a, b):
        return up.sub(self.K, a, b)

    def mul(self, a, b):
        return up.mul(self.K, a, b)

    def neg(self, a):
        return up.neg(self.K, a)

    def pow(self, a, e):
        out = [self.K.one]
        for _ in range(e):
            out = up.mul(self.K, out, a)
        return out

    def as_constant(self, a):
        if len(a) > 1:
            return None
        return Fraction(a[0]) if a else Fraction(0)

    def div_const(self, a, q):
        return up.scale(self.K, self.K.inv(self.K.from_fraction(q)), a)


class FieldElem:
    """An immutable element of a :class:`Field`."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElem is immutable")

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine elements of {self.field} and {other.field}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.field.from_fraction(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.div(b, self.value))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __pow__(self, e):
        return FieldElem(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElem(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.field.from_fraction(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return not self.field.is_zero(self.value)

    def is_zero(self):
        return self.field.is_zero(self.value)

    def is_square(self):
        return self.field.is_square_raw(self.value)

    def square_class(self):
        rep, canonical = self.field.square_class_raw(self.value)
        return SquareClassTag(FieldElem(self.field, rep), canonical)

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"{self.field}({self.field.format(self.value)!r})"


@dataclass(frozen=True)
class SquareClassTag:
    """Class of a unit modulo squares.

    Over QQ and finite fields the representative is canonical (squarefree
    integer, resp. 1 or the least non-square).  Over QQ(sqrt d) it is the
    element itself and classes compare by a square test of the product.
    """

    representative: FieldElem
    canonical: bool = True

    @property
    def is_trivial(self):
        return self.representative.is_square()

    def __eq__(self, other):
        if not isinstance(other, SquareClassTag):
            return NotImplemented
        if self.canonical and other.canonical:
            return self.representative == other.representative
        return (self.representative * other.representative).is_square()

    def __hash__(self):
        if self.canonical:
            return hash(self.representative)
        return hash(self.representative.field)

    def __str__(self):
        return str(self.representative)


def is_square(a):
    return a.is_square()


def square_class(a):
    return a.square_class()


def factor_univariate(K, coeffs):
    """Factor a univariate polynomial over GF(p) (or QQ, low degree).

    ``coeffs`` lists raw coefficients constant term first.  Returns
    ``(leading_coefficient, [(monic irreducible factor, multiplicity), ...])``.
    """
    if isinstance(K, PrimeField):
        return up.factor_fp(K, coeffs)
    if K is QQ or isinstance(K, RationalField):
        return up.factor_q_low_degree(K, coeffs, get_trial_division_bound())
    raise UnsupportedCase(f"univariate factorization over {K}")
