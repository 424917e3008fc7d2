"""Multivariate polynomial rings over exact fields.

Polynomials are immutable maps from exponent tuples to nonzero raw
coefficients.  Monomial orders are given by sort keys so that ``max`` over
the exponents picks the leading monomial.
"""

import re
from fractions import Fraction
from functools import cached_property

from ._parse import Algebra, parse_expression
from .errors import FieldMismatch, ParseError, RejectedInput
from .scalars import Field, FieldElem, SimpleExtension, _join_coeff, _join_terms, parse_field


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def _lex_key(e):
    return tuple(e)


class MonomialOrder:
    """``grevlex``, ``lex`` or ``elim(k)`` (grevlex blocks, first k variables eliminated)."""

    _ELIM = re.compile(r"^elim\((\d+)\)$")

    def __init__(self, name="grevlex"):
        name = name.replace(" ", "")
        self.name = name
        if name == "grevlex":
            self.key = _grevlex_key
            self.elim = 0
        elif name == "lex":
            self.key = _lex_key
            self.elim = None
        else:
            m = self._ELIM.match(name)
            if not m:
                raise RejectedInput(f"unknown monomial order {name!r}")
            k = int(m.group(1))
            self.elim = k
            self.key = lambda e: (_grevlex_key(e[:k]), _grevlex_key(e[k:]))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __str__(self):
        return self.name

    __repr__ = __str__


class PolyRing:
    """k[x1..xN] with a monomial order and an optional homotopy variable."""

    def __init__(self, field, variables, order="grevlex", homotopy=None):
        if isinstance(field, str):
            field = parse_field(field)
        if not isinstance(field, Field):
            raise TypeError("field must be a Field")
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise RejectedInput(f"duplicate variable names in {variables}")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise RejectedInput(f"invalid variable name {v!r}")
            if isinstance(field, SimpleExtension) and v == field.name:
                raise RejectedInput(f"variable {v!r} clashes with the field generator")
        if homotopy is not None and homotopy not in variables:
            raise RejectedInput(f"homotopy variable {homotopy!r} is not a ring variable")
        self.field = field
        self.variables = variables
        self.nvars = len(variables)
        self.order = order if isinstance(order, MonomialOrder) else MonomialOrder(order)
        self.homotopy = homotopy
        self._index = {v: i for i, v in enumerate(variables)}

    # -- identity ------------------------------------------------------------
    def _ident(self):
        return (self.field, self.variables, self.order, self.homotopy)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        return f"PolyRing({self.field}, {list(self.variables)}, {self.order})"

    # -- constructors --------------------------------------------------------
    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise RejectedInput(f"unknown variable {name!r}") from None

    @property
    def zero(self):
        return Polynomial(self, {})

    @property
    def one(self):
        return self.constant(self.field.one)

    def constant(self, raw):
        if self.field.is_zero(raw):
            return self.zero
        return Polynomial(self, {(0,) * self.nvars: raw})

    def monomial(self, exps, raw=None):
        raw = self.field.one if raw is None else raw
        return Polynomial(self, {tuple(exps): raw}) if not self.field.is_zero(raw) else self.zero

    def var(self, name):
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return self.monomial(e)

    @property
    def gens(self):
        return tuple(self.var(v) for v in self.variables)

    def __call__(self, value):
        if isinstance(value, Polynomial):
            if value.ring == self:
                return value
            return value.coerce(self)
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, FieldElem):
            if value.field != self.field:
                raise FieldMismatch(f"{value!r} is not in {self.field}")
            return self.constant(value.value)
        if isinstance(value, (int, Fraction)):
            return self.constant(self.field.from_fraction(value))
        raise TypeError(f"cannot convert {value!r} into {self}")

    def parse(self, text):
        return parse_expression(text, _PolyAlgebra(self))

    # -- derived rings -------------------------------------------------------
    def with_order(self, order):
        return PolyRing(self.field, self.variables, order, self.homotopy)

    def drop(self, name):
        i = self.index(name)
        order = self.order.name
        k = self.order.elim
        if k and i < k:
            order = f"elim({k - 1})" if k > 1 else "grevlex"
        homotopy = None if self.homotopy == name else self.homotopy
        return PolyRing(self.field, self.variables[:i] + self.variables[i + 1:], order, homotopy)

    def extend(self, names, front=False, order=None):
        variables = tuple(names) + self.variables if front else self.variables + tuple(names)
        return PolyRing(self.field, variables, order or self.order, self.homotopy)


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to raw coefficients."""

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    @classmethod
    def from_terms(cls, ring, terms):
        K = ring.field
        return cls(ring, {e: c for e, c in terms.items() if not K.is_zero(c)})

    # -- basic queries -------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        """Raw constant term."""
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    @cached_property
    def lm(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=self.ring.order.key)

    @property
    def lc(self):
        return self.terms[self.lm]

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name):
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def support(self):
        """Set of variable names occurring in the polynomial."""
        out = set()
        for e in self.terms:
            out.update(v for v, x in zip(self.ring.variables, e) if x)
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.ring.order.key(t[0]), reverse=True)

    # -- arithmetic ----------------------------------------------------------
    def _other(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise FieldMismatch("polynomials from different rings")
            return other
        try:
            return self.ring(other)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        K = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = K.add(out[e], c)
                if K.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        K = self.ring.field
        return Polynomial(self.ring, {e: K.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        K = self.ring.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = K.mul(c1, c2)
                if e in out:
                    out[e] = K.add(out[e], c)
                else:
                    out[e] = c
        return Polynomial.from_terms(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, raw):
        K = self.ring.field
        if K.is_zero(raw):
            return self.ring.zero
        return Polynomial(self.ring, {e: K.mul(c, raw) for e, c in self.terms.items()})

    def mul_term(self, exps, raw):
        K = self.ring.field
        return Polynomial(self.ring, {tuple(a + b for a, b in zip(e, exps)): K.mul(c, raw)
                                      for e, c in self.terms.items()})

    def monic(self):
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.lc))

    def divmod(self, g):
        """Division by one polynomial under the ring order: (quotient, remainder)."""
        K = self.ring.field
        key = self.ring.order.key
        glm, ginv = g.lm, K.inv(g.lc)
        q = {}
        r = {}
        p = dict(self.terms)
        while p:
            m = max(p, key=key)
            c = p[m]
            if all(a >= b for a, b in zip(m, glm)):
                shift = tuple(a - b for a, b in zip(m, glm))
                coef = K.mul(c, ginv)
                q[shift] = coef
                for e, gc in g.terms.items():
                    e2 = tuple(a + b for a, b in zip(e, shift))
                    v = K.sub(p.get(e2, K.zero), K.mul(coef, gc))
                    if K.is_zero(v):
                        p.pop(e2, None)
                    else:
                        p[e2] = v
            else:
                r[m] = c
                del p[m]
        return Polynomial(self.ring, q), Polynomial(self.ring, r)

    def exact_div(self, g):
        q, r = self.divmod(g)
        if r:
            raise ValueError(f"{g} does not divide {self}")
        return q

    # -- comparison / hashing ------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, FieldElem)):
            return self == self.ring(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- evaluation and substitution ----------------------------------------
    def derivative(self, name):
        i = self.ring.index(name)
        K = self.ring.field
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[e2] = K.mul(K.from_int(e[i]), c)
        return Polynomial.from_terms(self.ring, out)

    def evaluate(self, values, field=None):
        """Evaluate at raw ``values`` (one per variable) in ``field``.

        ``field`` defaults to the coefficient field; a simple extension of it
        is also accepted, the coefficients being embedded as constants.
        """
        K0 = self.ring.field
        K = field or K0
        if K == K0:
            embed = lambda c: c  # noqa: E731
        elif isinstance(K, SimpleExtension) and K.base == K0:
            embed = K.from_base
        else:
            raise FieldMismatch(f"cannot evaluate a polynomial over {K0} in {K}")
        powers = [[K.one] for _ in values]
        acc = K.zero
        for e, c in self.terms.items():
            t = embed(c)
            for i, x in enumerate(e):
                if x:
                    pw = powers[i]
                    while len(pw) <= x:
                        pw.append(K.mul(pw[-1], values[i]))
                    t = K.mul(t, pw[x])
            acc = K.add(acc, t)
        return acc

    def substitute(self, name, value, ring=None):
        """Evaluate variable ``name`` at a scalar; result lives in ``ring.drop(name)``."""
        R = self.ring
        i = R.index(name)
        K = R.field
        if isinstance(value, FieldElem):
            value = value.value
        elif isinstance(value, (int, Fraction)):
            value = K.from_fraction(value)
        target = ring or R.drop(name)
        out = {}
        for e, c in self.terms.items():
            e2 = e[:i] + e[i + 1:]
            v = K.mul(c, K.pow(value, e[i])) if e[i] else c
            out[e2] = K.add(out.get(e2, K.zero), v)
        return Polynomial.from_terms(target, out)

    def compose(self, mapping, target):
        """Ring map sending each variable to ``mapping[name]`` (a polynomial in ``target``)."""
        R = self.ring
        images = [mapping[v] if v in mapping else target.var(v) for v in R.variables]
        acc = target.zero
        for e, c in self.terms.items():
            t = target.constant(c)
            for img, x in zip(images, e):
                if x:
                    t = t * img ** x
            acc = acc + t
        return acc

    def coerce(self, ring):
        """Move into a ring with a superset of variables (or a different order)."""
        if ring.field != self.ring.field:
            raise FieldMismatch("cannot coerce between coefficient fields")
        idx = []
        for v in self.ring.variables:
            idx.append(ring.index(v))
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * ring.nvars
            for j, x in zip(idx, e):
                e2[j] = x
            out[tuple(e2)] = c
        return Polynomial(ring, out)

    # -- printing -------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        K = self.ring.field
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if x == 1 else f"{v}^{x}" for v, x in zip(self.ring.variables, e) if x)
            parts.append(_join_coeff(K.format(c), mono))
        return _join_terms(parts)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


class _PolyAlgebra(Algebra):
    def __init__(self, ring):
        self.R = ring
        self.K = ring.field

    def const(self, q):
        return self.R.constant(self.K.from_fraction(q))

    def var(self, name):
        if name in self.R._index:
            return self.R.var(name)
        if isinstance(self.K, SimpleExtension) and name == self.K.name:
            return self.R.constant(self.K.generator())
        raise KeyError(name)

    def pow(self, a, e):
        return a ** e

    def as_constant(self, a):
        if not a.is_constant():
            return None
        c = a.constant_value()
        if isinstance(self.K, SimpleExtension):
            if any(not self.K.base.is_zero(x) for x in c[1:]):
                return None
            c = c[0]
        return Fraction(c)

    def div_const(self, a, q):
        K = self.K
        if K.characteristic and q.numerator % K.characteristic == 0:
            raise ParseError("division by zero in the coefficient field")
        return a.scale(K.inv(K.from_fraction(q)))


def parse_poly(ring, text):
    return ring.parse(text)
