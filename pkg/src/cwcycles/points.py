"""Closed points of zero-dimensional ideals and their residue fields.

Only two routes are supported: the ideal is in shape position for some
choice of last variable (its lex basis is x_i - g_i(t), h(t)), or the caller
supplies the maximal ideals, which are then verified.
"""

from dataclasses import dataclass
from functools import cached_property

from . import univariate as up
from .errors import RejectedInput, UnsupportedCase
from .groebner import Ideal
from .polyring import PolyRing
from .scalars import FieldElem, PrimeField, RationalField, SimpleExtension, factor_univariate


@dataclass(frozen=True, eq=False)
class Point:
    """A closed point: maximal ideal with a presented residue field.

    ``generators`` is the canonical shape presentation x_i - g_i(t), q(t);
    ``images`` holds the raw residue-field values of the ring variables.
    """

    ring: PolyRing
    generators: tuple
    field: object
    images: tuple
    multiplicity: int = 1

    @cached_property
    def ideal(self):
        return Ideal(self.ring, self.generators)

    @cached_property
    def key(self):
        return (self.ring.variables, tuple(str(g) for g in self.ideal.groebner))

    def __eq__(self, other):
        return isinstance(other, Point) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def sort_key(self):
        return (self.degree, str(self.field), tuple(self.field.sort_key(x) for x in self.images))

    @property
    def degree(self):
        return self.field.degree if isinstance(self.field, SimpleExtension) else 1

    @property
    def is_reduced(self):
        return self.multiplicity == 1

    def reduce(self, f):
        """Image of a ring element in the residue field."""
        f = self.ring(f)
        return FieldElem(self.field, f.evaluate(self.images, self.field))

    def coordinates(self):
        return {v: self.field.format(x) for v, x in zip(self.ring.variables, self.images)}

    def label(self):
        coords = ", ".join(f"{v}={x}" for v, x in self.coordinates().items())
        return f"({coords}) over {self.field}"

    def __repr__(self):
        return f"Point({self.label()})"

    def to_json(self):
        return {
            "prime": [str(g) for g in self.generators],
            "residue_field": str(self.field),
            "coordinates": self.coordinates(),
        }


def _shape_basis(I, last):
    """Lex basis of I with ``last`` as smallest variable, if in shape position."""
    R = I.ring
    others = [v for v in R.variables if v != last]
    lexR = PolyRing(R.field, others + [last], "lex")
    gb = Ideal(lexR, [g.coerce(lexR) for g in I.gens]).groebner
    if len(gb) != len(others) + 1:
        return None
    t = len(others)
    univ = None
    linear = {}
    for g in gb:
        lm = g.lm
        if not any(lm[:t]):
            univ = g
            continue
        i = next(k for k in range(t) if lm[k])
        if lm[i] != 1 or any(lm[k] for k in range(t) if k != i):
            return None
        # reduced basis: x_i - g_i(t) with no other x_j present
        for e in g.terms:
            if any(e[k] for k in range(t) if k != i) or (e[i] and e != lm):
                return None
        linear[others[i]] = g
    if univ is None or len(linear) != t:
        return None
    K = R.field
    h = [K.zero] * (univ.lm[t] + 1)
    for e, c in univ.terms.items():
        h[e[t]] = c
    tails = {}
    for v, g in linear.items():
        i = others.index(v)
        coeffs = [K.zero] * (g.total_degree() + 1)
        for e, c in g.terms.items():
            if e[i] == 0:
                coeffs[e[t]] = K.neg(c)
        tails[v] = up.trim(K, coeffs)
    return up.trim(K, h), tails


def _points_from_shape(ring, last, h, tails):
    K = ring.field
    _, factors = factor_univariate(K, h)
    out = []
    tvar = ring.var(last)
    for q, mult in factors:
        if up.degree(q) == 1:
            L = K
            root = K.neg(q[0])
        else:
            L = SimpleExtension(K, q, "z")
            root = L.generator()
        images = []
        gens = []
        for v in ring.variables:
            if v == last:
                images.append(root)
                continue
            gv = up.rem(K, tails[v], q)
            images.append(up.evaluate(L, [L.from_base(c) if L is not K else c for c in gv], root))
            gens.append(ring.var(v) - _upoly_to_ring(ring, gv, tvar))
        gens.append(_upoly_to_ring(ring, q, tvar))
        out.append(Point(ring, tuple(gens), L, tuple(images), mult))
    return out


def _upoly_to_ring(ring, coeffs, tvar):
    acc = ring.zero
    for i, c in enumerate(coeffs):
        if not ring.field.is_zero(c):
            acc = acc + ring.constant(c) * tvar ** i
    return acc


def _check_base(ring):
    if not isinstance(ring.field, (PrimeField, RationalField)):
        raise UnsupportedCase(f"point decomposition over {ring.field} (only QQ and GF(p))")


def shape_points(I):
    """Points of I from a shape-position lex basis, or None if none is found."""
    R = I.ring
    for last in reversed(R.variables):
        shape = _shape_basis(I, last)
        if shape is not None:
            h, tails = shape
            return _points_from_shape(R, last, h, tails)
    return None


def point_from_generators(ring, gens):
    """Verify that ``gens`` generate a maximal ideal and present its residue field."""
    _check_base(ring)
    J = Ideal(ring, gens)
    if J.is_unit():
        raise RejectedInput(f"({', '.join(map(str, gens))}) is the unit ideal")
    if not J.is_zero_dimensional():
        raise UnsupportedCase(f"({', '.join(map(str, gens))}) is not a closed point")
    pts = shape_points(J)
    if pts is None:
        raise UnsupportedCase(f"({', '.join(map(str, gens))}) is not in shape position")
    if len(pts) != 1 or pts[0].multiplicity != 1:
        raise RejectedInput(f"({', '.join(map(str, gens))}) is not a maximal ideal")
    return pts[0]


def _power_mod(f, k, I):
    acc = I.normal_form(f)
    result = I.normal_form(I.ring.one)
    while k:
        if k & 1:
            result = I.normal_form(result * acc)
        acc = I.normal_form(acc * acc)
        k >>= 1
    return result


def local_length(I, point, total=None):
    """Length of (A/I) localized at ``point`` (its multiplicity)."""
    total = total or I.vector_space_dimension()
    local = I + point.ideal.power(total)
    return local.vector_space_dimension() // point.degree


def minimal_primes_zero_dim(I, decomposition=None):
    """Closed points of a zero-dimensional ideal, with residue fields.

    ``decomposition`` optionally lists generator lists of the maximal ideals;
    they are verified to contain I, to be pairwise comaximal and to cover
    every point of I.
    """
    R = I.ring
    _check_base(R)
    if I.is_unit():
        return []
    if not I.is_zero_dimensional():
        raise RejectedInput(f"ideal {I} is not zero-dimensional (height {I.height()} < {R.nvars})")
    if decomposition is None:
        pts = shape_points(I)
        if pts is None:
            raise UnsupportedCase(f"ideal {I} is not in shape position; supply a decomposition")
        return sorted(pts, key=Point.sort_key)
    pts = [point_from_generators(R, [R(g) for g in gens]) for gens in decomposition]
    for p in pts:
        if not p.ideal.contains_ideal(I):
            raise RejectedInput(f"supplied prime {p.label()} does not contain the ideal")
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            if not (pts[a].ideal + pts[b].ideal).is_unit():
                raise RejectedInput(f"supplied primes {pts[a].label()} and {pts[b].label()} coincide")
    total = I.vector_space_dimension()
    product = Ideal(R, [R.one])
    for p in pts:
        product = product * p.ideal
    for g in product.groebner:
        if _power_mod(g, total, I):
            raise RejectedInput("supplied decomposition misses a point of the ideal")
    out = []
    for p in pts:
        m = local_length(I, p, total)
        out.append(Point(R, p.generators, p.field, p.images, m))
    return sorted(out, key=Point.sort_key)


def is_reduced_at(I, point):
    """True iff (A/I) localized at the point is a field: P = I + P^2."""
    P = point.ideal
    local = I + P.power(2)
    return all(g in local for g in P.gens)
