"""Buchberger's algorithm and ideal arithmetic.

The engine uses the sugar selection strategy with the Gebauer-Moeller pair
criteria and returns the reduced, monic basis sorted by decreasing leading
monomial, so bases are canonical for a given ring order.  Optionally it
tracks cofactors expressing every basis element in the input generators,
which is what :meth:`Ideal.lift` needs.
"""

import itertools
import threading
from dataclasses import dataclass, field

from .errors import RejectedInput
from .polyring import Polynomial, PolyRing


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a, b):
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _reduce(ring, terms, basis, full=True):
    """Reduce ``terms`` (a dict) by ``basis`` (list of Polynomials).

    Returns ``(remainder_dict, ops)`` with ops a list of (basis_index, shift,
    coefficient) such that input = remainder + sum coef * x^shift * basis[i].
    """
    K = ring.field
    key = ring.order.key
    p = dict(terms)
    rem = {}
    ops = []
    heads = [(g.lm, K.inv(g.lc), g) for g in basis]
    while p:
        m = max(p, key=key)
        c = p[m]
        for i, (glm, ginv, g) in enumerate(heads):
            if _divides(glm, m):
                shift = tuple(a - b for a, b in zip(m, glm))
                coef = K.mul(c, ginv)
                ops.append((i, shift, coef))
                for e, gc in g.terms.items():
                    e2 = tuple(a + b for a, b in zip(e, shift))
                    v = K.sub(p.get(e2, K.zero), K.mul(coef, gc))
                    if K.is_zero(v):
                        p.pop(e2, None)
                    else:
                        p[e2] = v
                break
        else:
            if not full:
                rem.update(p)
                break
            rem[m] = c
            del p[m]
    return rem, ops


def _apply_ops(ring, cof, ops, cofs):
    """cof - sum coef * x^shift * cofs[i], componentwise."""
    out = list(cof)
    for i, shift, coef in ops:
        for k, c in enumerate(cofs[i]):
            if c:
                out[k] = out[k] - c.mul_term(shift, coef)
    return out


@dataclass
class _Entry:
    poly: Polynomial
    sugar: int
    cof: list = field(default=None)


def buchberger(gens, track=False):
    """Reduced Groebner basis of the ideal generated by ``gens``.

    With ``track=True`` returns ``(basis, cofactors)`` where
    ``basis[i] == sum(cofactors[i][j] * gens[j])``.
    """
    gens = list(gens)
    if not gens:
        return ([], []) if track else []
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RejectedInput("generators live in different rings")
    K = ring.field
    key = ring.order.key
    n = len(gens)
    entries = []
    G = []
    B = []

    def unit(j):
        return [ring.one if k == j else ring.zero for k in range(n)]

    def add_entry(poly, sugar, cof):
        inv = K.inv(poly.lc)
        poly = poly.scale(inv)
        if cof is not None:
            cof = [c.scale(inv) for c in cof]
        entries.append(_Entry(poly, sugar, cof))
        update(len(entries) - 1)

    def pair_info(i, j):
        a, b = entries[i], entries[j]
        lcm = _lcm(a.poly.lm, b.poly.lm)
        d = sum(lcm)
        sugar = max(a.sugar + d - sum(a.poly.lm), b.sugar + d - sum(b.poly.lm))
        return (sugar, key(lcm), i, j), lcm

    def update(h):
        nonlocal G, B
        lh = entries[h].poly.lm
        C = [(g, h) for g in G]
        D = []
        while C:
            g, _ = C.pop(0)
            lg = entries[g].poly.lm
            lgh = _lcm(lg, lh)
            if _coprime(lg, lh) or not any(
                    _divides(_lcm(entries[g2].poly.lm, lh), lgh) for g2, _ in C + D):
                D.append((g, h))
        E = [(g, h2) for g, h2 in D if not _coprime(entries[g].poly.lm, lh)]
        kept = []
        for info, lcm in B:
            g1, g2 = info[2], info[3]
            if (_divides(lh, lcm) and _lcm(entries[g1].poly.lm, lh) != lcm
                    and _lcm(entries[g2].poly.lm, lh) != lcm):
                continue
            kept.append((info, lcm))
        kept.extend(pair_info(g, h2) for g, h2 in E)
        B = kept
        G = [g for g in G if not _divides(lh, entries[g].poly.lm)] + [h]

    for j, f in enumerate(gens):
        if f:
            add_entry(f, f.total_degree(), unit(j) if track else None)

    while B:
        B.sort(key=lambda t: t[0])
        (sugar, _, i, j), lcm = B.pop(0)
        a, b = entries[i], entries[j]
        sa = tuple(x - y for x, y in zip(lcm, a.poly.lm))
        sb = tuple(x - y for x, y in zip(lcm, b.poly.lm))
        spoly = a.poly.mul_term(sa, K.one) - b.poly.mul_term(sb, K.one)
        basis = [entries[g].poly for g in G]
        rem, ops = _reduce(ring, spoly.terms, basis)
        if rem:
            cof = None
            if track:
                cof = [x.mul_term(sa, K.one) - y.mul_term(sb, K.one) for x, y in zip(a.cof, b.cof)]
                cof = _apply_ops(ring, cof, ops, [entries[g].cof for g in G])
            add_entry(Polynomial(ring, rem), sugar, cof)

    # minimal basis, then interreduce tails
    G = sorted(G, key=lambda g: key(entries[g].poly.lm), reverse=True)
    minimal = [g for g in G if not any(h != g and _divides(entries[h].poly.lm, entries[g].poly.lm)
                                       for h in G)]
    polys = [entries[g].poly for g in minimal]
    cofs = [entries[g].cof for g in minimal]
    out_p, out_c = [], []
    for idx, g in enumerate(polys):
        others = polys[:idx] + polys[idx + 1:]
        lead = {g.lm: g.lc}
        tail = {e: c for e, c in g.terms.items() if e != g.lm}
        rem, ops = _reduce(ring, tail, others)
        rem.update(lead)
        out_p.append(Polynomial(ring, rem).monic())
        if track:
            other_cofs = cofs[:idx] + cofs[idx + 1:]
            out_c.append(_apply_ops(ring, cofs[idx], ops, other_cofs))
    # polys[idx] were monic already, so the interreduced elements stay monic
    if track:
        return out_p, out_c
    return out_p


def normal_form(f, basis):
    """Remainder of ``f`` on division by a Groebner basis."""
    if not basis:
        return f
    rem, _ = _reduce(f.ring, f.terms, list(basis))
    return Polynomial(f.ring, rem)


def _division_with_quotients(f, basis):
    rem, ops = _reduce(f.ring, f.terms, list(basis))
    ring = f.ring
    quots = [ring.zero] * len(basis)
    for i, shift, coef in ops:
        quots[i] = quots[i] + ring.monomial(shift, coef)
    return quots, Polynomial(ring, rem)


class Ideal:
    """Ideal of a polynomial ring with a lazily cached reduced Groebner basis."""

    def __init__(self, ring, gens=()):
        if not isinstance(ring, PolyRing):
            raise TypeError("ring must be a PolyRing")
        self.ring = ring
        self.gens = tuple(ring(g) for g in gens)
        self._lock = threading.Lock()
        self._gb = None
        self._gb_track = None
        self._height = None

    # -- Groebner data --------------------------------------------------------
    @property
    def groebner(self):
        if self._gb is None:
            with self._lock:
                if self._gb is None:
                    self._gb = tuple(buchberger([g for g in self.gens if g]))
        return self._gb

    def _tracked(self):
        if self._gb_track is None:
            with self._lock:
                if self._gb_track is None:
                    self._gb_track = buchberger(list(self.gens), track=True) if self.gens else ([], [])
        return self._gb_track

    def normal_form(self, f):
        return normal_form(self.ring(f), self.groebner)

    def __contains__(self, f):
        return not self.normal_form(f)

    def contains_ideal(self, other):
        return all(g in self for g in other.gens)

    def lift(self, f):
        """Cofactors c with f == sum(c[j] * gens[j]); None if f is not in the ideal."""
        f = self.ring(f)
        basis, cofs = self._tracked()
        if not basis:
            return [self.ring.zero] * len(self.gens) if not f else None
        quots, rem = _division_with_quotients(f, basis)
        if rem:
            return None
        out = [self.ring.zero] * len(self.gens)
        for q, cof in zip(quots, cofs):
            if q:
                for j, c in enumerate(cof):
                    out[j] = out[j] + q * c
        return out

    # -- predicates ------------------------------------------------------------
    def is_unit(self):
        gb = self.groebner
        return len(gb) == 1 and gb[0].is_constant() and bool(gb[0])

    def is_zero(self):
        return not self.groebner

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.groebner == other.groebner

    def __hash__(self):
        return hash((self.ring, self.groebner))

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gens)})"

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")"

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Ideal):
            return Ideal(self.ring, self.gens + other.gens)
        return Ideal(self.ring, self.gens + tuple(self.ring(g) for g in other))

    def __mul__(self, other):
        return Ideal(self.ring, [a * b for a in self.groebner for b in other.groebner])

    def power(self, k):
        out = Ideal(self.ring, [self.ring.one])
        for _ in range(k):
            out = out * self
        return out

    def with_order(self, order):
        R = self.ring.with_order(order)
        return Ideal(R, [g.coerce(R) for g in self.gens])

    def eliminate(self, names):
        """Intersection with the subring in the remaining variables."""
        names = list(names)
        R = self.ring
        keep = [v for v in R.variables if v not in names]
        big = PolyRing(R.field, names + keep, f"elim({len(names)})" if keep else "grevlex")
        order = R.order.name if R.order.name in ("lex", "grevlex") else "grevlex"
        small = PolyRing(R.field, keep, order, R.homotopy if R.homotopy in keep else None)
        gb = buchberger([g.coerce(big) for g in self.gens if g])
        out = []
        for g in gb:
            if not (g.support() & set(names)):
                out.append(_restrict(g, small))
        return Ideal(small, out)

    def intersect(self, other):
        R = self.ring
        t = _fresh_name(R, "_t")
        big = R.extend([t], front=True, order="elim(1)")
        tv = big.var(t)
        gens = [tv * g.coerce(big) for g in self.gens] + [(1 - tv) * g.coerce(big) for g in other.gens]
        gb = buchberger([g for g in gens if g])
        out = [_restrict(g, R) for g in gb if t not in g.support()]
        return Ideal(R, out)

    def colon(self, f):
        """(I : f) = {g : g f in I}, via I cap (f) divided by f."""
        f = self.ring(f)
        if not f:
            raise RejectedInput("colon by the zero polynomial")
        if self.is_zero():
            return Ideal(self.ring, [])
        inter = self.intersect(Ideal(self.ring, [f]))
        return Ideal(self.ring, [g.exact_div(f) for g in inter.groebner])

    # -- dimension ----------------------------------------------------------------
    def leading_monomials(self):
        return [g.lm for g in self.groebner]

    def dimension(self):
        """Krull dimension via maximal independent sets of the leading-term ideal."""
        if self.is_unit():
            raise RejectedInput("the unit ideal has no dimension")
        lms = self.leading_monomials()
        N = self.ring.nvars
        for size in range(N, -1, -1):
            for S in itertools.combinations(range(N), size):
                Sset = set(S)
                if not any(all(i in Sset for i, x in enumerate(m) if x) for m in lms):
                    return size
        return 0

    def height(self):
        if self._height is None:
            self._height = self.ring.nvars - self.dimension()
        return self._height

    def is_zero_dimensional(self):
        return not self.is_unit() and self.dimension() == 0

    def standard_monomials(self):
        """Monomials outside the leading-term ideal (finite for zero-dimensional ideals)."""
        if not self.is_zero_dimensional():
            raise RejectedInput("standard monomials need a zero-dimensional ideal")
        lms = self.leading_monomials()
        N = self.ring.nvars
        seen = set()
        frontier = [(0,) * N]
        out = []
        while frontier:
            m = frontier.pop()
            if m in seen or any(_divides(l, m) for l in lms):
                continue
            seen.add(m)
            out.append(m)
            for i in range(N):
                frontier.append(m[:i] + (m[i] + 1,) + m[i + 1:])
        return sorted(out, key=self.ring.order.key)

    def vector_space_dimension(self):
        return len(self.standard_monomials())

    # -- substitution ---------------------------------------------------------------
    def substitute(self, name, value):
        R = self.ring.drop(name)
        return Ideal(R, [g.substitute(name, value, R) for g in self.gens])


def _restrict(g, small):
    """Move g into ``small`` (whose variables contain g's support)."""
    idx = [g.ring.index(v) for v in small.variables]
    return Polynomial(small, {tuple(e[i] for i in idx): c for e, c in g.terms.items()})


def _fresh_name(R, base):
    name = base
    k = 0
    while name in R.variables:
        k += 1
        name = f"{base}{k}"
    return name


# -- module-level operations ----------------------------------------------------------

def colon(I, f):
    return I.colon(f)


def height(I):
    return I.height()


def substitute(obj, name, value):
    """Evaluate a ring variable in a polynomial or ideal."""
    if isinstance(obj, Ideal):
        return obj.substitute(name, value)
    return obj.substitute(name, value)


@dataclass(frozen=True)
class RegularSequenceCertificate:
    is_regular: bool
    steps: tuple
    reason: str = ""


def is_regular_sequence(fs):
    """Check f1..fk regular by colon equalities ((f1..f_{i-1}) : f_i) == (f1..f_{i-1})."""
    fs = list(fs)
    if not fs:
        raise RejectedInput("empty sequence")
    R = fs[0].ring
    steps = []
    if Ideal(R, fs).is_unit():
        return RegularSequenceCertificate(False, (), "sequence generates the unit ideal")
    for i, f in enumerate(fs):
        prev = Ideal(R, fs[:i])
        if not f:
            steps.append({"index": i, "colon": ["0"], "equal": False})
            return RegularSequenceCertificate(False, tuple(steps), f"element {i + 1} is zero")
        col = prev.colon(f)
        ok = col == prev
        steps.append({"index": i, "colon": [str(g) for g in col.groebner], "equal": ok})
        if not ok:
            return RegularSequenceCertificate(
                False, tuple(steps), f"element {i + 1} is a zero divisor modulo its predecessors")
    return RegularSequenceCertificate(True, tuple(steps))
