"""Diagonal symmetric bilinear forms, Grothendieck-Witt and Witt classes.

Isometry is decided from classical invariants: over finite fields by rank
and discriminant; over QQ by rank, signature, discriminant and the Hasse
symbols at 2, at the primes dividing the entries and at the real place.
Over a quadratic number field QQ(sqrt d) the same idea runs place by place:
real signatures plus Hilbert symbols at every odd prime dividing an entry's
norm (via Q_p for split primes, tame symbols otherwise).  The lone dyadic
place when d != 1 mod 8 is fixed by the product formula; when 2 splits both
dyadic places are Q_2 and are computed directly.  Higher-degree extensions
of QQ raise UnsupportedCase.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm

from sympy.ntheory import sqrt_mod

from .errors import FieldMismatch, RejectedInput, UnsupportedCase
from .scalars import PrimeField, RationalField, SimpleExtension, factor_integer, squarefree_part


def _is_finite(K):
    return isinstance(K, PrimeField) or (isinstance(K, SimpleExtension) and isinstance(K.base, PrimeField))


def _is_rational(K):
    return isinstance(K, RationalField)


class DiagonalForm:
    """The form <a1, ..., ak> over a field; entries are nonzero FieldElems."""

    __slots__ = ("field", "entries")

    def __init__(self, field, entries=()):
        vals = tuple(field(a) for a in entries)
        if any(a.is_zero() for a in vals):
            raise RejectedInput("diagonal entries must be nonzero")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "entries", vals)

    def __setattr__(self, name, value):
        raise AttributeError("DiagonalForm is immutable")

    @property
    def rank(self):
        return len(self.entries)

    def _check(self, other):
        if other.field != self.field:
            raise FieldMismatch(f"forms over {self.field} and {other.field}")

    def __add__(self, other):
        self._check(other)
        return DiagonalForm(self.field, self.entries + other.entries)

    def __mul__(self, other):
        """Tensor product."""
        self._check(other)
        return DiagonalForm(self.field, [a * b for a in self.entries for b in other.entries])

    def scale(self, u):
        u = self.field(u)
        return DiagonalForm(self.field, [u * a for a in self.entries])

    def negate(self):
        return self.scale(-1)

    def determinant(self):
        d = self.field(1)
        for a in self.entries:
            d = d * a
        return d

    def signed_discriminant(self):
        k = self.rank
        d = self.determinant()
        return -d if (k * (k - 1) // 2) % 2 else d

    def matrix(self):
        K = self.field
        return [[a if i == j else K(0) for j, a in enumerate(self.entries)] for i, a in enumerate(self.entries)]

    def __eq__(self, other):
        return isinstance(other, DiagonalForm) and self.field == other.field and self.entries == other.entries

    def __hash__(self):
        return hash((self.field, self.entries))

    def __str__(self):
        return f"<{','.join(str(a) for a in self.entries)}> over {self.field}"

    def __repr__(self):
        return f"DiagonalForm({self})"

    def to_json(self):
        return {"field": str(self.field), "entries": [str(a) for a in self.entries]}


def hyperbolic_plane(field):
    return DiagonalForm(field, [1, -1])


def diagonalize(G, field):
    """Congruence diagonalization of a symmetric nondegenerate matrix.

    Returns ``(DiagonalForm, P)`` with ``P^T G P`` equal to the diagonal form;
    P is a list of rows of FieldElems.
    """
    n = len(G)
    A = [[field(x) for x in row] for row in G]
    if any(len(r) != n for r in A):
        raise RejectedInput("Gram matrix must be square")
    for i in range(n):
        for j in range(n):
            if A[i][j] != A[j][i]:
                raise RejectedInput("Gram matrix is not symmetric")
    zero, one = field(0), field(1)
    P = [[one if i == j else zero for j in range(n)] for i in range(n)]

    def add_col(dst, src, c):
        # basis change e_dst += c e_src on P columns and on A (both sides)
        for r in range(n):
            P[r][dst] = P[r][dst] + c * P[r][src]
        for r in range(n):
            A[r][dst] = A[r][dst] + c * A[r][src]
        for r in range(n):
            A[dst][r] = A[dst][r] + c * A[src][r]

    def swap(i, j):
        for r in range(n):
            P[r][i], P[r][j] = P[r][j], P[r][i]
            A[r][i], A[r][j] = A[r][j], A[r][i]
        A[i], A[j] = A[j], A[i]

    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(k, n) if A[i][j]), None)
            if pair is None:
                raise RejectedInput("degenerate form (zero determinant)")
            i, j = pair
            add_col(i, j, one)
            piv = i
        if piv != k:
            swap(piv, k)
        for j in range(k + 1, n):
            if A[k][j]:
                add_col(j, k, -(A[k][j] / A[k][k]))
    return DiagonalForm(field, [A[i][i] for i in range(n)]), P


def congruent(G, P):
    """P^T G P for square matrices of FieldElems."""
    n = len(G)
    GP = [[sum((G[i][k] * P[k][j] for k in range(n)), G[0][0] * 0) for j in range(n)] for i in range(n)]
    return [[sum((P[k][i] * GP[k][j] for k in range(n)), G[0][0] * 0) for j in range(n)] for i in range(n)]


# Hilbert symbols over QQ

def _legendre(a, p):
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def _split(n, p):
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e, n


def _square_scaled(q):
    """Integer in the square class of the nonzero rational q."""
    q = Fraction(q)
    return q.numerator * q.denominator


def hilbert_symbol(a, b, p):
    """(a, b)_p for nonzero rationals; ``p`` a prime or ``"inf"``."""
    a, b = _square_scaled(a), _square_scaled(b)
    if a == 0 or b == 0:
        raise RejectedInput("Hilbert symbol of zero")
    if p == "inf":
        return -1 if a < 0 and b < 0 else 1
    alpha, u = _split(a, p)
    beta, v = _split(b, p)
    if p == 2:
        def eps(x):
            return ((x - 1) // 2) % 2

        def omega(x):
            return ((x * x - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    s = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        s *= _legendre(u, p)
    if alpha % 2:
        s *= _legendre(v, p)
    return s


def _rational_value(a):
    return Fraction(a.value)


def relevant_primes(*forms):
    """2 together with every prime dividing a numerator or denominator of an entry."""
    ps = {2}
    for f in forms:
        for a in f.entries:
            q = _rational_value(a)
            for m in (q.numerator, q.denominator):
                if abs(m) > 1:
                    ps.update(factor_integer(m))
    return sorted(ps)


def hasse_invariant(form, p):
    s = 1
    vals = [_rational_value(a) for a in form.entries]
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            s *= hilbert_symbol(vals[i], vals[j], p)
    return s


@dataclass(frozen=True)
class WittInvariants:
    rank: int
    discriminant: object       # SquareClassTag of the signed discriminant
    signature: object = None   # int over QQ
    hasse: tuple = ()          # ((p, +-1), ...) over QQ, real place last as "inf"

    @property
    def rank_mod_2(self):
        return self.rank % 2

    def to_json(self):
        out = {
            "rank": self.rank,
            "rank_mod_2": self.rank_mod_2,
            "discriminant": str(self.discriminant),
        }
        if self.signature is not None:
            out["signature"] = self.signature
            out["hasse"] = {str(p): s for p, s in self.hasse}
        return out


def gw_invariants(form, primes=None):
    K = form.field
    disc = form.signed_discriminant().square_class() if form.rank else K(1).square_class()
    if not _is_rational(K):
        return WittInvariants(form.rank, disc)
    signature = sum(1 if _rational_value(a) > 0 else -1 for a in form.entries)
    primes = relevant_primes(form) if primes is None else primes
    hasse = tuple((p, hasse_invariant(form, p)) for p in list(primes) + ["inf"])
    return WittInvariants(form.rank, disc, signature, hasse)


def _same_square_class(a, b):
    return (a * b).is_square()


def _sign_surd(s, t, D):
    """Sign of s + t*sqrt(D) for rationals s, t and D > 0."""
    if t == 0 or s == 0:
        return (s > 0) - (s < 0) if t == 0 else (t > 0) - (t < 0)
    if (s > 0) == (t > 0):
        return 1 if s > 0 else -1
    dominant = s if s * s > t * t * D else t
    return 1 if dominant > 0 else -1


def real_signatures(form):
    """Signatures at the real places of a quadratic extension of QQ ([] if none)."""
    K = form.field
    if not (isinstance(K, SimpleExtension) and _is_rational(K.base) and K.degree == 2):
        return []
    c0, b0 = K.modulus[0], K.modulus[1]
    D = b0 * b0 / 4 - c0
    if D <= 0:
        return []
    sigs = []
    for sign in (1, -1):
        total = 0
        for a in form.entries:
            u, v = a.value
            total += _sign_surd(u - v * b0 / 2, sign * v, D)
        sigs.append(total)
    return sigs


def _surd_data(K):
    """(b0, q, d) with z = -b0/2 + q*sqrt(d), d a squarefree integer, for z^2 + b0 z + c0."""
    c0, b0 = Fraction(K.modulus[0]), Fraction(K.modulus[1])
    D = b0 * b0 / 4 - c0
    d = squarefree_part(D.numerator * D.denominator)
    q2 = D / d
    q = Fraction(isqrt(q2.numerator), isqrt(q2.denominator))
    return b0, q, d


def _integral_surd(a, data):
    """Integers (s, t) with s + t*sqrt(d) equal to a times a nonzero rational square."""
    b0, q, d = data
    u, v = (Fraction(c) for c in a.value)
    s, t = u - v * b0 / 2, v * q
    m = lcm(s.denominator, t.denominator)
    return int(s * m * m), int(t * m * m)


def _vp(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _legendre_int(a, p):
    return 1 if pow(a % p, (p - 1) // 2, p) == 1 else -1


def _ramified_unit(s, t, d, p):
    """(v, unit residue mod p) of s + t*sqrt(d) at the prime over p | d (uniformizer sqrt d)."""
    vs = 2 * _vp(s, p) if s else None
    vt = 2 * _vp(t, p) + 1 if t else None
    v = min(x for x in (vs, vt) if x is not None)
    r = Fraction(s if v % 2 == 0 else t, d ** (v // 2))
    return v, r.numerator * pow(r.denominator, -1, p) % p


def _place_symbol(x, y, place, d):
    """Hilbert symbol (x, y) at one place of QQ(sqrt d); x, y integral (s, t) pairs."""
    kind = place[0]
    if kind == "real":
        sign = place[1]
        neg = [_sign_surd(Fraction(s), Fraction(sign * t), d) < 0 for s, t in (x, y)]
        return -1 if all(neg) else 1
    p = place[1]
    if kind == "split":
        # the completion is Q_p, with sqrt(d) -> r
        prec = sum(_vp(s * s - d * t * t, p) for s, t in (x, y)) + 4
        mod = p ** prec
        r = sqrt_mod(d, mod)
        # pin the embedding independently of the precision: r = 1 mod 4, or r mod p the smaller root
        if (r % 4 != 1) if p == 2 else (r % p > (-r) % p):
            r = -r
        if place[2] < 0:
            r = -r
        return hilbert_symbol(*((s + t * r) % mod or mod for s, t in (x, y)), p)
    if kind == "inert":
        vals, chars = [], []
        for s, t in (x, y):
            v = min(_vp(s, p) if s else 10 ** 9, _vp(t, p) if t else 10 ** 9)
            s1, t1 = s // p ** v, t // p ** v
            vals.append(v)
            # squares of the residue field F_{p^2} are exactly the elements of square norm
            chars.append(_legendre_int(s1 * s1 - d * t1 * t1, p))
        va, vb = vals
        return chars[0] ** vb * chars[1] ** va
    # ramified odd prime, residue field F_p
    (va, ua), (vb, ub) = (_ramified_unit(s, t, d, p) for s, t in (x, y))
    out = _legendre_int(-1, p) ** (va * vb)
    return out * _legendre_int(ua, p) ** vb * _legendre_int(ub, p) ** va


def _finite_places(d, pairs):
    """Places to check: the real ones, then non-dyadic (and split dyadic) primes dividing a norm."""
    places = [("real", 1), ("real", -1)] if d > 0 else []
    primes = set()
    for s, t in pairs:
        primes.update(factor_integer(s * s - d * t * t))
    primes.discard(2)
    if d % 8 == 1:
        primes.add(2)
    for p in sorted(primes):
        if p != 2 and d % p == 0:
            places.append(("ram", p))
        elif p == 2 or _legendre_int(d, p) == 1:
            places.extend([("split", p, 1), ("split", p, -1)])
        else:
            places.append(("inert", p))
    # with d != 1 mod 8 the single dyadic place is fixed by the product formula
    return places


def _nf_hasse_profile(form, places, data):
    d = data[2]
    xs = [_integral_surd(a, data) for a in form.entries]
    out = []
    for place in places:
        h = 1
        for i in range(len(xs)):
            for j in range(i + 1, len(xs)):
                h *= _place_symbol(xs[i], xs[j], place, d)
        out.append(h)
    return out


def _decide_quadratic_number_field(f1, f2):
    K = f1.field
    data = _surd_data(K)
    pairs = [_integral_surd(a, data) for a in f1.entries + f2.entries]
    places = _finite_places(data[2], pairs)
    return _nf_hasse_profile(f1, places, data) == _nf_hasse_profile(f2, places, data)


def _cancel_common(e1, e2):
    e1, e2 = list(e1), list(e2)
    i = 0
    while i < len(e1):
        j = next((j for j, b in enumerate(e2) if _same_square_class(e1[i], b)), None)
        if j is None:
            i += 1
            continue
        e1.pop(i)
        e2.pop(j)
    return e1, e2


def decide_isometry(f1, f2):
    """Exact isometry decision (see module docstring for the supported cases)."""
    f1._check(f2)
    K = f1.field
    if f1.rank != f2.rank:
        return False
    if f1.rank == 0:
        return True
    if _is_finite(K):
        return _same_square_class(f1.determinant(), f2.determinant())
    if _is_rational(K):
        if not _same_square_class(f1.determinant(), f2.determinant()):
            return False
        primes = sorted(set(relevant_primes(f1)) | set(relevant_primes(f2)))
        i1, i2 = gw_invariants(f1, primes), gw_invariants(f2, primes)
        return i1.signature == i2.signature and i1.hasse == i2.hasse
    if not (isinstance(K, SimpleExtension) and _is_rational(K.base) and K.degree == 2):
        raise UnsupportedCase(f"isometry over {K}")
    # quadratic number field: Hasse-Minkowski with rank, discriminant and local Hasse symbols
    if real_signatures(f1) != real_signatures(f2):
        return False
    e1, e2 = _cancel_common(f1.entries, f2.entries)
    if not e1:
        return True
    g1, g2 = DiagonalForm(K, e1), DiagonalForm(K, e2)
    if not _same_square_class(g1.determinant(), g2.determinant()):
        return False
    return _decide_quadratic_number_field(g1, g2)


def _canonical_entry(a):
    tag = a.square_class()
    return tag.representative if tag.canonical else a


class GWClass:
    """Element ``form + hyperbolic * H`` of GW(K), with H = <1, -1>.

    ``hyperbolic`` may be negative, which is how formal negatives are stored:
    -<a1..ak> = <-a1..-ak> - kH.
    """

    __slots__ = ("form", "hyperbolic")

    def __init__(self, form, hyperbolic=0):
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "hyperbolic", int(hyperbolic))

    def __setattr__(self, name, value):
        raise AttributeError("GWClass is immutable")

    @classmethod
    def of(cls, field, entries):
        return cls(DiagonalForm(field, entries)).reduced()

    @classmethod
    def zero(cls, field):
        return cls(DiagonalForm(field, []))

    @property
    def field(self):
        return self.form.field

    @property
    def rank(self):
        return self.form.rank + 2 * self.hyperbolic

    def reduced(self):
        """Cancel pairs <a, b> with -ab a square into H."""
        entries = list(self.form.entries)
        h = self.hyperbolic
        i = 0
        while i < len(entries):
            j = next((j for j in range(i + 1, len(entries)) if (-(entries[i] * entries[j])).is_square()), None)
            if j is None:
                i += 1
                continue
            entries.pop(j)
            entries.pop(i)
            h += 1
        entries = [_canonical_entry(a) for a in entries]
        return GWClass(DiagonalForm(self.field, entries), h)

    def __add__(self, other):
        self.form._check(other.form)
        return GWClass(self.form + other.form, self.hyperbolic + other.hyperbolic).reduced()

    def __neg__(self):
        return GWClass(self.form.negate(), -self.hyperbolic - self.form.rank).reduced()

    def __sub__(self, other):
        return self + (-other)

    def scale(self, u):
        """Multiply by <u>; <u> H = H."""
        return GWClass(self.form.scale(u), self.hyperbolic).reduced()

    def __mul__(self, other):
        self.form._check(other.form)
        h = (self.hyperbolic * other.form.rank + other.hyperbolic * self.form.rank
             + 2 * self.hyperbolic * other.hyperbolic)
        return GWClass(self.form * other.form, h).reduced()

    def _padded_pair(self, other, witt=False):
        """Honest forms F1, F2 whose isometry is equivalent to equality."""
        a, b = self.reduced(), other.reduced()
        h = min(a.hyperbolic, b.hyperbolic)
        ha, hb = a.hyperbolic - h, b.hyperbolic - h
        if witt:
            ha = hb = 0
            gap = a.form.rank - b.form.rank
            if gap % 2:
                return None
            if gap > 0:
                hb = gap // 2
            else:
                ha = -gap // 2
        K = self.field
        H = hyperbolic_plane(K)
        F1, F2 = a.form, b.form
        for _ in range(ha):
            F1 = F1 + H
        for _ in range(hb):
            F2 = F2 + H
        return F1, F2

    def isometric(self, other):
        """Equality in GW(K)."""
        self.form._check(other.form)
        if self.rank != other.rank:
            return False
        F1, F2 = self._padded_pair(other)
        e1, e2 = _cancel_common(F1.entries, F2.entries)
        return decide_isometry(DiagonalForm(self.field, e1), DiagonalForm(self.field, e2))

    def witt_equal(self, other):
        """Equality of the images in W(K)."""
        self.form._check(other.form)
        pair = self._padded_pair(other, witt=True)
        if pair is None:
            return False
        e1, e2 = _cancel_common(pair[0].entries, pair[1].entries)
        return decide_isometry(DiagonalForm(self.field, e1), DiagonalForm(self.field, e2))

    def is_zero(self):
        return self.rank == 0 and self.isometric(GWClass.zero(self.field))

    def is_witt_zero(self):
        return self.witt_equal(GWClass.zero(self.field))

    def signed_discriminant(self):
        # H has signed discriminant 1, so only the form part matters
        return self.form.signed_discriminant() if self.form.rank else self.field(1)

    def invariants(self):
        inv = gw_invariants(self.form)
        sig = inv.signature
        return WittInvariants(self.rank, self.signed_discriminant().square_class(), sig, inv.hasse)

    def witt_canonical(self):
        """Canonical W representative over finite fields; reduced form otherwise."""
        K = self.field
        r = self.reduced()
        if not _is_finite(K):
            return r.form
        d = r.signed_discriminant()
        if r.form.rank % 2:
            return DiagonalForm(K, [d.square_class().representative])
        if d.is_square():
            return DiagonalForm(K, [])
        delta = K.elem(K.least_nonresidue)
        return DiagonalForm(K, [1, -delta])

    def __eq__(self, other):
        if not isinstance(other, GWClass):
            return NotImplemented
        return self.field == other.field and self.isometric(other)

    __hash__ = None

    def __str__(self):
        r = self.reduced()
        parts = []
        if r.form.rank or not r.hyperbolic:
            parts.append(f"<{','.join(str(a) for a in r.form.entries)}>")
        if r.hyperbolic:
            sign = "+" if r.hyperbolic > 0 else "-"
            parts.append(f"{sign} {abs(r.hyperbolic)}H" if parts else f"{'' if r.hyperbolic > 0 else '-'}{abs(r.hyperbolic)}H")
        return " ".join(parts) + f" over {self.field}"

    def __repr__(self):
        return f"GWClass({self})"

    def to_json(self):
        r = self.reduced()
        return {"field": str(self.field), "entries": [str(a) for a in r.form.entries],
                "hyperbolic": r.hyperbolic, "rank": r.rank}


def fundamental_ideal_level(c):
    """0, 1 or 2 (meaning >= 2) for a class over a finite field or QQ."""
    if isinstance(c, DiagonalForm):
        c = GWClass(c)
    K = c.field
    if not (_is_finite(K) or _is_rational(K)):
        raise UnsupportedCase(f"fundamental ideal filtration over {K}")
    if c.rank % 2:
        return 0
    if not c.signed_discriminant().is_square():
        return 1
    return 2
