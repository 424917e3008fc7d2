"""Dense univariate polynomials over an exact field.

A polynomial is a list of raw field values, constant term first, with a
nonzero last entry; ``[]`` is the zero polynomial.  Every function takes the
field as first argument and only uses its raw-value interface (``add``,
``mul``, ``inv``, ...), so the same code serves QQ, GF(p) and extensions.
"""

import random
from fractions import Fraction
from math import gcd as igcd

from .errors import RejectedInput, UnsupportedCase


def trim(K, f):
    f = list(f)
    while f and K.is_zero(f[-1]):
        f.pop()
    return f


def degree(f):
    return len(f) - 1


def add(K, f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = K.add(out[i], c)
    return trim(K, out)


def neg(K, f):
    return [K.neg(c) for c in f]


def sub(K, f, g):
    return add(K, f, neg(K, g))


def scale(K, c, f):
    if K.is_zero(c):
        return []
    return [K.mul(c, a) for a in f]


def mul(K, f, g):
    if not f or not g:
        return []
    out = [K.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if K.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = K.add(out[i + j], K.mul(a, b))
    return trim(K, out)


def divmod_(K, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    dg = degree(g)
    inv_lc = K.inv(g[-1])
    q = [K.zero] * max(len(f) - dg, 0)
    while len(f) - 1 >= dg and f:
        c = K.mul(f[-1], inv_lc)
        shift = len(f) - 1 - dg
        q[shift] = c
        for j, b in enumerate(g):
            f[shift + j] = K.sub(f[shift + j], K.mul(c, b))
        f = trim(K, f)
    return trim(K, q), f


def rem(K, f, g):
    return divmod_(K, f, g)[1]


def monic(K, f):
    if not f:
        return []
    return scale(K, K.inv(f[-1]), f)


def gcd(K, f, g):
    while g:
        f, g = g, rem(K, f, g)
    return monic(K, f)


def derivative(K, f):
    return trim(K, [K.mul(K.from_int(i), c) for i, c in enumerate(f)][1:])


def powmod(K, f, e, m):
    result = [K.one]
    base = rem(K, f, m)
    while e:
        if e & 1:
            result = rem(K, mul(K, result, base), m)
        base = rem(K, mul(K, base, base), m)
        e >>= 1
    return result


def evaluate(K, f, x):
    acc = K.zero
    for c in reversed(f):
        acc = K.add(K.mul(acc, x), c)
    return acc


def compose(K, f, g):
    """f(g(X))."""
    acc = []
    for c in reversed(f):
        acc = add(K, mul(K, acc, g), [c])
    return acc


# -- factorization over GF(p) -------------------------------------------------

def _squarefree_fp(K, f):
    """Yun-style squarefree decomposition over GF(p): list of (g, multiplicity)."""
    p = K.characteristic
    out = []
    i = 1
    df = derivative(K, f)
    if not df:
        # f is a p-th power; coefficient p-th roots are trivial in GF(p)
        root = [f[k] for k in range(0, len(f), p)]
        return [(g, m * p) for g, m in _squarefree_fp(K, root)]
    c = gcd(K, f, df)
    w = divmod_(K, f, c)[0]
    while degree(w) > 0:
        y = gcd(K, w, c)
        z = divmod_(K, w, y)[0]
        if degree(z) > 0:
            out.append((monic(K, z), i))
        i += 1
        w = y
        c = divmod_(K, c, y)[0]
    if degree(c) > 0:
        root = [c[k] for k in range(0, len(c), p)]
        out.extend((g, m * p) for g, m in _squarefree_fp(K, root))
    return out


def _distinct_degree(K, f):
    p = K.characteristic
    out = []
    x = [K.zero, K.one]
    h = x
    d = 0
    while degree(f) >= 2 * (d + 1):
        d += 1
        h = powmod(K, h, p, f)
        g = gcd(K, f, sub(K, h, x))
        if degree(g) > 0:
            out.append((g, d))
            f = divmod_(K, f, g)[0]
            h = rem(K, h, f)
    if degree(f) > 0:
        out.append((monic(K, f), degree(f)))
    return out


def _equal_degree(K, f, d, rng):
    """Cantor-Zassenhaus splitting of a product of degree-d irreducibles."""
    n = degree(f)
    if n == d:
        return [monic(K, f)]
    p = K.characteristic
    while True:
        a = trim(K, [K.from_int(rng.randrange(p)) for _ in range(n)])
        if degree(a) < 1:
            continue
        g = gcd(K, f, a)
        if 0 < degree(g) < n:
            break
        b = powmod(K, a, (p ** d - 1) // 2, f)
        g = gcd(K, f, sub(K, b, [K.one]))
        if 0 < degree(g) < n:
            break
    return _equal_degree(K, g, d, rng) + _equal_degree(K, divmod_(K, f, g)[0], d, rng)


def factor_fp(K, f, seed=0):
    """Factor f over the prime field K into monic irreducibles.

    Returns ``(lc, [(factor, multiplicity), ...])`` sorted by (degree,
    coefficients); the random splitting is seeded so output is reproducible.
    """
    f = trim(K, f)
    if not f:
        raise RejectedInput("cannot factor the zero polynomial")
    lc = f[-1]
    f = monic(K, f)
    rng = random.Random(seed)
    out = []
    for g, m in _squarefree_fp(K, f):
        for h, d in _distinct_degree(K, g):
            for q in _equal_degree(K, h, d, rng):
                out.append((q, m))
    out.sort(key=lambda fm: (len(fm[0]), fm[0], fm[1]))
    return lc, out


# -- rational coefficients -----------------------------------------------------

def _divisors(n, bound):
    n = abs(n)
    small = []
    large = []
    d = 1
    while d * d <= n:
        if d > bound:
            raise UnsupportedCase(f"divisor enumeration of {n} exceeds bound {bound}")
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _integer_primitive(f):
    den = 1
    for c in f:
        den = den * c.denominator // igcd(den, c.denominator)
    ints = [int(c * den) for c in f]
    g = 0
    for c in ints:
        g = igcd(g, c)
    return [c // g for c in ints]


def rational_roots(K, f, bound=10 ** 6):
    """Distinct rational roots of f (rational-root theorem), ascending."""
    f = trim(K, f)
    if not f:
        raise RejectedInput("zero polynomial has every root")
    roots = set()
    while f and f[0] == 0:
        roots.add(Fraction(0))
        f = f[1:]
    if len(f) <= 1:
        return sorted(roots)
    ints = _integer_primitive(f)
    for p in _divisors(ints[0], bound):
        for q in _divisors(ints[-1], bound):
            for r in (Fraction(p, q), Fraction(-p, q)):
                if evaluate(K, f, r) == 0:
                    roots.add(r)
    return sorted(roots)


def squarefree_q(K, f):
    """Yun squarefree decomposition in characteristic zero."""
    f = monic(K, f)
    out = []
    df = derivative(K, f)
    c = gcd(K, f, df)
    w = divmod_(K, f, c)[0]
    i = 1
    while degree(w) > 0:
        y = gcd(K, w, c)
        z = divmod_(K, w, y)[0]
        if degree(z) > 0:
            out.append((z, i))
        i += 1
        w = y
        c = divmod_(K, c, y)[0]
    return out


def factor_q_low_degree(K, f, bound=10 ** 6):
    """Factor over QQ when every irreducible factor has a rational root or degree 2.

    Raises UnsupportedCase when a factor of degree > 2 without rational roots
    remains; desk-scale instances never need more.
    """
    f = trim(K, f)
    if not f:
        raise RejectedInput("cannot factor the zero polynomial")
    lc = f[-1]
    out = []
    for g, m in squarefree_q(K, f):
        for r in rational_roots(K, g, bound):
            lin = [-r, Fraction(1)]
            out.append((lin, m))
            g = divmod_(K, g, lin)[0]
        if degree(g) == 2:
            out.append((monic(K, g), m))
        elif degree(g) > 2:
            raise UnsupportedCase(
                f"irreducible factor of degree {degree(g)} over QQ without rational roots")
    out.sort(key=lambda fm: (len(fm[0]), fm[0], fm[1]))
    return lc, out


def is_irreducible(K, f):
    f = trim(K, f)
    if degree(f) < 1:
        return False
    if degree(f) == 1:
        return True
    if K.characteristic:
        _, facs = factor_fp(K, f)
        return len(facs) == 1 and facs[0][1] == 1
    if degree(f) <= 3:
        return not rational_roots(K, f)
    return _irreducible_q_sympy(f)


def _irreducible_q_sympy(f):
    # degree >= 4 over QQ: defer to sympy's factorizer
    import sympy

    X = sympy.Symbol("X")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * X ** i for i, c in enumerate(f))
    return sympy.Poly(expr, X, domain="QQ").is_irreducible
