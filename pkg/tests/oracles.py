"""Independent reference computations used only by the tests.

Nothing here calls the Groebner engine, the Koszul machinery or the Witt
decision procedures of the package under test.
"""

import itertools
from fractions import Fraction

import numpy as np
import sympy


# -- polynomial rings -------------------------------------------------------------

def to_sympy(f, symbols):
    expr = 0
    for e, c in f.terms.items():
        term = sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c)
        for s, k in zip(symbols, e):
            term *= s ** k
        expr += term
    return sympy.expand(expr)


def sympy_groebner(polys, ring, modulus=None):
    syms = sympy.symbols(ring.variables)
    exprs = [to_sympy(f, syms) for f in polys]
    kw = {"modulus": modulus} if modulus else {}
    G = sympy.groebner(exprs, *syms, order="grevlex", **kw)
    return {monic_grevlex(g, syms, modulus) for g in G.exprs}, syms


def monic_grevlex(expr, syms, modulus=None):
    """Scale so the grevlex-leading coefficient is 1 (reduced mod p if given)."""
    kw = {"modulus": modulus} if modulus else {}
    poly = sympy.Poly(expr, *syms, **kw)
    lc = poly.coeffs(order="grevlex")[0]
    return (poly * sympy.Poly(sympy.invert(lc, modulus) if modulus else 1 / lc, *syms, **kw)).as_expr()


def naive_remainder(f, basis):
    """Full multivariate division written from scratch on exponent dicts."""
    R = f.ring
    K = R.field
    key = R.order.key
    rem = {}
    p = dict(f.terms)
    while p:
        lm = max(p, key=key)
        c = p[lm]
        for g in basis:
            glm = max(g.terms, key=key)
            if all(a >= b for a, b in zip(lm, glm)):
                q = K.div(c, g.terms[glm])
                shift = tuple(a - b for a, b in zip(lm, glm))
                for e, gc in g.terms.items():
                    e2 = tuple(a + b for a, b in zip(e, shift))
                    v = K.sub(p.get(e2, K.zero), K.mul(q, gc))
                    if K.is_zero(v):
                        p.pop(e2, None)
                    else:
                        p[e2] = v
                break
        else:
            rem[lm] = c
            del p[lm]
    return rem


def jacobian_det_at(polys, ring, point):
    """det of the Jacobian of ``polys`` (sympy) at a rational point."""
    syms = sympy.symbols(ring.variables)
    exprs = [to_sympy(f, syms) for f in polys]
    J = sympy.Matrix([[sympy.diff(e, s) for s in syms] for e in exprs])
    return J.det().subs(dict(zip(syms, point)))


def permutation_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


# -- finite fields ----------------------------------------------------------------------

def squares_mod(p):
    return {(x * x) % p for x in range(1, p)}


def congruent_brute_force(a, b, p):
    """Is diag(a) congruent to diag(b) over GF(p)?  Orthogonal-basis search.

    Finds vectors v_1..v_k with q_a(v_i) = b_i and v_i orthogonal to the
    earlier ones (then they form a basis since every b_i is nonzero).
    """
    k = len(a)
    if k != len(b):
        return False
    if k == 0:
        return True
    vecs = np.array(list(itertools.product(range(p), repeat=k)), dtype=np.int64)
    A = np.array(a, dtype=np.int64) % p
    q = (vecs * vecs * A).sum(axis=1) % p
    cands = [vecs[q == (bi % p)] for bi in b]

    def search(i, chosen):
        if i == k:
            return True
        c = cands[i]
        if chosen:
            M = np.array(chosen) * A
            mask = ((c @ M.T) % p == 0).all(axis=1)
            c = c[mask]
        for v in c:
            if search(i + 1, chosen + [v]):
                return True
        return False

    return search(0, [])


def congruent_matrices_brute_force(A, B, p):
    """Exhaustive search over all 2x2 matrices P with P^T A P = B (mod p)."""
    A = np.array(A, dtype=np.int64) % p
    B = np.array(B, dtype=np.int64) % p
    for entries in itertools.product(range(p), repeat=4):
        P = np.array(entries, dtype=np.int64).reshape(2, 2)
        if int(round(np.linalg.det(P))) % p == 0:
            continue
        if ((P.T @ A @ P) % p == B).all():
            return True
    return False


# -- exterior algebra ---------------------------------------------------------------

def exterior_basis(n, k):
    return list(itertools.combinations(range(1, n + 1), k))


def sympy_koszul(exprs):
    """Koszul differentials built from the contraction e_S -> sum_j (-1)^j f_{s_j} e_{S - s_j}."""
    n = len(exprs)
    out = {}
    for k in range(1, n + 1):
        src, tgt = exterior_basis(n, k), exterior_basis(n, k - 1)
        M = sympy.zeros(len(tgt), len(src))
        for c, S in enumerate(src):
            for j, s in enumerate(S):
                face = tuple(i for i in S if i != s)
                M[tgt.index(face), c] += (-1) ** j * exprs[s - 1]
        out[k] = M
    return out


def sympy_duality(n, chi=1):
    """phi_k(e_S) = sign(S, S^c) chi e*_{S^c}, using permutation_sign."""
    out = {}
    for k in range(n + 1):
        src, tgt = exterior_basis(n, k), exterior_basis(n, n - k)
        M = sympy.zeros(len(tgt), len(src))
        for c, S in enumerate(src):
            C = tuple(i for i in range(1, n + 1) if i not in S)
            M[tgt.index(C), c] = permutation_sign(S + C) * chi
        out[k] = M
    return out


def matrix_to_sympy(m, symbols):
    return sympy.Matrix([[to_sympy(e, symbols) for e in row] for row in m.rows]) if m.rows else \
        sympy.zeros(m.shape[0], m.shape[1])


# -- chain-level forms at rational points ---------------------------------------------

def sympy_cone_of_scalar(d, t, n):
    """Cone of multiplication by t on a Koszul complex given by differentials d[1..n].

    Degree r is C_r (+) C_{r-1}; the differential is [[d_r, (-1)^(r+1) t], [0, d_{r-1}]],
    written out directly with sympy block matrices.
    """
    ranks = {r: len(exterior_basis(n, r)) for r in range(0, n + 1)}
    out = {}
    for r in range(1, n + 2):
        a, b = ranks.get(r, 0), ranks[r - 1]
        c, e = b, ranks.get(r - 2, 0)
        top_left = d[r] if (r <= n and a and c) else sympy.zeros(c, a)
        u = (-1) ** (r + 1) * t * sympy.eye(b)
        bottom = d[r - 1] if (r - 1 >= 1 and b and e) else sympy.zeros(e, b)
        out[r] = sympy.BlockMatrix([[top_left, u], [sympy.zeros(e, a), bottom]]).as_explicit()
    return out


def block_permutation(n):
    """Basis of K(f_1..f_n, t) listed as (subsets without n+1) then (subsets with n+1)."""
    return {r: [S for S in exterior_basis(n + 1, r) if n + 1 not in S] +
               [S for S in exterior_basis(n + 1, r) if n + 1 in S] for r in range(n + 2)}


def reorder_koszul(d, n_ext, order):
    out = {}
    for r in range(1, n_ext + 1):
        src, tgt = exterior_basis(n_ext, r), exterior_basis(n_ext, r - 1)
        rows = [tgt.index(S) for S in order[r - 1]]
        cols = [src.index(S) for S in order[r]]
        out[r] = d[r].extract(rows, cols)
    return out


def induced_unit_at(exprs, symbols, point):
    """Degree-0 duality entry times the Jacobian determinant at a rational point.

    Over the local ring at a rational point the sequence equals J times the
    coordinate sequence (x_i - p_i) modulo the square of the maximal ideal,
    so the form read in canonical coordinates is <phi_0 * det J(p)>.
    """
    n = len(exprs)
    J = sympy.Matrix([[sympy.diff(e, s) for s in symbols] for e in exprs])
    return sympy_duality(n)[0][0, 0] * J.det().subs(dict(zip(symbols, point)))


def chain_level_boundary(g_exprs, t_expr, form_exprs, symbols, points):
    """{point: [a_i(p) * unit]} for the boundary of <a>(<t> - <1>), checking cone = Koszul first."""
    k = len(g_exprs)
    d = sympy_koszul(g_exprs)
    cone = sympy_cone_of_scalar(d, t_expr, k)
    ext = reorder_koszul(sympy_koszul(list(g_exprs) + [t_expr]), k + 1, block_permutation(k))
    for r in cone:
        if sympy.expand(cone[r] - ext[r]) != sympy.zeros(*cone[r].shape):
            raise AssertionError(f"cone differs from the extended Koszul complex in degree {r}")
    out = {}
    for p in points:
        u = induced_unit_at(list(g_exprs) + [t_expr], symbols, p)
        out[p] = [sympy.nsimplify(a.subs(dict(zip(symbols, p))) * u) for a in form_exprs]
    return out
