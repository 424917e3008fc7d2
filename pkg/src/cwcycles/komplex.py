"""Bounded complexes of based free modules over a polynomial ring.

Conventions (fixed once, certified by the checks below):

* Koszul complex K(f1..fn): degree k has basis the k-subsets of {1..n} in
  lexicographic order; d(e_S) = sum_j (-1)^(j+1) f_{i_j} e_{S - i_j}.
* Dual with shift n: D_r = (C_{n-r})^* with differential
  (-1)^(r+1) d_{n-r+1}^T.  With this sign the plain shuffle-sign pairing
  e_S -> sign(S, S^c) chi e*_{S^c} is a chain map K -> D.
* Cone of u: K -> K: Cone_r = K_r + K_{r-1} e0 with differential
  [[d_r, (-1)^(r+1) u_{r-1}], [0, d_{r-1}]].  For u = t * id on K(f) this is
  literally K(f, t) once K(f, t)'s basis is listed as "subsets without the
  new index, then subsets with it".
"""

import itertools
from dataclasses import dataclass, field

from .errors import RejectedInput
from .polyring import Polynomial


class PolyMatrix:
    """Dense immutable matrix of polynomials."""

    def __init__(self, ring, rows, ncols=None):
        self.ring = ring
        self.rows = tuple(tuple(ring(x) for x in row) for row in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def zeros(cls, ring, m, n):
        return cls(ring, [[ring.zero] * n for _ in range(m)], n)

    @classmethod
    def identity(cls, ring, n, scalar=None):
        s = ring.one if scalar is None else ring(scalar)
        return cls(ring, [[s if i == j else ring.zero for j in range(n)] for i in range(n)], n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        R = self.ring
        cols = list(zip(*other.rows)) if other.rows else []
        out = []
        for row in self.rows:
            out_row = []
            for j in range(other.ncols):
                acc = R.zero
                for a, b in zip(row, cols[j]):
                    if a and b:
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return PolyMatrix(R, out, other.ncols)

    def __add__(self, other):
        return PolyMatrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                          self.ncols)

    def __sub__(self, other):
        return PolyMatrix(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                          self.ncols)

    def __neg__(self):
        return self.scale(-self.ring.one)

    def scale(self, c):
        c = self.ring(c)
        return PolyMatrix(self.ring, [[c * a for a in r] for r in self.rows], self.ncols)

    @property
    def T(self):
        return PolyMatrix(self.ring, [list(col) for col in zip(*self.rows)] if self.rows else [],
                          self.nrows) if self.ncols else PolyMatrix(self.ring, [], self.nrows)

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def is_zero(self):
        return all(not a for r in self.rows for a in r)

    def submatrix(self, rows, cols):
        return PolyMatrix(self.ring, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def det(self):
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        return _det(self.ring, [list(r) for r in self.rows])

    def cofactor_matrix(self):
        n = self.nrows
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = [[self.rows[a][b] for b in range(n) if b != j] for a in range(n) if a != i]
                d = _det(self.ring, minor)
                row.append(d if (i + j) % 2 == 0 else -d)
            out.append(row)
        return PolyMatrix(self.ring, out, n)

    def compound(self, r):
        """r-th exterior power: entry (S, U) is the minor on rows S, columns U."""
        rs = list(itertools.combinations(range(self.nrows), r))
        cs = list(itertools.combinations(range(self.ncols), r))
        if r == 0:
            return PolyMatrix.identity(self.ring, 1)
        return PolyMatrix(self.ring, [[_det(self.ring, [[self.rows[i][j] for j in U] for i in S])
                                       for U in cs] for S in rs], len(cs))

    def apply(self, vector):
        """Matrix times a column vector given as a list of polynomials."""
        return [sum((a * v for a, v in zip(row, vector)), self.ring.zero) for row in self.rows]

    def map(self, fn):
        return PolyMatrix(self.ring, [[fn(a) for a in r] for r in self.rows], self.ncols)

    def to_strings(self):
        return [[str(a) for a in r] for r in self.rows]

    def __repr__(self):
        return f"PolyMatrix({self.to_strings()})"


def _det(R, rows):
    n = len(rows)
    if n == 0:
        return R.one
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = R.zero
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * _det(R, minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def shuffle_sign(S, C):
    """Sign of the permutation sorting the concatenation S + C."""
    inversions = sum(1 for a in S for b in C if a > b)
    return -1 if inversions % 2 else 1


def _label_str(label):
    if isinstance(label, tuple) and all(isinstance(i, int) for i in label):
        if not label:
            return "1"
        sep = "_" if max(label) >= 10 else ""
        return "e" + sep.join(map(str, label))
    return str(label)


class ChainComplex:
    """Based free modules ``bases[r]`` and differentials ``d[r]: C_r -> C_{r-1}``."""

    def __init__(self, ring, bases, differentials):
        self.ring = ring
        self.bases = {r: tuple(b) for r, b in bases.items()}
        self.d = dict(differentials)
        for r, m in self.d.items():
            if m.shape != (len(self.bases.get(r - 1, ())), len(self.bases.get(r, ()))):
                raise ValueError(f"differential in degree {r} has shape {m.shape}")

    @property
    def degrees(self):
        return sorted(self.bases)

    def rank(self, r):
        return len(self.bases.get(r, ()))

    def differential(self, r):
        if r in self.d:
            return self.d[r]
        return PolyMatrix.zeros(self.ring, self.rank(r - 1), self.rank(r))

    def dd_defects(self):
        """Degrees r where d_{r-1} d_r is not the zero matrix."""
        out = []
        for r in self.degrees:
            if self.rank(r - 2) and self.rank(r):
                if not (self.differential(r - 1) @ self.differential(r)).is_zero():
                    out.append(r)
        return out

    def is_complex(self):
        return not self.dd_defects()

    def dual(self, shift):
        """D_r = (C_{shift-r})^* with differential (-1)^(r+1) d_{shift-r+1}^T."""
        bases = {shift - r: tuple(("*", lab) for lab in b) for r, b in self.bases.items()}
        diffs = {}
        for r in bases:
            if (r - 1) in bases:
                m = self.differential(shift - r + 1).T
                diffs[r] = m if (r + 1) % 2 == 0 else -m
        return ChainComplex(self.ring, bases, diffs)

    def reindexed(self, orders):
        """Same complex with each basis permuted; ``orders[r]`` lists old labels in new order."""
        bases = {}
        perms = {}
        for r, b in self.bases.items():
            new = tuple(orders.get(r, b))
            if sorted(map(repr, new)) != sorted(map(repr, b)):
                raise ValueError("reindexing must permute the basis")
            bases[r] = new
            perms[r] = [b.index(lab) for lab in new]
        diffs = {}
        for r, m in self.d.items():
            diffs[r] = m.submatrix(perms[r - 1], perms[r])
        return ChainComplex(self.ring, bases, diffs)

    def to_json(self):
        return {
            "ring": {"field": str(self.ring.field), "variables": list(self.ring.variables)},
            "degrees": self.degrees,
            "bases": {str(r): [_label_str(l) if not (isinstance(l, tuple) and l and l[0] == "*")
                               else _label_str(l[1]) + "*" for l in self.bases[r]] for r in self.degrees},
            "differentials": {str(r): self.d[r].to_strings() for r in sorted(self.d)},
        }

    def __eq__(self, other):
        return (isinstance(other, ChainComplex) and self.bases == other.bases
                and all(self.differential(r) == other.differential(r) for r in self.degrees))

    __hash__ = None


class KoszulComplex(ChainComplex):
    def __init__(self, generators):
        gens = list(generators)
        if not gens:
            raise RejectedInput("Koszul complex of an empty sequence")
        ring = gens[0].ring
        for g in gens:
            if not isinstance(g, Polynomial) or g.ring != ring:
                raise RejectedInput("Koszul generators must lie in one ring")
        n = len(gens)
        bases = {k: tuple(itertools.combinations(range(1, n + 1), k)) for k in range(n + 1)}
        diffs = {}
        for k in range(1, n + 1):
            rows = {S: i for i, S in enumerate(bases[k - 1])}
            m = [[ring.zero] * len(bases[k]) for _ in bases[k - 1]]
            for col, S in enumerate(bases[k]):
                for j, i in enumerate(S):
                    face = S[:j] + S[j + 1:]
                    term = gens[i - 1]
                    m[rows[face]][col] = term if j % 2 == 0 else -term
            diffs[k] = PolyMatrix(ring, m, len(bases[k]))
        super().__init__(ring, bases, diffs)
        self.generators = tuple(gens)
        self.n = n

    def dual(self, shift=None):
        return super().dual(self.n if shift is None else shift)


def koszul(generators):
    return KoszulComplex(generators)


@dataclass
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    components: dict
    certificate: dict = field(default_factory=dict)

    def component(self, r):
        if r in self.components:
            return self.components[r]
        return PolyMatrix.zeros(self.source.ring, self.target.rank(r), self.source.rank(r))

    def commutation_defects(self):
        """Degrees r with f_{r-1} d_r != d'_r f_r."""
        out = []
        degs = set(self.source.degrees) | set(self.target.degrees)
        for r in sorted(degs):
            lhs = self.component(r - 1) @ self.source.differential(r)
            rhs = self.target.differential(r) @ self.component(r)
            if lhs != rhs:
                out.append(r)
        return out

    def is_chain_map(self):
        return not self.commutation_defects()

    def __matmul__(self, other):
        """Composition self o other."""
        degs = sorted(set(other.source.degrees))
        comps = {r: self.component(r) @ other.component(r) for r in degs}
        return ChainMap(other.source, self.target, comps)

    def dual(self, shift):
        """u^*: dual(target) -> dual(source), degree r component u_{shift-r}^T."""
        src = self.target.dual(shift)
        tgt = self.source.dual(shift)
        comps = {r: self.component(shift - r).T for r in tgt.degrees}
        return ChainMap(src, tgt, comps)

    def to_json(self):
        return {str(r): self.components[r].to_strings() for r in sorted(self.components)}


def scalar_map(K, t):
    """Multiplication by the ring element t as an endomorphism of K."""
    t = K.ring(t)
    return ChainMap(K, K, {r: PolyMatrix.identity(K.ring, K.rank(r), t) for r in K.degrees})


def koszul_duality(K, chi=1):
    """The chain map phi: K(f) -> K(f)^* of the exterior pairing, certified.

    phi_r(e_S) = sign(S, S^c) * chi * e*_{S^c}.  The certificate records the
    chain-map check and the symmetry check transpose(phi_{n-r}) ==
    (-1)^(r(n-r)) phi_r.
    """
    if not isinstance(K, KoszulComplex):
        raise RejectedInput("koszul_duality needs a Koszul complex")
    R = K.ring
    chi = R(chi)
    n = K.n
    D = K.dual()
    full = tuple(range(1, n + 1))
    comps = {}
    for r in range(n + 1):
        rows = {lab[1]: i for i, lab in enumerate(D.bases[r])}
        m = [[R.zero] * K.rank(r) for _ in range(D.rank(r))]
        for col, S in enumerate(K.bases[r]):
            C = tuple(i for i in full if i not in S)
            m[rows[C]][col] = chi if shuffle_sign(S, C) > 0 else -chi
        comps[r] = PolyMatrix(R, m, K.rank(r))
    phi = ChainMap(K, D, comps)
    symmetric = all(
        comps[n - r].T == (comps[r] if (r * (n - r)) % 2 == 0 else -comps[r]) for r in range(n + 1))
    phi.certificate = {"chain_map": phi.is_chain_map(), "symmetric": symmetric}
    return phi


def cone(u, new_index=None):
    """Mapping cone of an endomorphism u: K -> K (see module docstring)."""
    if u.source is not u.target and u.source != u.target:
        raise RejectedInput("cone needs an endomorphism (source == target)")
    K = u.source
    R = K.ring
    if new_index is None and isinstance(K, KoszulComplex):
        new_index = K.n + 1

    def shifted(lab):
        if new_index is not None:
            return tuple(lab) + (new_index,)
        return (lab, "e0")

    lo, hi = min(K.degrees), max(K.degrees) + 1
    bases = {}
    for r in range(lo, hi + 1):
        bases[r] = tuple(K.bases.get(r, ())) + tuple(shifted(l) for l in K.bases.get(r - 1, ()))
    diffs = {}
    for r in range(lo + 1, hi + 1):
        a, b = K.rank(r), K.rank(r - 1)
        c, d = K.rank(r - 1), K.rank(r - 2)
        top_left = K.differential(r) if a and c else PolyMatrix.zeros(R, c, a)
        u_part = u.component(r - 1) if b else PolyMatrix.zeros(R, c, b)
        if (r + 1) % 2:
            u_part = -u_part
        bottom_right = K.differential(r - 1) if b and d else PolyMatrix.zeros(R, d, b)
        rows = []
        for i in range(c):
            rows.append(list(top_left.rows[i]) + list(u_part.rows[i]) if b else list(top_left.rows[i]))
        for i in range(d):
            rows.append([R.zero] * a + list(bottom_right.rows[i]))
        diffs[r] = PolyMatrix(R, rows, a + b)
    return ChainComplex(R, bases, diffs)


def block_order(K_ext):
    """Basis order of K(f, t) matching the cone: subsets without the last index first."""
    n = K_ext.n
    return {r: [S for S in b if n not in S] + [S for S in b if n in S] for r, b in K_ext.bases.items()}


def cone_matches_koszul(f, t):
    """Build cone(t on K(f)) and K(f, t) in block order; return (equal?, cone, reordered)."""
    K = koszul(f)
    C = cone(scalar_map(K, t))
    ext = koszul(list(f) + [K.ring(t)])
    reordered = ext.reindexed(block_order(ext))
    return C == reordered, C, reordered


@dataclass
class ElementaryConjugation:
    delta: PolyMatrix
    exterior: ChainMap        # Lambda A: K(g') -> K(g)
    exterior_dual: ChainMap   # (Lambda A)^*: K(g)^* -> K(g')^*
    composite: ChainMap       # (Lambda A)^* phi_g Lambda A: K(g') -> K(g')^*
    reference: ChainMap       # phi_{g'}
    discrepancies: dict       # degree -> composite_r - phi_{g', r}

    @property
    def degree0_agrees(self):
        return self.discrepancies[0].is_zero()

    def to_json(self):
        return {
            "delta": self.delta.to_strings(),
            "det": str(self.delta.det()),
            "exterior_degree1": self.exterior.components[1].to_strings(),
            "degree0_agrees": self.degree0_agrees,
            "discrepancies": {str(r): m.to_strings() for r, m in sorted(self.discrepancies.items())},
        }


def conjugate_by_elementary(g, g_prime, delta, chi=1):
    """Transport the Koszul form of g to K(g') along delta, where delta g' = g.

    The degree-1 map is A = (delta^-1)^T (the cofactor matrix of delta, as
    det delta = 1); it satisfies g^T A = g'^T, so Lambda A is a chain map
    K(g') -> K(g).
    """
    g = list(g)
    g_prime = list(g_prime)
    R = g[0].ring
    if not isinstance(delta, PolyMatrix):
        delta = PolyMatrix(R, delta)
    k = len(g)
    if delta.shape != (k, k) or len(g_prime) != k:
        raise RejectedInput("delta must be a k x k matrix for sequences of length k")
    if delta.apply(g_prime) != g:
        raise RejectedInput("relation delta * g' == g fails")
    if delta.det() != R.one:
        raise RejectedInput(f"det delta = {delta.det()} is not 1")
    Kg = koszul(g)
    Kp = koszul(g_prime)
    A = delta.cofactor_matrix()
    ext = ChainMap(Kp, Kg, {r: A.compound(r) for r in range(k + 1)})
    ext_dual = ext.dual(k)
    phi_g = koszul_duality(Kg, chi)
    phi_p = koszul_duality(Kp, chi)
    composite = ext_dual @ (phi_g @ ext)
    composite = ChainMap(Kp, Kp.dual(), composite.components)
    disc = {r: composite.component(r) - phi_p.component(r) for r in range(k + 1)}
    ext.certificate = {"chain_map": ext.is_chain_map()}
    ext_dual.certificate = {"chain_map": ext_dual.is_chain_map()}
    composite.certificate = {"chain_map": composite.is_chain_map()}
    return ElementaryConjugation(delta, ext, ext_dual, composite, phi_p, disc)
