"""Local orientations (I, omega) on a free module, given by generator lists.

With P = A^n free and the determinant trivialization fixed, omega together
with a lift to P -> I is just a list f1..fn generating I.  The pair (A, 0) is
the *trivial* orientation; every other valid orientation has height(I) = n
and a regular generating sequence.
"""

from dataclasses import dataclass, field

from .errors import RejectedInput, UnsupportedCase
from .groebner import Ideal, is_regular_sequence
from .komplex import PolyMatrix, koszul, koszul_duality
from .points import is_reduced_at, minimal_primes_zero_dim
from .witt import GWClass

TRIVIAL = "trivial"
HEIGHT_N = "height-n"
REJECTED = "rejected"


@dataclass(frozen=True)
class OrientationCertificate:
    kind: str
    reason: str = ""
    height: object = None
    regular: object = None          # RegularSequenceCertificate when kind == height-n

    @property
    def ok(self):
        return self.kind != REJECTED

    def to_json(self):
        out = {"kind": self.kind, "height": self.height}
        if self.reason:
            out["reason"] = self.reason
        if self.regular is not None:
            out["regular_sequence"] = {"is_regular": self.regular.is_regular,
                                       "colon_checks": list(self.regular.steps)}
        return out


class LocalOrientation:
    """An orientation of rank n: generators f1..fn in ``ring``.

    ``ideal`` optionally states I separately; validation then checks that
    the generators generate it.  An empty generator list (or one generating
    the unit ideal) encodes the trivial pair (A, 0).
    """

    def __init__(self, ring, n, generators, ideal=None, decomposition=None):
        self.ring = ring
        self.n = int(n)
        self.generators = tuple(ring(g) for g in generators)
        self.stated_ideal = None if ideal is None else Ideal(ring, ideal)
        self.decomposition = decomposition
        self._certificate = None

    @classmethod
    def trivial(cls, ring, n):
        return cls(ring, n, [])

    @property
    def ideal(self):
        if not self.generators:
            return Ideal(self.ring, [self.ring.one])
        return Ideal(self.ring, self.generators)

    @property
    def has_homotopy(self):
        return self.ring.homotopy is not None

    def certificate(self):
        if self._certificate is None:
            self._certificate = validate(self)
        return self._certificate

    def require_valid(self):
        cert = self.certificate()
        if not cert.ok:
            raise RejectedInput(cert.reason)
        return cert

    @property
    def is_trivial(self):
        return self.certificate().kind == TRIVIAL

    def __repr__(self):
        gens = ", ".join(map(str, self.generators)) or "A, 0"
        return f"LocalOrientation(n={self.n}, ({gens}) in {self.ring})"

    def to_json(self):
        return {"n": self.n, "generators": [str(g) for g in self.generators]}


def validate(o):
    if o.n < 2:
        return OrientationCertificate(REJECTED, f"rank n = {o.n} must be at least 2")
    I = o.ideal
    if o.stated_ideal is not None and I != o.stated_ideal:
        return OrientationCertificate(REJECTED, "generators do not generate the stated ideal")
    if I.is_unit():
        return OrientationCertificate(TRIVIAL, height=None)
    if len(o.generators) != o.n:
        return OrientationCertificate(REJECTED, f"{len(o.generators)} generators for rank n = {o.n}")
    h = I.height()
    if h < o.n:
        return OrientationCertificate(REJECTED, f"height {h} < n", height=h)
    reg = is_regular_sequence(list(o.generators))
    if not reg.is_regular:
        return OrientationCertificate(REJECTED, f"not a regular sequence: {reg.reason}", height=h, regular=reg)
    return OrientationCertificate(HEIGHT_N, height=h, regular=reg)


def evaluate(o, c):
    """Substitute T = c in every generator and re-validate."""
    T = o.ring.homotopy
    if T is None:
        raise RejectedInput("orientation has no homotopy variable")
    R0 = o.ring.drop(T)
    gens = [g.substitute(T, c, R0) for g in o.generators]
    out = LocalOrientation(R0, o.n, gens)
    cert = out.certificate()
    if not cert.ok:
        raise RejectedInput(f"evaluation at {T}={c} fails validation: {cert.reason}")
    return out


@dataclass
class PointwiseForm:
    """Rank-one forms <unit> over the residue field of each point."""

    entries: list = field(default_factory=list)     # [(Point, FieldElem)]

    def classes(self):
        return [(p, GWClass.of(p.field, [u])) for p, u in self.entries]

    def to_json(self):
        return [{"point": p.to_json(), "unit": str(u)} for p, u in self.entries]


def orientation_points(o):
    """Reduced closed points of I with multiplicity checks."""
    o.require_valid()
    I = o.ideal
    if I.is_unit():
        return []
    if not I.is_zero_dimensional():
        raise UnsupportedCase(
            f"ideal has positive dimension (height {I.height()} < {o.ring.nvars} variables); "
            "only closed points are supported")
    pts = minimal_primes_zero_dim(I, o.decomposition)
    for p in pts:
        if p.multiplicity != 1 or not is_reduced_at(I, p):
            raise UnsupportedCase(f"non-reduced point {p.label()} (length {p.multiplicity})")
    return pts


def koszul_unit(generators, chi=1):
    """The degree-0 entry of the Koszul duality map, a unit of the ring."""
    phi = koszul_duality(koszul(list(generators)), chi)
    if not (phi.certificate["chain_map"] and phi.certificate["symmetric"]):
        raise AssertionError("Koszul duality certificate failed")
    return phi.components[0][0, 0]


def phi_form(o):
    """The form Phi(I, omega) at each point, in the trivialization of o's own generators."""
    pts = orientation_points(o)
    if not pts:
        return PointwiseForm([])
    u = koszul_unit(o.generators)
    return PointwiseForm([(p, p.reduce(u)) for p in pts])


def transition_matrix(source_gens, target_gens, ideal=None):
    """M with target_i = sum_j M_ij source_j, or None if some target is outside (source)."""
    R = source_gens[0].ring
    J = ideal or Ideal(R, source_gens)
    rows = []
    for g in target_gens:
        cof = J.lift(g)
        if cof is None:
            return None
        rows.append(cof)
    return PolyMatrix(R, rows, len(source_gens))


@dataclass
class Comparison:
    matrix: PolyMatrix
    det: object
    units: list                                     # [(Point, FieldElem)]

    def to_json(self):
        return {
            "matrix": self.matrix.to_strings(),
            "det": str(self.det),
            "units": [{"point": p.to_json(), "unit": str(u)} for p, u in self.units],
        }


def compare_orientations(o1, o2):
    """Pointwise units det M mod P, where o2's generators are M times o1's."""
    for o in (o1, o2):
        o.require_valid()
    if o1.ring != o2.ring or o1.n != o2.n:
        raise RejectedInput("orientations live on different rings or ranks")
    if o1.ideal != o2.ideal:
        raise RejectedInput("orientations have different ideals")
    if o1.is_trivial:
        return Comparison(PolyMatrix.identity(o1.ring, 0), o1.ring.one, [])
    M = transition_matrix(list(o1.generators), list(o2.generators), o1.ideal)
    if M is None:
        raise RejectedInput("no transition matrix between the generator lists")
    d = M.det()
    units = []
    for p in orientation_points(o1):
        u = p.reduce(d)
        if u.is_zero():
            raise RejectedInput(f"transition determinant vanishes at {p.label()}")
        units.append((p, u))
    return Comparison(M, d, units)
