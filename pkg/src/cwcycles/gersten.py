"""Chow-Witt cycles at closed points, the boundary d1 and the map Theta.

A cycle is a finite sum over closed points x of pairs (GW class over k(x),
integer multiplicity) with rank = multiplicity mod 2.  Boundaries come from
Koszul-supported forms on a curve (g) = 0 twisted by <t> - <1>.
"""

from dataclasses import dataclass, field

from .errors import CWError, FalsifiedCheck, RejectedInput, UnsupportedCase
from .groebner import Ideal, is_regular_sequence
from .komplex import PolyMatrix, cone_matches_koszul, conjugate_by_elementary
from .orient import (LocalOrientation, compare_orientations, evaluate, koszul_unit, phi_form,
                     transition_matrix)
from .points import is_reduced_at, minimal_primes_zero_dim
from .witt import GWClass


class CompatibilityError(CWError):
    """A cycle term violates rank = multiplicity (mod 2)."""


class CWCycle:
    """Formal sum of (point, GW class, multiplicity) terms in codimension n."""

    def __init__(self, ring, codim, terms=()):
        self.ring = ring
        self.codim = int(codim)
        self._terms = {}
        for p, gw, m in terms:
            self._insert(p, gw, m)

    def _insert(self, point, gw, m):
        if point.ring != self.ring:
            raise RejectedInput("cycle term lives in a different ring")
        if gw.field != point.field:
            raise RejectedInput(f"GW class over {gw.field} at a point with residue field {point.field}")
        if point.key in self._terms:
            _, gw0, m0 = self._terms[point.key]
            gw, m = gw0 + gw, m0 + m
        if (gw.rank - m) % 2:
            raise CompatibilityError(f"rank {gw.rank} and multiplicity {m} differ mod 2 at {point.label()}")
        if m == 0 and gw.is_zero():
            self._terms.pop(point.key, None)
        else:
            self._terms[point.key] = (point, gw.reduced(), m)

    @property
    def terms(self):
        return sorted(self._terms.values(), key=lambda t: t[0].sort_key())

    def __len__(self):
        return len(self._terms)

    def _check(self, other):
        if other.ring != self.ring or other.codim != self.codim:
            raise RejectedInput("cycles live in different ambients")

    def __add__(self, other):
        self._check(other)
        out = CWCycle(self.ring, self.codim, self.terms)
        for t in other.terms:
            out._insert(*t)
        return out

    def __neg__(self):
        return CWCycle(self.ring, self.codim, [(p, -gw, -m) for p, gw, m in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        return not self._terms

    def equals(self, other):
        """Termwise equality: same points, equal multiplicities, isometric GW classes."""
        self._check(other)
        if set(self._terms) != set(other._terms):
            return False
        for k, (p, gw, m) in self._terms.items():
            _, gw2, m2 = other._terms[k]
            if m != m2 or not gw.isometric(gw2):
                return False
        return True

    def term_at(self, point):
        return self._terms.get(point.key)

    def __repr__(self):
        inner = "; ".join(f"{p.label()}: {gw}, m={m}" for p, gw, m in self.terms)
        return f"CWCycle(codim {self.codim}: {inner or '0'})"

    def to_json(self):
        return {
            "codimension": self.codim,
            "terms": [{"point": p.to_json(), "class": gw.to_json(), "multiplicity": m,
                       "invariants": gw.invariants().to_json()} for p, gw, m in self.terms],
        }


def empty_cycle(ring, codim):
    return CWCycle(ring, codim)


# -- Theta ------------------------------------------------------------------------

@dataclass
class ThetaResult:
    cycle: CWCycle
    orientation: LocalOrientation
    units: list                          # [(Point, unit)]
    reference: object = None

    def regenerate(self):
        return theta(self.orientation, self.reference).cycle

    def to_json(self):
        return {
            "orientation": self.orientation.to_json(),
            "reference": None if self.reference is None else self.reference.to_json(),
            "units": [{"point": p.to_json(), "unit": str(u)} for p, u in self.units],
            "cycle": self.cycle.to_json(),
        }


def local_unit(point, generators):
    """det M mod P where generators = M * (canonical generators of P)."""
    if len(generators) != len(point.generators):
        raise UnsupportedCase(
            f"{len(generators)} generators at a point of codimension {len(point.generators)}")
    M = transition_matrix(list(point.generators), list(generators), point.ideal)
    if M is None:
        raise RejectedInput(f"generators do not vanish at {point.label()}")
    u = point.reduce(M.det())
    if u.is_zero():
        raise RejectedInput(f"generators do not generate the maximal ideal at {point.label()}")
    return u


def theta(o, reference=None):
    """Theta(I, omega) as a cycle of rank-one classes with multiplicity 1."""
    cert = o.require_valid()
    if cert.kind == "trivial":
        return ThetaResult(empty_cycle(o.ring, o.n), o, [], reference)
    if o.n != o.ring.nvars:
        raise UnsupportedCase(f"theta needs closed points: n = {o.n} but {o.ring.nvars} variables")
    base = phi_form(o)
    if reference is not None:
        comp = {p.key: u for p, u in compare_orientations(reference, o).units}
        units = [(p, u * comp[p.key]) for p, u in base.entries]
    else:
        units = [(p, u * local_unit(p, o.generators)) for p, u in base.entries]
    cyc = CWCycle(o.ring, o.n, [(p, GWClass.of(p.field, [u]), 1) for p, u in units])
    return ThetaResult(cyc, o, units, reference)


# -- boundary ---------------------------------------------------------------------

@dataclass
class BoundaryDatum:
    """Regular sequence g, base form entries a_i (ring elements) and parameter t."""

    g: list
    form: list
    t: object
    decomposition: object = None

    def __post_init__(self):
        if not self.g:
            raise RejectedInput("boundary datum needs at least one curve equation")
        R = self.g[0].ring
        self.g = [R(x) for x in self.g]
        self.form = [R(a) for a in self.form]
        self.t = R(self.t)

    @property
    def ring(self):
        return self.g[0].ring

    def certify(self):
        reg = is_regular_sequence(self.g)
        if not reg.is_regular:
            raise RejectedInput(f"g is not a regular sequence: {reg.reason}")
        G = Ideal(self.ring, self.g)
        if not self.t:
            raise RejectedInput("parameter t is zero")
        if G.colon(self.t) != G:
            raise RejectedInput("t is a zero divisor modulo (g)")
        return reg

    def to_json(self):
        return {"g": [str(x) for x in self.g], "form": [str(a) for a in self.form], "t": str(self.t)}


def d1_boundary(b):
    """Boundary of (sum <a_i>)(<t> - <1>) on the Koszul form of g.

    At each point P of (g, t) the class is sum <a_i(P) * u_P>, where u_P is
    the degree-0 entry of the Koszul duality on K(g, t) = cone(t on K(g)),
    expressed in the canonical generators of P.  The multiplicity is the
    rank k (t vanishes to order one at a reduced point).
    """
    b.certify()
    R = b.ring
    n = len(b.g) + 1
    ext = list(b.g) + [b.t]
    out = empty_cycle(R, n)
    I = Ideal(R, ext)
    if I.is_unit():
        return out
    if n != R.nvars:
        raise UnsupportedCase(f"boundary points need (g, t) zero-dimensional: {n} equations, {R.nvars} variables")
    same, _, _ = cone_matches_koszul(b.g, b.t)
    if not same:
        raise AssertionError("cone of t does not match the extended Koszul complex")
    chi = koszul_unit(ext)
    for p in minimal_primes_zero_dim(I, b.decomposition):
        if p.multiplicity != 1 or not is_reduced_at(I, p):
            raise UnsupportedCase(f"non-reduced boundary point {p.label()}")
        u = p.reduce(chi) * local_unit(p, ext)
        entries = []
        for a in b.form:
            ap = p.reduce(a)
            if ap.is_zero():
                raise RejectedInput(f"form entry {a} vanishes at {p.label()}")
            entries.append(ap * u)
        out._insert(p, GWClass.of(p.field, entries), len(entries))
    return out


# -- cycle differences --------------------------------------------------------------

@dataclass
class DifferenceResult:
    ok: bool
    lhs: CWCycle
    rhs: CWCycle
    boundaries: list

    def to_json(self):
        return {
            "certified": self.ok,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "boundaries": [{"sign": s, "datum": b.to_json(), "cycle": c.to_json()} for s, b, c in self.boundaries],
        }


def verify_cycle_difference(c1, c2, witnesses=()):
    """Check c1 - c2 = sum sign * d1(witness), as c1 + negatives == c2 + positives."""
    c1._check(c2)
    lhs = CWCycle(c1.ring, c1.codim, c1.terms)
    rhs = CWCycle(c2.ring, c2.codim, c2.terms)
    log = []
    for sign, datum in witnesses:
        if sign not in (1, -1):
            raise RejectedInput(f"witness sign must be +1 or -1, got {sign}")
        bd = d1_boundary(datum)
        if bd.codim != c1.codim:
            raise RejectedInput("witness boundary has the wrong codimension")
        log.append((sign, datum, bd))
        if sign > 0:
            rhs = rhs + bd
        else:
            lhs = lhs + bd
    return DifferenceResult(lhs.equals(rhs), lhs, rhs, log)


# -- homotopy invariance -------------------------------------------------------------

@dataclass
class HomotopyStep:
    value: int
    delta: PolyMatrix
    det: object
    conjugation: object
    pointwise: list = field(default_factory=list)   # dicts per point
    boundary_equal: bool = False
    boundary_T: object = None
    boundary_c: object = None

    def to_json(self):
        return {
            "at": self.value,
            "delta": self.delta.to_strings(),
            "det": str(self.det),
            "degree0_agrees": self.conjugation.degree0_agrees,
            "discrepancies_zero": {str(r): m.is_zero() for r, m in sorted(self.conjugation.discrepancies.items())},
            "chain_maps": {
                "exterior": self.conjugation.exterior.certificate["chain_map"],
                "exterior_dual": self.conjugation.exterior_dual.certificate["chain_map"],
                "composite": self.conjugation.composite.certificate["chain_map"],
            },
            "points": self.pointwise,
            "boundary_equal": self.boundary_equal,
            "boundary": self.boundary_T.to_json(),
        }


@dataclass
class HomotopyReport:
    orientation: LocalOrientation
    steps: list
    evaluations: dict                               # c -> ThetaResult or None
    termwise_equal: object = None
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return all(s.conjugation.degree0_agrees and s.boundary_equal and
                   all(pt["isometric"] for pt in s.pointwise) for s in self.steps)

    def to_json(self):
        return {
            "orientation": self.orientation.to_json(),
            "steps": [s.to_json() for s in self.steps],
            "evaluations": {str(c): (None if r is None else r.to_json()) for c, r in sorted(self.evaluations.items())},
            "theta_termwise_equal": self.termwise_equal,
            "conclusion": ("evaluations at 0 and 1 have equal classes" if self.ok else "check failed"),
            "notes": self.notes,
        }


def _elementary_delta(fT, fc, t, R):
    """Delta with Delta (f(c); t) = (f(T); t): unit diagonal, last column h."""
    n = len(fT)
    rows = []
    for i in range(n):
        diff = fT[i] - fc[i]
        h, rem = diff.divmod(t)
        if rem:
            raise RejectedInput(f"f_{i + 1}(T) - f_{i + 1}(c) is not divisible by {t}")
        rows.append([R.one if j == i else R.zero for j in range(n)] + [h])
    rows.append([R.zero] * n + [R.one])
    return PolyMatrix(R, rows, n + 1)


def homotopy_step(o, c):
    R = o.ring
    T = R.homotopy
    t = R.var(T) - R(c)
    fT = list(o.generators)
    R0 = R.drop(T)
    fc = [g.substitute(T, c, R0).coerce(R) for g in fT]
    delta = _elementary_delta(fT, fc, t, R)
    det = delta.det()
    if det != R.one:
        raise FalsifiedCheck(f"det Delta = {det}", {"delta": delta.to_strings()})
    g, gp = fT + [t], fc + [t]
    conj = conjugate_by_elementary(g, gp, delta)
    I = Ideal(R, g)
    if not I.is_zero_dimensional():
        raise UnsupportedCase(f"(I, {t}) is not zero-dimensional")
    pts = minimal_primes_zero_dim(I)
    pointwise = []
    chi_g = koszul_unit(g)
    chi_gp = koszul_unit(gp)
    comp0 = conj.composite.components[0][0, 0]
    for p in pts:
        if p.multiplicity != 1 or not is_reduced_at(I, p):
            raise UnsupportedCase(f"non-reduced point {p.label()} of (I, {t})")
        psi = p.reduce(chi_g) * local_unit(p, g)
        psi0 = p.reduce(chi_gp) * local_unit(p, gp)
        # transported form: composite degree-0 entry, read in g' coordinates
        psi_t = p.reduce(comp0) * local_unit(p, gp)
        ratio = psi / psi0
        pointwise.append({
            "point": p.to_json(),
            "psi": str(psi),
            "psi0": str(psi0),
            "transported": str(psi_t),
            "comparing_unit": str(ratio),
            "isometric": GWClass.of(p.field, [psi]).isometric(GWClass.of(p.field, [psi0]))
            and psi_t == psi0,
        })
    one = R.one
    bT = d1_boundary(BoundaryDatum(fT, [one], t))
    bc = d1_boundary(BoundaryDatum(fc, [one], t))
    return HomotopyStep(c, delta, det, conj, pointwise, bT.equals(bc), bT, bc)


def homotopy_check(o):
    """Run the elementary-matrix comparison at T = 0 and T = 1.

    For each c the sequence (f(T), T - c) is carried to (f(c), T - c) by a
    unitriangular Delta; the induced forms at every point of (I, T - c) and
    the d1 boundaries of <1> on both Koszul forms must agree.  Theta of both
    evaluations is included when they are zero-dimensional.
    """
    if o.ring.homotopy is None:
        raise RejectedInput("orientation has no homotopy variable")
    o.require_valid()
    if o.is_trivial:
        raise RejectedInput("trivial orientation has no homotopy data")
    evals = {c: evaluate(o, c) for c in (0, 1)}
    steps = [homotopy_step(o, c) for c in (0, 1)]
    report = HomotopyReport(o, steps, {})
    for c, oc in evals.items():
        try:
            report.evaluations[c] = theta(oc)
        except UnsupportedCase as exc:
            report.evaluations[c] = None
            report.notes.append(f"theta at {c} skipped: {exc}")
    if all(r is not None for r in report.evaluations.values()):
        report.termwise_equal = report.evaluations[0].cycle.equals(report.evaluations[1].cycle)
    if not report.ok:
        bad = [s.to_json() for s in steps]
        raise FalsifiedCheck("homotopy comparison failed", {"steps": bad})
    return report
