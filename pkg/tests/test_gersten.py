import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cwcycles.errors import RejectedInput, UnsupportedCase
from cwcycles.gersten import (BoundaryDatum, CompatibilityError, CWCycle, d1_boundary, empty_cycle,
                              homotopy_check, theta, verify_cycle_difference)
from cwcycles.orient import LocalOrientation
from cwcycles.points import point_from_generators
from cwcycles.polyring import PolyRing
from cwcycles.witt import GWClass
from generators import random_unitriangular
from oracles import chain_level_boundary, induced_unit_at

R = PolyRing("QQ", ["x", "y"])
x, y = R.gens
RT = PolyRing("QQ", ["x", "y", "T"], homotopy="T")
xt, yt, T = RT.gens
SX, SY = sympy.symbols("x y")


def rational_point(p):
    return tuple(sympy.Rational(p.coordinates()[v]) for v in p.ring.variables)


def single(ring, gens, entries, m=1):
    p = point_from_generators(ring, gens)
    return CWCycle(ring, len(gens), [(p, GWClass.of(p.field, entries), m)])


class TestCycles:
    def test_parity_enforced(self):
        p = point_from_generators(R, [x, y])
        with pytest.raises(CompatibilityError):
            CWCycle(R, 2, [(p, GWClass.of(p.field, [1]), 2)])

    def test_addition_merges_terms(self):
        c = single(R, [x, y], [1]) + single(R, [x, y], [-1])
        (p, gw, m), = c.terms
        assert m == 2 and gw.hyperbolic == 1 and gw.form.rank == 0

    def test_subtraction_to_zero(self):
        c = single(R, [x, y - 1], [3])
        assert (c - c).is_zero()

    def test_field_mismatch(self):
        p = point_from_generators(R, [x, y ** 2 - 2])
        with pytest.raises(RejectedInput):
            CWCycle(R, 2, [(p, GWClass.of(R.field, [1]), 1)])

    def test_different_codimension(self):
        with pytest.raises(RejectedInput):
            empty_cycle(R, 2) + empty_cycle(R, 1)

    def test_json_sorted_and_with_invariants(self):
        c = single(R, [x, y - 1], [1]) + single(R, [x, y], [2])
        out = c.to_json()
        assert [t["point"]["coordinates"]["y"] for t in out["terms"]] == ["0", "1"]
        assert out["terms"][0]["invariants"]["signature"] == 1


class TestTheta:
    @pytest.mark.parametrize("gens,expected", [(("x", "y"), 1), (("y", "x"), -1)])
    def test_canonical_instances(self, gens, expected):
        f = [R.parse(g) for g in gens]
        res = theta(LocalOrientation(R, 2, f))
        (p, gw, m), = res.cycle.terms
        assert m == 1
        assert rational_point(p) == (0, 0)
        oracle = induced_unit_at([sympy.sympify(g) for g in gens], (SX, SY), (0, 0))
        assert oracle == expected
        assert gw == GWClass.of(p.field, [int(oracle)])

    def test_classes_differ_by_signature(self):
        a = theta(LocalOrientation(R, 2, [x, y])).cycle
        b = theta(LocalOrientation(R, 2, [y, x])).cycle
        assert not a.equals(b)
        assert a.terms[0][1].invariants().signature == 1
        assert b.terms[0][1].invariants().signature == -1

    def test_trivial_is_empty(self):
        assert theta(LocalOrientation.trivial(R, 2)).cycle.is_zero()

    def test_sqrt2_point(self):
        (p, gw, m), = theta(LocalOrientation(R, 2, [x, y ** 2 - 2])).cycle.terms
        assert str(p.field) == "QQ[z]/(z^2 - 2)"
        assert gw == GWClass.of(p.field, [1])

    def test_two_points_match_jacobian_oracle(self):
        f = [x, y * (y - 1)]
        res = theta(LocalOrientation(R, 2, f))
        assert len(res.cycle) == 2
        for p, gw, m in res.cycle.terms:
            u = induced_unit_at([SX, SY * (SY - 1)], (SX, SY), rational_point(p))
            assert gw == GWClass.of(p.field, [int(u)])

    def test_reference_orientation(self):
        ref = LocalOrientation(R, 2, [y, x])
        res = theta(LocalOrientation(R, 2, [x, y]), reference=ref)
        (p, gw, m), = res.cycle.terms
        assert gw == GWClass.of(p.field, [-1])

    def test_positive_dimensional_unsupported(self):
        with pytest.raises(UnsupportedCase):
            theta(LocalOrientation(RT, 2, [xt, yt - T]))

    def test_regenerate(self):
        res = theta(LocalOrientation(R, 2, [x - 2, y ** 2 - 1]))
        assert res.regenerate().equals(res.cycle)

    def test_invariant_under_elementary_change(self):
        rng = random.Random(31)
        f = [x ** 2 - 3 * x + 2, y - x]
        base = theta(LocalOrientation(R, 2, f)).cycle
        for _ in range(10):
            D = random_unitriangular(rng, R, 2)
            assert theta(LocalOrientation(R, 2, D.apply(f))).cycle.equals(base)

    @given(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 3))
    @settings(max_examples=25)
    def test_rational_points_match_jacobian(self, a, b, k):
        f = [x - a, (y - b) * (y - b - k)]
        res = theta(LocalOrientation(R, 2, f))
        exprs = [SX - a, (SY - b) * (SY - b - k)]
        for p, gw, m in res.cycle.terms:
            u = induced_unit_at(exprs, (SX, SY), rational_point(p))
            assert gw == GWClass.of(p.field, [int(u)])


class TestBoundary:
    @pytest.mark.parametrize("t_text", ["y", "y*(y - 1)", "y + 2", "3*y*(y + 1)"])
    def test_matches_chain_level_oracle(self, t_text):
        t = R.parse(t_text)
        cyc = d1_boundary(BoundaryDatum([x], [R.one], t))
        pts = [rational_point(p) for p, _, _ in cyc.terms]
        oracle = chain_level_boundary([SX], sympy.sympify(t_text), [sympy.Integer(1)], (SX, SY), pts)
        for p, gw, m in cyc.terms:
            assert m == 1
            expected = [int(v) for v in oracle[rational_point(p)]]
            assert gw == GWClass.of(p.field, expected)

    def test_two_points_units(self):
        cyc = d1_boundary(BoundaryDatum([x], [R.one], y * (y - 1)))
        units = {rational_point(p): gw for p, gw, _ in cyc.terms}
        assert units[(0, 0)] == GWClass.of(R.field, [-1])
        assert units[(0, 1)] == GWClass.of(R.field, [1])

    def test_constant_form(self):
        (p, gw, m), = d1_boundary(BoundaryDatum([x], [R(5)], y)).terms
        assert gw == GWClass.of(p.field, [5])

    def test_unit_parameter_gives_empty(self):
        assert d1_boundary(BoundaryDatum([x], [R.one], R(7))).is_zero()
        assert d1_boundary(BoundaryDatum([x], [R.one], y ** 2 + 1 - y ** 2)).is_zero()

    def test_linear_in_form(self):
        t = y * (y + 2)
        a = d1_boundary(BoundaryDatum([x], [R(2)], t))
        b = d1_boundary(BoundaryDatum([x], [R(3)], t))
        ab = d1_boundary(BoundaryDatum([x], [R(2), R(3)], t))
        assert (a + b).equals(ab)

    def test_zero_divisor_rejected(self):
        with pytest.raises(RejectedInput):
            d1_boundary(BoundaryDatum([x * y], [R.one], x))

    def test_non_regular_rejected(self):
        with pytest.raises(RejectedInput):
            d1_boundary(BoundaryDatum([R.zero], [R.one], y))

    def test_form_vanishing_at_point(self):
        with pytest.raises(RejectedInput):
            d1_boundary(BoundaryDatum([x], [y], y))

    @given(st.integers(-5, 5), st.integers(1, 4))
    @settings(max_examples=20)
    def test_random_lines_match_oracle(self, b, k):
        t = (y - b) * (y - b - k)
        cyc = d1_boundary(BoundaryDatum([x - 1], [R(2)], t))
        pts = [rational_point(p) for p, _, _ in cyc.terms]
        oracle = chain_level_boundary([SX - 1], (SY - b) * (SY - b - k), [sympy.Integer(2)], (SX, SY), pts)
        for p, gw, _ in cyc.terms:
            assert gw == GWClass.of(p.field, [int(v) for v in oracle[rational_point(p)]])


class TestDifference:
    def test_moving_point(self):
        c1 = single(R, [x, y], [1])
        c2 = single(R, [x, y - 1], [1])
        w = [(1, BoundaryDatum([x], [R.one], y)), (-1, BoundaryDatum([x], [R.one], y - 1))]
        res = verify_cycle_difference(c1, c2, w)
        assert res.ok
        assert len(res.boundaries) == 2

    def test_sign_refused(self):
        res = verify_cycle_difference(single(R, [x, y], [1]), single(R, [x, y], [-1]))
        assert not res.ok

    def test_wrong_witness_refused(self):
        c1 = single(R, [x, y], [1])
        c2 = single(R, [x, y - 1], [1])
        res = verify_cycle_difference(c1, c2, [(1, BoundaryDatum([x], [R.one], y))])
        assert not res.ok

    def test_bad_sign(self):
        with pytest.raises(RejectedInput):
            verify_cycle_difference(empty_cycle(R, 2), empty_cycle(R, 2), [(2, BoundaryDatum([x], [R.one], y))])

    def test_boundary_is_its_own_witness(self):
        datum = BoundaryDatum([x], [R.one], y * (y - 3))
        bd = d1_boundary(datum)
        assert verify_cycle_difference(bd, empty_cycle(R, 2), [(1, datum)]).ok
        assert verify_cycle_difference(empty_cycle(R, 2), bd, [(-1, datum)]).ok
        assert not verify_cycle_difference(bd, empty_cycle(R, 2), [(-1, datum)]).ok


class TestHomotopy:
    @pytest.mark.parametrize("second", ["y - T", "y - T^2", "y - T*(T - 1)"])
    def test_families(self, second):
        o = LocalOrientation(RT, 2, [xt, RT.parse(second)])
        rep = homotopy_check(o)
        assert rep.ok
        for step in rep.steps:
            assert step.det == RT.one
            assert step.conjugation.degree0_agrees
            assert all(pt["isometric"] for pt in step.pointwise)

    def test_displayed_delta(self):
        rep = homotopy_check(LocalOrientation(RT, 2, [xt, yt - T]))
        assert rep.steps[0].delta.to_strings() == [["1", "0", "0"], ["0", "1", "-1"], ["0", "0", "1"]]

    def test_loop_evaluations_agree(self):
        rep = homotopy_check(LocalOrientation(RT, 2, [xt, yt - T * (T - 1) * 3]))
        assert rep.termwise_equal is True

    def test_constant_family_has_identity_delta(self):
        rep = homotopy_check(LocalOrientation(RT, 2, [xt - 1, yt + 2]))
        for step in rep.steps:
            k = step.delta.shape[0]
            assert all(step.delta[i, j] == (RT.one if i == j else RT.zero) for i in range(k) for j in range(k))

    def test_moving_point_not_termwise_equal(self):
        rep = homotopy_check(LocalOrientation(RT, 2, [xt, yt - T]))
        assert rep.termwise_equal is False

    def test_requires_homotopy_variable(self):
        with pytest.raises(RejectedInput):
            homotopy_check(LocalOrientation(R, 2, [x, y]))

    def test_report_json(self):
        out = homotopy_check(LocalOrientation(RT, 2, [xt, yt - T])).to_json()
        assert out["steps"][0]["det"] == "1"
        assert out["conclusion"].startswith("evaluations")
