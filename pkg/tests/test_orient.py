import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cwcycles.errors import RejectedInput, UnsupportedCase
from cwcycles.groebner import Ideal, substitute
from cwcycles.orient import (HEIGHT_N, REJECTED, TRIVIAL, LocalOrientation, compare_orientations, evaluate,
                             orientation_points, phi_form, transition_matrix, validate)
from cwcycles.polyring import PolyRing
from generators import random_unitriangular
from oracles import jacobian_det_at, sympy_duality

R = PolyRing("QQ", ["x", "y"])
x, y = R.gens
RT = PolyRing("QQ", ["x", "y", "T"], homotopy="T")
xt, yt, T = RT.gens


def orient(ring, *gens, **kw):
    return LocalOrientation(ring, len(gens) if gens else 2, list(gens), **kw)


class TestValidate:
    def test_coordinate_axes(self):
        cert = validate(orient(R, x, y))
        assert cert.kind == HEIGHT_N
        assert cert.regular.is_regular
        assert cert.height == 2

    def test_repeated_generator(self):
        cert = validate(orient(R, x, x))
        assert cert.kind == REJECTED
        assert cert.height == 1
        assert "height 1 < n" in cert.reason

    def test_homotopy_family(self):
        cert = validate(orient(RT, xt, yt - T))
        assert cert.kind == HEIGHT_N and cert.regular.is_regular

    def test_trivial(self):
        assert validate(LocalOrientation.trivial(R, 2)).kind == TRIVIAL
        assert validate(orient(R, x, x + 1)).kind == TRIVIAL

    def test_rank_one_rejected(self):
        assert validate(LocalOrientation(R, 1, [x])).kind == REJECTED

    def test_wrong_count(self):
        assert validate(LocalOrientation(R, 2, [x])).kind == REJECTED

    def test_stated_ideal_mismatch(self):
        o = LocalOrientation(R, 2, [x, y], ideal=[x, y ** 2])
        assert validate(o).kind == REJECTED
        assert validate(LocalOrientation(R, 2, [x, y], ideal=[x + y, y])).kind == HEIGHT_N

    def test_require_valid_raises(self):
        with pytest.raises(RejectedInput):
            orient(R, x, x).require_valid()

    def test_json(self):
        out = validate(orient(R, x, y)).to_json()
        assert out["kind"] == "height-n"
        assert out["regular_sequence"]["is_regular"]


class TestEvaluate:
    @pytest.mark.parametrize("gens,c,expected", [
        (("x", "y - T"), 0, ("x", "y")),
        (("x", "y - T"), 1, ("x", "y - 1")),
        (("x", "y - T^2"), 1, ("x", "y - 1")),
    ])
    def test_examples(self, gens, c, expected):
        o = orient(RT, *(RT.parse(g) for g in gens))
        e = evaluate(o, c)
        assert tuple(str(g) for g in e.generators) == expected

    def test_without_homotopy(self):
        with pytest.raises(RejectedInput):
            evaluate(orient(R, x, y), 0)

    def test_failing_evaluation_reported(self):
        o = orient(RT, xt, T * yt + (1 - T) * xt)
        assert o.certificate().ok
        with pytest.raises(RejectedInput, match="T=0"):
            evaluate(o, 0)

    @given(st.integers(-3, 3), st.integers(0, 3), st.sampled_from([0, 1]))
    @settings(max_examples=30)
    def test_commutes_with_substitution(self, a, k, c):
        o = orient(RT, xt - a * T, yt - T ** k)
        assert evaluate(o, c).ideal == substitute(o.ideal, "T", c)


class TestPhiForm:
    def test_origin_matches_chain_oracle(self):
        pf = phi_form(orient(R, x, y))
        (p, u), = pf.entries
        assert p.coordinates() == {"x": "0", "y": "0"}
        # degree-0 entry of the duality map, reduced mod I
        assert u == p.field(int(sympy_duality(2)[0][0, 0]))
        assert u == p.field(1)

    def test_sqrt2(self):
        pf = phi_form(orient(R, x, y ** 2 - 2))
        (p, u), = pf.entries
        assert str(p.field) == "QQ[z]/(z^2 - 2)"
        assert u == p.field(int(sympy_duality(2)[0][0, 0]))

    def test_trivial_is_empty(self):
        assert phi_form(LocalOrientation.trivial(R, 2)).entries == []

    def test_non_reduced_unsupported(self):
        with pytest.raises(UnsupportedCase, match="non-reduced"):
            phi_form(orient(R, x, y ** 2))

    def test_positive_dimension_unsupported(self):
        with pytest.raises(UnsupportedCase):
            orientation_points(orient(RT, xt, yt - T))

    @pytest.mark.parametrize("gens", [("x", "y"), ("x - 1", "y^2 - 3"), ("x*y - 1", "y - 2"),
                                      ("x", "y*(y - 1)")])
    def test_unit_one_at_every_point(self, gens):
        pf = phi_form(orient(R, *(R.parse(g) for g in gens)))
        assert pf.entries and all(u == p.field(1) for p, u in pf.entries)


class TestCompare:
    def test_swap(self):
        c = compare_orientations(orient(R, x, y), orient(R, y, x))
        assert c.det == -R.one
        (p, u), = c.units
        assert u == p.field(-1)
        assert jacobian_det_at([y, x], R, (0, 0)) == -1

    def test_unitriangular(self):
        c = compare_orientations(orient(R, x, y), orient(R, x + y ** 2, y))
        assert c.det == R.one
        assert [u for _, u in c.units] == [c.units[0][0].field(1)]

    def test_identity(self):
        c = compare_orientations(orient(R, x, y), orient(R, x, y))
        assert c.det == R.one

    def test_different_ideals(self):
        with pytest.raises(RejectedInput):
            compare_orientations(orient(R, x, y), orient(R, x, y - 1))

    def test_transition_matrix_outside_ideal(self):
        assert transition_matrix([x, y], [x, R.one]) is None

    def test_multiplicative(self):
        rng = random.Random(6)
        f1 = [x * (x - 1), y - x]
        base = orient(R, *f1)
        for _ in range(10):
            M1 = _random_invertible_at_points(rng)
            M2 = _random_invertible_at_points(rng)
            f2, f3 = M1.apply(f1), (M2 @ M1).apply(f1)
            o2, o3 = orient(R, *f2), orient(R, *f3)
            c12, c23, c13 = (compare_orientations(a, b) for a, b in ((base, o2), (o2, o3), (base, o3)))
            for (p, u12), (_, u23), (_, u13) in zip(c12.units, c23.units, c13.units):
                assert ((u12 * u23) * u13).is_square()

    def test_elementary_gives_trivial_units(self):
        rng = random.Random(2)
        f = [x ** 2 - 2, y - x]
        for _ in range(10):
            D = random_unitriangular(rng, R, 2)
            c = compare_orientations(orient(R, *f), orient(R, *D.apply(f)))
            assert all(u == p.field(1) for p, u in c.units)

    def test_units_match_jacobian_ratio(self):
        # at a rational point, det M equals the ratio of Jacobian determinants
        f = [x * (x - 1), y - x]
        g = [x * (x - 1) + 3 * (y - x), 2 * (y - x) + x * (x - 1)]
        c = compare_orientations(orient(R, *f), orient(R, *g))
        for p, u in c.units:
            pt = tuple(sympy.Rational(p.coordinates()[v]) for v in R.variables)
            ratio = jacobian_det_at(g, R, pt) / jacobian_det_at(f, R, pt)
            assert u == p.field(int(ratio))


def _random_invertible_at_points(rng):
    from cwcycles.komplex import PolyMatrix
    a, b = rng.choice([1, 2, 3, -1]), rng.choice([1, 5, -2])
    return PolyMatrix(R, [[a, rng.randint(-2, 2) * x], [0, b]]) if rng.random() < 0.5 else \
        PolyMatrix(R, [[0, a], [b, rng.randint(-2, 2)]])


def test_ideal_property_trivial():
    assert LocalOrientation.trivial(R, 2).ideal == Ideal(R, [R.one])
