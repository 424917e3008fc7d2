import json
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cwcycles.errors import RejectedInput
from cwcycles.komplex import (ChainMap, PolyMatrix, block_order, cone, cone_matches_koszul,
                              conjugate_by_elementary, koszul, koszul_duality, scalar_map, shuffle_sign)
from cwcycles.polyring import PolyRing
from generators import random_regular_sequence, random_unitriangular
from oracles import matrix_to_sympy, permutation_sign, sympy_duality, sympy_koszul, to_sympy

R = PolyRing("QQ", ["x", "y", "z"])
x, y, z = R.gens
RT = PolyRing("QQ", ["x", "y", "T"], homotopy="T")
xt, yt, T = RT.gens


def as_sympy(K, syms):
    return {r: matrix_to_sympy(K.differential(r), syms) for r in range(1, K.n + 1)}


class TestKoszul:
    def test_single_generator(self):
        K = koszul([x])
        assert K.bases == {0: ((),), 1: ((1,),)}
        assert K.differential(1).rows == ((x,),)

    def test_two_generators_sign_rule(self):
        K = koszul([x, y])
        # d2(e1 ^ e2) = x e2 - y e1 in basis (e1, e2)
        assert K.differential(2).rows == ((-y,), (x,))
        assert K.differential(1).rows == ((x, y),)
        assert K.is_complex()

    def test_three_generators_dd_zero(self):
        K = koszul([x, y, z])
        assert (K.differential(1) @ K.differential(2)).is_zero()
        assert (K.differential(2) @ K.differential(3)).is_zero()
        prod = K.differential(1) @ K.differential(2)
        assert prod.shape == (1, 3)

    def test_empty_rejected(self):
        with pytest.raises(RejectedInput):
            koszul([])

    def test_mixed_rings_rejected(self):
        with pytest.raises(RejectedInput):
            koszul([x, xt])

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=25)
    def test_matches_contraction_oracle(self, seed):
        rng = random.Random(seed)
        gens = random_regular_sequence(rng, R, rng.randint(1, 3))
        syms = sympy.symbols(R.variables)
        K = koszul(gens)
        ref = sympy_koszul([to_sympy(g, syms) for g in gens])
        assert as_sympy(K, syms) == ref
        assert K.is_complex()


class TestDuality:
    def test_rank_one(self):
        phi = koszul_duality(koszul([x]))
        assert phi.components[0].rows == ((R.one,),)
        assert phi.components[1].rows == ((R.one,),)
        assert phi.certificate == {"chain_map": True, "symmetric": True}

    def test_rank_two_matches_direct_multiplication(self):
        K = koszul([x, y])
        phi = koszul_duality(K)
        # phi_1(e1) = e2*, phi_1(e2) = -e1*  in dual basis (e1*, e2*)
        assert phi.components[1].rows == ((R.zero, -R.one), (R.one, R.zero))
        syms = sympy.symbols(R.variables)
        d = sympy_koszul([syms[0], syms[1]])
        ph = sympy_duality(2)
        # dual differential in degree r is (-1)^(r+1) d_{n-r+1}^T
        for r in (1, 2):
            lhs = ph[r - 1] * d[r]
            rhs = (-1) ** (r + 1) * d[3 - r].T * ph[r]
            assert sympy.expand(lhs - rhs) == sympy.zeros(*lhs.shape)

    def test_scaling_by_chi(self):
        K = koszul([x, y])
        phi, phic = koszul_duality(K), koszul_duality(K, chi=5)
        for r in range(3):
            assert phic.components[r] == phi.components[r].scale(R(5))
        assert phic.certificate == phi.certificate

    def test_non_koszul_rejected(self):
        K = koszul([x])
        with pytest.raises(RejectedInput):
            koszul_duality(cone(scalar_map(K, y)))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_signs_match_permutation_oracle(self, n):
        gens = list(PolyRing("QQ", [f"v{i}" for i in range(n)]).gens)
        phi = koszul_duality(koszul(gens))
        ref = sympy_duality(n)
        syms = sympy.symbols([f"v{i}" for i in range(n)])
        for r in range(n + 1):
            assert matrix_to_sympy(phi.components[r], syms) == ref[r]

    def test_shuffle_sign(self):
        assert shuffle_sign((2,), (1,)) == -1
        assert shuffle_sign((1, 3), (2,)) == permutation_sign((1, 3, 2))

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=25)
    def test_certificates_hold_for_random_sequences(self, seed):
        rng = random.Random(seed)
        ring = rng.choice([R, PolyRing("GF(5)", ["x", "y", "z"])])
        gens = random_regular_sequence(rng, ring, rng.randint(1, 3))
        phi = koszul_duality(koszul(gens), chi=rng.choice([1, 2, -3]))
        assert phi.certificate == {"chain_map": True, "symmetric": True}


class TestCone:
    def test_multiplication_by_y(self):
        ok, C, ref = cone_matches_koszul([x], y)
        assert ok
        assert C.differential(2).rows == ref.differential(2).rows

    def test_unit(self):
        ok, C, _ = cone_matches_koszul([x], R.one)
        assert ok
        assert C.is_complex()

    def test_homotopy_variable(self):
        ok, C, ref = cone_matches_koszul([xt, yt - T], T)
        assert ok
        assert ref.bases[1] == ((1,), (2,), (3,))
        assert ref.bases[2] == ((1, 2), (1, 3), (2, 3))

    def test_basis_order(self):
        K3 = koszul([x, y, z])
        order = block_order(K3)
        assert order[1] == [(1,), (2,), (3,)]
        assert order[2] == [(1, 2), (1, 3), (2, 3)]
        C = cone(scalar_map(koszul([x, y]), z))
        assert C.bases[2] == ((1, 2), (1, 3), (2, 3))

    def test_needs_endomorphism(self):
        K1, K2 = koszul([x]), koszul([y])
        u = ChainMap(K1, K2, {0: PolyMatrix.identity(R, 1), 1: PolyMatrix.identity(R, 1)})
        with pytest.raises(RejectedInput):
            cone(u)

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=20)
    def test_random_instances(self, seed):
        rng = random.Random(seed)
        f = random_regular_sequence(rng, R, rng.randint(1, 2))
        t = rng.choice([R.one, z, z * (z - 1), y + 3])
        assert cone_matches_koszul(f, t)[0]


class TestElementaryConjugation:
    def test_displayed_delta(self):
        delta = PolyMatrix(RT, [[1, 0, 0], [0, 1, -1], [0, 0, 1]])
        ec = conjugate_by_elementary([xt, yt - T, T], [xt, yt, T], delta)
        assert delta.det() == RT.one
        assert ec.degree0_agrees
        assert ec.composite.is_chain_map()
        assert all(m.is_zero() for m in ec.discrepancies.values())

    def test_identity_gives_phi(self):
        g = [x, y, z]
        ec = conjugate_by_elementary(g, g, PolyMatrix.identity(R, 3))
        assert ec.composite.components == koszul_duality(koszul(g)).components

    def test_upper_unitriangular(self):
        delta = PolyMatrix(R, [[1, y, 0], [0, 1, 0], [0, 0, 1]])
        ec = conjugate_by_elementary([x + y ** 2, y, z], [x, y, z], delta)
        assert ec.degree0_agrees
        assert ec.exterior.is_chain_map()

    def test_relation_must_hold(self):
        delta = PolyMatrix(R, [[1, 1], [0, 1]])
        with pytest.raises(RejectedInput, match="relation"):
            conjugate_by_elementary([x, y], [x, y], delta)

    def test_det_must_be_one(self):
        delta = PolyMatrix(R, [[2, 0], [0, 1]])
        with pytest.raises(RejectedInput, match="det"):
            conjugate_by_elementary([2 * x, y], [x, y], delta)

    def test_functorial_in_delta(self):
        rng = random.Random(20)
        for _ in range(20):
            d1, d2 = random_unitriangular(rng, R, 3), random_unitriangular(rng, R, 3)
            g2 = [x, y, z]
            g1 = d2.apply(g2)
            g0 = d1.apply(g1)
            e1 = conjugate_by_elementary(g0, g1, d1)
            e2 = conjugate_by_elementary(g1, g2, d2)
            e12 = conjugate_by_elementary(g0, g2, d1 @ d2)
            comp = e1.exterior @ e2.exterior
            assert all(comp.component(r) == e12.exterior.component(r) for r in range(4))
            assert e12.degree0_agrees

    def test_to_json(self):
        delta = PolyMatrix(RT, [[1, 0, 0], [0, 1, -1], [0, 0, 1]])
        out = conjugate_by_elementary([xt, yt - T, T], [xt, yt, T], delta).to_json()
        assert out["det"] == "1"
        assert out["delta"] == [["1", "0", "0"], ["0", "1", "-1"], ["0", "0", "1"]]
        json.dumps(out)


class TestMatrices:
    def test_compound_is_multiplicative(self):
        rng = random.Random(4)
        for _ in range(10):
            A, B = random_unitriangular(rng, R, 3), random_unitriangular(rng, R, 3).T
            for r in range(4):
                assert (A @ B).compound(r) == A.compound(r) @ B.compound(r)

    def test_det_and_cofactor(self):
        M = PolyMatrix(R, [[x, y], [z, 1]])
        assert M.det() == x - y * z
        assert M @ M.cofactor_matrix().T == PolyMatrix.identity(R, 2, M.det())

    def test_complex_json(self):
        out = koszul([x, y]).to_json()
        assert out["bases"]["0"] == ["1"]
        assert out["differentials"]["1"] == [["x", "y"]]
