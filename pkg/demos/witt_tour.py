"""A short walk through forms over finite fields, QQ and QQ(sqrt 2).

Run:  python demos/witt_tour.py
"""

from cwcycles import QQ, DiagonalForm, GWClass, PrimeField, decide_isometry, diagonalize, \
    fundamental_ideal_level, gw_invariants, parse_field

# The hyperbolic plane, diagonalized with a certificate.
form, P = diagonalize([[0, 1], [1, 0]], QQ)
print("[[0,1],[1,0]] over QQ diagonalizes to", form, "via P =", [[str(a) for a in r] for r in P])

F3, F5 = PrimeField(3), PrimeField(5)
print("\n<1,1> and <2,3> over GF(5) isometric?", decide_isometry(DiagonalForm(F5, [1, 1]), DiagonalForm(F5, [2, 3])))

two_twos = GWClass.of(F3, [2]) + GWClass.of(F3, [2])
print("<2> + <2> in W(GF(3)) is zero?", two_twos.is_witt_zero(), " (its discriminant is not a square)")

# Over QQ the Hasse symbols see what rank, discriminant and signature miss.
a, b = DiagonalForm(QQ, [1, 1]), DiagonalForm(QQ, [3, 3])
print("\n<1,1> vs <3,3> over QQ:")
print("   invariants", gw_invariants(a).to_json())
print("   invariants", gw_invariants(b).to_json())
print("   isometric?", decide_isometry(a, b))

print("\nlevel of <1,1> in the fundamental-ideal filtration:", fundamental_ideal_level(GWClass.of(QQ, [1, 1])))

K = parse_field("QQ[z]/(z^2 - 2)")
z = K.elem(K.generator())
print(f"\nOver {K}:")
print("   <1,1> = <3,3>?", decide_isometry(DiagonalForm(K, [1, 1]), DiagonalForm(K, [3, 3])), " (3 = 1 + z^2)")
print("   <1,1> = <7,7>?", decide_isometry(DiagonalForm(K, [1, 1]), DiagonalForm(K, [7, 7])),
      " (fails at a 7-adic place)")
print("   <1,1> = <z,z>?", decide_isometry(DiagonalForm(K, [1, 1]), DiagonalForm(K, [z, z])),
      " (z is negative at one real place)")
