"""Swapping two generators flips the sign of the cycle class.

Run:  python demos/orientation_signs.py
"""

from cwcycles import LocalOrientation, PolyRing, compare_orientations, theta

R = PolyRing("QQ", ["x", "y"])
x, y = R.gens

straight = LocalOrientation(R, 2, [x, y])
swapped = LocalOrientation(R, 2, [y, x])

print("The origin, cut out by x and y in that order:")
print("   ", theta(straight).cycle)
print("The same ideal with the generators exchanged:")
print("   ", theta(swapped).cycle)

cmp = compare_orientations(straight, swapped)
print(f"\nThe transition matrix {cmp.matrix.to_strings()} has determinant {cmp.det},")
print("so the two forms differ by <-1>.  Their signatures (+1 and -1) tell them apart.")

# Unitriangular changes leave the class alone.
sheared = LocalOrientation(R, 2, [x + y ** 2, y])
print("\nShearing x -> x + y^2 keeps the class:", theta(sheared).cycle.equals(theta(straight).cycle))

# Two rational points on the line x = 0, with opposite local signs.
pair = LocalOrientation(R, 2, [x, y * (y - 1)])
print("\n(x, y(y-1)) picks up the slope of y(y-1) at each root:")
for p, gw, m in theta(pair).cycle.terms:
    print(f"    {p.label():28s} {gw}")

# A point whose residue field is QQ(sqrt 2).
print("\n(x, y^2 - 2) gives a single closed point of degree two:")
print("   ", theta(LocalOrientation(R, 2, [x, y ** 2 - 2])).cycle)
