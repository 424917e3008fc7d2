"""Moving the origin to (0, 1) along the line x = 0 does not change the class.

Two routes give the same answer: an explicit pair of boundaries, and the
elementary-matrix argument applied to the family (x, y - T).

Run:  python demos/moving_a_point.py
"""

from cwcycles import BoundaryDatum, CWCycle, GWClass, LocalOrientation, PolyRing, d1_boundary, \
    homotopy_check, verify_cycle_difference
from cwcycles.points import point_from_generators

R = PolyRing("QQ", ["x", "y"])
x, y = R.gens


def point_class(*gens):
    p = point_from_generators(R, list(gens))
    return CWCycle(R, 2, [(p, GWClass.of(p.field, [1]), 1)])


origin, shifted = point_class(x, y), point_class(x, y - 1)

# The boundary of <1>(<t> - <1>) on the line x = 0 sits at the zeros of t.
for t in (y, y - 1):
    print(f"d1 of <1> with t = {t}:  {d1_boundary(BoundaryDatum([x], [R.one], t))}")

witnesses = [(1, BoundaryDatum([x], [R.one], y)), (-1, BoundaryDatum([x], [R.one], y - 1))]
res = verify_cycle_difference(origin, shifted, witnesses)
print("\norigin - shifted equals the signed sum of both boundaries:", res.ok)

# With no witnesses, <1> and <-1> at the same point stay different.
p0 = point_from_generators(R, [x, y])
minus = CWCycle(R, 2, [(p0, GWClass.of(p0.field, [-1]), 1)])
print("<1> against <-1> at the origin, no witnesses:", verify_cycle_difference(origin, minus).ok)

# The same move as a homotopy.
RT = PolyRing("QQ", ["x", "y", "T"], homotopy="T")
xt, yt, T = RT.gens
report = homotopy_check(LocalOrientation(RT, 2, [xt, yt - T]))
for step in report.steps:
    print(f"\nT = {step.value}:  Delta = {step.delta.to_strings()}  (det {step.det})")
    for pt in step.pointwise:
        print(f"    psi = {pt['psi']}, psi0 = {pt['psi0']}, isometric: {pt['isometric']}")
print("\nhomotopy check passed:", report.ok)
