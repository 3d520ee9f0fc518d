"""
Two constructions of M_{0,n}
============================

Kapranov blows up P^(n-3) along the points p_1..p_(n-1) and the spans
between them.  Keel instead blows up M_{0,n} x P^1 along boundary sections,
one batch of disjoint centers at a time.  The two towers look nothing alike,
but they have to land on the same space.
"""

from wonderful import kapranov_m0n, keel_tower, wonderful
from wonderful.betti import poincare
from wonderful.certify import certify_space, certify_wonderful

for n in (5, 6):
    ambient, bs = kapranov_m0n(n)
    trace = wonderful(ambient, bs)
    tower = keel_tower(n - 1)
    print(f"M_0,{n}")
    print("  Kapranov members:", " ".join(trace.order))
    print("  Keel stages:", [(s.label, len(s.centers)) for s in tower.steps])
    print("  Kapranov:", poincare(trace.final_space))
    print("  Keel:    ", poincare(tower.space()))
    print("  ordinary:", certify_wonderful(trace).verdict, certify_space(tower.space()).verdict)

# Keel's route keeps going past the range where Kapranov's span lattice is
# simple (n <= 6); M_0,7 comes out of the tower over M_0,6.
m07 = keel_tower(6)
print("M_0,7:", poincare(m07.space()), " centers:", m07.center_count())
