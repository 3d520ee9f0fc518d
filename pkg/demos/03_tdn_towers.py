"""
Chen-Gibney-Krashen spaces T_{d,n}
==================================

T_{d,n} parametrizes n points of affine d-space up to translation and
scaling.  Each T_{d,n} is built from T_{d,n-1} by a projective bundle and a
sequence of blowups.  We compare that tower with the same space obtained
directly as a wonderful compactification of projective space along the
polydiagonals.
"""

from wonderful import affine_polydiagonal_building_set, tdn_tower, wonderful
from wonderful.betti import poincare
from wonderful.certify import certify_space

for d in (1, 2, 3):
    for n in (2, 3, 4, 5):
        tower = tdn_tower(d, n)
        line = f"T_{d},{n}: dim {tower.space().dim:2d}  {poincare(tower.space())}"
        if n >= 3:
            ambient, bs = affine_polydiagonal_building_set(d, n)
            direct = poincare(wonderful(ambient, bs).final_space)
            line += "  (matches direct route)" if direct == poincare(tower.space()) else "  MISMATCH"
        print(line)

print("T_2,4 ordinary:", certify_space(tdn_tower(2, 4).space()).verdict)
