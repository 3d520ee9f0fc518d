"""
Fulton-MacPherson configuration spaces
======================================

X[n] is the wonderful compactification of X^n along the diagonals.  Here we
build it for a few bases, look at the tower stage by stage and ask whether
the result is ordinary.
"""

from wonderful import atom, fm_building_set, projective_space, wonderful
from wonderful.betti import poincare
from wonderful.certify import blocking_leaves, certify_trace, certify_wonderful, explain
from wonderful.space import render

# Two points of the plane: one blowup, along the diagonal.
p2 = projective_space(2)
ambient, bs = fm_building_set(p2, 2)
trace = wonderful(ambient, bs)
print(render(trace.final_space))
print("Poincare polynomial:", poincare(trace.final_space))

# Three points: the small diagonal first, then the three big ones.
ambient, bs = fm_building_set(p2, 3)
trace = wonderful(ambient, bs)
print("blowup order:", trace.order)
for stage in trace.steps:
    cases = sorted(f"{k}:{e.case}" for k, e in stage.elements.items())
    print(f"  after {stage.center}:", ", ".join(cases))
print("X[3] for X = P2:", poincare(trace.final_space))

# The verdict can be read off the building set or replayed through the tower.
# Both routes agree.
print("theorem:", certify_wonderful(trace).verdict, " tower:", certify_trace(trace).verdict)

# With a base whose ordinarity nobody has asserted, the answer is unknown and
# the certificate names exactly which facts are missing.
x = atom("E", 1)
trace = wonderful(*fm_building_set(x, 3))
cert = certify_wonderful(trace)
print(cert.verdict, sorted(blocking_leaves(cert)))

# Once E is declared ordinary, Hodge-Witt follows and so does everything else.
e_ord = atom("E", 1, ordinary=True)
cert = certify_wonderful(wonderful(*fm_building_set(e_ord, 3)))
print(explain(cert, max_depth=2))
