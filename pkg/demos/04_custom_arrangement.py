"""
A user-supplied arrangement
===========================

Anything not covered by a built-in generator goes through the JSON path,
for instance Kim's X_D[n] or the graph configuration spaces X^Gamma.  The
file lists the subvarieties with their isomorphism types and pairwise
intersections.

data/surface_with_curve.json describes two points on a surface S with a
curve D on it: the diagonal, D x D, and their intersection (the diagonal of
D).  The last one must be blown up first, otherwise the other two meet
non-transversally.
"""

import json
from pathlib import Path

from wonderful import is_building_set, wonderful
from wonderful.certify import certify_trace, certify_wonderful, explain
from wonderful.cli import Assumption, apply_assumptions
from wonderful.schema import building_set_from_json
from wonderful.space import TRUE

doc = json.loads((Path(__file__).parent / "data" / "surface_with_curve.json").read_text(encoding="utf-8"))
bs = building_set_from_json(doc)

report = is_building_set(bs.arrangement, bs.members)
print("valid:", report.valid)

# Dropping the small diagonal breaks the building-set condition.
partial = is_building_set(bs.arrangement, {"Delta", "DxD"})
for v in partial.violations:
    print("  without DeltaD:", v.element, v.check, "-", v.detail)

trace = wonderful(bs.ambient, bs)
print("order:", trace.order)
cert = certify_wonderful(trace)
print(explain(cert))

# The surface is asserted ordinary but D is not: supply the missing fact.
fixed = apply_assumptions(bs, [Assumption("D", "ordinary", TRUE)])
trace = wonderful(fixed.ambient, fixed)
print("with D ordinary:", certify_wonderful(trace).verdict, certify_trace(trace).verdict)
