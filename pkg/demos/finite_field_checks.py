"""
Checking a worked example over F_29
===================================

Scan P^5(F_29) for the points of two cubic scrolls, confirm they lie on the
cubic fourfold, and look at the tangent spaces where they meet. Everything
here is about rational points only.
"""

import time

from scrollfano.fqgeom import jacobian_rank_at, load_example, projective_scan, scroll_equations

ex = load_example("syz")
print("cubic with", len(ex.cubic.terms), "terms over F_%d" % ex.prime)

for k, S in ex.scrolls.items():
    t0 = time.perf_counter()
    pts = projective_scan(scroll_equations(S))
    on_cubic = sum(ex.cubic(x) == 0 for x in pts)
    print(f"{k}: {len(pts)} points, {on_cubic} on the cubic ({time.perf_counter() - t0:.1f}s)")

eqs = scroll_equations(ex.scrolls["T1"]) + scroll_equations(ex.scrolls["T2"])
for x in projective_scan(eqs):
    print("meeting point", x, "stacked Jacobian rank", jacobian_rank_at(eqs, x))
