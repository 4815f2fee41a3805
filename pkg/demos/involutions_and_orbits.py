"""
Involutions, orbits and relations
=================================

Recover the covering involutions from their fixed classes, reduce wall
vectors to orbit representatives, and look for short relations.
"""

from scrollfano import find_relations, load_scenario, orbit_count, orbit_reduce, solve_involution

sc = load_scenario("syz")
L = sc.lattice

for name, f in sc.fixed_vectors.items():
    M = solve_involution(L, sc.bir_config, f).matrix
    print(f"{name:7s} fixes {f}:  {M}")

T = sc.involutions
r = orbit_reduce(T, (11, 10, -12))
print("reduce (11, 10, -12) ->", r.representative, "via", r.word)

for kind in ("flop", "pex"):
    rep = orbit_count(T, kind, 30, movable_only=True)
    print(f"{kind}: {rep.count} orbits among {rep.total} walls meeting Mov")
    for v, n in rep.orbits.items():
        print(f"   {v}: {n}")

###############################################################################
# No short relations in the syzygetic case, one hexagon in the other.

print("syz relators up to 10:", find_relations(T, 10))
ns = load_scenario("nonsyz")
print("nonsyz relators up to 6:", find_relations(ns.involutions, 6))
