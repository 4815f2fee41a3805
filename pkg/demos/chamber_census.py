"""
Walking the chambers of the movable cone
========================================

Start from the nef cone of F, cross flop walls one at a time, and sort the
chambers we meet into classes under the birational isometries.
"""

from scrollfano import carve_chamber, census, cross_wall, load_scenario

sc = load_scenario("syz")
L = sc.lattice
print("Gram matrix:", L.gram)

# the nef cone: four flop walls, rays on the slice g = 1
nef = carve_chamber(L, L.ample)
for w, side in nef.walls:
    print(f"  wall {w.vector} ({w.kind.value}), ample side {side:+d}")
print("rays:", nef.rays)

# one step across (1, -2, 0)
F1 = cross_wall(L, nef, (1, -2, 0))
print("F1 walls:", F1.wall_vectors())

# the full census
graph = census(sc)
print(f"{graph.class_count} classes from {len(graph.nodes)} chambers")
for cls in graph.classes:
    print(f"  {cls.label:4s} {len(cls.members)} chambers  names {cls.names}")

###############################################################################
# The same walk for the other two lattices.

for name in ("c12", "nonsyz"):
    g = census(load_scenario(name))
    print(name, g.class_count, sorted(g.labels()))
