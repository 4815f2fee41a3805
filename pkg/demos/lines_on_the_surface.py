"""
Planes from the 27 lines
========================

Each scroll cuts a twisted cubic on the cubic surface. The lines split into
bisecants of the cubic, bisecants of its residual, and the rest; counting
common lines between two such splittings gives the plane table.
"""

from scrollfano.cubicsurface import component_classes, intersection_table, line_classes, twisted_cubic_pair

lines = line_classes()
print(len(lines), "lines:", " ".join(l.name for l in lines))

for name in ("syz", "nonsyz"):
    g1, g1d, g2, g2d = twisted_cubic_pair(name)
    print(f"\n{name}: gamma1 = {g1}, gamma2 = {g2}, gamma1.gamma2 = {g1.dot(g2)}")
    A = component_classes(g1, g1d)
    print("  sizes", A.sizes(), " bisecants of gamma1:", A.P)
    for row in intersection_table(name):
        print("  ", row)
