"""
Points with three rational distances
====================================

Take any right triangle with integer sides, put the short leg along the bottom
edge of a square whose side is the long leg, and the far end of the short leg
sees three of the four vertices at integer distance.
"""

from ratsquare import classify_point, primitive_triples, three_distance_family

# the smallest case: legs 3 and 4
p = classify_point(4, 3, 0)
print("z=4, point (3, 0)")
print("  squared distances:", p.sq_dists)
print("  integer roots:    ", p.roots)       # None marks the irrational one
print("  rational count:   ", p.rational_count, p.tags)

# every primitive triple up to hypotenuse 100 gives one such point
for inst, prof in three_distance_family(100):
    missing = [d for d, r in zip(prof.sq_dists, prof.roots) if r is None]
    print(f"  z={inst.z:3d} ({prof.x:2d}, 0)  roots={prof.roots}  irrational: sqrt({missing[0]})")

print(len(primitive_triples(1000)), "primitive triples with hypotenuse <= 1000")
