"""
Exhaustive search for four rational distances
=============================================

Scan every lattice point of every square with side up to 300, plus the
surrounding plane out to one side length in each direction, and keep the
primitive points with at least three integer vertex distances.
"""

from collections import Counter

from ratsquare import SquareInstance, search_square
from ratsquare.sweep import SweepConfig, sweep

rep = sweep(1, 300, SweepConfig(min_count=3))
print("points scanned:", rep.points_scanned)
print("three-distance points:", len(rep.hits3))
print("four-distance points: ", len(rep.hits4))

# which geometric positions do the three-distance points occupy?
tags = Counter(t.split("(")[0] for h in rep.hits3 for t in h.tags)
print(tags.most_common())

# the same question outside the square
wide = search_square(SquareInstance.extended(60, k=1), None, 3, symmetry=True)
inside = [h for h in wide.hits if 0 <= h.x <= 60 and 0 <= h.y <= 60]
print(f"z=60, region [-60, 120]^2: {len(wide.hits)} hits, {len(inside)} inside the square")
