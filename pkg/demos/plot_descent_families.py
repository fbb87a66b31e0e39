"""
The quartic family (a^2+b^2)^2 + (c ab)^2 = e^2
================================================

For c = 1 and c = 2 no small solution exists. The multiplier condition
"n and n^2+4 both prime" does not rule solutions out, though: c = 5 has one
at (3, 4).
"""

from ratsquare.descent import (
    descend_ratio,
    descent_step,
    forced_k_probe,
    multiplier_primes,
    search_equation,
)

pairs = [p.n for p in multiplier_primes(20)]
print("multipliers n <= 20 with n^2+4 prime:", pairs)

for c in [1, 2, *pairs]:
    sols = search_equation(c, 400)
    print(f"E_{c}: {[(s.a, s.b, s.e) for s in sols] or 'no solutions'}")

# push the smallest E_5 solution through the descent
res = descent_step(5, search_equation(5, 10)[0])
print("descent on (3, 4, 65):", res.step, "-", res.detail)
print("   ", res.data)

# which values of k actually occur for n = 5?
probe = forced_k_probe("theorem3", 5, 200)
print("realized k:", probe.realized, "expected:", probe.expected)
for k, a, b, c, d in probe.tuples:
    print(f"   k={k:2d}  a={a} b={b} c={c} d={d}")

# the k = 29 tuple descends to (4, 3)
print("descend_ratio(12, 25, 65, 7) ->", descend_ratio("theorem3", 5, 12, 25, 65, 7))
