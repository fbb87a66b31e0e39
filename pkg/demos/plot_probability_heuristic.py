"""
How rare are square sums?
=========================

Measure the fraction of pairs (u, v) in [1, M]^2 with u^2 + v^2 a perfect
square and fit its decay against M. Plots the rates when matplotlib is
available.
"""

from ratsquare.heuristic import density_estimate, square_hit_rate, tail_integral

for a0 in (1, 10, 100):
    print(f"tail from a0={a0}: {tail_integral(a0)}")

est = density_estimate(10)
for M, r in zip(est.magnitudes, est.rates):
    print(f"M={M:5d}  rate={r}  ~ {float(r):.3e}")
print(f"log-log slope: {est.fitted_exponent:.3f}")

sampled = square_hit_rate(1 << 10, "sampled", 100_000)
print("sampled at M=1024:", float(sampled), "exact:", float(square_hit_rate(1 << 10)))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots()
    ax.loglog(est.magnitudes, [float(r) for r in est.rates], "o-", label="measured")
    ax.loglog(est.magnitudes, [float(est.rates[0]) * est.magnitudes[0] / m for m in est.magnitudes],
              "--", label="1/M")
    ax.set_xlabel("M")
    ax.set_ylabel("hit rate")
    ax.legend()
    fig.savefig("hit_rate.png", dpi=100)
    print("wrote hit_rate.png")
