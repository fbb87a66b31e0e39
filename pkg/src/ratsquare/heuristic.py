"""Probability heuristic: tail integral of the hit density and measured square hit rates."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .numeric import RangeError, square_mask

__all__ = [
    "DEFAULT_SEED",
    "EXHAUSTIVE_LIMIT",
    "DensityEstimate",
    "tail_integral",
    "square_hit_rate",
    "square_hit_pairs",
    "fit_exponent",
    "density_estimate",
]

DEFAULT_SEED = 20260101
EXHAUSTIVE_LIMIT = 1 << 12


@dataclass
class DensityEstimate:
    a0: int
    tail: Fraction
    magnitudes: list[int] = field(default_factory=list)
    rates: list[Fraction] = field(default_factory=list)
    fitted_exponent: float | None = None

    def to_record(self) -> dict:
        return {
            "a0": self.a0,
            "tail": f"{self.tail.numerator}/{self.tail.denominator}",
            "magnitudes": list(self.magnitudes),
            "rates": [f"{r.numerator}/{r.denominator}" for r in self.rates],
            "slope": self.fitted_exponent,
        }


def tail_integral(a0: int) -> Fraction:
    """Exact value of the integral of a^3 * a^-8 from a0 to infinity."""
    if a0 < 1:
        raise ValueError(f"a0 must be >= 1, got {a0}")
    return Fraction(1, 4 * a0**4)


def _row_hits(M: int, rows: np.ndarray) -> np.ndarray:
    v = np.arange(1, M + 1, dtype=np.int64)
    return np.array([int(square_mask(u * u + v * v).sum()) for u in rows], dtype=np.int64)


def square_hit_pairs(M: int) -> list[tuple[int, int]]:
    """Pairs 1 <= u, v <= M with u^2 + v^2 a perfect square."""
    v = np.arange(1, M + 1, dtype=np.int64)
    out = []
    for u in range(1, M + 1):
        hits = v[square_mask(u * u + v * v)]
        out.extend((u, int(w)) for w in hits)
    return out


def square_hit_rate(
    M: int,
    mode: str = "exhaustive",
    trials: int = 100_000,
    seed: int = DEFAULT_SEED,
    *,
    return_counts: bool = False,
):
    """Fraction of pairs (u, v) in [1, M]^2 whose sum of squares is a square.

    ``mode="sampled"`` draws ``trials`` pairs from a seeded generator.
    With ``return_counts`` the result is ``(rate, hits, trials)``.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    if mode == "exhaustive":
        if M > EXHAUSTIVE_LIMIT:
            raise RangeError(
                f"exhaustive mode enumerates M^2 = {M * M} pairs; limit is M <= {EXHAUSTIVE_LIMIT}"
            )
        hits = int(_row_hits(M, np.arange(1, M + 1, dtype=np.int64)).sum())
        n = M * M
    elif mode == "sampled":
        if trials < 1:
            raise ValueError(f"trials must be >= 1, got {trials}")
        if 2 * M * M >= 1 << 62:
            raise RangeError(f"sampled mode needs 2 M^2 < 2**62, got M={M}")
        rng = np.random.default_rng(seed)
        uv = rng.integers(1, M, size=(2, trials), endpoint=True, dtype=np.int64)
        hits = int(square_mask(uv[0] * uv[0] + uv[1] * uv[1]).sum())
        n = trials
    else:
        raise ValueError(f"unknown mode {mode!r}")
    rate = Fraction(hits, n)
    return (rate, hits, n) if return_counts else rate


def fit_exponent(magnitudes, rates) -> float:
    """Least-squares slope of log(rate) against log(M).

    Points with a zero rate are dropped with a warning.
    """
    if len(magnitudes) != len(rates):
        raise ValueError("magnitudes and rates differ in length")
    if len(magnitudes) < 3:
        raise ValueError("need at least three points")
    keep = [i for i, r in enumerate(rates) if r > 0]
    dropped = [magnitudes[i] for i in range(len(rates)) if i not in keep]
    if dropped:
        warnings.warn(f"zero hit rate at M = {dropped}; points excluded from fit")
    if len(keep) < 2:
        raise ValueError("fewer than two nonzero rates")
    x = np.log([float(magnitudes[i]) for i in keep])
    y = np.log([float(rates[i]) for i in keep])
    return float(np.polyfit(x, y, 1)[0])


def density_estimate(
    a0: int,
    magnitudes=(1 << 8, 1 << 9, 1 << 10, 1 << 11, 1 << 12),
    mode: str = "exhaustive",
    trials: int = 100_000,
    seed: int = DEFAULT_SEED,
) -> DensityEstimate:
    rates = [square_hit_rate(M, mode, trials, seed) for M in magnitudes]
    slope = fit_exponent(list(magnitudes), rates) if len(magnitudes) >= 3 else None
    return DensityEstimate(a0, tail_integral(a0), list(magnitudes), rates, slope)
