"""Pythagorean triples from their (s, t) generators."""

from __future__ import annotations

from dataclasses import dataclass

from .numeric import gcd, isqrt

__all__ = ["PythTriple", "triple_from_params", "primitive_triples"]


@dataclass(frozen=True)
class PythTriple:
    """Triple ``(2st, s^2 - t^2, s^2 + t^2)`` with legs kept by parity, not size."""

    s: int
    t: int
    even_leg: int
    odd_leg: int
    hyp: int
    primitive: bool

    @property
    def legs(self) -> tuple[int, int]:
        """Legs as (shorter, longer)."""
        return tuple(sorted((self.even_leg, self.odd_leg)))

    def check(self) -> bool:
        p, q, r = self.even_leg, self.odd_leg, self.hyp
        return p * p + q * q == r * r


def triple_from_params(s: int, t: int) -> PythTriple:
    if t < 1 or s <= t:
        raise ValueError(f"need s > t >= 1, got s={s}, t={t}")
    primitive = gcd(s, t) == 1 and (s - t) % 2 == 1
    return PythTriple(s, t, 2 * s * t, s * s - t * t, s * s + t * t, primitive)


def primitive_triples(max_hyp: int) -> list[PythTriple]:
    """All primitive triples with hypotenuse <= max_hyp, sorted by (hyp, odd_leg)."""
    out = []
    # s^2 + t^2 <= max_hyp with t >= 1
    for s in range(2, isqrt(max(max_hyp - 1, 0)) + 1):
        for t in range(1 + s % 2, s, 2):
            if s * s + t * t > max_hyp:
                break
            if gcd(s, t) == 1:
                out.append(triple_from_params(s, t))
    out.sort(key=lambda tr: (tr.hyp, tr.odd_leg))
    return out
