"""Exact integer primitives.

Everything here works on Python ints (arbitrary precision), so nothing can
wrap. The only place fixed-width integers appear is :func:`square_mask`, which
operates on int64 numpy arrays and refuses inputs it cannot handle exactly.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "RangeError",
    "PRIME_LIMIT",
    "isqrt",
    "is_perfect_square",
    "gcd",
    "is_even",
    "is_prime",
    "square_mask",
    "SQUARE_MASK_LIMIT",
]

#: is_prime is deterministic (and defined) only below this bound.
PRIME_LIMIT = 1 << 64

#: square_mask accepts int64 values strictly below this bound.
SQUARE_MASK_LIMIT = 1 << 62

# Deterministic Miller-Rabin bases for n < 3.3e24, which covers 2**64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class RangeError(ValueError):
    """An input lies outside the exact range an operation supports."""


def isqrt(n: int) -> int:
    """Largest ``r`` with ``r*r <= n``.

    >>> isqrt(10**18)
    1000000000
    """
    if n < 0:
        raise ValueError(f"isqrt of negative number: {n}")
    r = math.isqrt(n)
    # self-check; math.isqrt is exact but the contract is asserted anyway
    if not (r * r <= n < (r + 1) * (r + 1)):
        raise ArithmeticError(f"isqrt post-condition failed for {n}")
    return r


def is_perfect_square(n: int) -> int | None:
    """Return the nonnegative root of ``n`` if it is a perfect square, else None."""
    if n < 0:
        return None
    # quadratic residues mod 64 reject ~80% of inputs without a root extraction
    if (0xFDFDFDEDFDFCFDEC >> (n & 63)) & 1:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def is_even(n: int) -> bool:
    return n & 1 == 0


def is_prime(n: int) -> bool:
    """Deterministic primality for ``0 <= n < 2**64``."""
    if n < 0:
        raise ValueError(f"is_prime of negative number: {n}")
    if n >= PRIME_LIMIT:
        raise RangeError(f"is_prime is only defined below 2**64, got {n}")
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d & 1 == 0:
        d >>= 1
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def square_mask(values: np.ndarray) -> np.ndarray:
    """Elementwise perfect-square test for a nonnegative int64 array.

    The floating-point square root is only a starting estimate; it is
    corrected by integer comparisons so the result is exact for every value
    below ``SQUARE_MASK_LIMIT``.
    """
    v = np.asarray(values)
    if v.dtype != np.int64:
        v = v.astype(np.int64)
    if v.size == 0:
        return np.zeros(v.shape, dtype=bool)
    if v.min() < 0 or v.max() >= SQUARE_MASK_LIMIT:
        raise RangeError("square_mask needs 0 <= value < 2**62")
    r = np.sqrt(v.astype(np.float64)).astype(np.int64)
    # at most one step of correction either way for values below 2**62
    r -= (r * r > v).astype(np.int64)
    r += ((r + 1) * (r + 1) <= v).astype(np.int64)
    return r * r == v
