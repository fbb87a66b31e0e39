"""The quartic family E_c: (a^2 + b^2)^2 + (c*a*b)^2 = e^2 and its descent machinery.

``c = 1`` is the edge case, ``c = 2`` the midline case and ``c = n`` the case
where the side is n times the distance to a side (n and n^2 + 4 prime).

The descent is executed step by step against the written argument. When a
step's claimed shape does not hold for a concrete input, a
:class:`StructureViolation` naming that step is returned instead of a repair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from .numeric import RangeError, gcd, is_perfect_square, is_prime

__all__ = [
    "LHS_LIMIT",
    "Mode",
    "EquationInstance",
    "MultiplierPair",
    "FactorSplit",
    "StructureViolation",
    "ForcedKProbe",
    "equation_residual",
    "search_equation",
    "pythagorean_identity",
    "ratio_identities",
    "ratio_identities_squared",
    "forced_k_probe",
    "ratio_form",
    "ascend",
    "factor_split",
    "descend_ratio",
    "descent_step",
    "mode_for_multiplier",
    "multiplier_primes",
]

#: equation_residual refuses left-hand sides at or above this bound
LHS_LIMIT = 1 << 128

Mode = Literal["theorem1", "theorem2", "theorem3"]


@dataclass(frozen=True)
class EquationInstance:
    c: int
    a: int
    b: int
    lhs: int
    e: int | None

    @property
    def solved(self) -> bool:
        return self.e is not None

    @property
    def nontrivial(self) -> bool:
        return self.a >= 1 and self.b >= 1 and gcd(self.a, self.b) == 1

    def check(self) -> bool:
        a, b, c = self.a, self.b, self.c
        ok = self.lhs == (a * a + b * b) ** 2 + (c * a * b) ** 2
        return ok and (self.e is None or self.e * self.e == self.lhs)

    def to_record(self) -> dict:
        return {"family": self.c, "a": self.a, "b": self.b, "e": self.e}


@dataclass(frozen=True)
class MultiplierPair:
    n: int
    partner: int


@dataclass(frozen=True)
class FactorSplit:
    """``a = 2^k a1 a2``, ``b = b1 b2``, with a1, b1 the parts living in ``low``."""

    k: int
    a1: int
    a2: int
    b1: int
    b2: int
    low: int
    high: int


@dataclass(frozen=True)
class StructureViolation:
    step: str
    detail: str
    data: dict = field(default_factory=dict)


def equation_residual(c: int, a: int, b: int) -> EquationInstance:
    if c < 1:
        raise ValueError(f"multiplier must be >= 1, got {c}")
    lhs = (a * a + b * b) ** 2 + (c * a * b) ** 2
    if lhs >= LHS_LIMIT:
        raise RangeError(f"lhs of E_{c}({a}, {b}) exceeds 2**128")
    return EquationInstance(c, a, b, lhs, is_perfect_square(lhs))


def _solutions_in_rows(c: int, rows: range, bound: int) -> list[tuple[int, int, int]]:
    out = []
    cc = c * c
    for a in rows:
        aa = a * a
        for b in range(a, bound + 1):
            if gcd(a, b) != 1:
                continue
            bb = b * b
            s = aa + bb
            e = is_perfect_square(s * s + cc * aa * bb)
            if e is not None:
                out.append((a, b, e))
    return out


def search_equation(c: int, bound: int, workers: int = 1) -> list[EquationInstance]:
    """All solutions of E_c with coprime ``1 <= a, b <= bound``, sorted by (a, b).

    E_c is symmetric in a and b; each solution is listed in both orders.
    """
    if c < 1 or bound < 1:
        raise ValueError(f"need c >= 1 and bound >= 1, got c={c}, bound={bound}")
    equation_residual(c, bound, bound)  # range check at the corner
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        rows = [range(i, bound + 1, workers) for i in range(1, workers + 1)]
        with ProcessPoolExecutor(workers) as ex:
            parts = ex.map(_solutions_in_rows, [c] * workers, rows, [bound] * workers)
            found = [s for part in parts for s in part]
    else:
        found = _solutions_in_rows(c, range(1, bound + 1), bound)
    pairs = {(a, b) for a, b, _ in found} | {(b, a) for a, b, _ in found}
    return [equation_residual(c, a, b) for a, b in sorted(pairs)]


def pythagorean_identity(u: int, v: int) -> bool:
    return (u * u - v * v) ** 2 + (2 * u * v) ** 2 == (u * u + v * v) ** 2


def ratio_identities_squared(n: int, k: int, a: int, b: int, c2: int, d2: int) -> bool:
    """Same as :func:`ratio_identities` with c^2 and d^2 passed directly."""
    if k * a * a == c2 - d2 and k * b * b == 4 * c2 + n * n * d2:
        m = n * n + 4
        return m * c2 == k * (n * n * a * a + b * b) and m * d2 == k * (b * b - 4 * a * a)
    return True


def ratio_identities(n: int, k: int, a: int, b: int, c: int, d: int) -> bool:
    """Check that ``k a^2 = c^2 - d^2`` and ``k b^2 = 4c^2 + n^2 d^2`` imply
    ``(n^2+4) c^2 = k (n^2 a^2 + b^2)`` and ``(n^2+4) d^2 = k (b^2 - 4a^2)``.

    Vacuously true when the hypotheses fail.
    """
    return ratio_identities_squared(n, k, a, b, c * c, d * d)


def mode_for_multiplier(c: int) -> tuple[Mode, int]:
    if c == 1:
        return "theorem1", 1
    if c == 2:
        return "theorem2", 2
    return "theorem3", c


def ratio_form(mode: Mode, n: int, c: int, d: int) -> tuple[int, int]:
    """Numerator and denominator of the target value of b^2/a^2."""
    if mode == "theorem1":
        return 4 * c * c + d * d, c * c - d * d
    if mode == "theorem2":
        return c * c + d * d, c * c - d * d
    if mode == "theorem3":
        return 4 * c * c + n * n * d * d, c * c - d * d
    raise ValueError(f"unknown mode {mode!r}")


def _expected_k(mode: Mode, n: int) -> int:
    return {"theorem1": 5, "theorem2": 2}.get(mode, n * n + 4)


@dataclass
class ForcedKProbe:
    mode: Mode
    n: int
    bound: int
    tuples: list[tuple[int, int, int, int, int]]

    @property
    def expected(self) -> int:
        return _expected_k(self.mode, self.n)

    @property
    def realized(self) -> list[int]:
        return sorted({t[0] for t in self.tuples})

    @property
    def deviations(self) -> list[tuple[int, int, int, int, int]]:
        return [t for t in self.tuples if t[0] != self.expected]

    def to_record(self) -> dict:
        return {
            "probe": "forced_k",
            "mode": self.mode,
            "n": self.n,
            "bound": self.bound,
            "expected": self.expected,
            "realized": self.realized,
            "tuples": [list(t) for t in self.tuples],
            "deviations": [list(t) for t in self.deviations],
        }


def forced_k_probe(mode: Mode, n: int, bound: int) -> ForcedKProbe:
    """Every (k, a, b, c, d) with coprime pairs up to ``bound`` and
    ``b^2 (c^2 - d^2) = a^2 * numerator(c, d)``, where ``k = (c^2 - d^2)/a^2``.

    For coprime (a, b) the reduced fraction b^2/a^2 must equal the reduced
    ratio form, so (a, b) is read off from (c, d) instead of enumerated.
    """
    if mode == "theorem1" and n != 1 or mode == "theorem2" and n != 2:
        raise ValueError(f"{mode} fixes the multiplier; got n={n}")
    if n < 1 or bound < 1:
        raise ValueError(f"need n >= 1 and bound >= 1, got n={n}, bound={bound}")
    out = []
    for c in range(2, bound + 1):
        for d in range(1, c):
            if gcd(c, d) != 1:
                continue
            num, den = ratio_form(mode, n, c, d)
            g = gcd(num, den)
            b = is_perfect_square(num // g)
            a = is_perfect_square(den // g)
            if a is None or b is None or a > bound or b > bound:
                continue
            out.append((g, a, b, c, d))
    out.sort(key=lambda t: (t[1], t[2], t[3], t[4]))
    return ForcedKProbe(mode, n, bound, out)


def ascend(mode: Mode, m: int, n_param: int, c_mult: int | None = None):
    """Build (a, b, d) from generator (m, n_param) and the smaller E_c instance.

    Returns ``(a, b, d, wit, transfer)``; ``wit`` reports whether the second
    equation of the pair holds (it is an identity), ``transfer`` is
    E_c(m, n_param).
    """
    if not m > n_param >= 1:
        raise ValueError(f"need m > n >= 1, got m={m}, n={n_param}")
    mm, nn = m * m, n_param * n_param
    b, d = mm + nn, mm - nn
    if mode == "theorem1":
        c_mult = 1 if c_mult is None else c_mult
        a = m * n_param
        wit = d * d + 4 * a * a == b * b
    elif mode == "theorem2":
        c_mult = 2 if c_mult is None else c_mult
        a = 2 * m * n_param
        wit = d * d + a * a == b * b
    elif mode == "theorem3":
        if c_mult is None:
            raise ValueError("theorem3 needs the multiplier n")
        a = m * n_param
        wit = d * d + 4 * a * a == b * b
    else:
        raise ValueError(f"unknown mode {mode!r}")
    expected = {"theorem1": 1, "theorem2": 2}.get(mode)
    if expected is not None and c_mult != expected:
        raise ValueError(f"{mode} uses multiplier {expected}, got {c_mult}")
    return a, b, d, wit, equation_residual(c_mult, m, n_param)


def _v2(n: int) -> int:
    return (n & -n).bit_length() - 1


def _part_supported_on(n: int, m: int) -> int:
    """Largest divisor of n all of whose primes divide m."""
    part = 1
    g = gcd(n, m)
    while g > 1:
        n //= g
        part *= g
        g = gcd(n, g)
    return part


def factor_split(inst: EquationInstance) -> FactorSplit:
    """Split a, b by which factor of ``(e - a^2 - b^2)(e + a^2 + b^2)`` holds their odd primes.

    Expects a even.
    """
    a, b, e = inst.a, inst.b, inst.e
    s = a * a + b * b
    low, high = e - s, e + s
    k = _v2(a)
    a_odd = a >> k
    a1 = _part_supported_on(a_odd, low)
    b1 = _part_supported_on(b, low)
    return FactorSplit(k, a1, a_odd // a1, b1, b // b1, low, high)


def _require_solution(inst: EquationInstance):
    if not inst.check() or inst.e is None:
        raise ValueError(f"not a solution of E_{inst.c}: {inst}")
    if not inst.nontrivial:
        raise ValueError(f"trivial or non-coprime instance: {inst}")


def descend_ratio(mode: Mode, n: int, a: int, b: int, c: int, d: int, measure: int | None = None):
    """Second half of the descent, starting from ``b^2/a^2 = ratio_form(c, d)``.

    Checks the forced value of k, recovers the generator pair of (a, b, d)
    and returns the smaller instance E_n(m, m') with e' = c, or a violation.
    """
    num, den = ratio_form(mode, n, c, d)
    if b * b * den != a * a * num or den <= 0:
        return StructureViolation("ratio-form", "b^2/a^2 does not match the ratio form",
                                  {"a": a, "b": b, "c": c, "d": d})
    k, rem = divmod(den, a * a)
    expected = _expected_k(mode, n)
    if rem or k != expected:
        return StructureViolation(
            "forced-k", f"k = (c^2 - d^2)/a^2 is {den}/{a * a}, expected {expected}",
            {"a": a, "b": b, "c": c, "d": d, "k_num": den, "k_den": a * a},
        )
    m2, r1 = divmod(b + d, 2)
    n2, r2 = divmod(b - d, 2)
    m = is_perfect_square(m2) if not r1 else None
    mp = is_perfect_square(n2) if not r2 and n2 > 0 else None
    a_form = 2 * m * mp if mode == "theorem2" and m and mp else (m * mp if m and mp else None)
    if a_form != a:
        return StructureViolation(
            "ascent", "(a, b, d) is not produced by a generator pair",
            {"a": a, "b": b, "d": d, "m^2": (b + d) / 2, "n^2": (b - d) / 2},
        )
    smaller = equation_residual(n, m, mp)
    if smaller.e != c:
        return StructureViolation("ascent", "generator pair does not return to E_c",
                                  {"m": m, "n": mp, "lhs": smaller.lhs, "c": c})
    measure = max(a, b) if measure is None else measure
    if max(m, mp) >= measure:
        return StructureViolation("measure", "max(a, b) did not decrease",
                                  {"m": m, "n": mp, "measure": measure})
    return smaller


def descent_step(c: int, inst: EquationInstance):
    """One descent step from a nontrivial solution of E_c.

    Returns a strictly smaller solution, or a :class:`StructureViolation`
    for the first step of the argument whose claimed shape fails.
    """
    if inst.c != c:
        raise ValueError(f"instance belongs to E_{inst.c}, not E_{c}")
    _require_solution(inst)
    a, b, e = inst.a, inst.b, inst.e
    if a % 2 and b % 2 == 0:
        a, b = b, a
    if a % 2 or b % 2 == 0:
        return StructureViolation("parity", "need exactly one of a, b even", {"a": a, "b": b})
    inst = EquationInstance(c, a, b, inst.lhs, e)

    sp = factor_split(inst)
    low, high = sp.low, sp.high
    if low * high != (c * a * b) ** 2:
        return StructureViolation("split-product", "(e - a^2 - b^2)(e + a^2 + b^2) != (c a b)^2",
                                  {"low": low, "high": high})
    shared = gcd(gcd(low, high), (a >> sp.k) * b)
    if shared != 1:
        return StructureViolation("odd-factor-separation",
                                  "an odd factor of a or b divides both parts",
                                  {"shared": shared, "low": low, "high": high})
    # claimed: low = 2 a1^2 b1^2, high = 2^(2k-1) a2^2 b2^2, up to the multiplier's own factors
    low_core = 2 * sp.a1 ** 2 * sp.b1 ** 2
    high_core = (1 << (2 * sp.k - 1)) * sp.a2 ** 2 * sp.b2 ** 2
    g1, r1 = divmod(low, low_core)
    g2, r2 = divmod(high, high_core)
    if _v2(low) != 1 or r1 or r2 or g1 * g2 != c * c:
        return StructureViolation(
            "split-shape",
            "e - a^2 - b^2 = 2 a1^2 b1^2 and e + a^2 + b^2 = 2^(2k-1) a2^2 b2^2 do not hold",
            {"low": low, "high": high, "low_core": low_core, "high_core": high_core,
             "k": sp.k, "a1": sp.a1, "a2": sp.a2, "b1": sp.b1, "b2": sp.b2},
        )
    x, y = sp.a1 * sp.b1, (1 << (sp.k - 1)) * sp.a2 * sp.b2
    if a * a + b * b != x * x - y * y:
        return StructureViolation(
            "pythagorean-substitution",
            "a^2 + b^2 != (a1 b1)^2 - (2^(k-1) a2 b2)^2",
            {"a^2+b^2": a * a + b * b, "rhs": x * x - y * y},
        )
    mode, n = mode_for_multiplier(c)
    # renaming 2^(k-1) a2 -> a, a1 -> c, b1 -> b, b2 -> d
    return descend_ratio(mode, n, y // sp.b2, sp.b1, sp.a1, sp.b2, measure=max(a, b))


def multiplier_primes(limit: int) -> list[MultiplierPair]:
    """Primes n <= limit with n^2 + 4 also prime."""
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    if limit * limit + 4 >= 1 << 64:
        raise RangeError(f"limit^2 + 4 must stay below 2**64, got limit={limit}")
    return [
        MultiplierPair(n, n * n + 4)
        for n in range(2, limit + 1)
        if is_prime(n) and is_prime(n * n + 4)
    ]
