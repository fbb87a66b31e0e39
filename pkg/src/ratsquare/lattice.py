"""Lattice points of integer squares, classified by rational vertex distances.

A square of side ``z`` has vertices (0, 0), (0, z), (z, z), (z, 0). For a
lattice point (x, y) the four squared vertex distances are always listed in
that vertex order::

    x^2 + y^2,  x^2 + (z-y)^2,  (z-x)^2 + (z-y)^2,  (z-x)^2 + y^2

A distance is rational exactly when its square is a perfect square, since
the unit-square problem has been scaled up to integers.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field

import numpy as np

from .numeric import RangeError, gcd, is_perfect_square, square_mask
from .triples import primitive_triples

__all__ = [
    "TAG_NAMES",
    "SquareInstance",
    "PointProfile",
    "SearchReport",
    "BudgetError",
    "classify_point",
    "point_tags",
    "tag_matches",
    "search_square",
    "three_distance_family",
    "d4_images",
    "canonical_point",
    "DEFAULT_BUDGET",
]

TAG_NAMES = ("on_edge", "on_midline", "on_diagonal", "n_times_distance")

#: default cap on lattice points per square
DEFAULT_BUDGET = 50_000_000

_NTD = re.compile(r"^n_times_distance(?:\((\d+)\))?$")


class BudgetError(RangeError):
    """A scan would exceed the configured point budget."""


@dataclass(frozen=True)
class SquareInstance:
    """Square of side ``z`` plus the scanned region.

    ``region`` is (x_min, x_max, y_min, y_max) in units of ``z``; the default
    is the closed square itself.
    """

    z: int
    region: tuple[int, int, int, int] = (0, 1, 0, 1)

    def __post_init__(self):
        if self.z < 1:
            raise ValueError(f"side length must be >= 1, got {self.z}")
        x0, x1, y0, y1 = self.region
        if not all(isinstance(v, (int, np.integer)) for v in self.region):
            raise ValueError(f"region bounds must be integers: {self.region}")
        if x0 > x1 or y0 > y1:
            raise ValueError(f"empty region: {self.region}")

    @classmethod
    def extended(cls, z: int, k: int = 0) -> "SquareInstance":
        """Square of side z with the scan region grown to [-kz, (k+1)z]^2."""
        if k < 0:
            raise ValueError(f"region extension must be >= 0, got {k}")
        return cls(z, (-k, k + 1, -k, k + 1))

    @property
    def bounds(self) -> tuple[int, int, int, int]:
        """Region in absolute lattice coordinates."""
        return tuple(v * self.z for v in self.region)

    @property
    def n_points(self) -> int:
        x0, x1, y0, y1 = self.bounds
        return (x1 - x0 + 1) * (y1 - y0 + 1)

    @property
    def symmetric(self) -> bool:
        """True when the region is invariant under the square's symmetry group."""
        x0, x1, y0, y1 = self.region
        return x0 == y0 and x1 == y1 and x0 + x1 == 1


@dataclass(frozen=True)
class PointProfile:
    z: int
    x: int
    y: int
    sq_dists: tuple[int, int, int, int]
    roots: tuple[int | None, int | None, int | None, int | None]
    rational_count: int
    primitive: bool
    tags: tuple[str, ...] = ()

    def has_tag(self, tag: str | None) -> bool:
        return tag is None or any(tag_matches(tag, t) for t in self.tags)

    def to_record(self) -> dict:
        return {
            "z": self.z,
            "x": self.x,
            "y": self.y,
            "sq_dists": list(self.sq_dists),
            "roots": list(self.roots),
            "count": self.rational_count,
            "tags": list(self.tags),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "PointProfile":
        """Rebuild from a JSONL record, re-validating it with classify_point."""
        prof = classify_point(rec["z"], rec["x"], rec["y"])
        if prof.to_record() != rec:
            raise ValueError(f"record does not re-validate: {rec}")
        return prof


def point_tags(z: int, x: int, y: int) -> tuple[str, ...]:
    tags = []
    if x == 0 or y == 0 or x == z or y == z:
        tags.append("on_edge")
    if 2 * x == z or 2 * y == z:
        tags.append("on_midline")
    if x == y or x + y == z:
        tags.append("on_diagonal")
    ns = set()
    for d in (abs(x), abs(y), abs(z - x), abs(z - y)):
        if d and z % d == 0 and z // d >= 2:
            ns.add(z // d)
    tags.extend(f"n_times_distance({n})" for n in sorted(ns))
    return tuple(tags)


def tag_matches(filter_tag: str, tag: str) -> bool:
    """``n_times_distance`` without an argument matches every n."""
    if filter_tag == tag:
        return True
    return filter_tag == "n_times_distance" and tag.startswith("n_times_distance(")


def _check_filter(filter_tag: str | None):
    if filter_tag is None or filter_tag in TAG_NAMES[:3]:
        return
    if not _NTD.match(filter_tag):
        raise ValueError(f"unknown filter tag {filter_tag!r}")


def classify_point(z: int, x: int, y: int) -> PointProfile:
    if z < 1:
        raise ValueError(f"side length must be >= 1, got {z}")
    u, w = z - x, z - y
    sq = (x * x + y * y, x * x + w * w, u * u + w * w, u * u + y * y)
    roots = tuple(is_perfect_square(v) for v in sq)
    count = sum(r is not None for r in roots)
    primitive = gcd(gcd(x, y), z) == 1
    return PointProfile(z, x, y, sq, roots, count, primitive, point_tags(z, x, y))


def d4_images(z: int, x: int, y: int) -> list[tuple[int, int]]:
    """Distinct images of (x, y) under the eight symmetries of the square."""
    pts = set()
    for a, b in ((x, y), (y, x)):
        for p in (a, z - a):
            for q in (b, z - b):
                pts.add((p, q))
    return sorted(pts)


def canonical_point(z: int, x: int, y: int) -> tuple[int, int]:
    """Representative of the symmetry orbit lying in 2x <= z, y <= x."""
    for p, q in d4_images(z, x, y):
        if 2 * p <= z and q <= p:
            return p, q
    raise AssertionError("orbit has no point in the fundamental domain")


@dataclass
class SearchReport:
    z_range: tuple[int, int]
    filter: str | None
    min_count: int
    hits: list[PointProfile] = field(default_factory=list)
    points_scanned: int = 0
    elapsed: float = 0.0

    @property
    def hits3(self) -> list[PointProfile]:
        return [h for h in self.hits if h.rational_count == 3]

    @property
    def hits4(self) -> list[PointProfile]:
        return [h for h in self.hits if h.rational_count == 4]

    def summary(self) -> dict:
        return {
            "summary": "search",
            "z_range": list(self.z_range),
            "filter": self.filter,
            "min_count": self.min_count,
            "points_scanned": self.points_scanned,
            "hits": len(self.hits),
            "hits3": len(self.hits3),
            "hits4": len(self.hits4),
        }

    @classmethod
    def merge(cls, reports: list["SearchReport"]) -> "SearchReport":
        if not reports:
            raise ValueError("nothing to merge")
        lo = min(r.z_range[0] for r in reports)
        hi = max(r.z_range[1] for r in reports)
        hits = sorted(
            (h for r in reports for h in r.hits), key=lambda h: (h.z, h.x, h.y)
        )
        return cls(
            (lo, hi),
            reports[0].filter,
            reports[0].min_count,
            hits,
            sum(r.points_scanned for r in reports),
            sum(r.elapsed for r in reports),
        )


class _LegTable:
    """Boolean table ``T[u, v] = (u^2 + v^2 is a perfect square)``, grown on demand."""

    def __init__(self):
        self.table = np.zeros((0, 0), dtype=bool)

    def get(self, n: int) -> np.ndarray:
        if self.table.shape[0] <= n:
            size = max(n + 1, 2 * self.table.shape[0])
            u = np.arange(size, dtype=np.int64)
            t = np.empty((size, size), dtype=bool)
            for i in range(size):
                t[i] = square_mask(u[i] * u[i] + u * u)
            self.table = t
        return self.table


_LEGS = _LegTable()


def _scan_coords(inst: SquareInstance, symmetry: bool):
    """Coordinate vectors to scan, and a mask restricting to the scanned set."""
    x0, x1, y0, y1 = inst.bounds
    xs = np.arange(x0, x1 + 1, dtype=np.int64)
    ys = np.arange(y0, y1 + 1, dtype=np.int64)
    if not symmetry:
        return xs, ys, None
    xs = xs[2 * xs <= inst.z]
    keep = ys[None, :] <= xs[:, None]
    return xs, ys, keep


def _table_candidates(inst, filter_tag, min_count, symmetry):
    z = inst.z
    xs, ys, keep = _scan_coords(inst, symmetry)
    legmax = int(max(np.abs(xs).max(), np.abs(z - xs).max(), np.abs(ys).max(), np.abs(z - ys).max()))
    if 2 * legmax * legmax >= 1 << 62:
        raise RangeError(f"table engine limited to legs below 2**30.5, got {legmax}")
    table = _LEGS.get(legmax)
    a, b = np.abs(xs), np.abs(z - xs)
    c, d = np.abs(ys), np.abs(z - ys)
    count = (
        table[np.ix_(a, c)].astype(np.int8)
        + table[np.ix_(a, d)]
        + table[np.ix_(b, d)]
        + table[np.ix_(b, c)]
    )
    mask = count >= min_count
    if keep is not None:
        mask &= keep
    scanned = int(keep.sum()) if keep is not None else xs.size * ys.size
    ix, iy = np.nonzero(mask)
    X, Y = xs[ix], ys[iy]
    prim = np.gcd(np.gcd(X, Y), z) == 1
    return [(int(p), int(q)) for p, q in zip(X[prim], Y[prim])], scanned


def _direct_candidates(inst, filter_tag, min_count, symmetry):
    x0, x1, y0, y1 = inst.bounds
    z = inst.z
    out, scanned = [], 0
    for x in range(x0, x1 + 1):
        if symmetry and 2 * x > z:
            break
        for y in range(y0, y1 + 1):
            if symmetry and y > x:
                break
            scanned += 1
            prof = classify_point(z, x, y)
            if prof.rational_count >= min_count and prof.primitive:
                out.append((x, y))
    return out, scanned


def search_square(
    inst: SquareInstance,
    filter: str | None = None,
    min_count: int = 4,
    *,
    symmetry: bool = False,
    engine: str = "table",
    budget: int = DEFAULT_BUDGET,
) -> SearchReport:
    """Exhaustive scan of ``inst.region`` for primitive points with many rational distances.

    Every lattice point in the region is examined. With ``symmetry=True`` only
    the fundamental domain ``2x <= z, y <= x`` is scanned and each hit is
    expanded to its full orbit, so the hit list is the same as a full scan;
    ``points_scanned`` then counts only the points actually examined.

    ``engine="table"`` vectorizes the perfect-square tests through a table of
    leg pairs; ``engine="direct"`` calls :func:`classify_point` per point.
    Both produce identical reports.
    """
    if not 1 <= min_count <= 4:
        raise ValueError(f"min_count must be in 1..4, got {min_count}")
    _check_filter(filter)
    if symmetry and not inst.symmetric:
        raise ValueError(f"symmetry reduction needs a symmetric region, got {inst.region}")
    if inst.n_points > budget:
        raise BudgetError(
            f"square z={inst.z} region {inst.region} has {inst.n_points} points, "
            f"budget is {budget}"
        )
    t0 = time.perf_counter()
    if engine == "table":
        pts, scanned = _table_candidates(inst, filter, min_count, symmetry)
    elif engine == "direct":
        pts, scanned = _direct_candidates(inst, filter, min_count, symmetry)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    if symmetry:
        pts = {img for p in pts for img in d4_images(inst.z, *p)}
    hits = []
    for x, y in sorted(pts):
        prof = classify_point(inst.z, x, y)
        # re-validation of every candidate through the exact scalar path
        assert prof.rational_count >= min_count and prof.primitive, prof
        if prof.has_tag(filter):
            hits.append(prof)
    return SearchReport(
        (inst.z, inst.z), filter, min_count, hits, scanned, time.perf_counter() - t0
    )


def three_distance_family(max_hyp: int) -> list[tuple[SquareInstance, PointProfile]]:
    """Points with three rational vertex distances built from right triangles.

    For a primitive triple with legs u < v, the point (u, 0) in the square of
    side v sees the vertices at distances u, hyp, v - u and sqrt((v-u)^2 + v^2).
    """
    out = []
    for tr in primitive_triples(max_hyp):
        u, v = tr.legs
        prof = classify_point(v, u, 0)
        if prof.rational_count < 3:
            raise AssertionError(f"construction failed for {tr}: {prof}")
        out.append((SquareInstance(v), prof))
    return out
