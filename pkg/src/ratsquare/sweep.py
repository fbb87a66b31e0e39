"""Multi-square sweeps with a resumable JSONL checkpoint.

Checkpoint layout, one JSON object per line::

    {"config": "<canonical>", "version": "<semver>"}
    {"z_done": 1, "hits": [...], "scanned": 4}
    ...
    {"complete": true}
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, asdict
from pathlib import Path

from . import __version__
from .lattice import DEFAULT_BUDGET, PointProfile, SearchReport, SquareInstance, search_square

__all__ = ["SweepConfig", "CheckpointError", "Checkpoint", "sweep"]

log = logging.getLogger(__name__)


class CheckpointError(RuntimeError):
    """Checkpoint cannot be resumed from."""


@dataclass(frozen=True)
class SweepConfig:
    min_count: int = 4
    filter: str | None = None
    region_extension: int = 0
    symmetry: bool = False
    engine: str = "table"
    budget: int = DEFAULT_BUDGET

    def canonical(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))


def _search_one(z: int, cfg: SweepConfig) -> SearchReport:
    inst = SquareInstance.extended(z, cfg.region_extension)
    return search_square(
        inst, cfg.filter, cfg.min_count,
        symmetry=cfg.symmetry, engine=cfg.engine, budget=cfg.budget,
    )


class Checkpoint:
    """Append-only checkpoint writer/reader. One writer per file."""

    def __init__(self, path: str | os.PathLike, canonical: str):
        self.path = Path(path)
        self.canonical = canonical
        self.done: dict[int, tuple[list[dict], int]] = {}
        self.complete = False
        self._fh = None

    def load(self) -> None:
        """Read existing progress; a truncated final line is dropped."""
        if not self.path.exists() or self.path.stat().st_size == 0:
            if self.path.exists():
                log.warning("checkpoint %s is empty; starting from scratch", self.path)
            self._start_fresh()
            return
        raw = self.path.read_bytes()
        lines = raw.split(b"\n")
        # a final line without a newline was cut off mid-write
        tail_cut = not raw.endswith(b"\n")
        keep_bytes = 0
        for i, line in enumerate(lines):
            last = i == len(lines) - 1
            if last and not line:
                break
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                if last and tail_cut:
                    log.warning("dropping truncated checkpoint line at byte %d", keep_bytes)
                    break
                raise CheckpointError(
                    f"corrupt checkpoint {self.path}: line {i + 1} at byte offset {keep_bytes}"
                ) from None
            if last and tail_cut:
                # parsed but unterminated; treat as incomplete write
                log.warning("dropping unterminated checkpoint line at byte %d", keep_bytes)
                break
            self._apply(i, rec, keep_bytes)
            keep_bytes += len(line) + 1
        if keep_bytes < len(raw):
            with open(self.path, "r+b") as fh:
                fh.truncate(keep_bytes)
        if keep_bytes == 0:
            self._start_fresh()
            return
        self._fh = open(self.path, "a", encoding="utf-8")

    def _apply(self, i: int, rec: dict, offset: int) -> None:
        if i == 0:
            if rec.get("config") != self.canonical:
                raise CheckpointError(
                    "checkpoint was written with a different configuration\n"
                    f"  checkpoint: {rec.get('config')}\n  requested:  {self.canonical}"
                )
            if rec.get("version") != __version__:
                raise CheckpointError(
                    f"checkpoint version {rec.get('version')} != {__version__}"
                )
            return
        if rec.get("complete") is True:
            self.complete = True
        elif "z_done" in rec:
            self.done[rec["z_done"]] = (rec["hits"], rec["scanned"])
        else:
            raise CheckpointError(f"unknown checkpoint record at byte offset {offset}: {rec}")

    def _start_fresh(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "w", encoding="utf-8")
        self._write({"config": self.canonical, "version": __version__})

    def _write(self, rec: dict) -> None:
        self._fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def record(self, z: int, report: SearchReport) -> None:
        hits = [h.to_record() for h in report.hits]
        self.done[z] = (hits, report.points_scanned)
        self._write({"z_done": z, "hits": hits, "scanned": report.points_scanned})

    def finish(self) -> None:
        if not self.complete:
            self._write({"complete": True})
            self.complete = True

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None


def sweep(
    z_lo: int,
    z_hi: int,
    config: SweepConfig = SweepConfig(),
    *,
    workers: int = 1,
    checkpoint: str | os.PathLike | None = None,
    canonical: str | None = None,
    stop_after: int | None = None,
) -> SearchReport:
    """Search every square with side in [z_lo, z_hi] and merge the reports.

    With ``checkpoint`` set, progress is written after each completed side
    and a later call with the same configuration resumes from it.
    ``stop_after`` ends the run early after that many new squares, leaving an
    incomplete checkpoint (used to exercise resumption).
    """
    if not 1 <= z_lo <= z_hi:
        raise ValueError(f"need 1 <= z_lo <= z_hi, got {z_lo}..{z_hi}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    canonical = canonical or f"sweep:{z_lo}..{z_hi}:{config.canonical()}"
    ck = None
    if checkpoint is not None:
        ck = Checkpoint(checkpoint, canonical)
        ck.load()
    reports: dict[int, SearchReport] = {}
    try:
        if ck is not None:
            for z, (hits, scanned) in ck.done.items():
                profs = [PointProfile.from_record(h) for h in hits]
                reports[z] = SearchReport((z, z), config.filter, config.min_count, profs, scanned)
        todo = [z for z in range(z_lo, z_hi + 1) if z not in reports]
        if stop_after is not None:
            todo = todo[:stop_after]
        for z, rep in _run(todo, config, workers):
            reports[z] = rep
            if ck is not None:
                ck.record(z, rep)
        finished = all(z in reports for z in range(z_lo, z_hi + 1))
        if ck is not None and finished:
            ck.finish()
    finally:
        if ck is not None:
            ck.close()
    if not reports:
        return SearchReport((z_lo, z_hi), config.filter, config.min_count)
    merged = SearchReport.merge([reports[z] for z in sorted(reports)])
    merged.z_range = (z_lo, z_hi)
    return merged


def _run(zs: list[int], config: SweepConfig, workers: int):
    if workers == 1 or len(zs) < 2:
        for z in zs:
            yield z, _search_one(z, config)
        return
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(workers) as ex:
        # map preserves order, so checkpoint records stay sorted by z
        yield from zip(zs, ex.map(_search_one, zs, [config] * len(zs), chunksize=8))
