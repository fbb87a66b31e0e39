"""Command-line front end.

Every run writes a header record, the result records and a summary record.
Options fall back to environment variables when the flag is absent:

    --workers           RATSQUARE_WORKERS
    --output            RATSQUARE_OUTPUT
    --checkpoint        RATSQUARE_CHECKPOINT
    --seed              RATSQUARE_SEED
    --region-extension  RATSQUARE_REGION_EXTENSION

Exit codes: 0 clean, 2 usage, 3 range or operational error,
10 counterexample found, 130 interrupted.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, field

from . import __version__
from .descent import (
    StructureViolation,
    descent_step,
    forced_k_probe,
    multiplier_primes,
    search_equation,
)
from .heuristic import DEFAULT_SEED, density_estimate
from .lattice import TAG_NAMES, DEFAULT_BUDGET, three_distance_family, _check_filter
from .numeric import RangeError
from .records import validate_lines, write_records
from .sweep import CheckpointError, SweepConfig, sweep
from .triples import primitive_triples

__all__ = ["RunConfig", "run", "main", "EXIT_OK", "EXIT_USAGE", "EXIT_RANGE", "EXIT_COUNTEREXAMPLE"]

log = logging.getLogger("ratsquare")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RANGE = 3
EXIT_COUNTEREXAMPLE = 10
EXIT_INTERRUPTED = 130

SUBCOMMANDS = ("triples", "search", "three-distance", "descent", "forced-k", "primes", "heuristic")

ENV = {
    "workers": "RATSQUARE_WORKERS",
    "output": "RATSQUARE_OUTPUT",
    "checkpoint": "RATSQUARE_CHECKPOINT",
    "seed": "RATSQUARE_SEED",
    "region_extension": "RATSQUARE_REGION_EXTENSION",
}


@dataclass
class RunConfig:
    subcommand: str
    bounds: dict = field(default_factory=dict)
    filter: str | None = None
    region_extension: int = 0
    workers: int = 1
    checkpoint_path: str | None = None
    output_format: str = "jsonl"
    seed: int = DEFAULT_SEED

    def canonical(self) -> str:
        """Everything that can change the output; workers and checkpoint path cannot."""
        return json.dumps(
            {
                "subcommand": self.subcommand,
                "bounds": self.bounds,
                "filter": self.filter,
                "region_extension": self.region_extension,
                "output": self.output_format,
                "seed": self.seed,
            },
            sort_keys=True,
            separators=(",", ":"),
        )

    def validate(self) -> None:
        """Raise ValueError naming the offending flag."""
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        if self.workers < 1:
            raise ValueError("--workers must be >= 1")
        if self.region_extension < 0:
            raise ValueError("--region-extension must be >= 0")
        if self.output_format not in ("jsonl", "csv"):
            raise ValueError("--output must be jsonl or csv")
        b = self.bounds
        minimums = {
            "max_hyp": 1, "z_min": 1, "z_max": 1, "family": 1, "bound": 1,
            "n": 1, "limit": 2, "a0": 1, "trials": 1, "budget": 1,
        }
        for key, lo in minimums.items():
            if key in b and b[key] < lo:
                raise ValueError(f"--{key.replace('_', '-')} must be >= {lo}")
        if "z_min" in b and b["z_min"] > b["z_max"]:
            raise ValueError("--z-min must not exceed --z-max")
        if "min_count" in b and not 1 <= b["min_count"] <= 4:
            raise ValueError("--min-count must be in 1..4")
        if self.filter is not None:
            try:
                _check_filter(self.filter)
            except ValueError:
                raise ValueError(f"--filter {self.filter!r} is not a known tag") from None
        if "magnitudes" in b and (len(b["magnitudes"]) < 3 or min(b["magnitudes"]) < 10):
            raise ValueError("--magnitudes needs at least three values, each >= 10")


def _header(cfg: RunConfig) -> dict:
    return {"config": cfg.canonical(), "version": __version__}


def _run_search(cfg):
    b = cfg.bounds
    sc = SweepConfig(
        min_count=b["min_count"], filter=cfg.filter, region_extension=cfg.region_extension,
        symmetry=b["symmetry"], engine=b["engine"], budget=b["budget"],
    )
    rep = sweep(b["z_min"], b["z_max"], sc, workers=cfg.workers,
                checkpoint=cfg.checkpoint_path, canonical=cfg.canonical())
    recs = [h.to_record() for h in rep.hits]
    found = bool(rep.hits4)
    return recs, rep.summary(), found


def _run_descent(cfg):
    b = cfg.bounds
    c = b["family"]
    sols = search_equation(c, b["bound"], workers=cfg.workers)
    recs = []
    for inst in sols:
        recs.append(inst.to_record())
        res = descent_step(c, inst)
        rec = {"descent_of": [inst.a, inst.b, inst.e]}
        if isinstance(res, StructureViolation):
            rec |= {"result": "violation", "step": res.step, "detail": res.detail}
        else:
            rec |= {"result": "smaller", "a": res.a, "b": res.b, "e": res.e}
        recs.append(rec)
    if sols:
        log.warning("COUNTEREXAMPLE: E_%d has %d nontrivial solutions with a, b <= %d",
                    c, len(sols), b["bound"])
    summary = {"summary": "descent", "family": c, "bound": b["bound"], "hits": len(sols)}
    return recs, summary, bool(sols)


def _run_forced_k(cfg):
    b = cfg.bounds
    mode = b["mode"]
    n = {"theorem1": 1, "theorem2": 2}.get(mode, b["n"])
    probe = forced_k_probe(mode, n, b["bound"])
    if probe.deviations:
        log.warning("forced-k deviation: realized k %s, expected only %d",
                    probe.realized, probe.expected)
    summary = {"summary": "forced_k", "matches_claim": not probe.deviations,
               "deviations": len(probe.deviations)}
    return [probe.to_record()], summary, False


def _run_triples(cfg):
    recs = [
        {"s": t.s, "t": t.t, "p": t.even_leg, "q": t.odd_leg, "r": t.hyp, "primitive": t.primitive}
        for t in primitive_triples(cfg.bounds["max_hyp"])
    ]
    return recs, {"summary": "triples", "count": len(recs)}, False


def _run_three_distance(cfg):
    fam = three_distance_family(cfg.bounds["max_hyp"])
    recs = [p.to_record() for _, p in fam]
    return recs, {"summary": "three_distance", "count": len(recs)}, False


def _run_primes(cfg):
    ns = [p.n for p in multiplier_primes(cfg.bounds["limit"])]
    return [ns], {"summary": "primes", "count": len(ns)}, False


def _run_heuristic(cfg):
    b = cfg.bounds
    est = density_estimate(b["a0"], b["magnitudes"], b["mode"], b["trials"], cfg.seed)
    return [est.to_record()], {"summary": "heuristic"}, False


_DISPATCH = {
    "triples": _run_triples,
    "search": _run_search,
    "three-distance": _run_three_distance,
    "descent": _run_descent,
    "forced-k": _run_forced_k,
    "primes": _run_primes,
    "heuristic": _run_heuristic,
}


def run(cfg: RunConfig, out=None, *, self_check: bool = False) -> int:
    """Execute ``cfg`` and write its report to ``out``; returns the exit status."""
    out = sys.stdout if out is None else out
    try:
        cfg.validate()
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        recs, summary, found = _DISPATCH[cfg.subcommand](cfg)
    except (RangeError, CheckpointError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    summary["counterexample"] = found
    records = [_header(cfg), *recs, summary]
    if self_check:
        buf = io.StringIO()
        write_records(records, buf, "jsonl")
        try:
            validate_lines(buf.getvalue().splitlines())
        except Exception as exc:  # schema failure is an operational error
            print(f"self-check failed: {exc}", file=sys.stderr)
            return EXIT_RANGE
    write_records(records, out, cfg.output_format)
    return EXIT_COUNTEREXAMPLE if found else EXIT_OK


def _env_int(name, default):
    v = os.environ.get(ENV[name])
    return default if v is None else int(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--output", choices=("jsonl", "csv"), default=None)
    common.add_argument("--checkpoint", default=None, metavar="PATH")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--region-extension", type=int, default=None, metavar="K")
    common.add_argument("--self-check", action="store_true",
                        help="re-parse and schema-validate the output before writing it")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="ratsquare", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("triples", parents=[common], help="primitive Pythagorean triples")
    s.add_argument("--max-hyp", type=int, required=True)

    s = sub.add_parser("search", parents=[common], help="scan squares z_min..z_max")
    s.add_argument("--z-min", type=int, default=1)
    s.add_argument("--z-max", type=int, required=True)
    s.add_argument("--min-count", type=int, default=4)
    s.add_argument("--filter", default=None,
                   help=f"one of {', '.join(TAG_NAMES)} or n_times_distance(N)")
    s.add_argument("--symmetry", action="store_true", help="scan one eighth of the square")
    s.add_argument("--engine", choices=("table", "direct"), default="table")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max points per square")

    s = sub.add_parser("three-distance", parents=[common], help="three-distance points")
    s.add_argument("--max-hyp", type=int, required=True)

    s = sub.add_parser("descent", parents=[common], help="solve E_c and run descent steps")
    s.add_argument("--family", type=int, required=True, help="multiplier c")
    s.add_argument("--bound", type=int, required=True)

    s = sub.add_parser("forced-k", parents=[common], help="probe which k values occur")
    s.add_argument("--mode", choices=("theorem1", "theorem2", "theorem3"), required=True)
    s.add_argument("--n", type=int, default=3, help="multiplier for theorem3")
    s.add_argument("--bound", type=int, required=True)

    s = sub.add_parser("primes", parents=[common], help="primes n with n^2+4 prime")
    s.add_argument("--limit", type=int, required=True)

    s = sub.add_parser("heuristic", parents=[common], help="tail integral and hit-rate fit")
    s.add_argument("--a0", type=int, default=10)
    s.add_argument("--magnitudes", type=int, nargs="+", default=[256, 512, 1024, 2048, 4096])
    s.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    s.add_argument("--trials", type=int, default=100_000)
    return p


_BOUND_KEYS = {
    "triples": ("max_hyp",),
    "search": ("z_min", "z_max", "min_count", "symmetry", "engine", "budget"),
    "three-distance": ("max_hyp",),
    "descent": ("family", "bound"),
    "forced-k": ("mode", "n", "bound"),
    "primes": ("limit",),
    "heuristic": ("a0", "magnitudes", "mode", "trials"),
}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    bounds = {k: getattr(args, k) for k in _BOUND_KEYS[args.subcommand]}
    if args.subcommand == "forced-k" and args.mode != "theorem3":
        bounds["n"] = {"theorem1": 1, "theorem2": 2}[args.mode]
    return RunConfig(
        subcommand=args.subcommand,
        bounds=bounds,
        filter=getattr(args, "filter", None),
        region_extension=(args.region_extension if args.region_extension is not None
                          else _env_int("region_extension", 0)),
        workers=args.workers if args.workers is not None else _env_int("workers", 1),
        checkpoint_path=args.checkpoint or os.environ.get(ENV["checkpoint"]),
        output_format=args.output or os.environ.get(ENV["output"], "jsonl"),
        seed=args.seed if args.seed is not None else _env_int("seed", DEFAULT_SEED),
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        parser.error(f"bad environment value: {exc}")
    try:
        return run(cfg, self_check=args.self_check)
    except KeyboardInterrupt:
        print("interrupted; checkpoint flushed", file=sys.stderr)
        return EXIT_INTERRUPTED
