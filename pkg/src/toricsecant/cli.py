"""Command-line front end: toricsecant <command> ...

Exit codes: 0 completed, 2 usage error, 3 resource limit exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from .bounds import (
    PRESETS,
    expected_secant_dim,
    generic_rank,
    hyperplane_bound_exact,
    identifiability_bound,
    rows_to_csv,
    table_rows,
    table_scan,
    theorem_main_bound,
    theorem_main_bound_exact,
    toric_identifiability_bound,
)
from .cremona import LinearSystem3Fold, iterate_transform, pic_action, sv111_defect_scan, system_dim_oracle
from .exact import PRIMES, PrimeField, ResourceLimitError
from .flattening import FlatteningSplit, flattening_defect_certificate, split_search
from .lattice import (
    facet_point_counts,
    fano_polytope,
    load_polytope,
    max_facet_points,
    product_simplex_points,
)
from .separation import certified_range, certify_non_defective, verify_certificate
from .shape import SvShape
from .terracini import defect_report

SEED_ENV = "SECANT_SEED"


@dataclass
class RunConfig:
    seed: int = 0
    runs: int = 5
    trials: int = 3
    primes: list[int] = field(default_factory=lambda: list(PRIMES))
    fmt: str = "text"

    def __post_init__(self):
        if self.runs < 1 or self.trials < 1:
            raise ValueError("runs and trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.fmt not in ("json", "csv", "text"):
            raise ValueError(f"unknown format {self.fmt!r}")

    def fixed_field(self) -> PrimeField | None:
        """A single user-chosen prime pins the field; otherwise primes rotate per trial."""
        return PrimeField(self.primes[0]) if len(self.primes) == 1 else None


class UsageError(Exception):
    pass


def _config(args) -> RunConfig:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get(SEED_ENV, "0"))
    primes = [int(p) for p in args.prime] if args.prime else list(PRIMES)
    return RunConfig(seed=seed, runs=args.runs, trials=args.trials, primes=primes, fmt=args.format)


def _emit(cfg: RunConfig, payload: dict, text: list[str]) -> None:
    if cfg.fmt == "json":
        print(json.dumps({"schema": 1, **payload}, sort_keys=True, indent=2))
    else:
        print("\n".join(text))


def _shape(args) -> SvShape:
    if args.n is None or args.d is None:
        raise UsageError("give both --n and --d")
    return SvShape.parse(args.n, args.d)


def _target(args):
    if getattr(args, "polytope", None):
        return load_polytope(args.polytope), None
    shape = _shape(args)
    return product_simplex_points(shape), shape


def _h_range(text: str | None) -> list[int] | None:
    if not text:
        return None
    if "-" in text:
        lo, hi = text.split("-", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


def cmd_bound(args, cfg: RunConfig) -> None:
    shape = _shape(args)
    gr = generic_rank(shape)
    hb = hyperplane_bound_exact(product_simplex_points(shape))
    payload = {
        "shape": shape.to_json(),
        "bound": theorem_main_bound(shape),
        "bound_exact": str(theorem_main_bound_exact(shape)),
        "identifiability_bound": identifiability_bound(shape),
        "hyperplane_bound": hb.value,
        "ambient_dim": shape.ambient,
        "generic_rank": gr,
        "expected_dims": {str(h): expected_secant_dim(shape, h) for h in range(1, gr + 1)},
    }
    _emit(cfg, payload, [
        f"shape {shape.label()}  ambient P^{shape.ambient}",
        f"bound {payload['bound']} (exact {payload['bound_exact']})",
        f"identifiability bound {payload['identifiability_bound']}",
        f"hyperplane bound {hb.value}",
        f"generic rank {gr}",
        "expected dims " + " ".join(f"{h}:{d}" for h, d in payload["expected_dims"].items()),
    ])


def cmd_separate(args, cfg: RunConfig) -> None:
    poly, _ = _target(args)
    verdict = certify_non_defective(poly, runs=cfg.runs, seed=cfg.seed)
    n, num = poly.ambient_dim, len(poly.lattice_points)
    ok = verify_certificate(verdict.certificate)
    payload = {"seed": cfg.seed, "verdict": verdict.to_json(), "verified": ok,
               "certified_range": certified_range(verdict, n, num),
               "conclusion": "not_defective" if verdict.complete else "candidate_defective"}
    _emit(cfg, payload, [
        f"seed {cfg.seed}",
        f"separated simplices k={verdict.k}  complete={verdict.complete}  verified={ok}",
        f"not h-defective for h <= {payload['certified_range']}",
        "not defective" if verdict.complete else
        "incomplete: candidate defective (rerun with other seeds or use the oracle)",
    ])


def cmd_oracle(args, cfg: RunConfig) -> None:
    poly, shape = _target(args)
    target = shape if shape is not None else poly
    rep = defect_report(target, _h_range(args.h), f=cfg.fixed_field(), trials=cfg.trials, seed=cfg.seed)
    lines = [f"seed {cfg.seed}", f"{rep.label}  dim {rep.dim}  points {rep.num_points}"]
    lines += [f"h={e.h} expected {e.expected} computed {e.computed} {e.status}" for e in rep.entries]
    _emit(cfg, {"seed": cfg.seed, "report": rep.to_json()}, lines)


def cmd_flatten(args, cfg: RunConfig) -> None:
    shape = _shape(args)
    trials = max(cfg.trials, 2)
    if args.split:
        split = FlatteningSplit.from_a(shape, [int(x) for x in args.split.split(",")])
        certs = [flattening_defect_certificate(shape, split, args.h, f=cfg.fixed_field(),
                                               trials=trials, seed=cfg.seed)]
    else:
        certs = split_search(shape, args.h, trials=trials, seed=cfg.seed)
    fired = [c for c in certs if c.fired]
    lines = [f"seed {cfg.seed}", f"{shape.label()} h={args.h}"]
    for c in certs:
        lines.append(f"split a={c.split.a} b={c.split.b} {c.split.rows}x{c.split.cols} "
                     f"ranks {c.observed_ranks} dim<= {c.dim_upper_bounds} expected {c.expected_dim} "
                     f"{c.status}" + (f" ({c.family})" if c.family else ""))
    lines.append("certificate fired" if fired else "no certificate")
    _emit(cfg, {"seed": cfg.seed, "fired": bool(fired), "certificates": [c.to_json() for c in certs]}, lines)


def cmd_cremona(args, cfg: RunConfig) -> None:
    if args.scan:
        degs = tuple(int(x) for x in args.scan.split(","))
        scan = sv111_defect_scan(degs, f=cfg.fixed_field(), trials=min(cfg.trials, 2), seed=cfg.seed)
        lines = [f"seed {cfg.seed}", scan.report.label]
        for e, s in zip(scan.report.entries, scan.steps):
            lines.append(f"h={e.h} {s.start.label()} -> {s.reduced.label()} dim {s.system_dim}  "
                         f"secant {e.computed} expected {e.expected} {e.status}")
        _emit(cfg, {"seed": cfg.seed, "scan": scan.to_json()}, lines)
        return
    if not args.system:
        raise UsageError("give --system or --scan")
    sys_ = LinearSystem3Fold.parse(args.system)
    if args.pair:
        i, j = (int(x) for x in args.pair.split(","))
        out = pic_action(sys_, i, j)
    else:
        out = iterate_transform(sys_, args.r)
    before = system_dim_oracle(sys_, cfg.fixed_field(), trials=2, seed=cfg.seed)
    after = system_dim_oracle(out, cfg.fixed_field(), trials=2, seed=cfg.seed)
    payload = {"seed": cfg.seed, "input": sys_.to_json(), "output": out.to_json(),
               "input_dim": before, "output_dim": after}
    _emit(cfg, payload, [
        f"seed {cfg.seed}",
        f"{sys_.label()} -> {out.label()}" + ("  [extrapolated]" if out.extrapolated else ""),
        f"dimension {before} -> {after}",
    ])


def cmd_table(args, cfg: RunConfig) -> None:
    if args.preset not in PRESETS:
        raise UsageError(f"unknown preset {args.preset!r}; choose from {sorted(PRESETS)}")
    spec = PRESETS[args.preset]
    cells = table_scan(spec, runs=cfg.runs, trials=cfg.trials, seed=cfg.seed, jobs=args.jobs)
    defective = [list(c.shape.degs) for c in cells if c.verdict == "defective"]
    if cfg.fmt == "csv":
        sys.stdout.write(rows_to_csv(table_rows(cells)))
        return
    lines = [f"seed {cfg.seed}", f"preset {args.preset}: {len(cells)} shapes"]
    for c in cells:
        extra = f" h={c.defective_hs}" if c.defective_hs else ""
        lines.append(f"{c.shape.label()} {c.verdict} via {c.proof}{extra}")
    lines.append("defective: " + " ".join(str(d) for d in defective))
    _emit(cfg, {"seed": cfg.seed, "preset": args.preset, "defective": defective,
                "cells": [c.to_json() for c in cells]}, lines)


def cmd_polytope(args, cfg: RunConfig) -> None:
    if args.action == "fano":
        poly = fano_polytope()
    elif args.action == "product":
        poly = product_simplex_points(_shape(args))
    else:
        if not args.file:
            raise UsageError("give a polytope file")
        poly = load_polytope(args.file)
    if args.action in ("convert", "product", "fano"):
        text = json.dumps({"schema": 1, **poly.to_json()}, sort_keys=True, indent=2)
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        return
    hb = hyperplane_bound_exact(poly)
    payload = {
        "ambient_dim": poly.ambient_dim, "num_points": len(poly.lattice_points),
        "num_vertices": len(poly.vertices), "facet_point_counts": sorted(facet_point_counts(poly)),
        "max_facet_points": max_facet_points(poly), "hyperplane_bound": hb.value,
        "hyperplane_bound_proof_grade": hb.proof_grade,
        "identifiability_bound": toric_identifiability_bound(poly),
    }
    _emit(cfg, payload, [f"{k} {v}" for k, v in payload.items()])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    common.add_argument("--runs", type=int, default=5)
    common.add_argument("--trials", type=int, default=3)
    common.add_argument("--prime", action="append", help="fix the prime (repeatable)")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")

    shape = argparse.ArgumentParser(add_help=False)
    shape.add_argument("--n", help="dimensions, e.g. 1,2")
    shape.add_argument("--d", help="degrees, e.g. 3,2")

    p = argparse.ArgumentParser(prog="toricsecant", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("bound", parents=[common, shape])
    s = sub.add_parser("separate", parents=[common, shape])
    s.add_argument("--polytope")
    s = sub.add_parser("oracle", parents=[common, shape])
    s.add_argument("--polytope")
    s.add_argument("--h", help="e.g. 4, 1-6 or 2,5")
    s = sub.add_parser("flatten", parents=[common, shape])
    s.add_argument("--h", type=int, required=True)
    s.add_argument("--split", help="derivative degrees a_1,...,a_r; default: search")
    s = sub.add_parser("cremona", parents=[common])
    s.add_argument("--system", help="'d1,d2,d3;m1,m2,...' (m^k allowed)")
    s.add_argument("--r", type=int, default=1, help="transforms at pairs of double points")
    s.add_argument("--pair", help="apply one transform at base points i,j")
    s.add_argument("--scan", help="degrees d1,d2,d3: classify every h")
    s = sub.add_parser("table", parents=[common])
    s.add_argument("--preset", default="P1P2")
    s.add_argument("--jobs", type=int, default=1)
    s = sub.add_parser("polytope", parents=[common, shape])
    s.add_argument("action", choices=("inspect", "convert", "product", "fano"))
    s.add_argument("file", nargs="?")
    s.add_argument("-o", "--output")
    return p


COMMANDS = {
    "bound": cmd_bound, "separate": cmd_separate, "oracle": cmd_oracle, "flatten": cmd_flatten,
    "cremona": cmd_cremona, "table": cmd_table, "polytope": cmd_polytope,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = _config(args)
        COMMANDS[args.command](args, cfg)
    except (ResourceLimitError, OverflowError, MemoryError) as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return 3
    except (UsageError, ValueError, TypeError, KeyError, FileNotFoundError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
