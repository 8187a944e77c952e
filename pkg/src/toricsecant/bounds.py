"""Closed-form non-defectiveness and identifiability bounds, and the table driver."""
from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import derive_seed
from .lattice import (
    Polytope,
    facet_reduction_verified,
    max_facet_points,
    product_simplex_points,
)
from .separation import certify_non_defective
from .shape import SvShape
from .terracini import PROVED, defect_report, expected_dim, generic_rank as _generic_rank

__all__ = [
    "SvShape", "maximizing_factor", "theorem_main_bound_exact", "theorem_main_bound",
    "identifiability_bound", "hyperplane_bound", "hyperplane_bound_exact", "HyperplaneBound",
    "toric_identifiability_bound", "expected_secant_dim", "generic_rank", "TableSpec",
    "TableCell", "PRESETS", "table_scan", "table_rows", "rows_to_csv",
]


def maximizing_factor(shape: SvShape) -> int:
    """Index j maximising n_j/d_j; the smallest such index on ties."""
    best = 0
    for i in range(1, shape.r):
        if shape.ratio(i) > shape.ratio(best):
            best = i
    return best


def theorem_main_bound_exact(shape: SvShape) -> Fraction:
    j = maximizing_factor(shape)
    n_j, d_j = shape.dims[j], shape.degs[j]
    return Fraction(d_j, n_j + d_j) * Fraction(1, 1 + shape.dim) * shape.num_points


def theorem_main_bound(shape: SvShape) -> int:
    """SV is not h-defective for every h up to this value."""
    return math.floor(theorem_main_bound_exact(shape))


def identifiability_bound(shape: SvShape) -> int | None:
    """h - 1 for h = theorem_main_bound, when 2 sum(n_i) is below the exact bound."""
    exact = theorem_main_bound_exact(shape)
    if 2 * shape.dim < exact:
        return math.floor(exact) - 1
    return None


@dataclass(frozen=True)
class HyperplaneBound:
    value: int
    exact: Fraction
    max_section_points: int
    proof_grade: bool


def hyperplane_bound_exact(p: Polytope) -> HyperplaneBound:
    """(|P cap M| - m)/(n + 1) with m the facet maximum.

    The facet maximum bounds every hyperplane section only when the facet
    reduction hypothesis holds; otherwise the bound is heuristic.
    """
    n = p.ambient_dim
    m = max_facet_points(p)
    exact = Fraction(len(p.lattice_points) - m, n + 1)
    return HyperplaneBound(math.floor(exact), exact, m, facet_reduction_verified(p))


def hyperplane_bound(p: Polytope) -> int:
    return hyperplane_bound_exact(p).value


def toric_identifiability_bound(p: Polytope) -> int | None:
    """h - 1 for h = hyperplane_bound when 2n < (|P cap M| - m)/(n + 1).

    The identifiability conclusion rests on an external theorem that turns
    non-defectiveness below this range into identifiability; only the
    arithmetic condition is checked here.
    """
    hb = hyperplane_bound_exact(p)
    if 2 * p.ambient_dim < hb.exact:
        return hb.value - 1
    return None


def expected_secant_dim(shape: SvShape, h: int) -> int:
    return expected_dim(shape.dim, shape.num_points, h)


def generic_rank(shape: SvShape) -> int:
    return _generic_rank(shape.dim, shape.num_points)


# -- table driver ------------------------------------------------------------

@dataclass(frozen=True)
class TableSpec:
    dims: tuple[int, ...]
    degree_ranges: tuple[tuple[int, int], ...]
    max_total_degree: int | None = None
    h_policy: str = "generic"  # scan h = 1..generic_rank

    def shapes(self) -> list[SvShape]:
        out = []
        for degs in itertools.product(*(range(lo, hi + 1) for lo, hi in self.degree_ranges)):
            if self.max_total_degree is not None and sum(degs) > self.max_total_degree:
                continue
            out.append(SvShape(self.dims, degs))
        return out


PRESETS: dict[str, TableSpec] = {
    # P1 x P2 with d_1, d_2 <= 8
    "P1P2": TableSpec((1, 2), ((1, 8), (1, 8))),
    "P1P2-sum8": TableSpec((1, 2), ((1, 7), (1, 7)), max_total_degree=8),
    "P1P3": TableSpec((1, 3), ((1, 6), (1, 6)), max_total_degree=7),
    "P2P2": TableSpec((2, 2), ((1, 5), (1, 5)), max_total_degree=6),
    "P1P1P2": TableSpec((1, 1, 2), ((1, 2), (1, 5), (1, 2)), max_total_degree=7),
}


@dataclass
class TableCell:
    shape: SvShape
    bound: int
    sep_k: int
    sep_complete: bool
    sep_seed: int
    verdict: str  # non_defective | defective | unknown
    proof: str  # separation | oracle | evidence | none
    defective_hs: list[int] = field(default_factory=list)
    oracle: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "dims": list(self.shape.dims), "degs": list(self.shape.degs),
            "bound": self.bound, "separation_k": self.sep_k,
            "separation_complete": self.sep_complete, "separation_seed": self.sep_seed,
            "verdict": self.verdict, "proof": self.proof,
            "defective_hs": self.defective_hs, "oracle": self.oracle,
        }


def _cell_seed(seed: int, shape: SvShape) -> int:
    return derive_seed(seed, *shape.dims, 0, *shape.degs)


def scan_cell(shape: SvShape, runs: int = 5, trials: int = 3, seed: int = 0,
              oracle: str = "fallback") -> TableCell:
    """Separation first; the Terracini oracle arbitrates incomplete runs."""
    cseed = _cell_seed(seed, shape)
    poly = product_simplex_points(shape)
    sep = certify_non_defective(poly, runs=runs, seed=cseed)
    cell = TableCell(shape, theorem_main_bound(shape), sep.k, sep.complete, cseed,
                     verdict="unknown", proof="none")
    if sep.complete:
        cell.verdict, cell.proof = "non_defective", "separation"
    if sep.complete and oracle != "always":
        return cell
    rep = defect_report(poly, f=None, trials=trials, seed=cseed)
    cell.oracle = [e.to_json() for e in rep.entries]
    cell.defective_hs = rep.defective_hs()
    if sep.complete:
        return cell
    if cell.defective_hs:
        cell.verdict, cell.proof = "defective", "evidence"
    elif all(e.status == PROVED for e in rep.entries):
        cell.verdict, cell.proof = "non_defective", "oracle"
    return cell


def _scan_cell_args(args):
    return scan_cell(*args)


def table_scan(spec: TableSpec, runs: int = 5, trials: int = 3, seed: int = 0,
               jobs: int = 1, oracle: str = "fallback") -> list[TableCell]:
    shapes = spec.shapes()
    work = [(s, runs, trials, seed, oracle) for s in shapes]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_scan_cell_args, work))
    return [scan_cell(*w) for w in work]


TABLE_COLUMNS = ("dims", "degs", "h", "expected", "computed", "status", "bound", "certificate_ref")


def table_rows(cells: Sequence[TableCell]) -> list[dict]:
    """Flatten cells into rows with the fixed column schema."""
    rows = []
    for c in cells:
        dims = ",".join(map(str, c.shape.dims))
        degs = ",".join(map(str, c.shape.degs))
        ref = f"sep:seed={c.sep_seed}:k={c.sep_k}:complete={int(c.sep_complete)}"
        if not c.oracle:
            rows.append({"dims": dims, "degs": degs, "h": "", "expected": "", "computed": "",
                         "status": "separation_complete" if c.sep_complete else c.verdict,
                         "bound": c.bound, "certificate_ref": ref})
            continue
        for e in c.oracle:
            rows.append({"dims": dims, "degs": degs, "h": e["h"], "expected": e["expected"],
                         "computed": e["computed"], "status": e["status"],
                         "bound": c.bound, "certificate_ref": ref})
    return rows


def rows_to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=TABLE_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()
