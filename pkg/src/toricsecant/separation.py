"""Greedy simplex separation and non-defectiveness certificates.

A functional v separates a simplex D in S when the barycentric value
phi_v(D) is the unique maximum over all simplices T contained in S.  The
(n+1)-subsets of S that are affinely independent are the bases of a
matroid, and phi_v(T) is (up to the factor n+1) the weight sum of T, so
the separated simplex is the unique maximum-weight basis.  With distinct
weights the greedy algorithm finds it; for arbitrary weights a basis is
the unique optimum iff no single exchange keeps or raises the weight.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exact import AffineSpan, ResourceLimitError, derive_seed, is_affinely_independent, make_rng
from .lattice import Functional, Point, PointSet, Polytope, Simplex, evaluate

BRUTE_FORCE_LIMIT = 12


class NonInjectiveFunctional(ValueError):
    """phi_v takes the same value on two points; draw another functional."""


def _points(s: PointSet | Polytope | Iterable[Sequence[int]]) -> PointSet:
    if isinstance(s, Polytope):
        return s.lattice_points
    if isinstance(s, PointSet):
        return s
    return PointSet.of(s)


def is_injective(v: Sequence[int], points: Iterable[Sequence[int]]) -> bool:
    vals = [evaluate(v, q) for q in points]
    return len(set(vals)) == len(vals)


def max_weight_simplex(points: Sequence[Point], v: Sequence[int]) -> tuple[Point, ...] | None:
    """Greedy maximum-weight basis of the affine matroid on ``points``.

    Points are scanned by decreasing phi_v (lexicographic order breaks ties)
    and kept while they stay affinely independent.  Returns None when the
    points are not full-dimensional.
    """
    if not points:
        return None
    n = len(points[0])
    order = sorted(points, key=lambda q: (evaluate(v, q), q), reverse=True)
    span = AffineSpan(n)
    chosen: list[Point] = []
    for q in order:
        if span.try_add(q):
            chosen.append(q)
            if len(chosen) == n + 1:
                return tuple(chosen)
    return None


def brute_force_max_simplices(points: Sequence[Point], v: Sequence[int]) -> tuple[int | None, list[tuple[Point, ...]]]:
    """All simplices of ``points`` attaining max phi_v, by enumeration."""
    if len(points) > BRUTE_FORCE_LIMIT:
        raise ResourceLimitError(f"brute force limited to {BRUTE_FORCE_LIMIT} points")
    n = len(points[0])
    best, arg = None, []
    for sub in itertools.combinations(points, n + 1):
        if not is_affinely_independent(sub):
            continue
        w = sum(evaluate(v, q) for q in sub)
        if best is None or w > best:
            best, arg = w, [sub]
        elif w == best:
            arg.append(sub)
    return best, arg


def _separates_by_exchange(v: Sequence[int], delta: Sequence[Point], s: Sequence[Point]) -> bool:
    """Unique-optimum test: no exchange D - f + e that is a simplex with phi(e) >= phi(f)."""
    dset = set(delta)
    vals = {q: evaluate(v, q) for q in s}
    for f in delta:
        rest = [q for q in delta if q != f]
        for e in s:
            if e in dset or vals[e] < vals[f]:
                continue
            if is_affinely_independent(rest + [e]):
                return False
    return True


def separates(v: Functional, delta: Simplex | Sequence[Sequence[int]], s: PointSet | Iterable[Sequence[int]],
              method: str = "greedy") -> bool:
    """Does v separate the simplex delta in s?

    ``method`` is "greedy" (matroid greedy, default), "exchange" (single
    exchange optimality) or "brute" (enumerate all simplices; |s| <= 12).
    """
    simplex = delta if isinstance(delta, Simplex) else Simplex(tuple(tuple(q) for q in delta))
    ps = _points(s)
    if any(q not in ps for q in simplex.points):
        raise ValueError("delta must be contained in s")
    if len(v) != ps.ambient_dim:
        raise ValueError("functional has the wrong length")
    if not is_injective(v, ps.points):
        raise NonInjectiveFunctional("phi_v is not injective on s; draw another functional")
    pts = list(ps.points)
    if method == "greedy":
        best = max_weight_simplex(pts, v)
        return best is not None and set(best) == set(simplex.points)
    if method == "exchange":
        return _separates_by_exchange(v, simplex.points, pts)
    if method == "brute":
        _, arg = brute_force_max_simplices(pts, v)
        return len(arg) == 1 and set(arg[0]) == set(simplex.points)
    raise ValueError(f"unknown method {method!r}")


def random_injective_functional(points: Sequence[Point], rng: np.random.Generator,
                                avoid: Iterable[Functional] = ()) -> Functional:
    """Integer functional with entries in [-B, B], B = 4 |S| (coordinate range)."""
    n = len(points[0])
    arr = np.array(points, dtype=np.int64)
    spread = int(arr.max() - arr.min()) if len(points) > 1 else 1
    bound = 4 * len(points) * max(spread, 1)
    avoid = set(avoid)
    while True:
        v = tuple(int(x) for x in rng.integers(-bound, bound + 1, size=n))
        if v in avoid or not any(v):
            continue
        if is_injective(v, points):
            return v


@dataclass(frozen=True)
class SeparationCertificate:
    source_points: PointSet
    simplices: tuple[tuple[Point, ...], ...]
    functionals: tuple[Functional, ...]
    leftover: PointSet
    leftover_affinely_independent: bool
    seed: int | None = None

    @property
    def k(self) -> int:
        return len(self.simplices)

    @property
    def complete(self) -> bool:
        """Leftover affinely independent: certifies non-defectiveness for every h."""
        return self.leftover_affinely_independent

    def to_json(self) -> dict:
        src = self.source_points
        return {
            "schema": 1,
            "ambient_dim": src.ambient_dim,
            "points": [list(q) for q in src],
            "simplices": [[src.index(q) for q in d] for d in self.simplices],
            "functionals": [list(v) for v in self.functionals],
            "leftover": [src.index(q) for q in self.leftover],
            "leftover_affinely_independent": self.leftover_affinely_independent,
            "k": self.k,
            "complete": self.complete,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SeparationCertificate":
        src = PointSet.of(data["points"], data.get("ambient_dim"))
        pts = src.points
        return cls(
            source_points=src,
            simplices=tuple(tuple(pts[i] for i in d) for d in data["simplices"]),
            functionals=tuple(tuple(v) for v in data["functionals"]),
            leftover=PointSet(src.ambient_dim, tuple(pts[i] for i in data["leftover"])),
            leftover_affinely_independent=bool(data["leftover_affinely_independent"]),
            seed=data.get("seed"),
        )


def greedy_extract(s: PointSet | Polytope | Iterable[Sequence[int]], seed: int = 0) -> SeparationCertificate:
    """Peel separated simplices off s until the remainder is not full-dimensional."""
    ps = _points(s)
    if not len(ps):
        raise ValueError("empty point set")
    n = ps.ambient_dim
    rng = make_rng(seed)
    remaining = list(ps.points)
    simplices: list[tuple[Point, ...]] = []
    functionals: list[Functional] = []
    while len(remaining) > n:
        v = random_injective_functional(remaining, rng, avoid=functionals)
        delta = max_weight_simplex(remaining, v)
        if delta is None:
            break
        simplices.append(delta)
        functionals.append(v)
        drop = set(delta)
        remaining = [q for q in remaining if q not in drop]
    leftover = PointSet(n, tuple(remaining))
    return SeparationCertificate(
        source_points=ps,
        simplices=tuple(simplices),
        functionals=tuple(functionals),
        leftover=leftover,
        leftover_affinely_independent=is_affinely_independent(leftover.points),
        seed=seed,
    )


def verify_certificate(c: SeparationCertificate) -> bool:
    """Re-check every structural invariant and each separation step."""
    src = c.source_points
    n = src.ambient_dim
    if len(c.simplices) != len(c.functionals):
        return False
    if len(set(c.functionals)) != len(c.functionals):
        return False
    used: set[Point] = set()
    for d in c.simplices:
        if len(d) != n + 1 or len(set(d)) != n + 1:
            return False
        if any(q not in src for q in d) or used.intersection(d):
            return False
        if not is_affinely_independent(d):
            return False
        used.update(d)
    if set(c.leftover.points) != set(src.points) - used:
        return False
    if c.leftover_affinely_independent != is_affinely_independent(c.leftover.points):
        return False
    remaining = list(src.points)
    for d, v in zip(c.simplices, c.functionals):
        if len(v) != n or not _separates_by_exchange(v, d, remaining):
            return False
        drop = set(d)
        remaining = [q for q in remaining if q not in drop]
    return True


@dataclass
class SeparationVerdict:
    k: int
    complete: bool
    certificate: SeparationCertificate
    run_seeds: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "complete": self.complete,
            "runs": len(self.run_seeds),
            "run_seeds": self.run_seeds,
            "certificate": self.certificate.to_json(),
        }


def certify_non_defective(p: Polytope | PointSet | Iterable[Sequence[int]], runs: int = 5,
                          seed: int = 0) -> SeparationVerdict:
    """Run greedy_extract up to ``runs`` times; stop at the first complete run.

    Failure to complete never proves defectiveness.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    ps = _points(p)
    best: SeparationCertificate | None = None
    seeds = []
    for i in range(runs):
        run_seed = derive_seed(seed, i)
        seeds.append(run_seed)
        cert = greedy_extract(ps, seed=run_seed)
        if best is None or (cert.complete, cert.k) > (best.complete, best.k):
            best = cert
        if cert.complete:
            break
    assert best is not None
    return SeparationVerdict(best.k, best.complete, best, seeds)


def certified_range(verdict: SeparationVerdict, n: int, num_points: int) -> int:
    """Largest h certified non-defective: k, or the generic rank when complete."""
    if verdict.complete:
        return math.ceil(num_points / (n + 1))
    return verdict.k
