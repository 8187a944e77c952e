"""Secant dimensions through Terracini's lemma over prime fields.

The affine cone over the tangent space of X_P at the image of a torus
point u is spanned by the monomial row (u^m) and the n derivative rows
(m_i u^{m - e_i}).  Stacking these blocks for h random torus points and
taking the rank mod p gives a lower bound for dim Sec_h(X_P) + 1; a full
rank mod p therefore proves non-defectiveness, while a deficient rank is
only evidence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exact import IntMatrix, PrimeField, affine_dim, field as prime_field, make_rng, prefix_ranks_mod_p
from .lattice import Functional, PointSet, Polytope, evaluate, product_simplex_points
from .shape import SvShape

PROVED = "proved_nondefective"
EVIDENCE = "defective_evidence"
UNKNOWN = "unknown"


def expected_dim(n: int, num_points: int, h: int) -> int:
    """min(h(n+1) - 1, N) for an n-dimensional variety spanning P^N, N + 1 = num_points."""
    if h < 1:
        raise ValueError("h must be >= 1")
    return min(h * (n + 1) - 1, num_points - 1)


def generic_rank(n: int, num_points: int) -> int:
    """Least h whose expected secant dimension is N."""
    return math.ceil(num_points / (n + 1))


def _as_points(target: Polytope | PointSet | SvShape | Iterable[Sequence[int]]) -> PointSet:
    if isinstance(target, SvShape):
        return product_simplex_points(target).lattice_points
    if isinstance(target, Polytope):
        return target.lattice_points
    if isinstance(target, PointSet):
        return target
    return PointSet.of(target)


def tangent_matrix_at(s: PointSet, u: Sequence[int], f: PrimeField) -> np.ndarray:
    """(n+1) x |s| matrix over F_p spanning the tangent cone at phi_P(u)."""
    p = f.p
    u = [int(x) % p for x in u]
    if len(u) != s.ambient_dim:
        raise ValueError("torus point has the wrong dimension")
    if any(x == 0 for x in u):
        raise ValueError("torus point must have nonzero coordinates mod p")
    n = s.ambient_dim
    arr = s.as_array()
    mono = np.ones(len(s), dtype=np.int64)
    for i in range(n):
        col = arr[:, i]
        cache = {int(e): pow(u[i], int(e), p) for e in np.unique(col)}
        mono = (mono * np.array([cache[int(e)] for e in col], dtype=np.int64)) % p
    out = np.empty((n + 1, len(s)), dtype=np.int64)
    out[0] = mono
    for i in range(n):
        inv = pow(u[i], -1, p)
        coef = np.mod(arr[:, i], p)
        out[i + 1] = (((coef * mono) % p) * inv) % p
    return out


def random_torus_point(n: int, f: PrimeField, rng: np.random.Generator) -> list[int]:
    return [int(x) for x in rng.integers(1, f.p, size=n)]


def secant_dims_trial(s: PointSet, h_max: int, f: PrimeField, rng: np.random.Generator) -> list[int]:
    """dims[h-1] = rank of the first h stacked tangent blocks minus one, h = 1..h_max."""
    n = s.ambient_dim
    blocks = [tangent_matrix_at(s, random_torus_point(n, f, rng), f) for _ in range(h_max)]
    ranks = prefix_ranks_mod_p(np.vstack(blocks), f)
    return [ranks[(h + 1) * (n + 1) - 1] - 1 for h in range(h_max)]


def secant_dim_mod_p(s: PointSet | Polytope | SvShape, h: int, f: PrimeField | None = None,
                     trials: int = 3, seed: int = 0) -> int:
    """Certified lower bound for dim Sec_h, exact with high probability."""
    if h < 1:
        raise ValueError("h must be >= 1")
    pts = _as_points(s)
    best = -1
    for t in range(trials):
        ft = f if f is not None else prime_field(t)
        best = max(best, secant_dims_trial(pts, h, ft, make_rng(seed, h, t))[-1])
    return best


@dataclass
class HEntry:
    h: int
    expected: int
    computed: int
    status: str
    trial_dims: list[int]
    primes: list[int]

    def to_json(self) -> dict:
        return {
            "h": self.h, "expected": self.expected, "computed": self.computed,
            "status": self.status, "trial_dims": self.trial_dims, "primes": self.primes,
        }


@dataclass
class DefectReport:
    label: str
    dim: int
    num_points: int
    entries: list[HEntry]
    trials: int
    seed: int
    primes: list[int] = field(default_factory=list)

    def entry(self, h: int) -> HEntry:
        for e in self.entries:
            if e.h == h:
                return e
        raise KeyError(h)

    def statuses(self) -> dict[int, str]:
        return {e.h: e.status for e in self.entries}

    def defective_hs(self) -> list[int]:
        return [e.h for e in self.entries if e.status == EVIDENCE]

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "target": self.label,
            "dim": self.dim,
            "num_points": self.num_points,
            "trials": self.trials,
            "seed": self.seed,
            "primes": self.primes,
            "entries": [e.to_json() for e in self.entries],
        }


def classify(expected: int, dims: Sequence[int]) -> str:
    """Proof if any trial reaches the expected dimension; evidence if all agree below it."""
    if max(dims) == expected:
        return PROVED
    if len(set(dims)) == 1:
        return EVIDENCE
    return UNKNOWN


def defect_report(target: Polytope | PointSet | SvShape, h_range: Iterable[int] | None = None,
                  f: PrimeField | None = None, trials: int = 3, seed: int = 0) -> DefectReport:
    """Per-h comparison of oracle secant dimensions with expected ones.

    Without an explicit field the primes rotate through the fixed table, one
    per trial.  All h values of one trial share the same random points.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    pts = _as_points(target)
    n = affine_dim(pts.points)
    if n != pts.ambient_dim:
        raise ValueError("the point set must be full-dimensional")
    num = len(pts)
    hs = sorted(set(h_range)) if h_range is not None else list(range(1, generic_rank(n, num) + 1))
    if not hs:
        raise ValueError("empty h range")
    h_max = hs[-1]
    per_trial: list[list[int]] = []
    primes = []
    for t in range(trials):
        ft = f if f is not None else prime_field(t)
        primes.append(ft.p)
        per_trial.append(secant_dims_trial(pts, h_max, ft, make_rng(seed, t)))
    entries = []
    for h in hs:
        dims = [d[h - 1] for d in per_trial]
        exp = expected_dim(n, num, h)
        entries.append(HEntry(h, exp, max(dims), classify(exp, dims), dims, primes))
    label = target.label() if isinstance(target, SvShape) else f"points[{num}]"
    return DefectReport(label, n, num, entries, trials, seed, primes)


def one_param_matrix(s: PointSet, vs: Sequence[Functional], a: int, max_digits: int = 200_000) -> IntMatrix:
    """Vertical join of the matrices M_v(a), one (n+1)-row block per functional.

    Row i of a block is (m_i a^{<m, v> - v_i}); multiplying it by a^{v_i}
    and the whole block by a^{-min <m, v>} keeps rank and makes every entry a
    nonnegative power of a times an integer.
    """
    if a < 2:
        raise ValueError("a must be >= 2")
    n = s.ambient_dim
    rows = []
    for v in vs:
        exps = [evaluate(v, m) for m in s]
        shift = min(exps)
        if (max(exps) - shift) * math.log10(a) > max_digits:
            raise OverflowError("entries of M_v(a) exceed the size guard")
        powers = [a ** (e - shift) for e in exps]
        rows.append(powers)
        for i in range(n):
            rows.append([m[i] * w for m, w in zip(s, powers)])
    return IntMatrix.from_rows(rows, len(s))
