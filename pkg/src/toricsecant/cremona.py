"""Cremona involution on (P^1)^3 and linear systems with general fat points.

The involution is centred at two general points.  On the blow-up its action
on Pic = Z[H1, H2, H3, E1, E2] is a 5x5 integer matrix, so on systems
L(d1, d2, d3; m1, m2) it is the affine map below.  Sections correspond,
which lets a system with many double points be traded for a smaller one.
By Terracini's lemma L(d; 2^h) measures the h-th secant variety of the
Segre-Veronese embedding of (P^1)^3 with multidegree d.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .exact import IntMatrix, PrimeField, field as prime_field, make_rng, rank_mod_p
from .terracini import DefectReport, HEntry, classify, expected_dim

# rows/columns: H1, H2, H3, E1, E2 acting on (d1, d2, d3, -m1, -m2)
PICARD_MATRIX = IntMatrix.from_rows([
    [1, 0, 0, 0, 0],
    [1, 1, 1, 1, 1],
    [0, 0, 1, 0, 0],
    [-1, 0, -1, -1, 0],
    [-1, 0, -1, 0, -1],
])

MAX_MONOMIALS = 4000


@dataclass(frozen=True)
class LinearSystem3Fold:
    """L(d1, d2, d3; m_1, ..., m_k) on (P^1)^3 with general base points.

    Multiplicities are kept as a decreasing tuple with zeros dropped.
    Degrees may be negative, in which case the system is empty.
    """

    degrees: tuple[int, int, int]
    mults: tuple[int, ...] = ()
    extrapolated: bool = False

    def __post_init__(self):
        if len(self.degrees) != 3:
            raise ValueError("need exactly three degrees")
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        ms = [int(m) for m in self.mults]
        if any(m < 0 for m in ms):
            raise ValueError("multiplicities must be non-negative")
        object.__setattr__(self, "mults", tuple(sorted((m for m in ms if m), reverse=True)))

    @classmethod
    def parse(cls, text: str) -> "LinearSystem3Fold":
        """'d1,d2,d3;m1,m2,...' where a multiplicity may be written m^k."""
        text = text.strip()
        if text.startswith("L(") and text.endswith(")"):
            text = text[2:-1]
        deg_part, _, mult_part = text.partition(";")
        degs = tuple(int(x) for x in deg_part.split(","))
        mults: list[int] = []
        for tok in filter(None, (t.strip() for t in mult_part.split(","))):
            m = re.fullmatch(r"(-?\d+)(?:\^(\d+))?", tok)
            if not m:
                raise ValueError(f"bad multiplicity {tok!r}")
            mults += [int(m.group(1))] * int(m.group(2) or 1)
        return cls(degs, tuple(mults))

    def is_empty_by_degree(self) -> bool:
        return min(self.degrees) < 0

    @property
    def num_monomials(self) -> int:
        if self.is_empty_by_degree():
            return 0
        return math.prod(d + 1 for d in self.degrees)

    def virtual_dim(self) -> int:
        """Monomials minus jet conditions minus one."""
        return self.num_monomials - sum(math.comb(m + 2, 3) for m in self.mults) - 1

    def double_points(self) -> int:
        return sum(1 for m in self.mults if m == 2)

    def label(self) -> str:
        d = ",".join(map(str, self.degrees))
        if not self.mults:
            return f"L({d})"
        parts = []
        for m, grp in itertools.groupby(self.mults):
            k = len(list(grp))
            parts.append(f"{m}^{k}" if k > 1 else str(m))
        return f"L({d};{','.join(parts)})"

    def to_json(self) -> dict:
        return {"degrees": list(self.degrees), "mults": list(self.mults),
                "extrapolated": self.extrapolated, "label": self.label()}


def apply_picard(cls_vec: tuple[int, int, int, int, int]) -> tuple[int, ...]:
    """Image of (d1, d2, d3, -m1, -m2) under the Picard matrix."""
    return (PICARD_MATRIX @ IntMatrix.from_rows([[x] for x in cls_vec])).entries


def pic_action(sys: LinearSystem3Fold, i: int = 0, j: int = 1) -> LinearSystem3Fold:
    """Transform centred at the points with (sorted) indices i and j.

    (d; m_i, m_j) -> (d1, d1+d2+d3-m_i-m_j, d3; d1+d3-m_i, d1+d3-m_j).
    Pairs other than two double points are allowed but flagged extrapolated.
    """
    k = len(sys.mults)
    if i == j or not (0 <= i < k and 0 <= j < k):
        raise ValueError(f"need two distinct base point indices below {k}")
    d1, d2, d3 = sys.degrees
    mi, mj = sys.mults[i], sys.mults[j]
    image = apply_picard((d1, d2, d3, -mi, -mj))
    new_mi, new_mj = -image[3], -image[4]
    if new_mi < 0 or new_mj < 0:
        raise ValueError("transform would give a negative multiplicity")
    rest = [m for t, m in enumerate(sys.mults) if t not in (i, j)]
    extrap = sys.extrapolated or (mi, mj) != (2, 2)
    return LinearSystem3Fold(image[:3], tuple(rest + [new_mi, new_mj]), extrap)


def iterate_transform(sys: LinearSystem3Fold, r: int) -> LinearSystem3Fold:
    """r transforms, each centred at two double points of the current system."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if sys.double_points() < 2 * r:
        raise ValueError(f"{sys.label()} has fewer than {2 * r} double points")
    cur = sys
    for _ in range(r):
        idx = [t for t, m in enumerate(cur.mults) if m == 2]
        if len(idx) < 2:
            raise ValueError(f"{cur.label()} ran out of double points")
        cur = pic_action(cur, idx[0], idx[1])
    return cur


def closed_form(degrees: tuple[int, int, int], h: int, r: int) -> LinearSystem3Fold:
    """Image of L(d; 2^h) after r transforms, for h = 2r or h = 2r + 1."""
    if h not in (2 * r, 2 * r + 1):
        raise ValueError("closed form covers h = 2r and h = 2r + 1")
    d1, d2, d3 = degrees
    mults = [d1 + d3 - 2] * (2 * r) + [2] * (h - 2 * r)
    return LinearSystem3Fold((d1, r * d1 + d2 + r * d3 - 4 * r, d3), tuple(mults))


def _jet_rows(degrees: tuple[int, int, int], point: tuple[int, int, int], m: int,
              f: PrimeField) -> np.ndarray:
    """Vanishing of all partials of order < m at an affine point of the torus."""
    p = f.p
    exps = list(itertools.product(*(range(d + 1) for d in degrees)))
    orders = [o for o in itertools.product(range(m), repeat=3) if sum(o) < m]
    rows = np.zeros((len(orders), len(exps)), dtype=np.int64)
    for r_i, o in enumerate(orders):
        for c, e in enumerate(exps):
            val = 1
            for ek, ok, xk in zip(e, o, point):
                if ek < ok:
                    val = 0
                    break
                val = val * (math.perm(ek, ok) % p) % p * pow(xk, ek - ok, p) % p
            rows[r_i, c] = val
    return rows


def system_dim_oracle(sys: LinearSystem3Fold, f: PrimeField | None = None, trials: int = 2,
                      seed: int = 0) -> int:
    """Projective dimension of the system at random general points; -1 if empty.

    A rank mod p never exceeds the rank over Q, so each trial gives an upper
    bound; the minimum over trials is returned.
    """
    if sys.is_empty_by_degree():
        return -1
    n_mon = sys.num_monomials
    if n_mon > MAX_MONOMIALS:
        raise OverflowError("system too large for desk scale")
    if not sys.mults:
        return n_mon - 1
    best = None
    for t in range(trials):
        ft = f if f is not None else prime_field(t)
        rng = make_rng(seed, t)
        blocks = []
        for m in sys.mults:
            pt = tuple(int(x) for x in rng.integers(1, ft.p, size=3))
            blocks.append(_jet_rows(sys.degrees, pt, m, ft))
        rank = rank_mod_p(np.vstack(blocks), ft)
        dim = max(n_mon - rank - 1, -1)
        best = dim if best is None else min(best, dim)
    return best


@dataclass
class CremonaStep:
    h: int
    start: LinearSystem3Fold
    reduced: LinearSystem3Fold
    system_dim: int
    secant_dim: int

    def to_json(self) -> dict:
        return {"h": self.h, "start": self.start.label(), "reduced": self.reduced.to_json(),
                "system_dim": self.system_dim, "secant_dim": self.secant_dim}


@dataclass
class CremonaScan:
    report: DefectReport
    steps: list[CremonaStep] = field(default_factory=list)

    def to_json(self) -> dict:
        out = self.report.to_json()
        out["reductions"] = [s.to_json() for s in self.steps]
        return out


def sv111_defect_scan(degrees: tuple[int, int, int], f: PrimeField | None = None,
                      trials: int = 2, seed: int = 0) -> CremonaScan:
    """Secant dimensions of SV_(1,1,1) with multidegree ``degrees`` via Cremona reduction.

    L(d; 2^h) is reduced with floor(h/2) transforms and its dimension is read
    off the smaller system; dim Sec_h = N - dim L - 1.
    """
    degrees = tuple(int(d) for d in degrees)
    if len(degrees) != 3 or min(degrees) < 1:
        raise ValueError("need three positive degrees")
    num = math.prod(d + 1 for d in degrees)
    N = num - 1
    h_max = math.ceil(num / 4)
    entries, steps, primes = [], [], []
    for t in range(trials):
        primes.append((f if f is not None else prime_field(t)).p)
    for h in range(1, h_max + 1):
        start = LinearSystem3Fold(degrees, (2,) * h)
        reduced = iterate_transform(start, h // 2)
        dims = []
        for t in range(trials):
            ft = f if f is not None else prime_field(t)
            sd = system_dim_oracle(reduced, ft, trials=1, seed=seed * 1009 + h * 31 + t)
            dims.append(N - sd - 1)
        exp = expected_dim(3, num, h)
        entries.append(HEntry(h, exp, max(dims), classify(exp, dims), dims, primes))
        steps.append(CremonaStep(h, start, reduced, N - max(dims) - 1, max(dims)))
    label = "SV(1,1,1)(" + ",".join(map(str, degrees)) + ")"
    return CremonaScan(DefectReport(label, 3, num, entries, trials, seed, primes), steps)
