"""Flattenings of partially symmetric tensors and defectiveness certificates.

A tensor T in Sym^{d_1} V_1 (x) ... (x) Sym^{d_r} V_r is stored as a
multihomogeneous polynomial in the monomial basis.  For a split d = a + b
the flattening has rows indexed by the order-a partial derivatives and
columns by the degree-b monomials: entry (alpha, beta) is the coefficient
of x^beta in d^alpha T.

If h general points of the Segre-Veronese variety give a flattening of rank
r < min(rows, cols), every point of Sec_h lies on the rank <= r locus Z.
At such a point the (r+1)-minors have differentials X -> u^T F(X) w with u
and w in the left and right kernels, so dim Sec_h <= N - q where q is the
rank of those functionals.  Comparing with the expected dimension gives the
certificate; working mod p makes it evidence unless a known family applies.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exact import PrimeField, field as prime_field, make_rng, nullspace_mod_p, rank_mod_p
from .shape import SvShape
from .terracini import expected_dim

Monomial = tuple[int, ...]
MultiMonomial = tuple[Monomial, ...]

MAX_SIDE = 400


def monomials(nvars: int, degree: int) -> list[Monomial]:
    """Exponent vectors of total degree ``degree``, lexicographically decreasing."""
    out = []
    for comb in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in comb:
            e[i] += 1
        out.append(tuple(e))
    return sorted(set(out), reverse=True)


def multi_monomials(shape: SvShape, degs: Sequence[int]) -> list[MultiMonomial]:
    per = [monomials(n + 1, d) for n, d in zip(shape.dims, degs)]
    return list(itertools.product(*per))


def _mfact(e: Monomial) -> int:
    return math.prod(math.factorial(x) for x in e)


@dataclass(frozen=True)
class FlatteningSplit:
    """d_i = a_i + b_i; rows are order-a derivatives, columns degree-b monomials."""

    shape: SvShape
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        if len(self.a) != self.shape.r or len(self.b) != self.shape.r:
            raise ValueError("split must have one entry per factor")
        if min(self.a) < 0 or min(self.b) < 0:
            raise ValueError("split entries must be non-negative")
        if any(x + y != d for x, y, d in zip(self.a, self.b, self.shape.degs)):
            raise ValueError("a_i + b_i must equal d_i")

    @classmethod
    def from_a(cls, shape: SvShape, a: Sequence[int]) -> "FlatteningSplit":
        return cls(shape, tuple(a), tuple(d - x for d, x in zip(shape.degs, a)))

    @property
    def rows(self) -> int:
        return math.prod(math.comb(n + x, x) for n, x in zip(self.shape.dims, self.a))

    @property
    def cols(self) -> int:
        return math.prod(math.comb(n + x, x) for n, x in zip(self.shape.dims, self.b))

    def is_trivial(self) -> bool:
        return self.rows == 1 or self.cols == 1

    def transpose(self) -> "FlatteningSplit":
        return FlatteningSplit(self.shape, self.b, self.a)

    def to_json(self) -> dict:
        return {"a": list(self.a), "b": list(self.b), "rows": self.rows, "cols": self.cols}


@dataclass(frozen=True)
class RankOnePoint:
    """Linear forms l_1..l_r; the tensor is l_1^{d_1} (x) ... (x) l_r^{d_r}."""

    factors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if any(not any(v) for v in self.factors):
            raise ValueError("each factor vector must be nonzero")


def random_rank_one_point(shape: SvShape, f: PrimeField, rng: np.random.Generator) -> RankOnePoint:
    return RankOnePoint(tuple(
        tuple(int(x) for x in rng.integers(1, f.p, size=n + 1)) for n in shape.dims
    ))


def _power_vector(vec: Sequence[int], basis: Sequence[MultiMonomial], p: int,
                  coeffs: Sequence[int] | None = None) -> np.ndarray:
    """prod_i l_i^{e_i} for every multi-monomial e in basis, times optional coefficients."""
    out = np.empty(len(basis), dtype=np.int64)
    for k, mm in enumerate(basis):
        val = 1
        for lin, e in zip(vec, mm):
            for x, ex in zip(lin, e):
                if ex:
                    val = val * pow(x, ex, p) % p
        if coeffs is not None:
            val = val * coeffs[k] % p
        out[k] = val
    return out


def flattening_matrix(split: FlatteningSplit, points: Sequence[RankOnePoint], f: PrimeField) -> np.ndarray:
    """Flattening of the sum of the rank-one tensors, over F_p.

    For l^d the entry (alpha, beta) is d!/b! * l^alpha * multinom(b; beta) l^beta
    per factor; the multinomials sit on the derivative side, so p must exceed
    every degree involved.
    """
    if not points:
        raise ValueError("need at least one rank-one point")
    if split.rows > MAX_SIDE or split.cols > MAX_SIDE:
        raise OverflowError("flattening too large for desk scale")
    p = f.p
    if max(split.shape.degs) >= p:
        raise ValueError("prime must exceed the degrees")
    rows = multi_monomials(split.shape, split.a)
    cols = multi_monomials(split.shape, split.b)
    scale = math.prod(math.factorial(d) // math.factorial(b)
                      for d, b in zip(split.shape.degs, split.b)) % p
    col_coef = [math.prod(math.factorial(b) // _mfact(e) for b, e in zip(split.b, mm)) % p for mm in cols]
    m = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for pt in points:
        u = _power_vector(pt.factors, rows, p)
        w = _power_vector(pt.factors, cols, p, col_coef)
        u = (u * scale) % p
        m = (m + (u[:, None] * w[None, :]) % p) % p
    return m


def tensor_coefficients(shape: SvShape, points: Sequence[RankOnePoint], f: PrimeField) -> dict[MultiMonomial, int]:
    """Monomial coefficients of sum_k prod_i l_{k,i}^{d_i} over F_p."""
    p = f.p
    basis = multi_monomials(shape, shape.degs)
    coef = [math.prod(math.factorial(d) // _mfact(e) for d, e in zip(shape.degs, mm)) % p for mm in basis]
    total = np.zeros(len(basis), dtype=np.int64)
    for pt in points:
        total = (total + _power_vector(pt.factors, basis, p, coef)) % p
    return {mm: int(c) for mm, c in zip(basis, total)}


def _add(x: MultiMonomial, y: MultiMonomial) -> MultiMonomial:
    return tuple(tuple(a + b for a, b in zip(u, v)) for u, v in zip(x, y))


def _weight(alpha: MultiMonomial, beta: MultiMonomial) -> int:
    """(alpha+beta)!/beta!: the factor picked up by x^beta when differentiating x^(alpha+beta)."""
    return math.prod(_mfact(g) // _mfact(b) for g, b in zip(_add(alpha, beta), beta))


def flattening_of_tensor(split: FlatteningSplit, coeffs: dict[MultiMonomial, int], f: PrimeField) -> np.ndarray:
    """Flattening of an arbitrary tensor given by its monomial coefficients."""
    p = f.p
    rows = multi_monomials(split.shape, split.a)
    cols = multi_monomials(split.shape, split.b)
    m = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for i, al in enumerate(rows):
        for j, be in enumerate(cols):
            m[i, j] = coeffs.get(_add(al, be), 0) * _weight(al, be) % p
    return m


def tangent_codim_bound(split: FlatteningSplit, m: np.ndarray, f: PrimeField) -> int:
    """Rank q of the functionals X -> u^T F(X) w, u, w in the kernels of m.

    dim Sec_h <= N - q whenever m is the flattening at a general point of Sec_h.
    """
    p = f.p
    left = nullspace_mod_p(m.T, f)
    right = nullspace_mod_p(m, f)
    if not len(left) or not len(right):
        return 0
    rows = multi_monomials(split.shape, split.a)
    cols = multi_monomials(split.shape, split.b)
    gammas = multi_monomials(split.shape, split.shape.degs)
    gidx = {g: k for k, g in enumerate(gammas)}
    target = np.empty((len(rows), len(cols)), dtype=np.int64)
    wt = np.empty((len(rows), len(cols)), dtype=np.int64)
    for i, al in enumerate(rows):
        for j, be in enumerate(cols):
            target[i, j] = gidx[_add(al, be)]
            wt[i, j] = _weight(al, be) % p
    funcs = []
    for u in left:
        for w in right:
            g = (((u[:, None] * w[None, :]) % p) * wt) % p
            vec = np.zeros(len(gammas), dtype=np.int64)
            np.add.at(vec, target.ravel(), g.ravel())
            funcs.append(vec % p)
    return rank_mod_p(np.array(funcs), f)


def known_family(shape: SvShape, h: int) -> str | None:
    """Name of a family for which flattening defectiveness is established."""
    if shape.r != 3 or shape.dims[:2] != (1, 1) or shape.degs[0] != 1 or shape.degs[2] != 1:
        return None
    n, d = shape.dims[2], shape.degs[1]
    if n == 2:
        if d >= 3 and (d - 3) % 5 == 0 and h == 6 * ((d - 3) // 5) + 5:
            return "square_catalecticant_blocks"
        if d >= 5 and (d - 5) % 5 == 0 and h == 6 * ((d - 5) // 5) + 7:
            return "hypersurface_two_equations"
    if n >= 2 and d >= 2:
        for d1 in range(1, d):
            d2 = d - d1
            if 2 * (d1 + 1) == (d2 + 1) * (n + 1) and h == 2 * d1 + 1:
                return "balanced_square_split"
    scripted = {(3, 3): 5, (3, 6): 9, (3, 9): 13, (4, 4): 7, (4, 7): 11, (5, 4): 7, (5, 5): 9}
    if scripted.get((n, d)) == h:
        return "scripted_case"
    return None


NO_CERTIFICATE = "no_certificate"
FLAT_EVIDENCE = "defective_evidence"
FLAT_PROVED = "defective_proved"


@dataclass
class FlatteningCertificate:
    shape: SvShape
    split: FlatteningSplit
    h: int
    status: str
    expected_dim: int
    primes: list[int] = field(default_factory=list)
    observed_ranks: list[int] = field(default_factory=list)
    tangent_codims: list[int] = field(default_factory=list)
    dim_upper_bounds: list[int] = field(default_factory=list)
    family: str | None = None
    seed: int = 0

    @property
    def fired(self) -> bool:
        return self.status != NO_CERTIFICATE

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "shape": self.shape.to_json(),
            "split": self.split.to_json(),
            "h": self.h,
            "status": self.status,
            "expected_dim": self.expected_dim,
            "primes": self.primes,
            "observed_ranks": self.observed_ranks,
            "tangent_codims": self.tangent_codims,
            "dim_upper_bounds": self.dim_upper_bounds,
            "family": self.family,
            "seed": self.seed,
        }


def flattening_defect_certificate(shape: SvShape, split: FlatteningSplit, h: int,
                                  f: PrimeField | None = None, trials: int = 2,
                                  seed: int = 0) -> FlatteningCertificate:
    """Evidence that Sec_h has smaller than expected dimension, from one flattening.

    Each trial draws h random rank-one points over its own prime (the fixed
    table rotates unless ``f`` is given).  The certificate fires only when
    every trial bounds dim Sec_h strictly below the expected dimension.
    """
    if split.shape != shape:
        raise ValueError("split belongs to another shape")
    if h < 1:
        raise ValueError("h must be >= 1")
    if split.is_trivial() or h >= min(split.rows, split.cols):
        raise ValueError(
            "a flattening can only witness defectiveness when h rank-one points leave it "
            f"rank deficient; need h < min(rows, cols) = {min(split.rows, split.cols)}"
        )
    N = shape.ambient
    exp = expected_dim(shape.dim, shape.num_points, h)
    cert = FlatteningCertificate(shape, split, h, NO_CERTIFICATE, exp, seed=seed)
    fires = True
    for t in range(trials):
        ft = f if f is not None else prime_field(t)
        rng = make_rng(seed, h, t)
        pts = [random_rank_one_point(shape, ft, rng) for _ in range(h)]
        m = flattening_matrix(split, pts, ft)
        r = rank_mod_p(m, ft)
        q = tangent_codim_bound(split, m, ft) if r < min(m.shape) else 0
        cert.primes.append(ft.p)
        cert.observed_ranks.append(r)
        cert.tangent_codims.append(q)
        cert.dim_upper_bounds.append(N - q)
        fires &= (N - q) < exp
    if fires:
        cert.family = known_family(shape, h)
        cert.status = FLAT_PROVED if cert.family else FLAT_EVIDENCE
    return cert


def split_search(shape: SvShape, h: int, max_side: int = 120, trials: int = 2,
                 seed: int = 0) -> list[FlatteningCertificate]:
    """All splits (up to transposition) whose flattening certificate fires."""
    out = []
    for a in itertools.product(*(range(d + 1) for d in shape.degs)):
        split = FlatteningSplit.from_a(shape, a)
        if split.a > split.b or split.is_trivial():
            continue
        if split.rows > max_side or split.cols > max_side:
            continue
        if h >= min(split.rows, split.cols):
            continue
        cert = flattening_defect_certificate(shape, split, h, trials=trials, seed=seed)
        if cert.fired:
            out.append(cert)
    return out
