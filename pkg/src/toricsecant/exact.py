"""Exact linear algebra over the integers and over prime fields.

Everything downstream reduces to ranks of integer matrices.  Integer ranks
use fraction-free (Bareiss) elimination; prime-field ranks use vectorised
Gaussian elimination on int64 arrays, which is safe because every modulus
is below 2**31 and products of two residues therefore fit in 63 bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from sympy import isprime

# Largest primes below 2**31, in decreasing order.
PRIMES: tuple[int, ...] = (
    2147483647,
    2147483629,
    2147483587,
    2147483579,
    2147483563,
    2147483549,
    2147483543,
    2147483497,
)


class ResourceLimitError(RuntimeError):
    """Raised when a desk-scale computation would blow past its size budget."""


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix with arbitrary-precision entries, row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        b = other.tolist()
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.append([sum(r[k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)])
        return IntMatrix.from_rows(out, other.cols)


MatrixLike = Union[IntMatrix, Sequence[Sequence[int]], np.ndarray]


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if self.p < 2 or not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p >= 2**31:
            raise ValueError("modulus must be below 2**31 for int64 arithmetic")

    def inv(self, x: int) -> int:
        return pow(int(x) % self.p, -1, self.p)


def field(i: int = 0) -> PrimeField:
    """The i-th field from the fixed prime table (wrapping around)."""
    return PrimeField(PRIMES[i % len(PRIMES)])


def _as_rows(m: MatrixLike) -> list[list[int]]:
    if isinstance(m, IntMatrix):
        return m.tolist()
    if isinstance(m, np.ndarray):
        return [[int(x) for x in row] for row in m.tolist()]
    return [[int(x) for x in row] for row in m]


def _shape(rows: list[list[int]], m: MatrixLike) -> tuple[int, int]:
    if isinstance(m, IntMatrix):
        return m.rows, m.cols
    if isinstance(m, np.ndarray) and m.ndim == 2:
        return m.shape
    return len(rows), (len(rows[0]) if rows else 0)


def bareiss_rank(m: MatrixLike) -> int:
    """Rank over Q by fraction-free elimination; all intermediates stay integral."""
    a = _as_rows(m)
    nrows, ncols = _shape(a, m)
    rank, prev = 0, 1
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        top = a[rank]
        p = top[c]
        for i in range(rank + 1, nrows):
            ai = a[i]
            f = ai[c]
            for j in range(c + 1, ncols):
                ai[j] = (p * ai[j] - f * top[j]) // prev
            ai[c] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def det_exact(m: MatrixLike) -> int:
    """Determinant of a square integer matrix (Bareiss)."""
    a = _as_rows(m)
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("square matrix required")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank_exact(m: MatrixLike) -> int:
    """Rank over the rationals.

    A full-rank reduction modulo a large prime already proves full rank over
    Q (a nonzero minor mod p is a nonzero integer), so that cheap path is tried
    first; anything short of full rank is settled by Bareiss elimination.
    """
    rows = _as_rows(m)
    nrows, ncols = _shape(rows, m)
    if nrows == 0 or ncols == 0:
        return 0
    full = min(nrows, ncols)
    if rank_mod_p(rows, field(0)) == full:
        return full
    return bareiss_rank(rows)


def to_residues(m: MatrixLike, f: PrimeField) -> np.ndarray:
    if isinstance(m, np.ndarray) and m.dtype != object:
        return np.mod(m.astype(np.int64), f.p)
    rows = _as_rows(m)
    nrows, ncols = _shape(rows, m)
    out = np.zeros((nrows, ncols), dtype=np.int64)
    for i, r in enumerate(rows):
        out[i, :] = [x % f.p for x in r]
    return out


def prefix_ranks_mod_p(m: MatrixLike, f: PrimeField) -> list[int]:
    """ranks[i] = rank of the first i+1 rows of m over F_p.

    Rows are processed top to bottom; each new pivot is eliminated from all
    rows below it, so a row that reaches its turn fully reduced is dependent
    on the rows above.
    """
    p = f.p
    a = to_residues(m, f)
    nrows, ncols = a.shape
    ranks: list[int] = []
    r = 0
    for i in range(nrows):
        if r < ncols:
            row = a[i]
            nz = np.flatnonzero(row)
            if nz.size:
                c = nz[0]
                row = (row * pow(int(row[c]), -1, p)) % p
                a[i] = row
                below = a[i + 1:]
                col = below[:, c]
                hit = np.flatnonzero(col)
                if hit.size:
                    upd = (col[hit, None] * row[None, :]) % p
                    below[hit] = (below[hit] - upd) % p
                r += 1
        ranks.append(r)
    return ranks


def rank_mod_p(m: MatrixLike, f: PrimeField) -> int:
    """Rank of m reduced modulo p; never exceeds the rational rank."""
    ranks = prefix_ranks_mod_p(m, f)
    return ranks[-1] if ranks else 0


def nullspace_mod_p(m: MatrixLike, f: PrimeField) -> np.ndarray:
    """Basis (as rows) of the right kernel {x : m x = 0} over F_p."""
    p = f.p
    a = to_residues(m, f)
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        hit = np.flatnonzero(a[r:, c])
        if not hit.size:
            continue
        k = r + hit[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - (a[others, c][:, None] * a[r][None, :]) % p) % p
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-a[i, fc]) % p
    return basis


def homogenize(points: Iterable[Sequence[int]]) -> list[list[int]]:
    return [[1, *map(int, q)] for q in points]


def affine_dim(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine span of a nonempty point set."""
    pts = list(points)
    if not pts:
        raise ValueError("affine span of the empty set is undefined")
    return bareiss_rank(homogenize(pts)) - 1


class AffineSpan:
    """Incrementally grown affine span with exact integer row reduction.

    Points are stored homogenised as (1, x); ``try_add`` keeps a point only
    if it is affinely independent of those already accepted.
    """

    def __init__(self, ambient_dim: int):
        self.ambient_dim = ambient_dim
        self._rows: list[tuple[int, list[int]]] = []

    @property
    def size(self) -> int:
        return len(self._rows)

    @property
    def dim(self) -> int:
        return len(self._rows) - 1

    def _reduce(self, x: Sequence[int]) -> list[int]:
        v = [1, *map(int, x)]
        for piv, b in self._rows:
            if v[piv]:
                bp, vp = b[piv], v[piv]
                v = [bp * vi - vp * bi for vi, bi in zip(v, b)]
                g = math.gcd(*v)
                if g > 1:
                    v = [vi // g for vi in v]
        return v

    def is_independent(self, x: Sequence[int]) -> bool:
        return any(self._reduce(x))

    def try_add(self, x: Sequence[int]) -> bool:
        v = self._reduce(x)
        piv = next((i for i, vi in enumerate(v) if vi), None)
        if piv is None:
            return False
        self._rows.append((piv, v))
        return True


def is_affinely_independent(points: Sequence[Sequence[int]]) -> bool:
    pts = list(points)
    if not pts:
        return True
    return bareiss_rank(homogenize(pts)) == len(pts)


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministic 63-bit child seed from a parent seed and integer keys."""
    ss = np.random.SeedSequence([int(seed) & (2**64 - 1), *(int(k) for k in keys)])
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), *(int(k) for k in keys)]))
