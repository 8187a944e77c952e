"""Lattice point sets, lattice polytopes and barycentric polytopes.

Everything here is exact and brute force.  The intended scale is small:
ambient dimension at most 6 and a few thousand lattice points, except for
products of simplices, whose points are enumerated directly.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import sympy
from scipy.spatial import ConvexHull, QhullError

from .exact import ResourceLimitError, affine_dim, bareiss_rank, det_exact
from .shape import SvShape

Point = tuple[int, ...]
Functional = tuple[int, ...]

MAX_SCAN_DIM = 6
MAX_BOX_POINTS = 2_000_000
MAX_SUBSETS = 400_000
DIRECT_FACET_SUBSETS = 2_000
MAX_BARYCENTRIC_POINTS = 16

# Vertices of the Gorenstein toric Fano 3-fold of degree 10 (GRDB toric
# canonical id 523456); X_P is 2-defective although it is not a cone.
FANO_523456_VERTICES: tuple[Point, ...] = (
    (0, 0, 1), (1, 0, 2), (0, 2, 1), (2, 2, 1), (1, 1, 0),
)


def _as_point(x: Iterable[int]) -> Point:
    out = []
    for c in x:
        if isinstance(c, bool) or not isinstance(c, (int, np.integer)):
            raise TypeError(f"lattice coordinates must be integers, got {c!r}")
        out.append(int(c))
    return tuple(out)


@dataclass(frozen=True)
class PointSet:
    """Duplicate-free set of lattice points kept in lexicographic order."""

    ambient_dim: int
    points: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(sorted(_as_point(q) for q in self.points))
        if any(len(q) != self.ambient_dim for q in pts):
            raise ValueError(f"all points must have length {self.ambient_dim}")
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate points")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, points: Iterable[Sequence[int]], ambient_dim: int | None = None) -> "PointSet":
        pts = [tuple(q) for q in points]
        if ambient_dim is None:
            if not pts:
                raise ValueError("cannot infer the ambient dimension of an empty set")
            ambient_dim = len(pts[0])
        return cls(ambient_dim, tuple(pts))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, q) -> bool:
        return tuple(q) in self._index

    @property
    def _index(self) -> dict[Point, int]:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {q: i for i, q in enumerate(self.points)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def index(self, q: Sequence[int]) -> int:
        return self._index[tuple(q)]

    def minus(self, other: Iterable[Sequence[int]]) -> "PointSet":
        drop = {tuple(q) for q in other}
        return PointSet(self.ambient_dim, tuple(q for q in self.points if q not in drop))

    def affine_dim(self) -> int:
        return affine_dim(self.points)

    def is_full_dimensional(self) -> bool:
        return bool(self.points) and self.affine_dim() == self.ambient_dim

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64).reshape(len(self.points), self.ambient_dim)


@dataclass(frozen=True)
class Simplex:
    """n+1 lattice points of Z^n not lying on an affine hyperplane."""

    points: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(sorted(_as_point(q) for q in self.points))
        if not pts:
            raise ValueError("empty simplex")
        n = len(pts[0])
        if len(pts) != n + 1 or len(set(pts)) != n + 1:
            raise ValueError(f"a simplex in Z^{n} has exactly {n + 1} distinct points")
        if affine_dim(pts) != n:
            raise ValueError("points lie on an affine hyperplane")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return len(self.points) - 1

    def barycenter(self) -> tuple[Fraction, ...]:
        k = len(self.points)
        return tuple(Fraction(sum(c), k) for c in zip(*self.points))


def evaluate(v: Sequence[int], q: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(v, q))


@dataclass(frozen=True)
class Polytope:
    """Lattice polytope with its lattice points enumerated.

    ``shape`` is set when the polytope is a product of dilated standard
    simplices; closed forms for facet counts are then available.
    """

    vertices: PointSet
    lattice_points: PointSet
    shape: SvShape | None = None
    facets: tuple[tuple[Functional, int], ...] | None = field(default=None, compare=False)

    @property
    def ambient_dim(self) -> int:
        return self.lattice_points.ambient_dim

    @property
    def provenance(self) -> str:
        return "product_of_simplices" if self.shape is not None else "user"

    def dim(self) -> int:
        return self.lattice_points.affine_dim()

    def is_full_dimensional(self) -> bool:
        return self.lattice_points.is_full_dimensional()

    def to_json(self) -> dict:
        out = {
            "ambient_dim": self.ambient_dim,
            "vertices": [list(q) for q in self.vertices],
            "points": [list(q) for q in self.lattice_points],
        }
        if self.shape is not None:
            out["shape"] = self.shape.to_json()
        return out


# -- products of simplices -------------------------------------------------

def simplex_lattice_points(n: int, d: int) -> list[Point]:
    """Lattice points of d times the standard simplex in Z^n."""
    out = []
    for comp in itertools.product(range(d + 1), repeat=n):
        if sum(comp) <= d:
            out.append(comp)
    return out


def product_simplex_points(shape: SvShape) -> Polytope:
    factors = [simplex_lattice_points(n, d) for n, d in zip(shape.dims, shape.degs)]
    points = [tuple(itertools.chain.from_iterable(t)) for t in itertools.product(*factors)]
    vert_factors = []
    for n, d in zip(shape.dims, shape.degs):
        vs = [tuple([0] * n)]
        vs += [tuple(d if j == i else 0 for j in range(n)) for i in range(n)]
        vert_factors.append(vs)
    verts = [tuple(itertools.chain.from_iterable(t)) for t in itertools.product(*vert_factors)]
    n = shape.dim
    return Polytope(PointSet(n, tuple(verts)), PointSet(n, tuple(points)), shape=shape)


def product_facet_counts(shape: SvShape) -> list[int]:
    """f_j for each factor j: lattice points on a facet coming from factor j."""
    full = [math.comb(n + d, d) for n, d in zip(shape.dims, shape.degs)]
    out = []
    for j, (n, d) in enumerate(zip(shape.dims, shape.degs)):
        rest = math.prod(full[:j] + full[j + 1:])
        out.append(math.comb(d + n - 1, d) * rest)
    return out


# -- hulls -----------------------------------------------------------------

def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = math.gcd(*v)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def _hyperplane_normal(pts: Sequence[Point]) -> tuple[int, ...] | None:
    """Primitive normal of the hyperplane through k affinely independent points of Z^k."""
    base = pts[0]
    k = len(base)
    diffs = [[a - b for a, b in zip(q, base)] for q in pts[1:]]
    normal = []
    for i in range(k):
        minor = [row[:i] + row[i + 1:] for row in diffs]
        normal.append((-1) ** i * det_exact(minor))
    if not any(normal):
        return None
    return _primitive(normal)


def _full_dim_facets(points: Sequence[Point]) -> list[tuple[Functional, int]]:
    """Facets {x : <a, x> <= b} of conv(points), assumed full-dimensional."""
    pts = list(points)
    k = len(pts[0])
    if math.comb(len(pts), k) > DIRECT_FACET_SUBSETS:
        return _facets_from_candidates(pts)
    return _enumerate_facets(pts)


def _facets_from_candidates(pts: list[Point]) -> list[tuple[Functional, int]]:
    """Exact facets from Qhull's vertex guess, accepted only if every point checks out.

    If the candidates contain all vertices, conv(candidates) = conv(pts) and
    its exact facets are those of pts; the containment test confirms this.
    """
    k = len(pts[0])
    try:
        cand = [pts[i] for i in sorted(ConvexHull(np.array(pts, dtype=float)).vertices)]
    except QhullError as e:
        raise ResourceLimitError(f"hull of {len(pts)} points: {e}") from e
    if math.comb(len(cand), k) > MAX_SUBSETS:
        raise ResourceLimitError(f"{math.comb(len(cand), k)} candidate hyperplanes is too many")
    facets = _enumerate_facets(cand)
    arr = np.array(pts, dtype=np.int64)
    for a, b in facets:
        if (arr @ np.array(a, dtype=np.int64)).max() > b:
            raise ResourceLimitError("floating-point hull missed a vertex; exact check failed")
    return facets


def _enumerate_facets(pts: list[Point]) -> list[tuple[Functional, int]]:
    k = len(pts[0])
    arr = np.array(pts, dtype=np.int64)
    seen: set[tuple[Functional, int]] = set()
    out = []
    for sub in itertools.combinations(pts, k):
        normal = _hyperplane_normal(sub)
        if normal is None:
            continue
        vals = arr @ np.array(normal, dtype=np.int64)
        off = evaluate(normal, sub[0])
        if vals.max() <= off:
            key = (normal, off)
        elif vals.min() >= off:
            key = (tuple(-x for x in normal), -off)
        else:
            continue
        if key not in seen:
            seen.add(key)
            out.append(key)
    out.sort()
    return out


@dataclass(frozen=True)
class _Hull:
    """Convex hull data for a point set of affine dimension k.

    Points are mapped injectively to Z^k by keeping the coordinates ``coords``;
    ``equations`` cut out the affine span in the ambient space.
    """

    k: int
    coords: tuple[int, ...]
    facets: tuple[tuple[Functional, int], ...]
    equations: tuple[tuple[int, ...], ...]  # (c0, c) with c0 + <c, x> = 0

    def project(self, x: Sequence[int]) -> Point:
        return tuple(x[i] for i in self.coords)


def _hull(points: Sequence[Point]) -> _Hull:
    pts = list(points)
    n = len(pts[0])
    k = affine_dim(pts)
    base = pts[0]
    diffs = [[a - b for a, b in zip(q, base)] for q in pts[1:]]
    coords: tuple[int, ...] = ()
    if k:
        for cand in itertools.combinations(range(n), k):
            if bareiss_rank([[row[i] for i in cand] for row in diffs]) == k:
                coords = cand
                break
    eqs: list[tuple[int, ...]] = []
    if k < n:
        mat = sympy.Matrix([[1, *q] for q in pts])
        for vec in mat.nullspace():
            den = sympy.ilcm(*[sympy.fraction(x)[1] for x in vec])
            eqs.append(_primitive([int(x * den) for x in vec]))
    if k == 0:
        facets: list[tuple[Functional, int]] = []
    else:
        proj = sorted({tuple(q[i] for i in coords) for q in pts})
        facets = _full_dim_facets(proj)
    return _Hull(k, coords, tuple(facets), tuple(eqs))


def _members(h: _Hull, cand: np.ndarray) -> np.ndarray:
    mask = np.ones(len(cand), dtype=bool)
    for eq in h.equations:
        mask &= (eq[0] + cand @ np.array(eq[1:], dtype=np.int64)) == 0
    if h.k:
        proj = cand[:, list(h.coords)]
        for a, b in h.facets:
            mask &= proj @ np.array(a, dtype=np.int64) <= b
    return mask


def lattice_points_from_vertices(vertices: Iterable[Sequence[int]]) -> Polytope:
    """All lattice points of conv(vertices) by an exact bounding-box scan."""
    vs = PointSet.of(vertices)
    if not len(vs):
        raise ValueError("no vertices")
    n = vs.ambient_dim
    if n > MAX_SCAN_DIM:
        raise ResourceLimitError(f"bounding-box scan limited to dimension {MAX_SCAN_DIM}")
    arr = vs.as_array()
    lo, hi = arr.min(axis=0), arr.max(axis=0)
    box = int(np.prod(hi - lo + 1))
    if box > MAX_BOX_POINTS:
        raise ResourceLimitError(f"bounding box has {box} points")
    h = _hull(vs.points)
    grids = np.indices(tuple(int(x) for x in hi - lo + 1)).reshape(n, -1).T + lo
    inside = grids[_members(h, grids)]
    pts = PointSet(n, tuple(tuple(int(c) for c in q) for q in inside))
    true_vertices = _vertices_of(h, vs.points)
    return Polytope(PointSet(n, tuple(true_vertices)), pts,
                    facets=h.facets if h.k == n else None)


def _vertices_of(h: _Hull, points: Sequence[Point]) -> list[Point]:
    if h.k == 0:
        return list(points[:1])
    out = []
    for q in points:
        pq = h.project(q)
        tight = [a for a, b in h.facets if evaluate(a, pq) == b]
        if tight and bareiss_rank(tight) == h.k:
            out.append(q)
    return out


def polytope_from_points(points: Iterable[Sequence[int]]) -> Polytope:
    """Polytope given by (a superset of) its lattice points; re-enumerates the hull."""
    ps = PointSet.of(points)
    h = _hull(ps.points)
    return lattice_points_from_vertices(_vertices_of(h, ps.points))


def facets_of(p: Polytope) -> tuple[tuple[Functional, int], ...]:
    if not p.is_full_dimensional():
        raise ValueError("facets are only computed for full-dimensional polytopes")
    if p.facets is not None:
        return p.facets
    return tuple(_full_dim_facets(p.vertices.points))


def facet_point_counts(p: Polytope) -> list[int]:
    """Lattice points on each facet, by explicit facet enumeration."""
    arr = p.lattice_points.as_array()
    return [int(np.count_nonzero(arr @ np.array(a, dtype=np.int64) == b)) for a, b in facets_of(p)]


def max_facet_points(p: Polytope) -> int:
    """Largest number of lattice points on a facet of a full-dimensional polytope."""
    if p.shape is not None:
        return max(product_facet_counts(p.shape))
    if not p.is_full_dimensional():
        raise ValueError("degenerate polytope: not full-dimensional")
    return max(facet_point_counts(p))


def max_hyperplane_points(points: Sequence[Sequence[int]]) -> int:
    """Largest number of the given points on one affine hyperplane (brute force)."""
    pts = [tuple(q) for q in points]
    n = len(pts[0])
    if affine_dim(pts) < n:
        return len(pts)
    if math.comb(len(pts), n) > MAX_SUBSETS:
        raise ResourceLimitError("too many candidate hyperplanes")
    arr = np.array(pts, dtype=np.int64)
    best = 0
    for sub in itertools.combinations(pts, n):
        normal = _hyperplane_normal(sub)
        if normal is None:
            continue
        cnt = int(np.count_nonzero(arr @ np.array(normal, dtype=np.int64) == evaluate(normal, sub[0])))
        best = max(best, cnt)
    return best


def facet_reduction_verified(p: Polytope) -> bool:
    """Whether facet maxima are certified to bound every hyperplane section.

    Checks the hypothesis with the coordinate functionals: for every
    coordinate i there must be a facet F with x_j(F) = x_j(P) for all j != i.
    Products of simplices satisfy it with the facets {x_i = 0}.
    """
    if p.shape is not None:
        return True
    if not p.is_full_dimensional():
        return False
    arr = p.lattice_points.as_array()
    n = p.ambient_dim
    full_vals = [set(arr[:, j].tolist()) for j in range(n)]
    on_facet = [arr[arr @ np.array(a, dtype=np.int64) == b] for a, b in facets_of(p)]
    for i in range(n):
        ok = False
        for sub in on_facet:
            if all(set(sub[:, j].tolist()) == full_vals[j] for j in range(n) if j != i):
                ok = True
                break
        if not ok:
            return False
    return True


def convex_hull_vertices(points: Iterable[Sequence[int]]) -> list[Point]:
    """Exact vertex set of conv(points) for integer points."""
    pts = sorted({tuple(int(c) for c in q) for q in points})
    if len(pts) <= 1:
        return pts
    k = affine_dim(pts)
    if k == 0:
        return pts[:1]
    h_coords = _hull_coords(pts, k)
    proj = {q: tuple(q[i] for i in h_coords) for q in pts}
    if k == 1:
        lo = min(pts, key=lambda q: proj[q])
        hi = max(pts, key=lambda q: proj[q])
        return sorted({lo, hi})
    if k == 2:
        chain = _monotone_chain(sorted(set(proj.values())))
        keep = set(chain)
        return sorted(q for q in pts if proj[q] in keep)
    h = _hull(pts)
    return sorted(_vertices_of(h, pts))


def _hull_coords(pts: Sequence[Point], k: int) -> tuple[int, ...]:
    base = pts[0]
    diffs = [[a - b for a, b in zip(q, base)] for q in pts[1:]]
    for cand in itertools.combinations(range(len(base)), k):
        if bareiss_rank([[row[i] for i in cand] for row in diffs]) == k:
            return cand
    raise AssertionError("unreachable: affine dimension mismatch")


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _monotone_chain(pts: list[Point]) -> list[Point]:
    lower: list[Point] = []
    for q in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], q) <= 0:
            lower.pop()
        lower.append(q)
    upper: list[Point] = []
    for q in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], q) <= 0:
            upper.pop()
        upper.append(q)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class BarycentricPolytope:
    vertices: tuple[tuple[Fraction, ...], ...]
    multiplicity: dict[tuple[Fraction, ...], int]
    simplex_count: int

    def shared(self) -> dict[tuple[Fraction, ...], int]:
        return {b: c for b, c in self.multiplicity.items() if c >= 2}


def barycentric_polytope(s: PointSet) -> BarycentricPolytope:
    """Convex hull of the barycenters of all simplices contained in s."""
    if len(s) > MAX_BARYCENTRIC_POINTS:
        raise ResourceLimitError(f"barycentric polytope limited to {MAX_BARYCENTRIC_POINTS} points")
    n = s.ambient_dim
    sums: Counter[Point] = Counter()
    total = 0
    for sub in itertools.combinations(s.points, n + 1):
        if bareiss_rank([[1, *q] for q in sub]) == n + 1:
            sums[tuple(map(sum, zip(*sub)))] += 1
            total += 1

    def scaled(v: Point) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, n + 1) for c in v)

    verts = convex_hull_vertices(sums) if sums else []
    return BarycentricPolytope(
        vertices=tuple(scaled(v) for v in verts),
        multiplicity={scaled(v): c for v, c in sums.items()},
        simplex_count=total,
    )


# -- file format -------------------------------------------------------------

def polytope_from_json(data: dict) -> Polytope:
    """Parse {"ambient_dim": n, "vertices": [...]} or {"points": [...]}."""
    if "shape" in data:
        shape = SvShape(tuple(data["shape"]["dims"]), tuple(data["shape"]["degs"]))
        return product_simplex_points(shape)
    if "vertices" in data:
        key = "vertices"
    elif "points" in data:
        key = "points"
    else:
        raise ValueError("polytope file needs a 'vertices' or 'points' list")
    raw = data[key]
    if not isinstance(raw, list) or not raw:
        raise ValueError(f"'{key}' must be a nonempty list")
    pts = [_as_point(q) for q in raw]
    n = data.get("ambient_dim", len(pts[0]))
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError("ambient_dim must be an integer")
    if any(len(q) != n for q in pts):
        raise ValueError(f"every point must have {n} coordinates")
    if key == "vertices":
        return lattice_points_from_vertices(pts)
    return polytope_from_points(pts)


def load_polytope(path: str | Path) -> Polytope:
    with open(path) as fh:
        return polytope_from_json(json.load(fh))


def fano_polytope() -> Polytope:
    return lattice_points_from_vertices(FANO_523456_VERTICES)
