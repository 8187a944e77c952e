from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class SvShape:
    """Dimensions (n_1..n_r) and degrees (d_1..d_r) of a Segre-Veronese product."""

    dims: tuple[int, ...]
    degs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(x) for x in self.dims))
        object.__setattr__(self, "degs", tuple(int(x) for x in self.degs))
        if not self.dims:
            raise ValueError("a shape needs at least one factor")
        if len(self.dims) != len(self.degs):
            raise ValueError("dims and degs must have the same length")
        if min(self.dims) < 1 or min(self.degs) < 1:
            raise ValueError("all dimensions and degrees must be >= 1")

    @classmethod
    def parse(cls, dims: str, degs: str) -> "SvShape":
        return cls(_parse_ints(dims), _parse_ints(degs))

    @property
    def r(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        """Dimension of the variety, sum of the n_i."""
        return sum(self.dims)

    @property
    def num_points(self) -> int:
        """N + 1, the number of lattice points of the product polytope."""
        return math.prod(math.comb(n + d, d) for n, d in zip(self.dims, self.degs))

    @property
    def ambient(self) -> int:
        """N, the dimension of the ambient projective space."""
        return self.num_points - 1

    def ratio(self, i: int) -> Fraction:
        return Fraction(self.dims[i], self.degs[i])

    def label(self) -> str:
        return f"SV({','.join(map(str, self.dims))};{','.join(map(str, self.degs))})"

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "degs": list(self.degs)}


def _parse_ints(text: str) -> tuple[int, ...]:
    parts = [t for t in text.replace(" ", "").split(",") if t]
    if not parts:
        raise ValueError(f"empty integer list: {text!r}")
    return tuple(int(t) for t in parts)
