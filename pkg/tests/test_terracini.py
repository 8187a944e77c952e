import random

import pytest
import sympy
from hypothesis import given, strategies as st

from toricsecant.exact import field, rank_exact
from toricsecant.lattice import PointSet, fano_polytope, product_simplex_points
from toricsecant.separation import greedy_extract
from toricsecant.shape import SvShape
from toricsecant.terracini import (
    EVIDENCE,
    PROVED,
    UNKNOWN,
    classify,
    defect_report,
    expected_dim,
    generic_rank,
    one_param_matrix,
    secant_dim_mod_p,
    tangent_matrix_at,
)


def sympy_secant_dim(points, h, seed=0):
    """Rank of the Jacobian of (u_k, lambda_k) -> sum lambda_k u_k^m at random rationals."""
    rnd = random.Random(seed)
    n = len(points[0])
    rows = []
    for _ in range(h):
        u = [sympy.Rational(rnd.randint(1, 97), rnd.randint(1, 13)) for _ in range(n)]
        xs = sympy.symbols(f"x0:{n}")
        monos = [sympy.prod([x**e for x, e in zip(xs, m)]) for m in points]
        sub = dict(zip(xs, u))
        rows.append([mono.subs(sub) for mono in monos])
        for x in xs:
            rows.append([sympy.diff(mono, x).subs(sub) for mono in monos])
    return sympy.Matrix(rows).rank() - 1


@pytest.mark.parametrize("dims,degs,h", [
    ((1, 1), (1, 2), 2),
    ((2,), (2,), 2),
    ((1, 1), (2, 2), 3),
    ((1, 2), (1, 1), 2),
])
def test_oracle_matches_symbolic_jacobian(dims, degs, h):
    pts = product_simplex_points(SvShape(dims, degs)).lattice_points.points
    assert secant_dim_mod_p(PointSet.of(pts), h, trials=2) == sympy_secant_dim(pts, h)


def test_veronese_surface_is_two_defective():
    rep = defect_report(SvShape((2,), (2,)))
    assert rep.entry(2).computed == 4 and rep.entry(2).expected == 5
    assert rep.entry(2).status == EVIDENCE


def test_expected_and_generic_rank():
    assert expected_dim(3, 12, 3) == 11
    assert expected_dim(3, 12, 4) == 11
    assert generic_rank(3, 12) == 3
    with pytest.raises(ValueError):
        expected_dim(3, 12, 0)


def test_classify_rules():
    assert classify(11, [10, 11, 10]) == PROVED
    assert classify(11, [10, 10, 10]) == EVIDENCE
    assert classify(11, [9, 10, 10]) == UNKNOWN


def test_tangent_matrix_shape_and_zero_guard():
    s = product_simplex_points(SvShape((1, 1), (1, 1))).lattice_points
    m = tangent_matrix_at(s, [2, 3], field(0))
    assert m.shape == (3, 4)
    with pytest.raises(ValueError):
        tangent_matrix_at(s, [0, 3], field(0))


@given(st.integers(0, 50))
def test_report_is_reproducible_and_bounded(seed):
    shape = SvShape((1, 1), (2, 1))
    a = defect_report(shape, seed=seed)
    b = defect_report(shape, seed=seed)
    assert a.to_json() == b.to_json()
    for e in a.entries:
        assert e.computed <= e.expected


def test_fano_two_defective():
    rep = defect_report(fano_polytope(), [2])
    assert rep.entry(2).computed == 6 and rep.entry(2).status == EVIDENCE


def test_lower_dimensional_target_rejected():
    with pytest.raises(ValueError):
        defect_report(PointSet.of([(0, 0), (1, 1), (2, 2)]))


def test_one_param_matrix_full_rank_for_separated_simplices():
    # functionals separating disjoint simplices give full rank h(n+1) for large a
    s = product_simplex_points(SvShape((1, 1), (2, 1))).lattice_points
    c = greedy_extract(s, seed=0)
    vs = c.functionals
    n = s.ambient_dim
    for a in (10**4, 10**6):
        m = one_param_matrix(s, vs, a)
        assert rank_exact(m) == min(len(vs) * (n + 1), len(s))
