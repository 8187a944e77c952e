import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toricsecant.bounds import (
    PRESETS,
    TABLE_COLUMNS,
    TableSpec,
    expected_secant_dim,
    generic_rank,
    hyperplane_bound,
    hyperplane_bound_exact,
    identifiability_bound,
    maximizing_factor,
    rows_to_csv,
    scan_cell,
    table_rows,
    table_scan,
    theorem_main_bound,
    toric_identifiability_bound,
)
from toricsecant.lattice import fano_polytope, product_simplex_points
from toricsecant.shape import SvShape

shapes = st.integers(1, 3).flatmap(lambda r: st.builds(
    SvShape,
    st.lists(st.integers(1, 3), min_size=r, max_size=r).map(tuple),
    st.lists(st.integers(1, 6), min_size=r, max_size=r).map(tuple),
))


def hand_bound(dims, degs) -> int:
    # min over factors of d/(n+d), times the point count, over (sum n + 1)
    num = 1
    for n, d in zip(dims, degs):
        num *= math.comb(n + d, d)
    frac = min(Fraction(d, n + d) for n, d in zip(dims, degs))
    return math.floor(frac * num / (sum(dims) + 1))


@pytest.mark.parametrize("dims,degs,value", [
    ((1, 1, 1), (2, 2, 2), 4),
    ((1, 1), (5, 3), 6),
    ((1,), (1,), 0),
])
def test_bound_examples(dims, degs, value):
    assert theorem_main_bound(SvShape(dims, degs)) == value


@given(shapes)
def test_bound_matches_hand_formula(shape):
    assert theorem_main_bound(shape) == hand_bound(shape.dims, shape.degs)


@given(shapes.filter(lambda s: s.num_points <= 5000))
def test_bound_equals_hyperplane_bound_on_products(shape):
    p = product_simplex_points(shape)
    hb = hyperplane_bound_exact(p)
    assert hb.proof_grade
    assert hb.value == theorem_main_bound(shape)


def test_maximizing_factor_tie_breaks_low():
    assert maximizing_factor(SvShape((1, 2), (1, 2))) == 0
    assert maximizing_factor(SvShape((1, 3), (2, 2))) == 1


def test_identifiability():
    # (1,1),(5,3): exact bound 6 > 2*2, so identifiable up to 5
    assert identifiability_bound(SvShape((1, 1), (5, 3))) == 5
    assert identifiability_bound(SvShape((1, 1, 1), (2, 2, 2))) is None


def test_fano_hyperplane_bound_is_heuristic():
    hb = hyperplane_bound_exact(fano_polytope())
    assert not hb.proof_grade
    assert hb.value == 1
    assert hyperplane_bound(fano_polytope()) == 1
    assert toric_identifiability_bound(fano_polytope()) is None


def test_expected_and_generic():
    s = SvShape((1, 2), (2, 2))
    assert s.num_points == 18
    assert generic_rank(s) == 5
    assert expected_secant_dim(s, 4) == 15
    assert expected_secant_dim(s, 5) == 17


def test_scan_cell_defective_and_clean():
    bad = scan_cell(SvShape((1, 2), (2, 2)))
    assert bad.verdict == "defective" and bad.defective_hs == [4, 5]
    good = scan_cell(SvShape((1, 2), (3, 2)))
    assert good.verdict == "non_defective" and good.proof == "separation"


def test_table_rows_and_csv():
    spec = TableSpec((1, 2), ((1, 2), (1, 2)))
    cells = table_scan(spec)
    rows = table_rows(cells)
    csv_text = rows_to_csv(rows)
    assert csv_text.splitlines()[0] == ",".join(TABLE_COLUMNS)
    assert {c.shape.degs for c in cells if c.verdict == "defective"} == {(2, 2)}
    assert table_scan(spec, jobs=2)[0].to_json() == cells[0].to_json()


def test_presets_are_valid():
    for spec in PRESETS.values():
        assert spec.shapes()
