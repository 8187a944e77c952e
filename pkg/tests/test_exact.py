import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from toricsecant.exact import (
    PRIMES,
    AffineSpan,
    IntMatrix,
    PrimeField,
    affine_dim,
    bareiss_rank,
    derive_seed,
    det_exact,
    field,
    is_affinely_independent,
    make_rng,
    nullspace_mod_p,
    prefix_ranks_mod_p,
    rank_exact,
    rank_mod_p,
)

small_ints = st.integers(-6, 6)


@st.composite
def int_matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [draw(st.lists(small_ints, min_size=c, max_size=c)) for _ in range(r)]


def test_prime_table():
    assert len(PRIMES) == 8
    for p in PRIMES:
        assert sympy.isprime(p) and p < 2**31
    assert PRIMES[0] == 2**31 - 1


def test_prime_field_rejects_composites_and_large():
    with pytest.raises(ValueError):
        PrimeField(2**31 - 3)  # divisible by 5
    with pytest.raises(ValueError):
        PrimeField(2**61 - 1)
    assert PrimeField(7).inv(3) == 5


@given(int_matrices())
def test_rank_matches_sympy(rows):
    expected = sympy.Matrix(rows).rank()
    assert bareiss_rank(rows) == expected
    assert rank_exact(rows) == expected
    assert rank_mod_p(rows, field(0)) <= expected


@given(st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_sympy(rows):
    assert det_exact(rows) == sympy.Matrix(rows).det()


def test_rank_exact_large_entries():
    # entries far beyond int64; rank 2 since row 3 = row 1 + row 2
    big = 10**40
    rows = [[big, 1, 3], [2, big + 7, 5], [big + 2, big + 8, 8]]
    assert rank_exact(rows) == 2
    assert rank_exact(IntMatrix.from_rows(rows)) == 2


@given(int_matrices(), st.sampled_from(range(8)))
def test_nullspace_mod_p(rows, i):
    f = field(i)
    m = np.array(rows, dtype=np.int64) % f.p
    k = nullspace_mod_p(m, f)
    rank = rank_mod_p(m, f)
    assert len(k) == m.shape[1] - rank
    for v in k:
        assert not np.any((m.astype(object) @ v.astype(object)) % f.p)


@given(int_matrices(max_rows=8))
def test_prefix_ranks_monotone_and_final(rows):
    f = field(1)
    pr = prefix_ranks_mod_p(rows, f)
    assert len(pr) == len(rows)
    assert all(b - a in (0, 1) for a, b in zip([0] + pr, pr))
    assert pr[-1] == rank_mod_p(rows, f)


def test_matmul_and_identity():
    a = IntMatrix.from_rows([[1, 2], [3, 4]])
    assert a @ IntMatrix.identity(2) == a
    assert (a @ a).tolist() == [[7, 10], [15, 22]]


@given(st.lists(st.tuples(small_ints, small_ints, small_ints), min_size=1, max_size=6, unique=True))
def test_affine_span_matches_rank(points):
    span = AffineSpan(3)
    kept = [q for q in points if span.try_add(q)]
    expected = sympy.Matrix([[1, *q] for q in points]).rank()
    assert len(kept) == expected
    assert affine_dim(points) == expected - 1
    assert is_affinely_independent(points) == (expected == len(points))


def test_affine_dim_empty_raises():
    with pytest.raises(ValueError):
        affine_dim([])


def test_seeds_are_deterministic():
    assert derive_seed(5, 1, 2) == derive_seed(5, 1, 2)
    assert derive_seed(5, 1, 2) != derive_seed(5, 2, 1)
    a = make_rng(3, 4).integers(0, 10**9, size=5)
    b = make_rng(3, 4).integers(0, 10**9, size=5)
    assert (a == b).all()
