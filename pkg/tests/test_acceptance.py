"""Acceptance suite: one test per criterion, each timed against its budget.

A PASS/FAIL line per criterion is printed in the terminal summary (see
conftest.py) or when the module is run as a script.
"""
import itertools
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction

from toricsecant.bounds import PRESETS, hyperplane_bound, table_scan, theorem_main_bound
from toricsecant.cremona import (
    PICARD_MATRIX,
    LinearSystem3Fold,
    closed_form,
    iterate_transform,
    pic_action,
    system_dim_oracle,
)
from toricsecant.exact import IntMatrix, affine_dim, make_rng
from toricsecant.flattening import FlatteningSplit, flattening_defect_certificate, split_search
from toricsecant.lattice import PointSet, barycentric_polytope, fano_polytope, product_simplex_points
from toricsecant.separation import (
    brute_force_max_simplices,
    certify_non_defective,
    greedy_extract,
    max_weight_simplex,
    random_injective_functional,
    verify_certificate,
)
from toricsecant.shape import SvShape
from toricsecant.terracini import PROVED, defect_report

RESULTS: dict[str, str] = {}


@contextmanager
def criterion(name: str, budget: float):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException as e:
        RESULTS[name] = f"FAIL {name} ({time.perf_counter() - t0:.2f}s): {e!r}"[:300]
        raise
    elapsed = time.perf_counter() - t0
    ok = elapsed < budget
    RESULTS[name] = f"{'PASS' if ok else 'FAIL'} {name} ({elapsed:.2f}s, budget {budget:.0f}s)"
    assert ok, f"{name} took {elapsed:.2f}s > {budget}s"


def _random_point_set(rng: random.Random, max_size: int) -> PointSet:
    while True:
        n = rng.choice((2, 3))
        size = rng.randint(n + 1, max_size)
        pts = {tuple(rng.randint(0, 4) for _ in range(n)) for _ in range(size)}
        if len(pts) > n and affine_dim(list(pts)) == n:
            return PointSet.of(pts)


def test_ac1_bound_formula_suite():
    with criterion("AC1 bound formula suite", 10):
        rng = random.Random(1)
        shapes = set()
        while len(shapes) < 50:
            r = rng.randint(1, 3)
            s = SvShape(tuple(rng.randint(1, 3) for _ in range(r)), tuple(rng.randint(1, 7) for _ in range(r)))
            if s.num_points <= 10**5:
                shapes.add(s)
        for s in sorted(shapes, key=lambda s: (s.dims, s.degs)):
            hand = min(Fraction(d, n + d) for n, d in zip(s.dims, s.degs)) * s.num_points / (s.dim + 1)
            assert theorem_main_bound(s) == math.floor(hand), s
            assert hyperplane_bound(product_simplex_points(s)) == theorem_main_bound(s), s


def test_ac2_separation_completeness():
    with criterion("AC2 separation completeness", 30):
        for shape in (SvShape((1, 1), (5, 3)), SvShape((1, 2), (3, 2))):
            poly = product_simplex_points(shape)
            completes = 0
            for seed in range(5):
                v = certify_non_defective(poly, runs=5, seed=seed)
                assert verify_certificate(v.certificate)
                completes += v.complete
            assert completes >= 1, shape


def test_ac3_greedy_equals_brute_force():
    with criterion("AC3 matroid greedy equals brute force", 60):
        rng = random.Random(3)
        for i in range(200):
            s = _random_point_set(rng, 12)
            v = random_injective_functional(s.points, make_rng(3, i))
            best = max_weight_simplex(list(s.points), v)
            _, arg = brute_force_max_simplices(list(s.points), v)
            assert len(arg) == 1 and set(best) == set(arg[0]), (s, v)


def test_ac4_shared_barycenters_never_vertices():
    with criterion("AC4 shared barycenters are not vertices", 60):
        rng = random.Random(4)
        violations = 0
        for _ in range(200):
            b = barycentric_polytope(_random_point_set(rng, 10))
            violations += len(set(b.shared()) & set(b.vertices))
        assert violations == 0


def _oracle_case(name, target, h, check):
    with criterion(f"AC5{name}", 20):
        rep = defect_report(target, [h] if h else None, trials=3)
        assert len(set(rep.primes)) >= 2
        check(rep)


def test_ac5a_segre_veronese_121():
    def check(rep):
        e = rep.entry(3)
        assert (e.computed, e.expected) == (10, 11)
    _oracle_case("a oracle (1,1,1),(1,2,1) h=3", SvShape((1, 1, 1), (1, 2, 1)), 3, check)


def test_ac5b_segre_222():
    def check(rep):
        e = rep.entry(4)
        assert (e.computed, e.expected) == (25, 26)
    _oracle_case("b oracle (2,2,2),(1,1,1) h=4", SvShape((2, 2, 2), (1, 1, 1)), 4, check)


def test_ac5c_fano():
    def check(rep):
        e = rep.entry(2)
        assert e.expected == 7 and e.computed < 7
    _oracle_case("c oracle Fano polytope h=2", fano_polytope(), 2, check)


def test_ac5d_12_22():
    def check(rep):
        e = rep.entry(4)
        assert e.expected == 15 and e.computed < 15
    _oracle_case("d oracle (1,2),(2,2) h=4", SvShape((1, 2), (2, 2)), 4, check)


def test_ac5e_11_53():
    def check(rep):
        assert all(rep.entry(h).status == PROVED for h in range(1, 9))
    _oracle_case("e oracle (1,1),(5,3) proved through h=8", SvShape((1, 1), (5, 3)), None, check)


def test_ac6_flattening_certificates():
    with criterion("AC6 flattening certificates", 60):
        s0 = SvShape((1, 1, 2), (1, 3, 1))
        c0 = flattening_defect_certificate(s0, FlatteningSplit.from_a(s0, (1, 2, 0)), 5)
        assert (c0.split.rows, c0.split.cols) == (6, 6)
        assert c0.fired and max(c0.observed_ranks) <= 5
        s1 = SvShape((1, 1, 2), (1, 8, 1))
        c1 = flattening_defect_certificate(s1, FlatteningSplit.from_a(s1, (1, 5, 0)), 11)
        assert (c1.split.rows, c1.split.cols) == (12, 12)
        assert c1.fired and max(c1.observed_ranks) <= 11
        found = split_search(SvShape((1, 1, 3), (1, 3, 1)), 5)
        assert found and all(c.fired for c in found)


def test_ac7_cremona_suite():
    with criterion("AC7 Cremona suite", 60):
        assert PICARD_MATRIX @ PICARD_MATRIX == IntMatrix.identity(5)
        for d1, d2, d3 in itertools.product(range(1, 11), repeat=3):
            for r in range(6):
                for h in (2 * r, 2 * r + 1):
                    start = LinearSystem3Fold((d1, d2, d3), (2,) * h)
                    assert iterate_transform(start, r) == closed_form((d1, d2, d3), h, r)
        assert system_dim_oracle(LinearSystem3Fold((1, 0, 1), (2,))) == 0
        rng = random.Random(7)
        checked = 0
        while checked < 20:
            degs = (1, rng.randint(1, 8), rng.choice((1, 2)))
            h = rng.randint(2, 2 * degs[1] + 2)
            sys = LinearSystem3Fold(degs, (2,) * h)
            assert system_dim_oracle(sys) == system_dim_oracle(pic_action(sys)), sys.label()
            checked += 1


def test_ac8_table_reproduction():
    with criterion("AC8 table reproduction (1,2), d <= 8", 300):
        cells = table_scan(PRESETS["P1P2"], runs=5, trials=3, seed=0)
        defective = {c.shape.degs for c in cells if c.verdict == "defective"}
        stated = {(1, 3), (2, 2), (4, 2), (6, 2)}
        assert stated <= defective
        # (8,2) lies in range and follows the (even, 2) pattern of the full table
        assert defective == stated | {(8, 2)}
        assert all(c.verdict != "unknown" for c in cells)
        # a single-run spurious failure on (8,1) exists and is cleared by reruns and the oracle
        poly = product_simplex_points(SvShape((1, 2), (8, 1)))
        bad = next(s for s in range(500) if not greedy_extract(poly, seed=s).complete)
        assert certify_non_defective(poly, runs=5, seed=bad).complete
        rep = defect_report(SvShape((1, 2), (8, 1)), trials=3, seed=bad)
        assert not rep.defective_hs()


if __name__ == "__main__":
    import sys
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_ac")]
    for t in tests:
        try:
            t()
        except BaseException:
            pass
    for line in RESULTS.values():
        print(line)
    sys.exit(0 if all(l.startswith("PASS") for l in RESULTS.values()) else 1)
