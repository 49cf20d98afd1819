import cmath
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from timesmn.equidist import (
    PART1,
    PART2,
    convergence_report,
    fourier_distance,
    hypotheses_hold,
    mode_weights,
    target_for,
)
from timesmn.errors import EmptyMeasureError, ModeRangeError, PrecisionError
from timesmn.exact_num import UnitRational, make_point, orbit_point
from timesmn.measures import Digit, Lebesgue, Product, fourier_1d, fourier_2d, make_beta, sample
from timesmn.orbits import AffineMap, EmpiricalMeasure2D, empirical_fourier, orbit_pair, run_orbit

BETA = make_beta(2)


def R(q):
    return UnitRational.from_fraction(Fraction(q))


def accumulate(points, F=3, G=8):
    """Build an accumulator from explicit rational points."""
    acc = EmpiricalMeasure2D(F, G)
    u = np.array([float(a) for a, _ in points])
    v = np.array([float(b) for _, b in points])
    acc.add_points(u, v, np.array([int(a * G) for a, _ in points]), np.array([int(b * G) for _, b in points]))
    return acc


def direct_coefficient(points, k, j):
    return sum(cmath.exp(2j * math.pi * float(k * a + j * b)) for a, b in points) / len(points)


def test_single_point_run():
    acc = run_orbit(R("1/4"), m=3, n=2, N=1, F=2, G=8, strict=False)
    assert acc.count == 1 and acc.grid.sum() == 1 and acc.grid[2, 2] == 1
    for k in range(-2, 3):
        for j in range(-2, 3):
            assert abs(empirical_fourier(acc, k, j) - cmath.exp(2j * math.pi * (k + j) / 4)) < 1e-14


def test_diagonal_fixture():
    x = R("1/16")
    pairs = [(u.as_fraction(), v.as_fraction()) for u, v in orbit_pair(x, AffineMap.identity(),
                                                                        AffineMap.identity(), 2, 2, 4)]
    assert pairs == [(Fraction(1, 2 ** (4 - i)),) * 2 for i in range(4)]
    acc = run_orbit(x, m=2, n=2, N=4, F=2, G=16, strict=False)
    assert [acc.grid[c, c] for c in (1, 2, 4, 8)] == [1, 1, 1, 1]


def test_run_orbit_matches_direct_sum():
    x = make_point([1, 0, 1, 1, 0, 1, 0, 0, 1, 1] * 20, 2)
    pts = [(orbit_point(x, 3, i).as_fraction(), orbit_point(x, 2, i).as_fraction()) for i in range(40)]
    acc = run_orbit(x, m=3, n=2, N=40, F=4, G=8)
    for k, j in [(1, 0), (0, 1), (2, -3), (4, 4)]:
        assert abs(empirical_fourier(acc, k, j) - direct_coefficient(pts, k, j)) < 1e-12
    assert acc.grid.sum() == 40
    assert acc.fourier_sums[4, 4] == 40


def test_merge_continuation():
    x = sample(BETA, 5, 400)
    whole = run_orbit(x, m=3, n=2, N=150)
    parts = run_orbit(x, m=3, n=2, N=60).merge(run_orbit(x, m=3, n=2, N=90, start=60))
    assert parts.count == whole.count
    assert np.array_equal(parts.grid, whole.grid)
    assert np.allclose(parts.fourier_sums, whole.fourier_sums, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.fractions(0, 1), st.fractions(0, 1)).filter(lambda t: t[0] < 1 and t[1] < 1),
                min_size=1, max_size=8),
       st.lists(st.tuples(st.fractions(0, 1), st.fractions(0, 1)).filter(lambda t: t[0] < 1 and t[1] < 1),
                min_size=1, max_size=8))
def test_merge_is_componentwise(a, b):
    ea, eb = accumulate(a), accumulate(b)
    ab, ba = ea.merge(eb), eb.merge(ea)
    both = accumulate(a + b)
    assert ab.count == ba.count == len(a) + len(b)
    assert np.array_equal(ab.grid, both.grid)
    assert np.allclose(ab.fourier_sums, both.fourier_sums) and np.allclose(ab.fourier_sums, ba.fourier_sums)
    assert abs(empirical_fourier(ab, 0, 0) - 1) < 1e-15


def test_empirical_fourier_examples():
    origin = accumulate([(Fraction(0), Fraction(0))])
    assert empirical_fourier(origin, 3, -2) == 1
    pair = accumulate([(Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(1, 2))])
    assert abs(empirical_fourier(pair, 1, 0)) < 1e-15
    with pytest.raises(ModeRangeError):
        empirical_fourier(pair, 4, 0)
    with pytest.raises(EmptyMeasureError):
        empirical_fourier(EmpiricalMeasure2D(), 0, 0)


def test_accumulator_json_round_trip():
    acc = run_orbit(sample(BETA, 2, 200), m=3, n=2, N=50, F=2, G=4)
    back = EmpiricalMeasure2D.from_dict(json.loads(json.dumps(acc.to_dict())))
    assert back.count == acc.count and np.array_equal(back.grid, acc.grid)
    assert np.allclose(back.fourier_sums, acc.fourier_sums, rtol=0, atol=1e-12)


def test_run_orbit_guards():
    with pytest.raises(ValueError):
        run_orbit(R("1/3"), m=2, n=3, N=5)
    with pytest.raises(PrecisionError):
        run_orbit(make_point([1] * 10, 2), m=3, n=2, N=100)


def test_affine_map():
    f = AffineMap(Fraction(1, 2), Fraction(1, 4))
    assert f(R("1/2")).as_fraction() == Fraction(1, 2)
    assert AffineMap.identity().is_identity
    assert AffineMap.from_dict(f.to_dict()) == f
    with pytest.raises(ValueError):
        AffineMap(Fraction(1), Fraction(1, 2))


def test_distance_single_atom():
    e = accumulate([(Fraction(0), Fraction(0))], F=3)
    leb2 = Product(Lebesgue(), Lebesgue())
    assert abs(fourier_distance(e, leb2) - mode_weights(3).sum()) < 1e-12
    # closed form: (sum_k 1/(1+|k|))^2 - 1
    s = 1 + 2 * (1 / 2 + 1 / 3 + 1 / 4)
    assert abs(mode_weights(3).sum() - (s * s - 1)) < 1e-12


def test_distance_to_own_coefficients_is_zero():
    e = accumulate([(Fraction(1, 3), Fraction(2, 7)), (Fraction(5, 9), Fraction(0))], F=3)
    assert fourier_distance(e, e.coefficients()) == 0


def test_distance_monte_carlo():
    rng = np.random.default_rng(2024)
    u, v = rng.random(10000), rng.random(10000)
    e = EmpiricalMeasure2D(8, 4)
    e.add_points(u, v, (u * 4).astype(int), (v * 4).astype(int))
    assert fourier_distance(e, Product(Lebesgue(), Lebesgue())) < 0.5


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(st.fractions(0, 1), st.fractions(0, 1)).filter(lambda t: t[0] < 1 and t[1] < 1),
                min_size=1, max_size=6), st.lists(st.tuples(st.fractions(0, 1), st.fractions(0, 1))
                .filter(lambda t: t[0] < 1 and t[1] < 1), min_size=1, max_size=6))
def test_distance_metric_axioms(a, b):
    ea, eb = accumulate(a), accumulate(b)
    leb = Product(Lebesgue(), Lebesgue())
    dab = fourier_distance(ea, eb.coefficients())
    dba = fourier_distance(eb, ea.coefficients())
    assert dab >= 0 and abs(dab - dba) < 1e-12
    # triangle inequality through the Lebesgue target
    assert dab <= fourier_distance(ea, leb) + fourier_distance(eb, leb) + 1e-12


def test_target_for():
    assert target_for(PART2, BETA) == Product(Lebesgue(), Lebesgue())
    t = target_for(PART1, BETA)
    assert t == Product(Lebesgue(), Digit(2, BETA.probs))
    for j in (1, 2, 5):
        assert abs(fourier_2d(t, 0, j) - fourier_1d(BETA, j)) < 1e-12


def test_hypotheses():
    assert hypotheses_hold(PART1, 3, 2, 2)
    assert hypotheses_hold(PART2, 5, 3, 2)
    assert not hypotheses_hold(PART1, 4, 2, 2)
    assert not hypotheses_hold(PART1, 2, 2, 2)


def test_small_convergence_report():
    xs = [sample(BETA, (0, i), 800) for i in range(3)]
    rep = convergence_report(xs, None, None, 3, 2, BETA, PART1, [100, 400], F=4)
    assert len(rep.distances) == 3 and all(len(r) == 2 for r in rep.distances)
    assert rep.verdict is not None
    assert rep.to_csv().splitlines()[0] == "point_id,N,distance"
    json.dumps(rep.to_dict())


def test_degenerate_fixture_has_no_verdict():
    xs = [sample(BETA, (0, i), 300) for i in range(2)]
    rep = convergence_report(xs, None, None, 2, 2, BETA, PART1, [50, 100], F=2)
    assert rep.verdict is None and len(rep.median_distance) == 2
