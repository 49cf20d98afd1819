from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from timesmn.errors import InvalidDigitError, PrecisionError
from timesmn.exact_num import (
    PartitionCell,
    UnitRational,
    apply_T,
    cell_of,
    check_precision,
    digits_of,
    in_A_k,
    independent,
    make_point,
    min_exponent,
    orbit_point,
    required_precision,
)


def R(q):
    return UnitRational.from_fraction(Fraction(q))


def digit_shift_oracle(digits, base):
    """Value of the digit string with its first digit removed."""
    return sum(Fraction(d, base ** (i + 1)) for i, d in enumerate(digits[1:]))


def test_make_point_examples():
    assert make_point([1], 2) == R("1/2")
    assert make_point([0, 1], 2) == R("1/4")
    x = make_point([1, 2, 0], 3)
    assert x.as_fraction() == Fraction(1, 3) + Fraction(2, 9)
    assert (x.numerator, x.denominator) == (15, 27)


def test_make_point_keeps_denominator_power():
    x = make_point([0, 0, 0, 0], 5)
    assert x.denominator == 5 ** 4 and x.numerator == 0
    assert x.precision == 4 and x.base == 5


def test_make_point_rejects_bad_digit():
    with pytest.raises(InvalidDigitError):
        make_point([0, 2], 2)


def test_apply_T_examples():
    assert apply_T(R("1/4"), 2) == R("1/2")
    assert apply_T(R("1/2"), 3) == R("1/2")


def test_apply_T_shifts_digits():
    # shifting [1,2,0] leaves [2,0] = 2/3 = 18/27
    x = make_point([1, 2, 0], 3)
    y = apply_T(x, 3)
    assert y.as_fraction() == digit_shift_oracle([1, 2, 0], 3) == Fraction(18, 27)
    assert y.denominator == 27


def test_orbit_point_examples():
    x = R("3/7")
    assert orbit_point(x, 5, 0) == x
    assert orbit_point(R("1/4"), 2, 2) == R("0")


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.lists(st.integers(0, 9), min_size=1, max_size=30),
       st.integers(2, 10), st.integers(0, 20), st.integers(0, 20))
def test_orbit_semigroup(base, raw, m, i, j):
    x = make_point([d % base for d in raw], base)
    assert orbit_point(orbit_point(x, m, i), m, j) == orbit_point(x, m, i + j)
    y = x
    for _ in range(i):
        y = apply_T(y, m)
    assert y == orbit_point(x, m, i)


def test_cell_of_examples():
    c = cell_of(R("3/10"), 2, 2)
    assert (c.index, c.left, c.right) == (1, Fraction(1, 4), Fraction(1, 2))
    assert cell_of(R("0"), 7, 3).index == 0
    assert cell_of(R("1/2"), 2, 1).index == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(1, 5), st.fractions(0, 1).filter(lambda q: q < 1))
def test_cells_refine(base, level, q):
    fine = cell_of(R(q), base, level + 1)
    coarse = cell_of(R(q), base, level)
    assert fine.index // base == coarse.index
    assert coarse.contains(q) and fine.contains(q)


def test_partition_cell_digits():
    c = PartitionCell(3, 3, 15)
    assert c.digits() == [1, 2, 0]
    assert c.left == make_point([1, 2, 0], 3).as_fraction()


def brute_A_k(x: Fraction, m, n, k):
    """Scan every n^-k grid point; hit iff one lies strictly inside the m^-k cell of x."""
    z = int(x * m ** k)
    lo, hi = Fraction(z, m ** k), Fraction(z + 1, m ** k)
    return any(lo < Fraction(s, n ** k) < hi for s in range(n ** k + 1))


def test_in_A_k_examples():
    assert in_A_k(R("2/5"), 3, 2, 1) is True
    assert in_A_k(R("1/10"), 3, 2, 1) is False


@settings(max_examples=100, deadline=None)
@given(st.fractions(0, 1).filter(lambda q: q < 1), st.integers(1, 6))
def test_in_A_k_matches_grid_scan(q, k):
    assert in_A_k(R(q), 3, 2, k) == brute_A_k(q, 3, 2, k)
    assert in_A_k(R(q), 5, 3, min(k, 4)) == brute_A_k(q, 5, 3, min(k, 4))


@settings(max_examples=50, deadline=None)
@given(st.fractions(0, 1).filter(lambda q: q < 1), st.integers(1, 12))
def test_in_A_k_refinement_never_hits(q, k):
    assert in_A_k(R(q), 4, 2, k) is False


def test_precision_rule():
    assert min_exponent(2, 1) == 0
    assert min_exponent(2, 1024) == 10 and min_exponent(2, 1025) == 11
    # 3^20000 needs 31700 bits
    assert required_precision(20000, 3, 2) == 31700 + 64
    assert required_precision(20000, 5, 2) == 46439 + 64


def test_check_precision():
    x = make_point([1] * 100, 2)
    check_precision(x, 2, 36)
    with pytest.raises(PrecisionError) as exc:
        check_precision(x, 2, 37)
    assert exc.value.required_digits == 101


def test_digits_round_trip():
    d = [3, 0, 4, 1, 2]
    assert digits_of(make_point(d, 5), 5, 5) == d


def test_independent():
    assert independent(3, 2) and independent(5, 3)
    assert not independent(4, 2) and not independent(8, 4) and not independent(9, 27)
