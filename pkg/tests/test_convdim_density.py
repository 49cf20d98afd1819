import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from timesmn.convdim import LatticeMeasure, coarse_convolve, coarse_dimension, convolution_growth, discretize
from timesmn.density import a_k_density, boundary_proximity_density, windowed_densities
from timesmn.exact_num import UnitRational, in_A_k
from timesmn.measures import Digit, ProbVector, make_beta, sample
from timesmn.seeding import point_rng

BETA = make_beta(2)
UNIFORM = Digit(2, ProbVector([Fraction(1, 2), Fraction(1, 2)]))


def lattice(masses, base=2, level=1):
    return LatticeMeasure.from_masses(base, level, [Fraction(q) for q in masses])


def test_discretize_examples():
    assert discretize(BETA, 1).masses == [Fraction(1, 3), Fraction(2, 3)]
    assert discretize(BETA, 2).masses == [Fraction(1, 9), Fraction(2, 9), Fraction(2, 9), Fraction(4, 9)]
    assert set(discretize(UNIFORM, 5).masses) == {Fraction(1, 32)}


def test_convolve_examples():
    b = discretize(BETA, 1)
    assert coarse_convolve(b, b).masses == [Fraction(5, 9), Fraction(4, 9)]
    delta = lattice([1, 0, 0, 0], level=2)
    b2 = discretize(BETA, 2)
    assert coarse_convolve(delta, b2).masses == b2.masses
    uni = discretize(UNIFORM, 2)
    assert coarse_convolve(uni, b2).masses == uni.masses


lattices = st.lists(st.integers(0, 6), min_size=4, max_size=4).filter(any).map(
    lambda v: lattice([Fraction(a, sum(v)) for a in v], level=2))


@settings(max_examples=40, deadline=None)
@given(lattices, lattices, lattices)
def test_convolution_commutative_associative(a, b, c):
    assert coarse_convolve(a, b).masses == coarse_convolve(b, a).masses
    assert coarse_convolve(coarse_convolve(a, b), c).masses == coarse_convolve(a, coarse_convolve(b, c)).masses


def test_coarse_dimension_examples():
    assert coarse_dimension(discretize(UNIFORM, 4)) == pytest.approx(1, abs=1e-15)
    assert coarse_dimension(lattice([1, 0, 0, 0], level=2)) == 0
    h = math.log(3) - 2 / 3 * math.log(2)
    assert coarse_dimension(discretize(BETA, 8)) == pytest.approx(h / math.log(2), abs=1e-12)


def test_convolution_growth():
    assert convolution_growth(UNIFORM, 3, 4) == pytest.approx([1, 1, 1], abs=1e-15)
    dims = convolution_growth(BETA, 4, 8)
    assert dims[0] == coarse_dimension(discretize(BETA, 8))
    assert all(b > a for a, b in zip(dims, dims[1:])) and dims[-1] < 1


def test_windowed_densities():
    assert windowed_densities([1, 2, 51], 100, 50) == [(1, 0.04), (51, 0.02)]
    assert windowed_densities([], 120, 50)[-1] == (101, 0.0)


def test_a_k_density_examples():
    assert a_k_density(BETA, 4, 2, 200, (0, 1)).hits == []
    empty = a_k_density(BETA, 3, 2, 0, (0, 1))
    assert empty.hits == [] and empty.windows == []


def test_a_k_density_hits_match_predicate():
    rep = a_k_density(BETA, 3, 2, 60, (4, 2))
    x = sample(BETA, point_rng(4, 2), rep.params["digits"])
    assert rep.hits == [k for k in range(1, 61) if in_A_k(x, 3, 2, k)]
    assert rep.hits_csv().count("\n") == 61


def test_boundary_proximity():
    x = sample(BETA, 1, 400)
    assert boundary_proximity_density(x, 2, 3, ("0", "1"), 100).hits == []
    # a dyadic rational reaches 0 and stays there, inside D
    fixed = UnitRational(5, 32)
    rep = boundary_proximity_density(fixed, 2, 3, ("1/4", "3/4"), 40)
    assert max(rep.hits, default=0) <= 5


def test_boundary_proximity_density_decreases():
    x = sample(BETA, (0, 0), 400)
    rep = boundary_proximity_density(x, 2, 3, ("1/4", "3/4"), 200)
    assert rep.last_density <= rep.first_density
