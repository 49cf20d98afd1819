"""Acceptance criteria, runnable as a suite (``timesmn verify``) or one by one.

Each criterion returns ``(passed, payload)``; the payload holds the measured
numbers and is fully determined by the code and ``MASTER_SEED``, which is
what the determinism criterion compares.  Statistical thresholds below are
calibrations for finite-N experiments, not values any theorem provides.
"""

from __future__ import annotations

import cmath
import json
import math
import statistics
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .convdim import convolution_growth
from .density import a_k_density
from .equidist import PART1, PART2, convergence_report
from .exact_num import apply_T, make_point, orbit_point, required_precision
from .measures import (
    Atomic,
    Convolve,
    Digit,
    Lebesgue,
    Product,
    ProbVector,
    digit_dimension,
    fourier_1d,
    fourier_2d,
    make_alpha,
    make_beta,
    sample,
)
from .orbits import AffineMap
from .scenery import LogScale, scenery_series, stationarity_gap, window_measure
from .seeding import point_rng

MASTER_SEED = 0

FOURIER_TOL = 1e-12
CONV_IDENTITY_TOL = 2e-12
ALPHA_FLOOR = 1e-6
DIMENSION_EXPECTED = 0.91830
DIMENSION_TOL = 1e-4
MODE_ERROR_MAX = 0.05
ENSEMBLE = 20
SCHEDULE = (5000, 20000)
MODE_CUTOFF = 8
GROWTH_INCREMENT = 1e-3
GROWTH_FINAL = 0.99
DENSITY_SEEDS = 50
DENSITY_K = 200
DENSITY_WINDOW = 50
DENSITY_FRACTION = 0.8
SCENERY_CENTERS = 20
SCENERY_W = 500
SCENERY_GAP = 0.1
SCENERY_FRACTION = 0.9


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    elapsed: float
    budget: float
    payload: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d}. {self.name} ({self.elapsed:.1f}s / budget {self.budget:.0f}s)"


def _random_rational_probs(rng, size: int) -> list[Fraction]:
    raw = [int(v) for v in rng.integers(0, 7, size=size)]
    if sum(raw) == 0:
        raw[0] = 1
    total = sum(raw)
    return [Fraction(v, total) for v in raw]


def _random_measure(rng):
    if rng.random() < 0.5:
        base = int(rng.integers(2, 6))
        return Digit(base, ProbVector(_random_rational_probs(rng, base)))
    count = int(rng.integers(1, 5))
    weights = _random_rational_probs(rng, count)
    locs = [Fraction(int(rng.integers(0, 97)), 97) for _ in range(count)]
    return Atomic(tuple(zip(locs, weights)))


def _oracle_fourier(mu, k: int) -> complex:
    """Independent evaluation: direct atom sums, or the digit product run until the phase underflows."""
    if isinstance(mu, Atomic):
        return sum(float(w) * cmath.exp(2j * math.pi * float(a * k % 1)) for a, w in mu.atoms)
    probs = [float(q) for q in mu.probs]
    value = 1.0 + 0j
    phase = float(k)
    while abs(phase) > 1e-18:
        phase /= mu.base
        value *= sum(q * cmath.exp(2j * math.pi * phase * d) for d, q in enumerate(probs))
    return value


def _oracle_table(mu, ks) -> dict[int, complex]:
    return {k: _oracle_fourier(mu, k) for k in ks}


def criterion_1() -> tuple[bool, dict]:
    rng = point_rng(MASTER_SEED, 1)
    mismatches = 0
    for _ in range(100):
        base = int(rng.integers(2, 11))
        x = make_point(rng.integers(0, base, size=int(rng.integers(1, 40))).tolist(), base)
        m = int(rng.integers(2, 11))
        i = int(rng.integers(0, 51))
        y = x
        for _ in range(i):
            y = apply_T(y, m)
        fast = orbit_point(x, m, i)
        if (fast.numerator, fast.denominator) != (y.numerator, y.denominator):
            mismatches += 1
    return mismatches == 0, {"cases": 100, "mismatches": mismatches}


def criterion_2() -> tuple[bool, dict]:
    rng = point_rng(MASTER_SEED, 2)
    worst_conv = 0.0
    worst_prod = 0.0
    for _ in range(50):
        mu, nu = _random_measure(rng), _random_measure(rng)
        conv = Convolve(mu, nu)
        prod = Product(mu, nu)
        mu_hat = _oracle_table(mu, range(-32, 33))
        nu_hat = _oracle_table(nu, range(-32, 33))
        for k in range(-32, 33):
            ok = mu_hat[k] * nu_hat[k]
            worst_conv = max(worst_conv, abs(fourier_1d(conv, k, FOURIER_TOL) - ok))
        for k, j in [(int(a), int(b)) for a, b in rng.integers(-32, 33, size=(20, 2))]:
            ok = mu_hat[k] * nu_hat[j]
            worst_prod = max(worst_prod, abs(fourier_2d(prod, k, j, FOURIER_TOL) - ok))
    passed = worst_conv <= CONV_IDENTITY_TOL and worst_prod <= CONV_IDENTITY_TOL
    return passed, {"pairs": 50, "max_convolution_error": worst_conv, "max_product_error": worst_prod}


def criterion_3() -> tuple[bool, dict]:
    alpha = make_alpha(2, 3)
    beta = make_beta(2)
    alpha_min = min(abs(fourier_1d(alpha, j, FOURIER_TOL)) for j in range(-4, 5) if j)
    beta_min = min(abs(fourier_1d(beta, i, FOURIER_TOL)) for i in range(-64, 65) if i)
    # beta^(i) is certified non-zero when its magnitude exceeds the error bound
    passed = alpha_min > ALPHA_FLOOR and beta_min > FOURIER_TOL
    return passed, {"alpha_min_abs": alpha_min, "beta_min_abs": beta_min}


def criterion_4() -> tuple[bool, dict]:
    value = digit_dimension(2, [Fraction(1, 3), Fraction(2, 3)])
    oracle = math.log2(3) - 2 / 3
    passed = abs(value - DIMENSION_EXPECTED) <= DIMENSION_TOL and abs(value - oracle) <= DIMENSION_TOL
    return passed, {"dimension": value, "oracle": oracle}


def _equidist(m: int, n: int, case: str, f: AffineMap | None = None) -> tuple[bool, dict]:
    mu = make_beta(2)
    K = required_precision(SCHEDULE[-1], max(m, n), mu.base)
    xs = [sample(mu, point_rng(MASTER_SEED, i), K) for i in range(ENSEMBLE)]
    report = convergence_report(xs, f, None, m, n, mu, case, SCHEDULE, MODE_CUTOFF)
    med_err = report.median_max_mode_error
    decreasing = report.median_distance[-1] < report.median_distance[0]
    payload = {
        "K": K,
        "median_max_mode_error": med_err,
        "median_distance": report.median_distance,
        "max_mode_error": report.max_mode_error,
    }
    return med_err <= MODE_ERROR_MAX and decreasing, payload


def criterion_5() -> tuple[bool, dict]:
    return _equidist(3, 2, PART1)


def criterion_6() -> tuple[bool, dict]:
    return _equidist(5, 3, PART2)


def criterion_7() -> tuple[bool, dict]:
    return _equidist(3, 2, PART1, AffineMap(Fraction(1, 2), Fraction(1, 4)))


def criterion_8() -> tuple[bool, dict]:
    dims = convolution_growth(make_beta(2), 4, 8)
    steps = [b - a for a, b in zip(dims, dims[1:])]
    passed = (steps[0] > GROWTH_INCREMENT and steps[1] > GROWTH_INCREMENT
              and all(s > 0 for s in steps) and dims[-1] > GROWTH_FINAL)
    return passed, {"coarse_dimensions": dims}


def criterion_9() -> tuple[bool, dict]:
    beta = make_beta(2)
    decreasing = 0
    first, last = [], []
    for i in range(DENSITY_SEEDS):
        rep = a_k_density(beta, 3, 2, DENSITY_K, (MASTER_SEED, i), DENSITY_WINDOW)
        first.append(rep.first_density)
        last.append(rep.last_density)
        decreasing += rep.last_density < rep.first_density
    control_hits = sum(len(a_k_density(beta, 4, 2, DENSITY_K, (MASTER_SEED, i), DENSITY_WINDOW).hits)
                       for i in range(DENSITY_SEEDS))
    fraction = decreasing / DENSITY_SEEDS
    passed = fraction >= DENSITY_FRACTION and control_hits == 0
    return passed, {"fraction_decreasing": fraction, "first_window": first, "last_window": last,
                    "control_hits": control_hits}


def criterion_10() -> tuple[bool, dict]:
    lebesgue_ok = True
    rng = point_rng(MASTER_SEED, 10)
    leb = Lebesgue()
    for _ in range(20):
        x = make_point(rng.integers(0, 2, size=60).tolist(), 2)
        for r in (1, 2):
            for k in range(1, 40):
                try:
                    s = window_measure(leb, x, (k, LogScale(2)), r)
                except Exception:
                    continue
                lebesgue_ok &= s.is_uniform()
    beta = make_beta(2)
    k_max = 2 * SCENERY_W + 64
    gaps = []
    for i in range(SCENERY_CENTERS):
        x = sample(beta, point_rng(MASTER_SEED, i), k_max + 2 + 64)
        series = scenery_series(beta, x, LogScale(2), k_max, 2)
        gaps.append(stationarity_gap(series, SCENERY_W) if len(series) >= 2 * SCENERY_W else 1.0)
    fraction = sum(g < SCENERY_GAP for g in gaps) / len(gaps)
    passed = lebesgue_ok and fraction >= SCENERY_FRACTION
    return passed, {"lebesgue_uniform": lebesgue_ok, "gaps": gaps, "median_gap": statistics.median(gaps),
                    "fraction_below": fraction}


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, dict]], float]] = [
    (1, "exact orbit equivalence", criterion_1, 1.0),
    (2, "Fourier convolution/product identities", criterion_2, 5.0),
    (3, "non-vanishing of alpha and beta coefficients", criterion_3, 1.0),
    (4, "dimension formula for (1/3, 2/3)", criterion_4, 1.0),
    (5, "(T3,T2) orbits -> lambda x mu", criterion_5, 120.0),
    (6, "(T5,T3) orbits -> lambda x lambda", criterion_6, 120.0),
    (7, "affine-perturbed first coordinate -> lambda x mu", criterion_7, 120.0),
    (8, "convolution-power dimension growth", criterion_8, 10.0),
    (9, "A_k hit density decreases", criterion_9, 30.0),
    (10, "scenery sanity and stationarity", criterion_10, 60.0),
]


def canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def run_criterion(number: int) -> CriterionResult:
    for num, name, fn, budget in CRITERIA:
        if num == number:
            start = time.perf_counter()
            passed, payload = fn()
            elapsed = time.perf_counter() - start
            return CriterionResult(num, name, bool(passed) and elapsed < budget, elapsed, budget, payload)
    raise KeyError(number)


def determinism_check(first: dict[int, str]) -> CriterionResult:
    """Re-run criteria 1-10 and compare canonical payloads with ``first``."""
    start = time.perf_counter()
    differing = []
    for num, _, fn, _ in CRITERIA:
        _, payload = fn()
        if canonical(payload) != first.get(num):
            differing.append(num)
    elapsed = time.perf_counter() - start
    return CriterionResult(11, "determinism of payloads across two runs", not differing, elapsed, 600.0,
                           {"differing": differing})


def run_all(echo: Callable[[str], None] = print) -> list[CriterionResult]:
    results = []
    suite_start = time.perf_counter()
    for num, *_ in CRITERIA:
        res = run_criterion(num)
        echo(res.line())
        results.append(res)
    det = determinism_check({r.number: canonical(r.payload) for r in results})
    total = time.perf_counter() - suite_start
    det.passed = det.passed and total < 600.0
    det.elapsed = total
    echo(det.line())
    results.append(det)
    return results
