"""Sceneries: the normalised view of a measure in shrinking windows around a point.

The window of radius ``e^-t`` around ``x`` is rescaled onto ``[-1, 1]`` and
summarised by the masses of its ``2**r`` equal dyadic subintervals.  All
masses are exact rationals; when ``e^-t`` is irrational the radius is
replaced by a rational within relative error ``1e-12``.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath

from .errors import DegenerateWindowError, OutOfWindowError, SeriesTooShortError
from .exact_num import UnitRational, as_unit_rational
from .measures import Digit, MeasureExpr, _DigitLaw, cdf

RADIUS_REL_TOL = 1e-12
DEFAULT_R = 2


@dataclass(frozen=True)
class LogScale:
    """The time step ``t0 = log(base)``, represented exactly so ``e^(-k t0) = base^-k``."""

    base: int

    def __float__(self) -> float:
        return math.log(self.base)


@dataclass(frozen=True)
class ScenerySample:
    center: UnitRational
    t: float
    r: int
    descriptor: tuple[Fraction, ...]
    radius: Fraction
    radius_rel_error: float = 0.0
    k: int | None = None

    def is_uniform(self) -> bool:
        u = Fraction(1, len(self.descriptor))
        return all(d == u for d in self.descriptor)


@dataclass
class ScenerySeries:
    """Samples at ``t = k t0`` for ``k = 1..k_max``; ``skipped`` lists out-of-window ``k``."""

    samples: list[ScenerySample] = field(default_factory=list)
    skipped: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self) -> Iterator[ScenerySample]:
        return iter(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        width = len(self.samples[0].descriptor) if self.samples else 0
        w.writerow(["k", "t"] + [f"d{i}" for i in range(width)])
        for s in self.samples:
            w.writerow([s.k, repr(s.t)] + [f"{d.numerator}/{d.denominator}" for d in s.descriptor])
        return buf.getvalue()


def _grid_base(mu: MeasureExpr) -> int:
    return mu.base if isinstance(mu, Digit) else 2


def _radius(t, grid_base: int) -> tuple[Fraction, float]:
    """Rational radius for time ``t`` plus a bound on its relative error."""
    if isinstance(t, tuple) and len(t) == 2 and isinstance(t[1], LogScale):
        k, scale = t
        return Fraction(1, scale.base ** k), 0.0
    t = float(t)
    if t < 0:
        raise ValueError("t must be non-negative")
    # grid fine enough that rounding costs < 1e-13 relative
    Q = math.ceil(t / math.log(grid_base)) + math.ceil(13 * math.log(10) / math.log(grid_base)) + 2
    scale = grid_base ** Q
    with mpmath.workprec(Q * math.ceil(math.log2(grid_base)) + 64):
        exact = mpmath.exp(-mpmath.mpf(t))
        num = int(mpmath.nint(exact * scale))
        rel = float(abs(num - exact * scale) / (exact * scale))
    return Fraction(num, scale), rel


def _endpoints(x: Fraction, radius: Fraction, r: int) -> list[Fraction]:
    step = radius * Fraction(2, 2 ** r)
    lo = x - radius
    return [lo + i * step for i in range(2 ** r + 1)]


class _DigitWindows:
    """Exact window masses of a Digit measure around a fixed base-``b`` point.

    Endpoints that differ from ``x`` by multiples of ``b^-P`` share the
    digits of ``x`` past position ``P``, so ``F(T^P x)`` is cached for every
    ``P``.  Masses are computed relative to the smallest ``b``-adic cylinder
    holding the window, where the measure is an exact rescaled copy of itself.
    """

    def __init__(self, mu: Digit, x: UnitRational):
        self.law = _DigitLaw(mu)
        self.b = mu.base
        self.L = x.precision
        self.X = x.numerator
        digits = []
        num = x.numerator
        for _ in range(self.L):
            d, num = divmod(num * self.b, x.denominator)
            digits.append(d)
        self.tails: list[tuple[int, int]] = [(0, 1)] * (self.L + 1)
        V, Q = 0, 1
        for P in range(self.L - 1, -1, -1):
            V, Q = self.law.fold(digits[P:P + 1], V, Q)
            self.tails[P] = (V, Q)

    def applies(self, endpoints: Sequence[Fraction]) -> int | None:
        """Level ``P`` at which every endpoint offset from ``x`` is b-adic, else None."""
        P = 0
        x = Fraction(self.X, self.b ** self.L)
        for e in endpoints:
            den = (e - x).denominator
            p = 0
            while den % self.b == 0:
                den //= self.b
                p += 1
            if den != 1:
                return None
            P = max(P, p)
        return P if P <= self.L else None

    def masses(self, endpoints: Sequence[Fraction], P: int) -> list[Fraction]:
        b, L = self.b, self.L
        scale = b ** L
        E = [int(e * scale) for e in endpoints]
        lo, hi = E[0], E[-1]
        # largest c <= P with the window inside one level-c cylinder
        a, z = 0, P
        while a < z:
            c = (a + z + 1) // 2
            w = b ** (L - c)
            if hi <= (lo // w + 1) * w:
                a = c
            else:
                z = c - 1
        c = a
        w = b ** (L - c)
        base_idx = lo // w
        TV, TQ = self.tails[P]
        Qtot = TQ * self.law.D ** (P - c)
        vals = []
        for Ei in E:
            rel = Ei - base_idx * w
            if rel == w:
                vals.append(Qtot)
                continue
            block = rel // b ** (L - P)
            digs = []
            for _ in range(P - c):
                block, d = divmod(block, b)
                digs.append(d)
            V, Q = self.law.fold(digs[::-1], TV, TQ)
            vals.append(V)
        total = vals[-1] - vals[0]
        if total == 0:
            raise DegenerateWindowError("window carries no mass")
        return [Fraction(vals[i + 1] - vals[i], total) for i in range(len(vals) - 1)]


def window_measure(mu: MeasureExpr, x, t, r: int = DEFAULT_R, *, _digit_cache=None) -> ScenerySample:
    """Descriptor of the scenery of ``mu`` at ``x`` and time ``t``.

    ``t`` is a float, or a pair ``(k, LogScale(b))`` meaning exactly
    ``k log b``.  Entry ``i`` is the normalised mass of
    ``[x + e^-t a_i, x + e^-t a_(i+1))`` with ``a_i = -1 + i 2^(1-r)``.
    """
    if r < 1:
        raise ValueError("descriptor depth r must be at least 1")
    x = as_unit_rational(x)
    radius, rel = _radius(t, _grid_base(mu))
    ends = _endpoints(x.as_fraction(), radius, r)
    if ends[0] < 0 or ends[-1] > 1:
        raise OutOfWindowError(f"window [{ends[0]}, {ends[-1]}] leaves [0, 1]")

    masses = None
    if isinstance(mu, Digit) and x.base == mu.base:
        cache = _digit_cache or _DigitWindows(mu, x)
        P = cache.applies(ends)
        if P is not None:
            masses = cache.masses(ends, P)
    if masses is None:
        F = [cdf(mu, e) for e in ends]
        total = F[-1] - F[0]
        if total == 0:
            raise DegenerateWindowError("window carries no mass")
        masses = [(F[i + 1] - F[i]) / total for i in range(len(F) - 1)]

    t_float = float(t[0]) * float(t[1]) if isinstance(t, tuple) else float(t)
    return ScenerySample(x, t_float, r, tuple(masses), radius, rel)


def scenery_series(mu: MeasureExpr, x, t0, k_max: int, r: int = DEFAULT_R) -> ScenerySeries:
    """Sceneries at ``t = k t0`` for ``k = 1..k_max``, skipping windows that leave [0, 1].

    Pass ``t0 = LogScale(b)`` for the exact step ``log b``.
    """
    x = as_unit_rational(x)
    cache = _DigitWindows(mu, x) if isinstance(mu, Digit) and x.base == mu.base else None
    out = ScenerySeries()
    for k in range(1, k_max + 1):
        t = (k, t0) if isinstance(t0, LogScale) else k * float(t0)
        try:
            s = window_measure(mu, x, t, r, _digit_cache=cache)
        except OutOfWindowError:
            out.skipped.append(k)
            continue
        out.samples.append(ScenerySample(s.center, s.t, s.r, s.descriptor, s.radius, s.radius_rel_error, k))
    return out


def _bucket(descriptor: Sequence[Fraction], resolution: Fraction) -> tuple[int, ...]:
    return tuple(math.floor(d / resolution) for d in descriptor)


def stationarity_gap(series: Sequence[ScenerySample] | ScenerySeries, W: int,
                     resolution: Fraction = Fraction(1, 100)) -> float:
    """Total variation between the bucketed descriptor histograms of ``[0, W)`` and ``[W, 2W)``."""
    samples = list(series)
    if W < 1 or len(samples) < 2 * W:
        raise SeriesTooShortError(f"need at least {2 * W} samples, got {len(samples)}")
    first = Counter(_bucket(s.descriptor, resolution) for s in samples[:W])
    second = Counter(_bucket(s.descriptor, resolution) for s in samples[W:2 * W])
    return sum(abs(first[b] - second[b]) for b in first.keys() | second.keys()) / (2 * W)


def non_uniform_fraction(series: Sequence[ScenerySample] | ScenerySeries) -> float:
    samples = list(series)
    if not samples:
        return 0.0
    return sum(not s.is_uniform() for s in samples) / len(samples)
