"""Finite-K diagnostics for density-zero statements along typical orbits.

Both predicates are decided by exact rational comparisons; the output is a
list of hit indices and their density in consecutive windows.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

from .exact_num import as_unit_rational, in_A_k, orbit_point, required_precision
from .measures import Digit, MeasureExpr, measure_to_dict, parse_rational, sample
from .seeding import point_rng

DEFAULT_WINDOW = 50


@dataclass
class DensityReport:
    K: int
    hits: list[int]
    windows: list[tuple[int, float]]  # (window start, fraction of hits)
    params: dict = field(default_factory=dict)

    @property
    def first_density(self) -> float | None:
        return self.windows[0][1] if self.windows else None

    @property
    def last_density(self) -> float | None:
        return self.windows[-1][1] if self.windows else None

    def to_dict(self) -> dict:
        return {"K": self.K, "hits": self.hits, "windows": [list(w) for w in self.windows], "params": self.params}

    def hits_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "in_A_k"])
        hit = set(self.hits)
        for k in range(1, self.K + 1):
            w.writerow([k, int(k in hit)])
        return buf.getvalue()

    def windows_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["window_start", "density"])
        for start, frac in self.windows:
            w.writerow([start, repr(frac)])
        return buf.getvalue()


def windowed_densities(hits: list[int], K: int, window: int = DEFAULT_WINDOW) -> list[tuple[int, float]]:
    """Hit fractions over ``[s, s+window)`` for ``s = 1, 1+window, ...``; the last window may be short."""
    hit = set(hits)
    out = []
    for start in range(1, K + 1, window):
        stop = min(start + window, K + 1)
        out.append((start, sum(1 for k in range(start, stop) if k in hit) / (stop - start)))
    return out


def a_k_density(mu: MeasureExpr, m: int, n: int, K: int, seed, window: int = DEFAULT_WINDOW,
                digits: int | None = None) -> DensityReport:
    """Sample ``x ~ mu`` and record the ``k <= K`` with ``x`` in ``A_k``.

    ``seed`` is an int, a numpy Generator, or a ``(master, index)`` pair.
    """
    if not m > n > 1:
        raise ValueError("requires m > n > 1")
    params = {"m": m, "n": n, "mu": measure_to_dict(mu), "seed": list(seed) if isinstance(seed, tuple) else seed}
    if K <= 0:
        return DensityReport(0, [], [], params)
    rng = point_rng(*seed) if isinstance(seed, tuple) else seed
    if digits is None:
        digits = required_precision(K, m, mu.base if isinstance(mu, Digit) else 2)
    x = sample(mu, rng, digits)
    params["digits"] = digits
    hits = [k for k in range(1, K + 1) if in_A_k(x, m, n, k)]
    return DensityReport(K, hits, windowed_densities(hits, K, window), params)


def _torus_distance(y: Fraction, e: Fraction) -> Fraction:
    d = abs(y - e) % 1
    return min(d, 1 - d)


def boundary_proximity_density(x, n: int, m: int, D: tuple, K: int,
                               window: int = DEFAULT_WINDOW) -> DensityReport:
    """Record ``k <= K`` with ``T_n^k x`` outside ``closure(D)`` yet within ``(n/m)^k`` of its boundary."""
    x = as_unit_rational(x)
    a, b = (parse_rational(v, "D") for v in D)
    if not 0 <= a <= b <= 1:
        raise ValueError("D must be an interval inside [0, 1]")
    params = {"n": n, "m": m, "D": [f"{a.numerator}/{a.denominator}", f"{b.numerator}/{b.denominator}"]}
    hits = []
    for k in range(1, K + 1):
        y = orbit_point(x, n, k).as_fraction()
        if a <= y <= b:
            continue
        dist = min(_torus_distance(y, a), _torus_distance(y, b))
        if dist * m ** k <= n ** k:
            hits.append(k)
    return DensityReport(K, hits, windowed_densities(hits, K, window) if K > 0 else [], params)
