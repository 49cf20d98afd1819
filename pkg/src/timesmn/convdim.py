"""Entropy-per-scale dimension of self-convolutions on an m-adic lattice."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_num import PartitionCell
from .measures import Digit, cell_mass


@dataclass(frozen=True)
class LatticeMeasure:
    """Masses of the ``base**level`` cells, stored as integers over a shared denominator."""

    base: int
    level: int
    numerators: tuple[int, ...]
    denominator: int

    def __post_init__(self):
        if self.level < 1 or self.base < 2:
            raise ValueError("requires base >= 2 and level >= 1")
        if len(self.numerators) != self.base ** self.level:
            raise ValueError("mass vector length must be base**level")
        if any(a < 0 for a in self.numerators) or sum(self.numerators) != self.denominator:
            raise ValueError("masses must be non-negative and sum to 1")

    @classmethod
    def from_masses(cls, base: int, level: int, masses: Sequence[Fraction]) -> "LatticeMeasure":
        masses = [Fraction(q) for q in masses]
        den = math.lcm(*(q.denominator for q in masses))
        return cls(base, level, tuple(q.numerator * (den // q.denominator) for q in masses), den)

    @property
    def masses(self) -> list[Fraction]:
        return [Fraction(a, self.denominator) for a in self.numerators]


def discretize(mu: Digit, k: int) -> LatticeMeasure:
    """Exact cylinder masses of a Digit measure at level ``k``."""
    if not isinstance(mu, Digit):
        raise TypeError("discretize needs a Digit measure")
    m = mu.base
    masses = [cell_mass(mu, PartitionCell(m, k, z)) for z in range(m ** k)]
    return LatticeMeasure.from_masses(m, k, masses)


def coarse_convolve(a: LatticeMeasure, b: LatticeMeasure) -> LatticeMeasure:
    """Cyclic convolution ``c[z] = sum_{u+v = z mod m^k} a[u] b[v]``."""
    if (a.base, a.level) != (b.base, b.level):
        raise ValueError("lattice measures must share base and level")
    size = len(a.numerators)
    out = [0] * size
    bn = b.numerators
    for u, au in enumerate(a.numerators):
        if au == 0:
            continue
        for v, bv in enumerate(bn):
            if bv:
                out[(u + v) % size] += au * bv
    den = a.denominator * b.denominator
    g = math.gcd(den, *out)
    return LatticeMeasure(a.base, a.level, tuple(x // g for x in out), den // g)


def coarse_dimension(a: LatticeMeasure) -> float:
    """``-sum q log q / (k log m)`` over the cell masses ``q``."""
    h = 0.0
    for num in a.numerators:
        if num:
            q = num / a.denominator
            h -= q * math.log(q)
    return h / (a.level * math.log(a.base))


def convolution_growth(mu: Digit, q_max: int, k: int) -> list[float]:
    """Coarse dimension of the ``q``-fold convolution power for ``q = 1..q_max``."""
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    base = discretize(mu, k)
    power = base
    out = [coarse_dimension(power)]
    for _ in range(q_max - 1):
        power = coarse_convolve(power, base)
        out.append(coarse_dimension(power))
    return out


def growth_csv(rows: Sequence[tuple[int, int, float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "k", "coarse_dimension"])
    for q, k, d in rows:
        w.writerow([q, k, repr(d)])
    return buf.getvalue()
