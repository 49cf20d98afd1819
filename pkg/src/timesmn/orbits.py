"""Simultaneous orbits ``(T_m^i f(x), T_n^i g(x))`` and streaming statistics."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import EmptyMeasureError, ModeRangeError
from .exact_num import UnitRational, check_precision, orbit_point
from .measures import format_rational, parse_rational

DEFAULT_F = 8
DEFAULT_G = 64
_CHUNK = 4096


@dataclass(frozen=True)
class AffineMap:
    """``x -> scale*x + offset`` with ``[0,1]`` mapped into ``[0,1]``."""

    scale: Fraction = Fraction(1)
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        s = parse_rational(self.scale, "scale")
        o = parse_rational(self.offset, "offset")
        object.__setattr__(self, "scale", s)
        object.__setattr__(self, "offset", o)
        if not (0 <= o <= 1 and 0 <= s + o <= 1):
            raise ValueError(f"affine map {s}*x + {o} does not send [0,1] into [0,1]")

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(Fraction(1), Fraction(0))

    @property
    def is_identity(self) -> bool:
        return self.scale == 1 and self.offset == 0

    def __call__(self, x: UnitRational) -> UnitRational:
        if self.is_identity:
            return x
        y = self.scale * x.as_fraction() + self.offset
        if y == 1:
            # the circle identifies 1 with 0
            y = Fraction(0)
        return UnitRational.from_fraction(y)

    def to_dict(self) -> dict:
        return {"scale": format_rational(self.scale), "offset": format_rational(self.offset)}

    @classmethod
    def from_dict(cls, d: dict | None) -> "AffineMap":
        if d is None:
            return cls.identity()
        return cls(d.get("scale", 1), d.get("offset", 0))


@dataclass
class EmpiricalMeasure2D:
    """Streaming accumulator for ``sum_i delta_(u_i, v_i)`` on the 2-torus.

    ``fourier_sums[k + F, j + F]`` holds ``sum_i exp(2 pi i (k u_i + j v_i))``
    and ``grid[b, a]`` counts points with ``u`` in column ``a`` and ``v`` in
    row ``b`` of the ``G x G`` half-open grid.
    """

    F: int = DEFAULT_F
    G: int = DEFAULT_G
    count: int = 0
    fourier_sums: np.ndarray = None
    grid: np.ndarray = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        size = 2 * self.F + 1
        if self.fourier_sums is None:
            self.fourier_sums = np.zeros((size, size), dtype=complex)
        if self.grid is None:
            self.grid = np.zeros((self.G, self.G), dtype=np.int64)

    def add_points(self, u: np.ndarray, v: np.ndarray, u_cells: np.ndarray, v_cells: np.ndarray) -> None:
        ks = np.arange(-self.F, self.F + 1)
        eu = np.exp(2j * np.pi * np.outer(u, ks))
        ev = np.exp(2j * np.pi * np.outer(v, ks))
        eu[:, self.F] = 1.0
        ev[:, self.F] = 1.0
        self.fourier_sums += eu.T @ ev
        np.add.at(self.grid, (v_cells, u_cells), 1)
        self.count += len(u)

    def merge(self, other: "EmpiricalMeasure2D") -> "EmpiricalMeasure2D":
        if (self.F, self.G) != (other.F, other.G):
            raise ValueError("cannot merge accumulators with different F or G")
        out = EmpiricalMeasure2D(self.F, self.G, self.count + other.count,
                                 self.fourier_sums + other.fourier_sums,
                                 self.grid + other.grid, dict(self.params))
        return out

    def coefficient(self, k: int, j: int) -> complex:
        return empirical_fourier(self, k, j)

    def coefficients(self) -> np.ndarray:
        if self.count == 0:
            raise EmptyMeasureError("empirical measure has no points")
        return self.fourier_sums / self.count

    def to_dict(self) -> dict:
        fourier = {}
        for k in range(-self.F, self.F + 1):
            for j in range(-self.F, self.F + 1):
                z = self.fourier_sums[k + self.F, j + self.F]
                fourier[f"{k},{j}"] = [float(z.real), float(z.imag)]
        return {
            "count": self.count,
            "F": self.F,
            "G": self.G,
            "grid": self.grid.tolist(),
            "fourier": fourier,
            "params": self.params,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EmpiricalMeasure2D":
        F, G = d["F"], d["G"]
        sums = np.zeros((2 * F + 1, 2 * F + 1), dtype=complex)
        for key, (re, im) in d["fourier"].items():
            k, j = map(int, key.split(","))
            sums[k + F, j + F] = complex(re, im)
        return cls(F, G, d["count"], sums, np.array(d["grid"], dtype=np.int64), dict(d.get("params", {})))


def empirical_fourier(e: EmpiricalMeasure2D, k: int, j: int) -> complex:
    """Fourier coefficient ``(1/N) sum_i exp(2 pi i (k u_i + j v_i))``."""
    if e.count == 0:
        raise EmptyMeasureError("empirical measure has no points")
    if abs(k) > e.F or abs(j) > e.F:
        raise ModeRangeError(f"mode ({k},{j}) exceeds cutoff F={e.F}")
    return complex(e.fourier_sums[k + e.F, j + e.F] / e.count)


def orbit_pair(x: UnitRational, f: AffineMap, g: AffineMap, m: int, n: int, steps: int, start: int = 0):
    """Yield the exact pairs ``(T_m^i f(x), T_n^i g(x))`` for ``start <= i < start + steps``."""
    u = orbit_point(f(x), m, start)
    v = orbit_point(g(x), n, start)
    un, ud = u.numerator, u.denominator
    vn, vd = v.numerator, v.denominator
    for _ in range(steps):
        yield UnitRational(un, ud), UnitRational(vn, vd)
        un = un * m % ud
        vn = vn * n % vd


def run_orbit(
    x: UnitRational,
    f: AffineMap | None = None,
    g: AffineMap | None = None,
    m: int = 3,
    n: int = 2,
    N: int = 1000,
    F: int = DEFAULT_F,
    G: int = DEFAULT_G,
    start: int = 0,
    strict: bool = True,
) -> EmpiricalMeasure2D:
    """Accumulate ``N`` orbit points beginning at step ``start``.

    With ``strict`` the call refuses ``m <= n`` and starting points whose
    precision is too small for ``start + N`` steps of ``T_max(m,n)``.
    Orbit points are exact; only the Fourier sums use floating point.
    """
    f = f or AffineMap.identity()
    g = g or AffineMap.identity()
    if strict:
        if not m > n > 1:
            raise ValueError(f"requires m > n > 1, got m={m}, n={n}")
        check_precision(x, max(m, n), start + N)
    acc = EmpiricalMeasure2D(F, G)
    acc.params = {"m": m, "n": n, "start": start, "N": N, "f": f.to_dict(), "g": g.to_dict()}
    if x.precision is not None:
        acc.params["K"] = x.precision
        acc.params["base"] = x.base

    u0 = orbit_point(f(x), m, start)
    v0 = orbit_point(g(x), n, start)
    un, ud = u0.numerator, u0.denominator
    vn, vd = v0.numerator, v0.denominator
    done = 0
    while done < N:
        size = min(_CHUNK, N - done)
        u = np.empty(size)
        v = np.empty(size)
        ucell = np.empty(size, dtype=np.int64)
        vcell = np.empty(size, dtype=np.int64)
        for i in range(size):
            u[i] = un / ud
            v[i] = vn / vd
            ucell[i] = un * G // ud
            vcell[i] = vn * G // vd
            un = un * m % ud
            vn = vn * n % vd
        acc.add_points(u, v, ucell, vcell)
        done += size
    return acc
