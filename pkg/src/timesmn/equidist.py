"""Fourier-mode distance between empirical and target measures on the 2-torus.

Coefficient equality on all of Z^2 characterises a measure, so agreement on
the finite box ``max(|k|, |j|) <= F`` is a necessary condition for weak-*
convergence that can be checked at desk scale.  The thresholds used on top
of it are statistical heuristics (per-mode noise is of order N^-1/2), not
rates that any theorem guarantees.
"""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exact_num import UnitRational, check_precision, independent
from .measures import DEFAULT_TOL, Digit, Lebesgue, MeasureExpr, Product, fourier_2d, measure_to_dict
from .orbits import AffineMap, EmpiricalMeasure2D, run_orbit

PART1 = "part1"
PART2 = "part2"


def mode_weights(F: int) -> np.ndarray:
    """``w[k+F, j+F] = 1/((1+|k|)(1+|j|))`` with the ``(0,0)`` entry zeroed."""
    ks = np.arange(-F, F + 1)
    w = 1.0 / np.outer(1 + np.abs(ks), 1 + np.abs(ks))
    w[F, F] = 0.0
    return w


def target_coefficients(target: MeasureExpr, F: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    out = np.empty((2 * F + 1, 2 * F + 1), dtype=complex)
    for k in range(-F, F + 1):
        for j in range(-F, F + 1):
            out[k + F, j + F] = fourier_2d(target, k, j, tol)
    return out


def mode_errors(e: EmpiricalMeasure2D, target_coeffs: np.ndarray, F: int) -> np.ndarray:
    """``|nu_N^(k,j) - target^(k,j)|`` over the box, ``(0,0)`` set to zero."""
    if F > e.F:
        raise ValueError(f"cutoff F={F} exceeds the accumulator's F={e.F}")
    lo, hi = e.F - F, e.F + F + 1
    err = np.abs(e.coefficients()[lo:hi, lo:hi] - target_coeffs)
    err[F, F] = 0.0
    return err


def fourier_distance(
    e: EmpiricalMeasure2D,
    target: MeasureExpr | np.ndarray,
    F: int | None = None,
    tol: float = DEFAULT_TOL,
) -> float:
    """Weighted sum of mode errors over ``0 < max(|k|,|j|) <= F``.

    ``target`` may be a 2-D measure or a precomputed coefficient array from
    :func:`target_coefficients`.
    """
    F = e.F if F is None else F
    if isinstance(target, np.ndarray):
        coeffs = target
    else:
        if target.dim != 2:
            raise ValueError("target must be a measure on the 2-torus")
        coeffs = target_coefficients(target, F, tol)
    return float(np.sum(mode_weights(F) * mode_errors(e, coeffs, F)))


def target_for(case: str, mu: MeasureExpr | None = None) -> Product:
    """The limit measure predicted for the given case: ``lambda x mu`` or ``lambda x lambda``."""
    if case == PART1:
        if mu is None:
            raise ValueError("part1 needs the measure mu")
        return Product(Lebesgue(), mu)
    if case == PART2:
        return Product(Lebesgue(), Lebesgue())
    raise ValueError(f"unknown case {case!r}; expected 'part1' or 'part2'")


def hypotheses_hold(case: str, m: int, n: int, p: int | None) -> bool:
    """Whether ``(m, n, p)`` satisfy the integer hypotheses of the chosen case."""
    if p is None or not m > n > 1 or p < 2:
        return False
    if not independent(m, p):
        return False
    if case == PART1:
        return n == p
    return independent(n, p)


@dataclass
class ConvergenceReport:
    schedule: list[int]
    case: str
    m: int
    n: int
    p: int | None
    F: int
    distances: list[list[float]]  # [point][schedule index]
    median_distance: list[float]
    max_mode_error: list[float]  # per point, at the final N
    mode_error_table: dict[str, float]  # "k,j" -> median error at final N
    hypotheses_hold: bool
    params: dict = field(default_factory=dict)

    @property
    def median_max_mode_error(self) -> float:
        return float(statistics.median(self.max_mode_error))

    @property
    def trend_ratio(self) -> float:
        """Median distance at the last N over that at the first N."""
        return self.median_distance[-1] / self.median_distance[0]

    @property
    def verdict(self) -> dict | None:
        if not self.hypotheses_hold:
            return None
        return {
            "median_max_mode_error": self.median_max_mode_error,
            "trend_ratio": self.trend_ratio,
            "decreasing": self.median_distance[-1] < self.median_distance[0],
        }

    def to_dict(self) -> dict:
        return {
            "schedule": self.schedule,
            "case": self.case,
            "m": self.m,
            "n": self.n,
            "p": self.p,
            "F": self.F,
            "distances": self.distances,
            "median_distance": self.median_distance,
            "max_mode_error": self.max_mode_error,
            "mode_error_table": self.mode_error_table,
            "hypotheses_hold": self.hypotheses_hold,
            "verdict": self.verdict,
            "thresholds_note": "statistical heuristics (per-mode noise ~ N^-1/2), not proven rates",
            "params": self.params,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["point_id", "N", "distance"])
        for i, row in enumerate(self.distances):
            for N, dist in zip(self.schedule, row):
                w.writerow([i, N, repr(dist)])
        return buf.getvalue()


def convergence_report(
    xs: Sequence[UnitRational],
    f: AffineMap | None,
    g: AffineMap | None,
    m: int,
    n: int,
    mu: MeasureExpr,
    case: str,
    schedule: Sequence[int],
    F: int = 8,
    G: int = 64,
    tol: float = DEFAULT_TOL,
) -> ConvergenceReport:
    """Run every starting point through the schedule and measure its distance to the target.

    Each orbit is streamed once; the accumulator at a scheduled N is the
    merge of the segments before it.
    """
    schedule = [int(N) for N in schedule]
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])) or schedule[0] <= 0:
        raise ValueError("schedule must be a strictly increasing list of positive step counts")
    f = f or AffineMap.identity()
    g = g or AffineMap.identity()
    target = target_for(case, mu)
    coeffs = target_coefficients(target, F, tol)
    weights = mode_weights(F)
    p = mu.base if isinstance(mu, Digit) else None

    distances: list[list[float]] = []
    final_errors: list[np.ndarray] = []
    for x in xs:
        check_precision(x, max(m, n), schedule[-1])
        acc = None
        done = 0
        row = []
        for N in schedule:
            seg = run_orbit(x, f, g, m, n, N - done, F, G, start=done, strict=False)
            acc = seg if acc is None else acc.merge(seg)
            done = N
            errs = mode_errors(acc, coeffs, F)
            row.append(float(np.sum(weights * errs)))
        distances.append(row)
        final_errors.append(errs)

    stack = np.stack(final_errors)
    med = np.median(stack, axis=0)
    table = {
        f"{k},{j}": float(med[k + F, j + F])
        for k in range(-F, F + 1)
        for j in range(-F, F + 1)
        if (k, j) != (0, 0)
    }
    return ConvergenceReport(
        schedule=schedule,
        case=case,
        m=m,
        n=n,
        p=p,
        F=F,
        distances=distances,
        median_distance=[float(statistics.median(col)) for col in zip(*distances)],
        max_mode_error=[float(e.max()) for e in final_errors],
        mode_error_table=table,
        hypotheses_hold=hypotheses_hold(case, m, n, p),
        params={"f": f.to_dict(), "g": g.to_dict(), "G": G, "tol": tol, "mu": measure_to_dict(mu),
                "K": [x.precision for x in xs]},
    )
