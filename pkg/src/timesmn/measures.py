"""Algebraic measure descriptions and their exact / certified evaluators.

A measure is a small immutable expression tree.  Leaves are Lebesgue
measure, Cantor-Lebesgue (``Digit``) measures and finitely supported
(``Atomic``) measures; inner nodes push forward by an affine map, convolve
on the torus, or form a product on the 2-torus.

Cell masses and CDFs are exact rationals.  Fourier coefficients are
complex floats carrying a certified absolute error bound ``tol``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, Sequence, Union

import mpmath
import numpy as np

from .errors import InvalidMeasureError, UnsupportedExactError
from .exact_num import PartitionCell, UnitRational, make_point

DEFAULT_TOL = 1e-12
# below this, float products can no longer honour the requested bound
_FLOAT_TOL_FLOOR = 1e-13


def parse_rational(value: Any, field_name: str = "value") -> Fraction:
    """Parse ``"num/den"``, an int, or a Fraction.  Floats are rejected."""
    if isinstance(value, bool):
        raise InvalidMeasureError(f"{field_name}: expected a rational, got {value!r}", field_name)
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, UnitRational):
        return value.as_fraction()
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise InvalidMeasureError(
        f"{field_name}: expected a rational like \"1/3\", got {value!r}", field_name
    )


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class ProbVector:
    """Exact probability vector; entries are non-negative rationals summing to 1."""

    entries: tuple[Fraction, ...]

    def __init__(self, entries: Sequence[Any]):
        vals = tuple(parse_rational(e, "probs") for e in entries)
        if not vals:
            raise InvalidMeasureError("probs: vector is empty", "probs")
        if any(v < 0 or v > 1 for v in vals):
            raise InvalidMeasureError(f"probs: entries must lie in [0, 1], got {vals}", "probs")
        total = sum(vals)
        if total != 1:
            raise InvalidMeasureError(f"probs: entries sum to {total}, not 1", "probs")
        object.__setattr__(self, "entries", vals)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


# ---------------------------------------------------------------------------
# Expression nodes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lebesgue:
    dim: int = field(default=1, init=False, repr=False)


@dataclass(frozen=True)
class Digit:
    """Law of ``sum X_j base**-j`` with IID digits ``X_j ~ probs``."""

    base: int
    probs: ProbVector
    dim: int = field(default=1, init=False, repr=False)

    def __post_init__(self):
        if self.base < 2:
            raise InvalidMeasureError("base must be at least 2", "base")
        if not isinstance(self.probs, ProbVector):
            object.__setattr__(self, "probs", ProbVector(self.probs))
        if len(self.probs) != self.base:
            raise InvalidMeasureError(
                f"probs: length {len(self.probs)} does not match base {self.base}", "probs"
            )


@dataclass(frozen=True)
class Atomic:
    """``sum w_i delta_{a_i}``; ``atoms`` is a tuple of ``(location, weight)``."""

    atoms: tuple[tuple[Fraction, Fraction], ...]
    dim: int = field(default=1, init=False, repr=False)

    def __post_init__(self):
        atoms = tuple((parse_rational(a, "atoms"), parse_rational(w, "weights")) for a, w in self.atoms)
        ProbVector([w for _, w in atoms])
        for a, _ in atoms:
            if not 0 <= a < 1:
                raise InvalidMeasureError(f"atoms: location {a} is outside [0, 1)", "atoms")
        object.__setattr__(self, "atoms", atoms)


@dataclass(frozen=True)
class AffinePush:
    """Push-forward of a 1-D measure by ``x -> scale*x + offset``."""

    child: "MeasureExpr"
    scale: Fraction
    offset: Fraction
    dim: int = field(default=1, init=False, repr=False)

    def __post_init__(self):
        s = parse_rational(self.scale, "scale")
        o = parse_rational(self.offset, "offset")
        object.__setattr__(self, "scale", s)
        object.__setattr__(self, "offset", o)
        if self.child.dim != 1:
            raise InvalidMeasureError("affine push-forward needs a 1-D child", "child")
        if not (0 <= o <= 1 and 0 <= s + o <= 1):
            raise InvalidMeasureError(f"image of [0,1] under {s}*x + {o} leaves [0,1]", "scale")


@dataclass(frozen=True)
class Convolve:
    left: "MeasureExpr"
    right: "MeasureExpr"

    def __post_init__(self):
        if self.left.dim != self.right.dim:
            raise InvalidMeasureError("convolution of measures of different dimension", "right")

    @property
    def dim(self) -> int:
        return self.left.dim


@dataclass(frozen=True)
class Product:
    first: "MeasureExpr"
    second: "MeasureExpr"
    dim: int = field(default=2, init=False, repr=False)

    def __post_init__(self):
        if self.first.dim != 1 or self.second.dim != 1:
            raise InvalidMeasureError("product factors must be 1-D", "first")


MeasureExpr = Union[Lebesgue, Digit, Atomic, AffinePush, Convolve, Product]


def make_alpha(n: int, k: int) -> Atomic:
    """Uniform measure on the period-2 orbit ``{1/(n^2k - 1), n^k/(n^2k - 1)}`` of ``T_{n^k}``."""
    if n < 2 or k < 1:
        raise ValueError("requires n >= 2 and k >= 1")
    d = n ** (2 * k) - 1
    half = Fraction(1, 2)
    return Atomic(((Fraction(1, d), half), (Fraction(n ** k, d), half)))


def make_beta(m: int) -> Digit:
    """Bernoulli measure in base ``m`` with digit law ``(1/3, 2/3, 0, ..., 0)``."""
    if m < 2:
        raise ValueError("requires m >= 2")
    return Digit(m, ProbVector([Fraction(1, 3), Fraction(2, 3)] + [0] * (m - 2)))


# ---------------------------------------------------------------------------
# Fourier coefficients
# ---------------------------------------------------------------------------


def _e(phase: Fraction) -> complex:
    """``exp(2 pi i phase)``, with the phase reduced exactly mod 1 first."""
    phase = phase - math.floor(phase)
    if phase == 0:
        return 1 + 0j
    return cmath.exp(2j * math.pi * float(phase))


def _digit_levels(m: int, k: int, mean_digit: float, tol: float) -> int:
    """Levels ``J`` after which the infinite product is within ``tol/2``.

    Each factor satisfies ``|f_j - 1| <= 2 pi |k| E[X] / m^j``, so the tail
    product differs from 1 by at most ``exp(S) - 1`` with ``S`` the tail sum;
    ``S <= tol/4`` keeps that below ``tol/2``.
    """
    if mean_digit == 0 or k == 0:
        return 0
    J = 0
    tail = 2 * math.pi * abs(k) * mean_digit / (m - 1)
    while tail > tol / 4:
        tail /= m
        J += 1
    return J


def _digit_fourier(mu: Digit, k: int, tol: float) -> complex:
    if k == 0:
        return 1 + 0j
    m = mu.base
    support = [(u, p) for u, p in enumerate(mu.probs) if p != 0]
    mean_digit = float(sum(u * p for u, p in support))
    J = _digit_levels(m, k, mean_digit, tol)
    if tol >= _FLOAT_TOL_FLOOR:
        # the phase (u k mod m^j) / m^j is reduced exactly in integers before rounding
        weights = [(u, float(p)) for u, p in support]
        two_pi = 2 * math.pi
        acc = 1 + 0j
        mj = 1
        for _ in range(J):
            mj *= m
            acc *= sum(w * cmath.exp(1j * two_pi * ((u * k % mj) / mj)) for u, w in weights)
        return acc
    digits = max(30, int(-math.log10(tol)) + 10)
    with mpmath.workdps(digits):
        acc = mpmath.mpc(1)
        for j in range(1, J + 1):
            mj = m ** j
            acc *= mpmath.fsum(
                mpmath.mpf(p.numerator) / p.denominator * mpmath.expjpi(2 * mpmath.mpf(u * k % mj) / mj)
                for u, p in support
            )
        return complex(acc)


def fourier_1d(expr: MeasureExpr, k: int, tol: float = DEFAULT_TOL) -> complex:
    """``mu^(k) = integral exp(2 pi i k x) dmu(x)`` within absolute error ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    k = int(k)
    if isinstance(expr, Lebesgue):
        return 1 + 0j if k == 0 else 0j
    if isinstance(expr, Digit):
        return _digit_fourier(expr, k, tol)
    if isinstance(expr, Atomic):
        return sum((float(w) * _e(k * a) for a, w in expr.atoms), 0j)
    if isinstance(expr, AffinePush):
        ks = k * expr.scale
        if ks.denominator != 1:
            raise UnsupportedExactError(
                f"push-forward by scale {expr.scale} sends frequency {k} to non-integer {ks}"
            )
        return _e(k * expr.offset) * fourier_1d(expr.child, int(ks), tol)
    if isinstance(expr, Convolve):
        if expr.dim != 1:
            raise ValueError("fourier_1d needs a 1-D measure")
        return fourier_1d(expr.left, k, tol / 3) * fourier_1d(expr.right, k, tol / 3)
    if isinstance(expr, Product):
        raise ValueError("fourier_1d needs a 1-D measure; use fourier_2d for products")
    raise TypeError(f"not a measure expression: {expr!r}")


def fourier_2d(expr: MeasureExpr, k: int, j: int, tol: float = DEFAULT_TOL) -> complex:
    """``mu^(k, j)`` for a measure on the 2-torus."""
    if isinstance(expr, Product):
        return fourier_1d(expr.first, k, tol / 3) * fourier_1d(expr.second, j, tol / 3)
    if isinstance(expr, Convolve) and expr.dim == 2:
        return fourier_2d(expr.left, k, j, tol / 3) * fourier_2d(expr.right, k, j, tol / 3)
    raise ValueError("fourier_2d needs a 2-D measure")


# ---------------------------------------------------------------------------
# Exact CDFs and cell masses
# ---------------------------------------------------------------------------


def _contains_convolve(expr: MeasureExpr) -> bool:
    if isinstance(expr, Convolve):
        return True
    if isinstance(expr, AffinePush):
        return _contains_convolve(expr.child)
    if isinstance(expr, Product):
        return _contains_convolve(expr.first) or _contains_convolve(expr.second)
    return False


class _DigitLaw:
    """Integer form of a digit law: ``p_u = a[u]/D`` and ``sum_{v<u} p_v = c[u]/D``."""

    def __init__(self, mu: Digit):
        self.base = mu.base
        self.D = math.lcm(*(p.denominator for p in mu.probs))
        self.a = [p.numerator * (self.D // p.denominator) for p in mu.probs]
        self.c = [sum(self.a[:u]) for u in range(self.base)]

    def fold(self, digits: Sequence[int], V: int, Q: int) -> tuple[int, int]:
        """Apply ``F <- c_d + p_d F`` for ``digits`` read right to left, starting from ``F = V/Q``."""
        D, a, c = self.D, self.a, self.c
        for d in reversed(digits):
            V = c[d] * Q + a[d] * V
            Q *= D
        return V, Q


def _digit_cdf(mu: Digit, x: Fraction) -> Fraction:
    """``mu([0, x))`` for rational ``x`` in [0, 1), using its eventually periodic expansion."""
    law = _DigitLaw(mu)
    num, den = x.numerator, x.denominator
    digits: list[int] = []
    seen: dict[int, int] = {}
    while num != 0 and num not in seen:
        seen[num] = len(digits)
        d, num = divmod(num * law.base, den)
        digits.append(d)
    if num == 0:
        V, Q = law.fold(digits, 0, 1)
        return Fraction(V, Q)
    s = seen[num]
    cycle = digits[s:]
    A_num, A_den = law.fold(cycle, 0, 1)
    B_num = math.prod(law.a[d] for d in cycle)
    B_den = law.D ** len(cycle)
    if B_num == B_den:
        # the cycle is a sure path, so the tail point is the atom itself
        tail = Fraction(0)
    else:
        tail = Fraction(A_num, A_den) / (1 - Fraction(B_num, B_den))
    V, Q = law.fold(digits[:s], tail.numerator, tail.denominator)
    return Fraction(V, Q)


def cdf(expr: MeasureExpr, x) -> Fraction:
    """``mu([0, x))`` as an exact rational.

    The left-open convention makes ``cdf(b) - cdf(a)`` the mass of the
    half-open interval ``[a, b)``, matching the partition cells.
    """
    q = x.as_fraction() if isinstance(x, UnitRational) else parse_rational(x, "x")
    if _contains_convolve(expr):
        raise UnsupportedExactError("exact masses of convolutions are not available")
    if expr.dim != 1:
        raise ValueError("cdf needs a 1-D measure")
    if q <= 0:
        return Fraction(0)
    if q >= 1:
        return Fraction(1)
    if isinstance(expr, Lebesgue):
        return q
    if isinstance(expr, Digit):
        return _digit_cdf(expr, q)
    if isinstance(expr, Atomic):
        return sum((w for a, w in expr.atoms if a < q), Fraction(0))
    if isinstance(expr, AffinePush):
        s, o = expr.scale, expr.offset
        if s == 0:
            return Fraction(1) if o < q else Fraction(0)
        if s < 0:
            raise UnsupportedExactError("negative-scale push-forward needs closed-interval masses")
        return cdf(expr.child, (q - o) / s)
    raise TypeError(f"not a measure expression: {expr!r}")


def cell_mass(expr: MeasureExpr, cell: PartitionCell) -> Fraction:
    """Exact mass of a half-open partition cell."""
    if _contains_convolve(expr):
        raise UnsupportedExactError("exact masses of convolutions are not available")
    if isinstance(expr, Lebesgue):
        return Fraction(1, cell.base ** cell.level)
    if isinstance(expr, Digit) and expr.base == cell.base:
        return math.prod((expr.probs[d] for d in cell.digits()), start=Fraction(1))
    if isinstance(expr, Atomic):
        return sum((w for a, w in expr.atoms if cell.contains(a)), Fraction(0))
    return cdf(expr, cell.right) - cdf(expr, cell.left)


# ---------------------------------------------------------------------------
# Entropy and dimension
# ---------------------------------------------------------------------------


def entropy(p: ProbVector | Sequence) -> float:
    """Shannon entropy in nats, with ``0 log 0 = 0``."""
    if not isinstance(p, ProbVector):
        p = ProbVector(p)
    return -sum(float(x) * math.log(x) for x in p if x > 0) + 0.0


def digit_dimension(base: int, p: ProbVector | Sequence) -> float:
    """Dimension ``H(p)/log(base)`` of the Cantor-Lebesgue measure."""
    return entropy(p) / math.log(base)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample(expr: MeasureExpr, seed, K: int) -> UnitRational:
    """Draw a typical point: ``K`` IID digits for ``Digit``, an atom for ``Atomic``."""
    rng = _rng(seed)
    if isinstance(expr, Lebesgue):
        expr = Digit(2, ProbVector([Fraction(1, 2), Fraction(1, 2)]))
    if isinstance(expr, Digit):
        if K < 1:
            raise ValueError("K must be at least 1")
        probs = np.array([float(p) for p in expr.probs])
        digits = rng.choice(expr.base, size=K, p=probs / probs.sum())
        return make_point(digits.tolist(), expr.base)
    if isinstance(expr, Atomic):
        weights = np.array([float(w) for _, w in expr.atoms])
        i = int(rng.choice(len(expr.atoms), p=weights / weights.sum()))
        return UnitRational.from_fraction(expr.atoms[i][0])
    raise UnsupportedExactError(f"cannot sample from {type(expr).__name__}")


# ---------------------------------------------------------------------------
# JSON vocabulary
# ---------------------------------------------------------------------------


def measure_to_dict(expr: MeasureExpr) -> dict:
    if isinstance(expr, Lebesgue):
        return {"type": "lebesgue"}
    if isinstance(expr, Digit):
        return {"type": "digit", "base": expr.base, "probs": [format_rational(p) for p in expr.probs]}
    if isinstance(expr, Atomic):
        return {
            "type": "atomic",
            "atoms": [format_rational(a) for a, _ in expr.atoms],
            "weights": [format_rational(w) for _, w in expr.atoms],
        }
    if isinstance(expr, AffinePush):
        return {
            "type": "affine",
            "child": measure_to_dict(expr.child),
            "scale": format_rational(expr.scale),
            "offset": format_rational(expr.offset),
        }
    if isinstance(expr, Convolve):
        return {"type": "convolve", "left": measure_to_dict(expr.left), "right": measure_to_dict(expr.right)}
    if isinstance(expr, Product):
        return {"type": "product", "first": measure_to_dict(expr.first), "second": measure_to_dict(expr.second)}
    raise TypeError(f"not a measure expression: {expr!r}")


def measure_from_dict(d: dict) -> MeasureExpr:
    """Inverse of :func:`measure_to_dict`.

    Also accepts the shorthands ``{"type": "beta", "m": m}`` and
    ``{"type": "alpha", "n": n, "k": k}``.
    """
    if not isinstance(d, dict) or "type" not in d:
        raise InvalidMeasureError("measure must be an object with a \"type\" key", "type")
    kind = d["type"]
    try:
        if kind == "lebesgue":
            return Lebesgue()
        if kind == "digit":
            return Digit(int(d["base"]), ProbVector(d["probs"]))
        if kind == "atomic":
            if len(d["atoms"]) != len(d["weights"]):
                raise InvalidMeasureError("atoms and weights differ in length", "weights")
            return Atomic(tuple(zip(d["atoms"], d["weights"])))
        if kind == "affine":
            return AffinePush(measure_from_dict(d["child"]), d["scale"], d["offset"])
        if kind == "convolve":
            return Convolve(measure_from_dict(d["left"]), measure_from_dict(d["right"]))
        if kind == "product":
            return Product(measure_from_dict(d["first"]), measure_from_dict(d["second"]))
        if kind == "beta":
            return make_beta(int(d["m"]))
        if kind == "alpha":
            return make_alpha(int(d["n"]), int(d["k"]))
    except KeyError as exc:
        raise InvalidMeasureError(f"measure of type {kind!r} is missing {exc.args[0]!r}", exc.args[0])
    raise InvalidMeasureError(f"unknown measure type {kind!r}", "type")
