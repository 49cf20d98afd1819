"""Exact points of the circle, the maps T_m, and p-adic partition cells.

Every quantity here is an integer or a ratio of integers; nothing is
rounded.  A point with ``K`` base-``p`` digits has denominator ``p**K`` and
``T_m`` never changes it, so long orbits stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidDigitError, PrecisionError

GUARD_DIGITS = 64
_DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True, eq=False)
class UnitRational:
    """A point ``numerator/denominator`` of [0, 1).

    ``base`` and ``precision`` are optional provenance: a point built from
    ``K`` base-``p`` digits carries ``base=p, precision=K`` and
    ``denominator == p**K``.  Equality and hashing are by value.
    """

    numerator: int
    denominator: int
    base: int | None = None
    precision: int | None = None

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        if not 0 <= self.numerator < self.denominator:
            raise ValueError(
                f"numerator must lie in [0, denominator), got {self.numerator}/{self.denominator}"
            )
        if self.base is not None:
            if self.precision is None or self.base ** self.precision != self.denominator:
                raise ValueError("a point with a declared base must have denominator base**precision")

    @classmethod
    def from_fraction(cls, q: Fraction | int | str) -> "UnitRational":
        q = Fraction(q)
        if not 0 <= q < 1:
            raise ValueError(f"{q} is not in [0, 1)")
        return cls(q.numerator, q.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def reduced(self) -> "UnitRational":
        g = math.gcd(self.numerator, self.denominator)
        return UnitRational(self.numerator // g, self.denominator // g)

    def __float__(self) -> float:
        # int / int is correctly rounded even for huge operands
        return self.numerator / self.denominator

    def __eq__(self, other):
        if isinstance(other, UnitRational):
            return self.numerator * other.denominator == other.numerator * self.denominator
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.as_fraction())

    def __lt__(self, other):
        return self.as_fraction() < _as_fraction(other)

    def __le__(self, other):
        return self.as_fraction() <= _as_fraction(other)

    def __repr__(self):
        if self.base is not None and self.precision is not None and self.precision > 8:
            return f"UnitRational(<{self.precision} base-{self.base} digits>)"
        return f"UnitRational({self.numerator}/{self.denominator})"


def _as_fraction(x) -> Fraction:
    if isinstance(x, UnitRational):
        return x.as_fraction()
    return Fraction(x)


def as_unit_rational(x) -> UnitRational:
    if isinstance(x, UnitRational):
        return x
    return UnitRational.from_fraction(x)


@dataclass(frozen=True)
class PartitionCell:
    """The half-open interval ``[index/base**level, (index+1)/base**level)``."""

    base: int
    level: int
    index: int

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be at least 2")
        if self.level < 0:
            raise ValueError("level must be non-negative")
        if not 0 <= self.index < self.base ** self.level:
            raise ValueError(f"index {self.index} out of range for base {self.base} level {self.level}")

    @property
    def left(self) -> Fraction:
        return Fraction(self.index, self.base ** self.level)

    @property
    def right(self) -> Fraction:
        return Fraction(self.index + 1, self.base ** self.level)

    def contains(self, x) -> bool:
        q = _as_fraction(x)
        return self.left <= q < self.right

    def digits(self) -> list[int]:
        """Base-``base`` digits of ``index``, most significant first, padded to ``level``."""
        out = []
        z = self.index
        for _ in range(self.level):
            z, d = divmod(z, self.base)
            out.append(d)
        return out[::-1]


def make_point(digits: Sequence[int] | Iterable[int], base: int) -> UnitRational:
    """Return ``0.d_1 d_2 ... d_K`` in base ``base`` as an exact point.

    >>> make_point([1, 2, 0], 3)
    UnitRational(15/27)
    """
    if base < 2:
        raise ValueError("base must be at least 2")
    digits = [int(d) for d in digits]
    if not digits:
        raise InvalidDigitError("at least one digit is required")
    for pos, d in enumerate(digits):
        if not 0 <= d < base:
            raise InvalidDigitError(f"digit {d} at position {pos} is outside [0, {base})")
    if base <= 36:
        numerator = int("".join(_DIGIT_CHARS[d] for d in digits), base)
    else:
        numerator = 0
        for d in digits:
            numerator = numerator * base + d
    K = len(digits)
    return UnitRational(numerator, base ** K, base=base, precision=K)


def digits_of(x: UnitRational, base: int, count: int) -> list[int]:
    """First ``count`` base-``base`` digits of ``x`` (greedy expansion)."""
    out = []
    num, den = x.numerator, x.denominator
    for _ in range(count):
        d, num = divmod(num * base, den)
        out.append(d)
    return out


def apply_T(x: UnitRational, factor: int) -> UnitRational:
    """``T_m(x) = m*x mod 1``; the denominator is unchanged."""
    return UnitRational((factor * x.numerator) % x.denominator, x.denominator, x.base, x.precision)


def orbit_point(x: UnitRational, factor: int, step: int) -> UnitRational:
    """``T_m^i(x)`` by modular exponentiation."""
    if step < 0:
        raise ValueError("step must be non-negative")
    den = x.denominator
    num = (pow(factor, step, den) * x.numerator) % den
    return UnitRational(num, den, x.base, x.precision)


def cell_of(x: UnitRational | Fraction, base: int, level: int) -> PartitionCell:
    if level < 0:
        raise ValueError("level must be non-negative")
    q = _as_fraction(x)
    index = (q.numerator * base ** level) // q.denominator
    return PartitionCell(base, level, index)


def in_A_k(x: UnitRational | Fraction, m: int, n: int, k: int) -> bool:
    """True iff the ``m**k``-adic cell of ``x`` is not inside its ``n**k``-adic cell.

    Equivalently some ``s/n**k`` lies strictly inside ``[z/m**k, (z+1)/m**k)``,
    i.e. ``z*n**k < s*m**k < (z+1)*n**k`` for an integer ``s``.
    """
    if not m > n > 1:
        raise ValueError("requires m > n > 1")
    if k < 1:
        raise ValueError("requires k >= 1")
    q = _as_fraction(x)
    M, N = m ** k, n ** k
    z = (q.numerator * M) // q.denominator
    s = (z * N) // M + 1  # least s with s/N > z/M
    return s * M < (z + 1) * N


def min_exponent(base: int, target: int) -> int:
    """Least ``e >= 0`` with ``base**e >= target``, decided exactly."""
    if target <= 1:
        return 0
    e = max(0, int((target.bit_length() - 1) / math.log2(base)) - 1)
    while e > 0 and base ** (e - 1) >= target:
        e -= 1
    while base ** e < target:
        e += 1
    return e


def required_precision(steps: int, factor: int, base: int, guard: int = GUARD_DIGITS) -> int:
    """Digits ``K`` of a base-``base`` point needed for ``steps`` iterations of ``T_factor``.

    ``K = ceil(steps*log(factor)/log(base)) + guard``, evaluated with exact
    integer comparisons so no rounding can undercount.
    """
    if steps <= 0:
        return guard
    return min_exponent(base, factor ** steps) + guard


def check_precision(x: UnitRational, factor: int, steps: int, guard: int = GUARD_DIGITS) -> None:
    """Raise :class:`PrecisionError` unless ``x`` carries enough digits."""
    if x.base is not None:
        need = required_precision(steps, factor, x.base, guard)
        if x.precision < need:
            raise PrecisionError(
                f"starting point has K={x.precision} base-{x.base} digits; "
                f"{steps} steps of T_{factor} require K >= {need}",
                required_digits=need,
            )
        return
    # no declared base: measure in bits
    need = required_precision(steps, factor, 2, guard)
    if x.denominator < 2 ** need:
        raise PrecisionError(
            f"starting point denominator has {x.denominator.bit_length()} bits; "
            f"{steps} steps of T_{factor} require at least {need} bits",
            required_digits=need,
        )


def _prime_exponents(a: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= a:
        while a % d == 0:
            out[d] = out.get(d, 0) + 1
            a //= d
        d += 1
    if a > 1:
        out[a] = out.get(a, 0) + 1
    return out


def independent(a: int, b: int) -> bool:
    """``log a / log b`` irrational, i.e. ``a`` and ``b`` are not powers of a common integer."""
    if a < 2 or b < 2:
        raise ValueError("independence is defined for integers >= 2")
    ea, eb = _prime_exponents(a), _prime_exponents(b)
    if ea.keys() != eb.keys():
        return True
    primes = sorted(ea)
    # exponent vectors proportional <=> dependent
    p0 = primes[0]
    return any(ea[p] * eb[p0] != eb[p] * ea[p0] for p in primes)
