"""Exact-arithmetic lab for simultaneous equidistribution of (x, x) under T_m x T_n."""

__version__ = "0.1.0"

from .errors import TimesMNError
from .exact_num import UnitRational, apply_T, in_A_k, make_point, orbit_point
from .measures import Digit, Lebesgue, fourier_1d, fourier_2d, make_alpha, make_beta

__all__ = [
    "__version__",
    "TimesMNError",
    "UnitRational",
    "apply_T",
    "in_A_k",
    "make_point",
    "orbit_point",
    "Digit",
    "Lebesgue",
    "fourier_1d",
    "fourier_2d",
    "make_alpha",
    "make_beta",
]
