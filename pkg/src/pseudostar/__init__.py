"""Symbolic-power initial sequences and pseudo-star recognition for
arrangements of linear flats, computed by exact linear algebra over F_p."""

from .exactalg import DEFAULT_PRIME, SECOND_PRIME
from .geometry import Arrangement, Flat, LinearForm
from .ideals import alpha, initial_sequence, symbolic_power_dim
from .configs import classify, recognize_pseudo_star

__all__ = [
    "DEFAULT_PRIME",
    "SECOND_PRIME",
    "Arrangement",
    "Flat",
    "LinearForm",
    "alpha",
    "initial_sequence",
    "symbolic_power_dim",
    "classify",
    "recognize_pseudo_star",
]

__version__ = "0.1.0"
