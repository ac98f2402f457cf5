"""Pieces shared by the compiled and pure-Python special-function backends."""

from __future__ import annotations

import enum
import math
from statistics import NormalDist

__all__ = [
    "Branch",
    "SpecfunDomainError",
    "INV_E",
    "INV_E_LO",
    "q_function",
    "q_inverse",
]

# 1/e split into a double plus its rounding error, for accurate 1 + e*z
INV_E = 0.36787944117144233
INV_E_LO = -1.2428753672788363e-17

_STD_NORMAL = NormalDist()


class SpecfunDomainError(ValueError):
    """Argument outside the domain of a special function."""


class Branch(enum.IntEnum):
    """Real branches of the Lambert W function."""

    PRINCIPAL = 0
    NEGATIVE_ONE = -1


def q_function(x: float) -> float:
    """Upper tail of the standard normal, Q(x) = P(Z > x)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def q_inverse(p: float) -> float:
    """Inverse of :func:`q_function` on (0, 1)."""
    if not (0.0 < p < 1.0):
        raise SpecfunDomainError(f"q_inverse needs p in (0, 1), got {p!r}")
    # inv_cdf is accurate in both tails; evaluate on the small side
    if p <= 0.5:
        x = -_STD_NORMAL.inv_cdf(p)
    else:
        x = _STD_NORMAL.inv_cdf(1.0 - p)
    # one Newton polish against erfc
    phi = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    if phi > 0.0:
        x += (q_function(x) - p) / phi
    return x
