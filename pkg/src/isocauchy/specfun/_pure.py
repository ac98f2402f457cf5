"""Pure-Python special-function kernels.

Mirrors ``_kernels.pyx`` line for line; used when the compiled extension is
not available and as the reference side of the backend benchmark.
"""

from __future__ import annotations

import math

from ._common import INV_E, INV_E_LO, Branch, SpecfunDomainError

__all__ = [
    "lambert_w",
    "lambert_w_offset",
    "lambert_wm1_log",
    "log_gamma",
    "reg_gamma_pair",
    "reg_gamma_lower",
    "reg_gamma_upper",
    "reg_beta_pair",
    "reg_beta",
]

BACKEND = "pure"

_E = math.e
_EPS = 2.220446049250313e-16
_FPMIN = 1e-300
_MAXIT = 10000
# slack allowed below the branch point, in units of 1 + e*z
_BRANCH_SLACK = 4.0 * _EPS
# below this distance from the branch point the series is used as is
_SERIES_ONLY = 1e-3


def _branch_series(p: float) -> float:
    # W = -1 + p - p^2/3 + 11/72 p^3 - ...  (p signed by branch)
    return -1.0 + p * (
        1.0
        + p * (-1.0 / 3.0
        + p * (11.0 / 72.0
        + p * (-43.0 / 540.0
        + p * (769.0 / 17280.0
        + p * (-221.0 / 8505.0
        + p * (680863.0 / 43545600.0)))))))


def _halley(w: float, z: float) -> float:
    # iterate on g(w) = w - z*exp(-w), which never overflows for real branches
    if z == 0.0:
        return w
    lz = math.log(abs(z))
    sz = 1.0 if z > 0.0 else -1.0
    for _ in range(64):
        g = w - sz * math.exp(lz - w)
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        dw = g / (wp1 - 0.5 * (w + 2.0) * g / wp1)
        w -= dw
        if abs(dw) <= 4.0 * _EPS * (1.0 + abs(w)):
            break
    return w


def _lw(branch: int, z: float, t: float) -> float:
    """W_branch(z) given z and t = 1 + e*z computed as accurately as possible."""
    if t < 0.0:
        t = 0.0
    p = math.sqrt(2.0 * t)
    if branch == 0:
        if z == 0.0:
            return 0.0
        if p < _SERIES_ONLY:
            return _branch_series(p)
        if z < -0.25:
            w = _branch_series(p)
        elif z < 3.0:
            lp = math.log1p(z)
            w = lp * (1.0 - math.log1p(lp) / (2.0 + lp))
        else:
            l1 = math.log(z)
            l2 = math.log(l1)
            w = l1 - l2 + l2 / l1
        return _halley(w, z)
    if p < _SERIES_ONLY:
        return _branch_series(-p)
    if z < -0.25:
        w = _branch_series(-p)
    else:
        l1 = math.log(-z)
        l2 = math.log(-l1)
        w = l1 - l2 + l2 / l1
    return _halley(w, z)


def _check_branch(branch) -> int:
    b = int(branch)
    if b not in (0, -1):
        raise SpecfunDomainError(f"unknown Lambert W branch {branch!r}")
    return b


def lambert_w(branch, z: float) -> float:
    """Real Lambert W on branch 0 (w >= -1) or branch -1 (w <= -1)."""
    b = _check_branch(branch)
    z = float(z)
    if math.isnan(z):
        raise SpecfunDomainError("lambert_w of NaN")
    t = _E * ((z + INV_E) + INV_E_LO)
    if t < -_BRANCH_SLACK:
        raise SpecfunDomainError(f"lambert_w needs z >= -1/e, got {z!r}")
    if b == -1 and z >= 0.0:
        raise SpecfunDomainError(f"branch -1 needs z in [-1/e, 0), got {z!r}")
    if b == 0 and math.isinf(z):
        return math.inf
    return _lw(b, z, t)


def lambert_w_offset(branch, t: float) -> float:
    """W_branch((t - 1)/e), parameterised by the distance t = 1 + e*z from the branch point.

    Near the branch point ``t`` is known far more accurately than ``z``.
    """
    b = _check_branch(branch)
    t = float(t)
    if not t >= -_BRANCH_SLACK:
        raise SpecfunDomainError(f"lambert_w_offset needs t >= 0, got {t!r}")
    if b == -1 and t >= 1.0:
        raise SpecfunDomainError(f"branch -1 needs t in [0, 1), got {t!r}")
    z = (t - 1.0) * INV_E
    return _lw(b, z, t)


def lambert_wm1_log(log_neg_z: float) -> float:
    """W_{-1}(z) for z = -exp(log_neg_z); stays finite when z underflows."""
    L = float(log_neg_z)
    if math.isnan(L) or L > -1.0 + _BRANCH_SLACK:
        raise SpecfunDomainError(f"lambert_wm1_log needs log(-z) <= -1, got {L!r}")
    if L > -2.0:
        return lambert_w(-1, -math.exp(L))
    # solve w + log(-w) = L by Newton
    w = L - math.log(-L)
    for _ in range(64):
        dw = (w + math.log(-w) - L) / (1.0 + 1.0 / w)
        w -= dw
        if abs(dw) <= 4.0 * _EPS * abs(w):
            break
    return w


def log_gamma(x: float) -> float:
    """log Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0.0:
        raise SpecfunDomainError(f"log_gamma needs x > 0, got {x!r}")
    return math.lgamma(x)


def _gamma_series(s: float, x: float) -> float:
    term = 1.0 / s
    total = term
    ap = s
    for _ in range(_MAXIT):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total


def _gamma_cf(s: float, x: float) -> float:
    # modified Lentz for the continued fraction of Gamma(s, x)
    b = x + 1.0 - s
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAXIT):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def reg_gamma_pair(s: float, x: float) -> tuple[float, float]:
    """(P(s, x), Q(s, x)); the smaller of the two is computed directly."""
    s = float(s)
    x = float(x)
    if not s > 0.0 or not x >= 0.0:
        raise SpecfunDomainError(f"incomplete gamma needs s > 0, x >= 0, got ({s!r}, {x!r})")
    if x == 0.0:
        return 0.0, 1.0
    if math.isinf(x):
        return 1.0, 0.0
    lnpre = s * math.log(x) - x - math.lgamma(s)
    if x < s + 1.0:
        p = min(1.0, math.exp(lnpre) * _gamma_series(s, x))
        return p, 1.0 - p
    q = min(1.0, math.exp(lnpre) * _gamma_cf(s, x))
    return 1.0 - q, q


def reg_gamma_lower(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x)."""
    return reg_gamma_pair(s, x)[0]


def reg_gamma_upper(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x)."""
    return reg_gamma_pair(s, x)[1]


def _beta_cf(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAXIT):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def reg_beta_pair(a: float, b: float, x: float, y: float | None = None) -> tuple[float, float]:
    """(I_x(a, b), 1 - I_x(a, b)).

    ``y`` may carry 1 - x when it is known more accurately than ``1.0 - x``.
    """
    a = float(a)
    b = float(b)
    x = float(x)
    y = 1.0 - x if y is None else float(y)
    if not a > 0.0 or not b > 0.0 or not (0.0 <= x <= 1.0) or not (0.0 <= y <= 1.0):
        raise SpecfunDomainError(f"incomplete beta needs a, b > 0 and x in [0, 1], got ({a!r}, {b!r}, {x!r})")
    if x == 0.0:
        return 0.0, 1.0
    if y == 0.0:
        return 1.0, 0.0
    lx = math.log1p(-y) if x > 0.5 else math.log(x)
    ly = math.log1p(-x) if y > 0.5 else math.log(y)
    lnbt = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * lx + b * ly
    if x < (a + 1.0) / (a + b + 2.0):
        lo = min(1.0, math.exp(lnbt) * _beta_cf(a, b, x) / a)
        return lo, 1.0 - lo
    hi = min(1.0, math.exp(lnbt) * _beta_cf(b, a, y) / b)
    return 1.0 - hi, hi


def reg_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    return reg_beta_pair(a, b, x)[0]
