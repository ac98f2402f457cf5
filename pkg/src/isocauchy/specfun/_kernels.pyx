# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled special-function kernels; same algorithms as ``_pure.py``."""

from libc.math cimport exp, log, log1p, lgamma, sqrt, fabs, isnan, isinf, INFINITY

from ._common import Branch, SpecfunDomainError

BACKEND = "compiled"

cdef double _E = 2.718281828459045
cdef double _INV_E = 0.36787944117144233
cdef double _INV_E_LO = -1.2428753672788363e-17
cdef double _EPS = 2.220446049250313e-16
cdef double _FPMIN = 1e-300
cdef int _MAXIT = 10000
cdef double _BRANCH_SLACK = 4.0 * 2.220446049250313e-16
cdef double _SERIES_ONLY = 1e-3


cdef inline double _branch_series(double p) nogil:
    return -1.0 + p * (
        1.0
        + p * (-1.0 / 3.0
        + p * (11.0 / 72.0
        + p * (-43.0 / 540.0
        + p * (769.0 / 17280.0
        + p * (-221.0 / 8505.0
        + p * (680863.0 / 43545600.0)))))))


cdef double _halley(double w, double z) nogil:
    cdef double lz, sz, g, wp1, dw
    cdef int i
    if z == 0.0:
        return w
    lz = log(fabs(z))
    sz = 1.0 if z > 0.0 else -1.0
    for i in range(64):
        g = w - sz * exp(lz - w)
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        dw = g / (wp1 - 0.5 * (w + 2.0) * g / wp1)
        w -= dw
        if fabs(dw) <= 4.0 * _EPS * (1.0 + fabs(w)):
            break
    return w


cdef double _lw(int branch, double z, double t) nogil:
    cdef double p, w, lp, l1, l2
    if t < 0.0:
        t = 0.0
    p = sqrt(2.0 * t)
    if branch == 0:
        if z == 0.0:
            return 0.0
        if p < _SERIES_ONLY:
            return _branch_series(p)
        if z < -0.25:
            w = _branch_series(p)
        elif z < 3.0:
            lp = log1p(z)
            w = lp * (1.0 - log1p(lp) / (2.0 + lp))
        else:
            l1 = log(z)
            l2 = log(l1)
            w = l1 - l2 + l2 / l1
        return _halley(w, z)
    if p < _SERIES_ONLY:
        return _branch_series(-p)
    if z < -0.25:
        w = _branch_series(-p)
    else:
        l1 = log(-z)
        l2 = log(-l1)
        w = l1 - l2 + l2 / l1
    return _halley(w, z)


cdef int _check_branch(branch) except? -2:
    cdef int b = int(branch)
    if b != 0 and b != -1:
        raise SpecfunDomainError(f"unknown Lambert W branch {branch!r}")
    return b


def lambert_w(branch, double z):
    """Real Lambert W on branch 0 (w >= -1) or branch -1 (w <= -1)."""
    cdef int b = _check_branch(branch)
    cdef double t
    if isnan(z):
        raise SpecfunDomainError("lambert_w of NaN")
    t = _E * ((z + _INV_E) + _INV_E_LO)
    if t < -_BRANCH_SLACK:
        raise SpecfunDomainError(f"lambert_w needs z >= -1/e, got {z!r}")
    if b == -1 and z >= 0.0:
        raise SpecfunDomainError(f"branch -1 needs z in [-1/e, 0), got {z!r}")
    if b == 0 and isinf(z):
        return INFINITY
    return _lw(b, z, t)


def lambert_w_offset(branch, double t):
    """W_branch((t - 1)/e), parameterised by the distance t = 1 + e*z from the branch point."""
    cdef int b = _check_branch(branch)
    if not t >= -_BRANCH_SLACK:
        raise SpecfunDomainError(f"lambert_w_offset needs t >= 0, got {t!r}")
    if b == -1 and t >= 1.0:
        raise SpecfunDomainError(f"branch -1 needs t in [0, 1), got {t!r}")
    return _lw(b, (t - 1.0) * _INV_E, t)


def lambert_wm1_log(double log_neg_z):
    """W_{-1}(z) for z = -exp(log_neg_z); stays finite when z underflows."""
    cdef double L = log_neg_z, w, dw
    cdef int i
    if isnan(L) or L > -1.0 + _BRANCH_SLACK:
        raise SpecfunDomainError(f"lambert_wm1_log needs log(-z) <= -1, got {L!r}")
    if L > -2.0:
        return lambert_w(-1, -exp(L))
    w = L - log(-L)
    for i in range(64):
        dw = (w + log(-w) - L) / (1.0 + 1.0 / w)
        w -= dw
        if fabs(dw) <= 4.0 * _EPS * fabs(w):
            break
    return w


def log_gamma(double x):
    """log Gamma(x) for x > 0."""
    if not x > 0.0:
        raise SpecfunDomainError(f"log_gamma needs x > 0, got {x!r}")
    return lgamma(x)


cdef double _gamma_series(double s, double x) nogil:
    cdef double term = 1.0 / s
    cdef double total = term
    cdef double ap = s
    cdef int i
    for i in range(_MAXIT):
        ap += 1.0
        term *= x / ap
        total += term
        if fabs(term) < fabs(total) * _EPS:
            break
    return total


cdef double _gamma_cf(double s, double x) nogil:
    cdef double b = x + 1.0 - s
    cdef double c = 1.0 / _FPMIN
    cdef double d = 1.0 / b
    cdef double h = d
    cdef double an, delta
    cdef int i
    for i in range(1, _MAXIT):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if fabs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if fabs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < _EPS:
            break
    return h


def reg_gamma_pair(double s, double x):
    """(P(s, x), Q(s, x)); the smaller of the two is computed directly."""
    cdef double lnpre, p, q
    if not s > 0.0 or not x >= 0.0:
        raise SpecfunDomainError(f"incomplete gamma needs s > 0, x >= 0, got ({s!r}, {x!r})")
    if x == 0.0:
        return 0.0, 1.0
    if isinf(x):
        return 1.0, 0.0
    lnpre = s * log(x) - x - lgamma(s)
    if x < s + 1.0:
        p = exp(lnpre) * _gamma_series(s, x)
        if p > 1.0:
            p = 1.0
        return p, 1.0 - p
    q = exp(lnpre) * _gamma_cf(s, x)
    if q > 1.0:
        q = 1.0
    return 1.0 - q, q


def reg_gamma_lower(double s, double x):
    """Regularized lower incomplete gamma P(s, x)."""
    return reg_gamma_pair(s, x)[0]


def reg_gamma_upper(double s, double x):
    """Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x)."""
    return reg_gamma_pair(s, x)[1]


cdef double _beta_cf(double a, double b, double x) nogil:
    cdef double qab = a + b
    cdef double qap = a + 1.0
    cdef double qam = a - 1.0
    cdef double c = 1.0
    cdef double d = 1.0 - qab * x / qap
    cdef double h, aa, delta
    cdef int m, m2
    if fabs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAXIT):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if fabs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if fabs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < _EPS:
            break
    return h


def reg_beta_pair(double a, double b, double x, y=None):
    """(I_x(a, b), 1 - I_x(a, b)); ``y`` may carry an accurate 1 - x."""
    cdef double yy = 1.0 - x if y is None else <double>y
    cdef double lx, ly, lnbt, lo, hi
    if not a > 0.0 or not b > 0.0 or not (0.0 <= x <= 1.0) or not (0.0 <= yy <= 1.0):
        raise SpecfunDomainError(f"incomplete beta needs a, b > 0 and x in [0, 1], got ({a!r}, {b!r}, {x!r})")
    if x == 0.0:
        return 0.0, 1.0
    if yy == 0.0:
        return 1.0, 0.0
    lx = log1p(-yy) if x > 0.5 else log(x)
    ly = log1p(-x) if yy > 0.5 else log(yy)
    lnbt = lgamma(a + b) - lgamma(a) - lgamma(b) + a * lx + b * ly
    if x < (a + 1.0) / (a + b + 2.0):
        lo = exp(lnbt) * _beta_cf(a, b, x) / a
        if lo > 1.0:
            lo = 1.0
        return lo, 1.0 - lo
    hi = exp(lnbt) * _beta_cf(b, a, yy) / b
    if hi > 1.0:
        hi = 1.0
    return 1.0 - hi, hi


def reg_beta(double a, double b, double x):
    """Regularized incomplete beta I_x(a, b)."""
    return reg_beta_pair(a, b, x)[0]
