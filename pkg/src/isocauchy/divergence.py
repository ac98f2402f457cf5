"""Relative entropy between the circular Gaussian and circular Cauchy laws.

``D(p_G || p_C)`` reduces to the one-dimensional expectation
``I_n = E[ln(1 + xi^2 R)]`` with ``R ~ Gamma(n/2, 1)`` and grows like
``(1/2) ln n``. The reverse divergence is infinite because the Cauchy law has
no second moment; :func:`kl_cauchy_to_gaussian_truncated` exposes the
divergence by cutting the radial integral at ``r_cut``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .lrt import _log_eta0
from .sampling import RngSpec, count_in_chunks, sample_gaussian_radius
from .specfun import log_gamma

__all__ = [
    "QuadratureError",
    "KlReport",
    "kl_gaussian_to_cauchy",
    "kl_asymptotic",
    "kl_cauchy_to_gaussian_truncated",
    "kl_gaussian_to_cauchy_mc",
]

_QUAD_RTOL = 1e-11


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not reach the requested accuracy."""


@dataclass(frozen=True)
class KlReport:
    n: int
    xi: float
    d_exact: float
    d_asymp: float
    i_n: float


def _quad(f, a: float, b: float, **kw) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(f, a, b, epsabs=0.0, epsrel=_QUAD_RTOL, limit=400, **kw)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(str(exc)) from exc
    return val


def _log_gamma_density(r: float, s: float) -> float:
    return (s - 1.0) * math.log(r) - r - log_gamma(s) if r > 0 else -math.inf


def _expected_log_term(n: int, xi: float) -> tuple[float, float]:
    """``I_n`` split as ``ln(1 + xi^2 s) + E[ln((1 + xi^2 R)/(1 + xi^2 s))]``, ``s = n/2``.

    The second term is O(1/n), so the quadrature error is absolute on a small
    number instead of relative on ``ln n``.
    """
    s = 0.5 * n
    x2 = xi * xi
    base = math.log1p(x2 * s)

    def integrand(r: float) -> float:
        lp = _log_gamma_density(r, s)
        if lp == -math.inf:
            return 0.0
        return math.exp(lp) * math.log1p(x2 * (r - s) / (1.0 + x2 * s))

    half = 10.0 * math.sqrt(n)
    lo, hi = max(0.0, s - half), s + half
    body = _quad(integrand, lo, hi, points=[s] if lo < s < hi else None)
    upper = _quad(integrand, hi, math.inf)
    lower = _quad(integrand, 0.0, lo) if lo > 0.0 else 0.0
    return base, lower + body + upper


def kl_gaussian_to_cauchy(n: int, xi: float) -> KlReport:
    """D(p_G || p_C) in nats for the normalized problem."""
    if n < 2:
        raise ValueError("n >= 2 required")
    if not xi > 0:
        raise ValueError("xi must be positive")
    m = 0.5 * (n + 1)
    base, corr = _expected_log_term(n, xi)
    i_n = base + corr
    log_pi = math.log(math.pi)
    head = -0.5 * n * (log_pi + 1.0 + 2.0 * math.log(xi)) - (log_gamma(m) - m * log_pi) + m * base
    d = head + m * corr
    if d < -1e-9 * max(1.0, abs(head)):
        raise QuadratureError(f"negative divergence {d} at n={n}, xi={xi}")
    return KlReport(n, xi, max(d, 0.0), kl_asymptotic(n), i_n)


def kl_asymptotic(n: float) -> float:
    """Leading-order growth ``(1/2) ln n``."""
    if n <= 0:
        raise ValueError("n must be positive")
    return 0.5 * math.log(n)


def _cauchy_radial_second_moment(n: int, r_cut: float) -> float:
    # E_C[R^2 1{R <= r_cut}] with radial density 2 r^(n-1) (1+r^2)^(-(n+1)/2) / B(n/2, 1/2)
    m = 0.5 * (n + 1)
    log_norm = math.log(2.0) - special.betaln(0.5 * n, 0.5)

    def integrand(r: float) -> float:
        if r == 0.0:
            return 0.0
        return math.exp(log_norm + (n + 1) * math.log(r) - m * math.log1p(r * r))

    edges = [0.0]
    e = 1.0
    while e < r_cut:
        edges.append(e)
        e *= 2.0
    edges.append(r_cut)
    return math.fsum(_quad(integrand, a, b) for a, b in zip(edges[:-1], edges[1:]))


def kl_cauchy_to_gaussian_truncated(n: int, xi: float, r_cut: float) -> float:
    """``-h(p_C) + ln(pi^(n/2) xi^n) + (1/xi^2) E_C[R^2 1{R <= r_cut}]``.

    Increases without bound in ``r_cut``, roughly linearly, since the radial
    integrand ``r^2 p_C(r)`` tends to a constant.
    """
    if not r_cut > 0:
        raise ValueError("r_cut must be positive")
    if n < 1 or not xi > 0:
        raise ValueError("need n >= 1 and xi > 0")
    m = 0.5 * (n + 1)
    # h(p_C) = -ln c_n + m E[ln(1 + R^2)], with E[ln(1 + R^2)] = psi(m) - psi(1/2)
    log_c = log_gamma(m) - m * math.log(math.pi)
    neg_entropy = log_c - m * (special.digamma(m) - special.digamma(0.5))
    finite = neg_entropy + 0.5 * n * math.log(math.pi) + n * math.log(xi)
    return finite + _cauchy_radial_second_moment(n, r_cut) / xi**2


def kl_gaussian_to_cauchy_mc(
    n: int, xi: float, samples: int, rng: RngSpec, chunk_size: int = 1 << 20
) -> tuple[float, float]:
    """Monte Carlo ``E_G[ln(p_G/p_C)]`` and its standard error."""
    m = 0.5 * (n + 1)
    parts: list[tuple[int, float, float]] = []

    def add(gen: np.random.Generator, size: int) -> int:
        r = sample_gaussian_radius(n, xi, gen, size)
        r2 = r * r
        # log-ratio without the constant log_eta0, which has no variance
        v = -r2 / xi**2 + m * np.log1p(r2)
        mu = float(v.mean())
        parts.append((size, mu, float(np.sum((v - mu) ** 2))))
        return size

    count_in_chunks(add, samples, rng, chunk_size)
    # merge (count, mean, M2) chunk by chunk (Chan et al. update)
    cnt, mean, m2 = parts[0]
    for c, mu, q in parts[1:]:
        tot = cnt + c
        delta = mu - mean
        mean += delta * c / tot
        m2 += q + delta * delta * cnt * c / tot
        cnt = tot
    return _log_eta0(n, xi) + mean, math.sqrt(m2 / (cnt - 1) / cnt)
