"""Large-n laws for the error probabilities and Neyman-Pearson calibration.

Two versions of the Bayesian (MAP) asymptote are provided. ``thm1_as_stated``
evaluates the closed form with the constant ``C = sqrt(xi/(2 eta~)) e^(1/(2 xi^2))``
exactly as published. ``bayes_asymptotic_consistent`` goes through the
peak-value form of the miss/false-alarm laws with the exact peak ``eta_max``;
substituting the Stirling form of ``eta_max`` into it gives the same closed
form but with ``C n = (eta_max/eta~)^2``, i.e. ``C = xi^2 e^(2/xi^2) / (4 eta~^2)``,
the fourth power of the published constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .exact import Priors, false_alarm, miss
from .lrt import DetectorConfig, ThresholdAboveMax, UndeterminedRegime, geometry
from .specfun import Branch, lambert_w, q_function, q_inverse

__all__ = [
    "NoBracket",
    "Thm1Approx",
    "Case2Bounds",
    "LinearFit",
    "lemma1_miss",
    "lemma1_false_alarm",
    "thm1_as_stated",
    "bayes_asymptotic_consistent",
    "case1_kappa0",
    "case1_miss_approx",
    "calibrate_threshold_for_pf",
    "calibrate_threshold_for_miss",
    "relative_kappa",
    "estimate_case2_kappa",
    "case2_exponent_bounds",
    "linear_fit",
]

CALIBRATION_TOL = 1e-12
BRACKET_DROP = 50.0
KAPPA_PROBE_TOL = 0.02


class NoBracket(ValueError):
    """Target error probability not reachable inside the search interval."""


@dataclass(frozen=True)
class Thm1Approx:
    miss_asymp: float
    pf_asymp: float
    pe_asymp: float
    c_const: float
    variant: str


@dataclass(frozen=True)
class Case2Bounds:
    """Exponential-rate sandwich for P_F when the miss probability is held fixed.

    ``lower_rate <= -ln(P_F)/n <= upper_rate`` to leading order; the
    ``1/sqrt(n)`` prefactors are not identified, see ``prefactor_note``.
    ``chernoff_rate`` is the common large-deviation rate ``-ln(kappa)/2`` of
    both gamma tails at the limiting radii.
    """

    kappa_hat: float
    lower_rate: float
    upper_rate: float
    chernoff_rate: float
    prefactor_note: str


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_squared: float


def _peak_gap(cfg: DetectorConfig) -> tuple[float, float]:
    geo = geometry(cfg)
    gap = geo.log_eta_max - cfg.log_eta
    if gap < 0:
        raise ThresholdAboveMax("asymptotic laws need log_eta <= log_eta_max")
    return geo.log_eta_max, gap


def lemma1_miss(cfg: DetectorConfig) -> float:
    """``(2/sqrt(pi)) sqrt(ln(eta_max/eta)) / eta_max``."""
    log_eta_max, gap = _peak_gap(cfg)
    return 2.0 / math.sqrt(math.pi) * math.sqrt(gap) * math.exp(-log_eta_max)


def lemma1_false_alarm(cfg: DetectorConfig) -> float:
    """``2 Q(sqrt(2 ln(eta_max/eta)))``."""
    _, gap = _peak_gap(cfg)
    return 2.0 * q_function(math.sqrt(2.0 * gap))


def thm1_as_stated(priors: Priors, n: int, xi: float) -> Thm1Approx:
    if n < 3:
        raise ValueError("n >= 3 required")
    et = priors.eta_tilde
    c = math.sqrt(xi / (2.0 * et)) * math.exp(1.0 / (2.0 * xi**2))
    cn = c * n
    if cn <= 1.0:
        raise ValueError(f"C*n = {cn} must exceed 1")
    lcn = math.log(cn)
    root_2_pi = math.sqrt(2.0 / math.pi)
    miss_a = root_2_pi / et * math.sqrt(lcn / cn)
    pf_a = root_2_pi / math.sqrt(cn * lcn)
    pe_a = root_2_pi * priors.pi_c / et * math.sqrt(lcn / cn)
    return Thm1Approx(miss_a, pf_a, pe_a, c, "as_stated")


def bayes_asymptotic_consistent(priors: Priors, n: int, xi: float) -> Thm1Approx:
    """MAP asymptote from the peak-value laws with the exact ``eta_max``.

    The false-alarm law is expanded with the Gaussian tail
    ``Q(x) ~ exp(-x^2/2) / (x sqrt(2 pi))``.
    """
    if n < 3:
        raise ValueError("n >= 3 required")
    cfg = DetectorConfig(n, xi, math.log(priors.eta_tilde))
    log_eta_max, gap = _peak_gap(cfg)
    miss_a = lemma1_miss(cfg)
    x = math.sqrt(2.0 * gap)
    pf_a = 2.0 * math.exp(-0.5 * x * x) / (x * math.sqrt(2.0 * math.pi))
    pe_a = priors.pi_g * pf_a + priors.pi_c * miss_a
    c = math.exp(2.0 * gap) / n
    return Thm1Approx(miss_a, pf_a, pe_a, c, "consistent")


def case1_kappa0(eps: float, xi: float) -> float:
    """Constant of the fixed-false-alarm miss law ``1 - P_D ~ kappa0 / sqrt(n)``."""
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0, 1), got {eps!r}")
    return math.sqrt(2.0 / math.pi) * (2.0 / xi) * math.exp(-1.0 / xi**2) * q_inverse(eps / 2.0)


def case1_miss_approx(eps: float, n: int, xi: float) -> float:
    return case1_kappa0(eps, xi) / math.sqrt(n)


def _bisect_threshold(
    err: Callable[[float], float],
    eps: float,
    lo: float,
    hi: float,
    increasing: bool,
    tol: float,
) -> float:
    # err is monotone in log_eta; keep err(lo) on the "below/above" side per direction
    def side(v: float) -> bool:
        return v < eps if increasing else v > eps

    for _ in range(8):
        if side(err(lo)):
            break
        lo -= BRACKET_DROP
    else:
        raise NoBracket(f"target {eps} not bracketed from below")
    f_hi = err(hi)
    if side(f_hi) and f_hi != eps:
        raise NoBracket(f"target {eps} not reached at the ratio peak")
    best, best_gap = hi, abs(f_hi - eps)
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = err(mid)
        gap = abs(f_mid - eps)
        if gap < best_gap:
            best, best_gap = mid, gap
        if gap <= tol:
            break
        if side(f_mid):
            lo = mid
        else:
            hi = mid
    return best


def calibrate_threshold_for_pf(eps: float, n: int, xi: float, tol: float = CALIBRATION_TOL) -> float:
    """log_eta at which the exact false-alarm probability equals ``eps``."""
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0, 1), got {eps!r}")
    geo = geometry(DetectorConfig(n, xi))
    return _bisect_threshold(
        lambda le: false_alarm(DetectorConfig(n, xi, le)),
        eps,
        geo.log_eta0 - BRACKET_DROP,
        geo.log_eta_max,
        increasing=True,
        tol=tol,
    )


def calibrate_threshold_for_miss(eps: float, n: int, xi: float, tol: float = CALIBRATION_TOL) -> float:
    """log_eta at which the exact miss probability equals ``eps``."""
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0, 1), got {eps!r}")
    geo = geometry(DetectorConfig(n, xi))
    return _bisect_threshold(
        lambda le: miss(DetectorConfig(n, xi, le)),
        eps,
        geo.log_eta0 - BRACKET_DROP,
        geo.log_eta_max,
        increasing=False,
        tol=tol,
    )


def relative_kappa(cfg: DetectorConfig) -> float:
    """``(eta/eta_max)^(2/(n+1))``, i.e. ``-e * a_W``.

    Same limit as ``eta^(2/(n+1))`` but free of the slowly vanishing
    ``eta_max^(2/(n+1))`` factor, so it stays inside (0, 1) at finite n.
    """
    geo = geometry(cfg)
    return math.exp(2.0 * (cfg.log_eta - geo.log_eta_max) / (cfg.n + 1))


def estimate_case2_kappa(eps: float, n: int, xi: float, probe_tol: float = KAPPA_PROBE_TOL) -> float:
    """Limit of ``eta^(2/(n+1))`` along miss-calibrated thresholds.

    Two-point Richardson extrapolation in ``1/n`` from the probes ``n // 2`` and
    ``n``; raises :class:`UndeterminedRegime` when they disagree by more than
    ``probe_tol``.
    """
    n_lo = n // 2
    k_lo = relative_kappa(DetectorConfig(n_lo, xi, calibrate_threshold_for_miss(eps, n_lo, xi)))
    k_hi = relative_kappa(DetectorConfig(n, xi, calibrate_threshold_for_miss(eps, n, xi)))
    if abs(k_hi - k_lo) > probe_tol:
        raise UndeterminedRegime(f"kappa probes {k_lo:.6g} at n={n_lo} and {k_hi:.6g} at n={n}")
    k = (n * k_hi - n_lo * k_lo) / (n - n_lo)
    if not (0.0 < k < 1.0):
        raise UndeterminedRegime(f"extrapolated kappa {k:.6g} outside (0, 1)")
    return k


def case2_exponent_bounds(kappa_hat: float, n: int | None = None) -> Case2Bounds:
    """Rates bounding ``-ln(P_F)/n`` for a miss-calibrated detector with limit ``kappa_hat``.

    The limiting normalized radii are ``-W_0(-kappa/e) < 1 < -W_{-1}(-kappa/e)``.
    The Gaussian bound on the lower gamma tail gives the smaller rate
    ``(1 + W_0)^2 / 4`` and the Gaussian bound on the upper tail the larger
    rate ``(1 + W_{-1})^2 / 4``.
    """
    if not (0.0 < kappa_hat < 1.0):
        raise ValueError(f"kappa_hat must lie in (0, 1), got {kappa_hat!r}")
    z = -kappa_hat / math.e
    w0 = lambert_w(Branch.PRINCIPAL, z)
    wm1 = lambert_w(Branch.NEGATIVE_ONE, z)
    note = "P_F between k1 exp(-upper_rate n)/sqrt(n) and k3 exp(-lower_rate n)/sqrt(n); k1, k3 unspecified"
    if n is not None:
        note += f"; evaluated for n={n}"
    return Case2Bounds(
        kappa_hat=kappa_hat,
        lower_rate=0.25 * (1.0 + w0) ** 2,
        upper_rate=0.25 * (1.0 + wm1) ** 2,
        chernoff_rate=-0.5 * math.log(kappa_hat),
        prefactor_note=note,
    )


def linear_fit(x: Sequence[float], y: Sequence[float]) -> LinearFit:
    """Least-squares line with its coefficient of determination."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return LinearFit(float(slope), float(intercept), r2)
