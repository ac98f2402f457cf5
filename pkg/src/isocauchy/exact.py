"""Exact error probabilities of the likelihood-ratio test.

Both hypotheses are isotropic, so only the radius matters:

* under the Gaussian law ``2 R^2 / xi^2`` is chi-square with ``n`` degrees of
  freedom, so ``P(R <= r) = P(n/2, r^2/xi^2)`` (regularized lower gamma);
* under the Cauchy law the substitution ``t = r^2 / (1 + r^2)`` maps the radial
  density onto the Beta(n/2, 1/2) kernel, so ``P(R <= r) = I_t(n/2, 1/2)``.

Probabilities are assembled from whichever tail is small so that values such
as a false alarm rate of 1e-30 keep full relative precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .lrt import DetectorConfig, LrtGeometry, RadialInterval, decision_radii, geometry
from .specfun import log_gamma, reg_beta_pair, reg_gamma_pair, reg_gamma_upper

__all__ = [
    "ErrorPair",
    "Priors",
    "radial_cdf_gaussian",
    "radial_sf_gaussian",
    "radial_cdf_cauchy",
    "radial_sf_cauchy",
    "false_alarm",
    "miss",
    "error_pair",
    "bayes_error",
    "miss_lower_bound",
]


@dataclass(frozen=True)
class ErrorPair:
    """False alarm ``P_F = P(decide C | G)`` and miss ``1 - P_D = P(decide G | C)``."""

    p_false_alarm: float
    p_miss: float


@dataclass(frozen=True)
class Priors:
    pi_g: float

    def __post_init__(self):
        if not (0.0 < self.pi_g < 1.0):
            raise ValueError(f"pi_g must lie in (0, 1), got {self.pi_g!r}")

    @property
    def pi_c(self) -> float:
        return 1.0 - self.pi_g

    @property
    def eta_tilde(self) -> float:
        """MAP threshold pi_C / pi_G."""
        return self.pi_c / self.pi_g

    @classmethod
    def from_eta_tilde(cls, eta_tilde: float) -> "Priors":
        return cls(1.0 / (1.0 + eta_tilde))


def _gauss_pair(r_sq: float, n: int, xi: float) -> tuple[float, float]:
    if math.isinf(r_sq):
        return 1.0, 0.0
    return reg_gamma_pair(0.5 * n, r_sq / xi**2)


def _cauchy_pair(r_sq: float, n: int) -> tuple[float, float]:
    if math.isinf(r_sq):
        return 1.0, 0.0
    if r_sq == 0.0:
        return 0.0, 1.0
    return reg_beta_pair(0.5 * n, 0.5, r_sq / (1.0 + r_sq), 1.0 / (1.0 + r_sq))


def radial_cdf_gaussian(r: float, n: int, xi: float) -> float:
    """P(|Y| <= r) under the circular N(0, xi^2/2) hypothesis."""
    return _gauss_pair(r * r, n, xi)[0]


def radial_sf_gaussian(r: float, n: int, xi: float) -> float:
    return _gauss_pair(r * r, n, xi)[1]


def radial_cdf_cauchy(r: float, n: int) -> float:
    """P(|Y| <= r) under the circular C(0, 1) hypothesis."""
    return _cauchy_pair(r * r, n)[0]


def radial_sf_cauchy(r: float, n: int) -> float:
    return _cauchy_pair(r * r, n)[1]


def _clip(p: float) -> float:
    return min(1.0, max(0.0, p))


def _pf_from_radii(radii: RadialInterval, n: int, xi: float) -> float:
    lower_1, _ = _gauss_pair(radii.r1_sq, n, xi)
    _, upper_2 = _gauss_pair(radii.r2_sq, n, xi)
    return _clip(lower_1 + upper_2)


def _miss_from_radii(radii: RadialInterval, n: int) -> float:
    lo1, hi1 = _cauchy_pair(radii.r1_sq, n)
    lo2, hi2 = _cauchy_pair(radii.r2_sq, n)
    # difference of the two small tails; both are the same mass
    if lo2 <= hi1:
        return _clip(lo2 - lo1)
    return _clip(hi1 - hi2)


def _radii_or_none(cfg: DetectorConfig) -> tuple[LrtGeometry, RadialInterval | None]:
    geo = geometry(cfg)
    if cfg.log_eta >= geo.log_eta_max:
        return geo, None
    return geo, decision_radii(cfg, geo)


def false_alarm(cfg: DetectorConfig) -> float:
    """P_F; equals 1 when the threshold is at or above the ratio's peak."""
    _, radii = _radii_or_none(cfg)
    if radii is None:
        return 1.0
    return _pf_from_radii(radii, cfg.n, cfg.xi)


def miss(cfg: DetectorConfig) -> float:
    """1 - P_D; equals 0 when the threshold is at or above the ratio's peak."""
    _, radii = _radii_or_none(cfg)
    if radii is None:
        return 0.0
    return _miss_from_radii(radii, cfg.n)


def error_pair(cfg: DetectorConfig) -> ErrorPair:
    _, radii = _radii_or_none(cfg)
    if radii is None:
        return ErrorPair(1.0, 0.0)
    return ErrorPair(_pf_from_radii(radii, cfg.n, cfg.xi), _miss_from_radii(radii, cfg.n))


def bayes_error(priors: Priors, n: int, xi: float) -> tuple[ErrorPair, float]:
    """Errors of the MAP detector (threshold pi_C/pi_G) and its Bayes risk."""
    cfg = DetectorConfig(n, xi, math.log(priors.eta_tilde))
    errs = error_pair(cfg)
    p_e = priors.pi_g * errs.p_false_alarm + priors.pi_c * errs.p_miss
    return errs, p_e


def miss_lower_bound(cfg: DetectorConfig) -> float:
    """Lower bound on 1 - P_D from ``(1 + u)^(-(n+1)/2) >= exp(-(n+1) u / 2)``.

    With ``r1 = 0`` the inner incomplete gamma term vanishes.
    """
    n = cfg.n
    _, radii = _radii_or_none(cfg)
    if radii is None:
        return 0.0
    m = 0.5 * (n + 1)
    log_ratio = log_gamma(m) - log_gamma(0.5 * n)
    # Gamma(1/2, x) / sqrt(pi) is the regularized upper gamma Q(1/2, x)
    upper_2 = reg_gamma_upper(0.5, m / radii.r2_sq)
    upper_1 = 0.0 if radii.r1_sq == 0.0 else reg_gamma_upper(0.5, m / radii.r1_sq)
    return _clip(math.exp(log_ratio) / math.sqrt(m) * (upper_2 - upper_1))
