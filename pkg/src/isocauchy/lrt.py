"""Likelihood-ratio geometry of the isotropic Gaussian vs. isotropic Cauchy test.

After scaling the observations by the Cauchy scale, the Gaussian hypothesis
is circular N(0, xi^2/2) and the Cauchy hypothesis is circular C(0, 1), with
``xi = sqrt(2) * sigma / gamma``. The ratio p_G/p_C depends only on the radius
``r`` and is unimodal in ``r``, so the Gaussian acceptance region is an annulus
``r1 <= r <= r2`` obtained from the two real branches of Lambert W.

All thresholds are carried as ``log_eta``; ``Gamma((n+1)/2)`` overflows a
double near ``n = 340``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .specfun import Branch, lambert_w, lambert_w_offset, lambert_wm1_log, log_gamma

__all__ = [
    "GeometryPreconditionError",
    "ThresholdAboveMax",
    "UndeterminedRegime",
    "ProblemSpec",
    "DetectorConfig",
    "LrtGeometry",
    "RadialInterval",
    "RegimeKind",
    "Regime",
    "normalize",
    "log_likelihood_ratio",
    "geometry",
    "eta_landmarks_asymptotic",
    "decision_radii",
    "classify_regime",
    "delta_n",
]

_HALF_LOG_PI = 0.5 * math.log(math.pi)
REGIME_TOL = 0.05


class GeometryPreconditionError(ValueError):
    """Dimension too small for the ratio to have an interior peak (n <= 2/xi^2 - 1)."""


class ThresholdAboveMax(ValueError):
    """Threshold at or above the peak of the likelihood ratio; no acceptance annulus."""


class UndeterminedRegime(ValueError):
    """Threshold probes are inconsistent with every operating regime."""


@dataclass(frozen=True)
class ProblemSpec:
    """Unscaled problem: Gaussian per-component std ``sigma``, Cauchy scale ``gamma``."""

    sigma: float
    gamma: float

    def __post_init__(self):
        if not (self.sigma > 0 and self.gamma > 0):
            raise ValueError("sigma and gamma must be positive")


@dataclass(frozen=True)
class DetectorConfig:
    """One LRT instance: dimension ``n``, scale ratio ``xi`` and threshold ``log_eta``."""

    n: int
    xi: float
    log_eta: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not self.xi > 0:
            raise ValueError(f"xi must be positive, got {self.xi!r}")
        if math.isnan(self.log_eta):
            raise ValueError("log_eta is NaN")

    def with_log_eta(self, log_eta: float) -> "DetectorConfig":
        return DetectorConfig(self.n, self.xi, log_eta)

    @property
    def has_peak(self) -> bool:
        return self.n > 2.0 / self.xi**2 - 1.0


@dataclass(frozen=True)
class LrtGeometry:
    """Landmarks of the log-ratio curve: value at the origin, peak location and peak value."""

    log_eta0: float
    r_max_sq: float
    log_eta_max: float


@dataclass(frozen=True)
class RadialInterval:
    """Squared decision radii and the Lambert W argument that produced them.

    ``log_neg_a_w`` is ``log(-a_w)``, kept because ``a_w`` itself underflows for
    very small thresholds.
    """

    r1_sq: float
    r2_sq: float
    a_w: float
    log_neg_a_w: float


class RegimeKind(enum.Enum):
    RI = "R-i"
    RII = "R-ii"
    RIII = "R-iii"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    kappa: float


def normalize(spec: ProblemSpec) -> float:
    """Scale ratio ``xi = sqrt(2) * sigma / gamma`` of the normalized problem."""
    return math.sqrt(2.0) * spec.sigma / spec.gamma


def _log_eta0(n: int, xi: float) -> float:
    return _HALF_LOG_PI - log_gamma((n + 1) / 2.0) - n * math.log(xi)


def log_likelihood_ratio(r: float, cfg: DetectorConfig) -> float:
    """log p_G(y)/p_C(y) at radius ``r = |y|``."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    n, xi = cfg.n, cfg.xi
    r2 = r * r
    return _log_eta0(n, xi) - r2 / xi**2 + 0.5 * (n + 1) * math.log1p(r2)


def _require_peak(cfg: DetectorConfig) -> None:
    if not cfg.has_peak:
        raise GeometryPreconditionError(
            f"need n > 2/xi^2 - 1, got n={cfg.n}, xi={cfg.xi}"
        )


def geometry(cfg: DetectorConfig) -> LrtGeometry:
    _require_peak(cfg)
    n, xi = cfg.n, cfg.xi
    m = 0.5 * (n + 1)
    log_eta0 = _log_eta0(n, xi)
    r_max_sq = xi**2 * m - 1.0
    log_eta_max = 1.0 / xi**2 + m * math.log(m * xi**2 / math.e) + log_eta0
    return LrtGeometry(log_eta0, r_max_sq, log_eta_max)


def eta_landmarks_asymptotic(n: int, xi: float) -> tuple[float, float]:
    """Stirling forms ``(log eta0, log eta_max)`` for large ``n``."""
    if n < 3:
        raise ValueError("asymptotic landmarks need n >= 3")
    log_eta0 = 0.5 * (n - 1) * math.log(2.0 * math.e) - n * math.log(xi) - 0.5 * n * math.log(n - 1)
    log_eta_max = 1.0 / xi**2 + math.log(xi / 2.0) + 0.5 * math.log(n)
    return log_eta0, log_eta_max


def _scaled_gap(cfg: DetectorConfig, geo: LrtGeometry) -> float:
    # (2/(n+1)) * (log eta - log eta_max), always <= 0 in the operating range
    return 2.0 * (cfg.log_eta - geo.log_eta_max) / (cfg.n + 1)


def decision_radii(cfg: DetectorConfig, geo: LrtGeometry | None = None) -> RadialInterval:
    """Squared radii ``r1^2 <= r_max^2 <= r2^2`` where the ratio crosses ``eta``.

    ``r1_sq`` is clamped to 0 when ``eta`` lies below the ratio's value at the
    origin, so the Gaussian region is then the ball ``r <= r2``.
    """
    if geo is None:
        geo = geometry(cfg)
    if cfg.log_eta >= geo.log_eta_max:
        raise ThresholdAboveMax(
            f"log_eta={cfg.log_eta} is not below log_eta_max={geo.log_eta_max}"
        )
    if cfg.log_eta == -math.inf:
        return RadialInterval(0.0, math.inf, -0.0, -math.inf)
    xi2m = cfg.xi**2 * 0.5 * (cfg.n + 1)
    d = _scaled_gap(cfg, geo)
    log_neg_a = -1.0 + d
    a_w = -math.exp(log_neg_a)
    # distance from the branch point, 1 + e*a_w, without cancellation
    t = -math.expm1(d)
    if t <= 0.5:
        w0 = lambert_w_offset(Branch.PRINCIPAL, t)
        wm1 = lambert_w_offset(Branch.NEGATIVE_ONE, t)
    else:
        # away from the branch point t - 1 would cancel; use a_w and its log instead
        w0 = lambert_w(Branch.PRINCIPAL, a_w)
        wm1 = lambert_wm1_log(log_neg_a)
    r1_sq = max(0.0, -xi2m * w0 - 1.0)
    r2_sq = -xi2m * wm1 - 1.0
    return RadialInterval(r1_sq, r2_sq, a_w, log_neg_a)


def delta_n(cfg: DetectorConfig) -> float:
    """Normalized half-width of the acceptance annulus around the peak."""
    geo = geometry(cfg)
    if cfg.log_eta > geo.log_eta_max:
        raise ThresholdAboveMax("delta_n needs log_eta <= log_eta_max")
    return math.sqrt(2.0) * math.sqrt(-math.expm1(_scaled_gap(cfg, geo)))


def kappa_hat(log_eta: float, n: int) -> float:
    """Finite-n estimate ``eta^(2/(n+1))`` of the regime constant."""
    return math.exp(2.0 * log_eta / (n + 1))


def classify_regime(
    threshold_sequence: Callable[[int], float],
    n_probe: int,
    tol: float = REGIME_TOL,
) -> Regime:
    """Classify a threshold sequence ``n -> log_eta(n)`` by probing at ``n`` and ``4n``.

    The regimes are defined by the limit of ``eta^(2/(n+1))``; two finite probes
    can only suggest it, and ``tol`` sets how close counts as converged.
    """
    k1 = kappa_hat(threshold_sequence(n_probe), n_probe)
    k2 = kappa_hat(threshold_sequence(4 * n_probe), 4 * n_probe)
    if abs(k1 - 1.0) <= tol and abs(k2 - 1.0) <= tol and abs(k2 - 1.0) <= abs(k1 - 1.0):
        return Regime(RegimeKind.RI, 1.0)
    if k2 <= tol and k2 < k1:
        return Regime(RegimeKind.RIII, 0.0)
    if abs(k2 - k1) <= tol and 0.0 < k2 < 1.0:
        return Regime(RegimeKind.RII, k2)
    raise UndeterminedRegime(f"probes kappa({n_probe})={k1:.6g}, kappa({4 * n_probe})={k2:.6g}")
