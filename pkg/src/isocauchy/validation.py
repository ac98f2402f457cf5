"""Oracle and invariant checks behind ``isocauchy validate``.

Each check returns a :class:`CheckResult`; Monte Carlo sizes scale with the
``trials`` argument so a quick run stays quick. The oracles here are scipy's
special functions and quadrature, independent of the package's own kernels.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, special

from . import asymptotics as asy
from . import correlated as corr
from .divergence import kl_cauchy_to_gaussian_truncated, kl_gaussian_to_cauchy, kl_gaussian_to_cauchy_mc
from .exact import Priors, bayes_error, error_pair, false_alarm, miss
from .lrt import DetectorConfig, decision_radii, geometry, log_likelihood_ratio
from .sampling import RngSpec, mc_error_estimate
from .specfun import Branch, lambert_w, reg_beta, reg_gamma_lower

__all__ = ["CheckResult", "CHECKS", "run_all"]

XI = math.sqrt(2.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)

    def to_dict(self) -> dict:
        return asdict(self)


def _gen(seed: int, salt: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) | (salt << 64)))


def check_lambert_identity(seed: int, trials: int) -> CheckResult:
    g = _gen(seed, 1)
    worst = 0.0
    for branch, sample in (
        (Branch.PRINCIPAL, lambda k: -1 / math.e + g.random(k) * (10 + 1 / math.e)),
        (Branch.NEGATIVE_ONE, lambda k: -g.random(k) / math.e),
    ):
        for z in sample(1000):
            if branch == Branch.NEGATIVE_ONE and z == 0.0:
                continue
            w = lambert_w(branch, float(z))
            worst = max(worst, abs(w * math.exp(w) - z))
    return CheckResult("lambert_w_identity", worst <= 1e-12, {"max_abs_residual": worst})


def check_incomplete_functions(seed: int, trials: int) -> CheckResult:
    g = _gen(seed, 2)
    worst_g = worst_b = 0.0
    for _ in range(100):
        s = float(g.uniform(0.5, 200))
        x = float(g.uniform(0, 2 * s + 10))
        worst_g = max(worst_g, abs(reg_gamma_lower(s, x) - special.gammainc(s, x)))
        a = float(g.uniform(0.5, 200))
        b = float(g.uniform(0.5, 5))
        t = float(g.random())
        worst_b = max(worst_b, abs(reg_beta(a, b, t) - special.betainc(a, b, t)))
    ok = worst_g <= 1e-10 and worst_b <= 1e-10
    return CheckResult("incomplete_gamma_beta", ok, {"max_abs_gamma": worst_g, "max_abs_beta": worst_b})


def _random_config(g: np.random.Generator) -> DetectorConfig:
    n = int(g.integers(2, 341))
    xi = float(g.uniform(0.5, 3.0))
    while n <= 2.0 / xi**2 - 1.0:
        xi = float(g.uniform(0.5, 3.0))
    geo = geometry(DetectorConfig(n, xi))
    # thresholds between just above the origin value and just below the peak
    log_eta = float(geo.log_eta0 + g.uniform(0.0, 1.0) * (geo.log_eta_max - geo.log_eta0) * 0.999)
    return DetectorConfig(n, xi, log_eta)


def check_root_consistency(seed: int, trials: int) -> CheckResult:
    g = _gen(seed, 3)
    worst = 0.0
    for _ in range(1000):
        cfg = _random_config(g)
        rad = decision_radii(cfg)
        for r_sq in (rad.r1_sq, rad.r2_sq):
            if r_sq > 0:
                worst = max(worst, abs(log_likelihood_ratio(math.sqrt(r_sq), cfg) - cfg.log_eta))
    return CheckResult("decision_radii_roots", worst <= 1e-9, {"max_abs_log_gap": worst})


def check_exact_vs_mc(seed: int, trials: int) -> CheckResult:
    g = _gen(seed, 4)
    worst = 0.0
    for k in range(20):
        cfg = _random_config(g)
        ex = error_pair(cfg)
        est = mc_error_estimate(cfg, trials, RngSpec(seed, k))
        for p_hat, p in ((est.p_false_alarm_hat, ex.p_false_alarm), (est.p_miss_hat, ex.p_miss)):
            sd = math.sqrt(max(p * (1 - p), 1e-300) / trials)
            worst = max(worst, abs(p_hat - p) / sd)
    return CheckResult("exact_vs_mc", worst <= 4.0, {"max_sigma": worst, "trials": trials})


def check_bayes_consistent(seed: int, trials: int) -> CheckResult:
    pri = Priors(0.5)
    gaps = []
    ratio = None
    for n in (50, 100, 200, 340):
        _, pe = bayes_error(pri, n, XI)
        approx = asy.bayes_asymptotic_consistent(pri, n, XI).pe_asymp
        gaps.append(abs(approx - pe))
        ratio = approx / pe
    ok = 0.9 <= ratio <= 1.1 and all(a > b for a, b in zip(gaps, gaps[1:]))
    return CheckResult("bayes_consistent_asymptote", ok, {"ratio_n340": ratio, "abs_gaps": gaps})


def check_case1(seed: int, trials: int) -> CheckResult:
    det = {}
    ok = True
    for eps in (0.01, 0.05, 0.09):
        le = asy.calibrate_threshold_for_pf(eps, 340, XI)
        cfg = DetectorConfig(340, XI, le)
        ratio = miss(cfg) * math.sqrt(340) / asy.case1_kappa0(eps, XI)
        pf_err = abs(false_alarm(cfg) - eps)
        det[str(eps)] = {"ratio": ratio, "pf_error": pf_err}
        ok &= 0.85 <= ratio <= 1.15 and pf_err <= 1e-10
    return CheckResult("np_case1_kappa0", ok, det)


def check_case2(seed: int, trials: int) -> CheckResult:
    det = {}
    ok = True
    ns = list(range(50, 341))
    for eps in (0.07, 0.14):
        y = [-math.log(false_alarm(DetectorConfig(n, XI, asy.calibrate_threshold_for_miss(eps, n, XI)))) for n in ns]
        fit = asy.linear_fit(ns, y)
        b = asy.case2_exponent_bounds(asy.estimate_case2_kappa(eps, 340, XI), 340)
        inside = b.lower_rate <= fit.slope <= b.upper_rate
        det[str(eps)] = {
            "r_squared": fit.r_squared,
            "slope": fit.slope,
            "lower_rate": b.lower_rate,
            "upper_rate": b.upper_rate,
            "kappa_hat": b.kappa_hat,
        }
        ok &= fit.r_squared >= 0.995 and inside
    return CheckResult("np_case2_rates", ok, det)


def check_kl(seed: int, trials: int) -> CheckResult:
    det = {}
    ok = True
    samples = 10 * trials
    for k, n in enumerate((2, 20, 200)):
        d = kl_gaussian_to_cauchy(n, XI).d_exact
        mc, se = kl_gaussian_to_cauchy_mc(n, XI, samples, RngSpec(seed, 100 + k))
        det[f"n{n}_sigma"] = (mc - d) / se
        ok &= abs(mc - d) <= 3 * se
    step = kl_gaussian_to_cauchy(4000, XI).d_exact - kl_gaussian_to_cauchy(1000, XI).d_exact
    det["step_1000_4000"] = step
    ok &= abs(step - 0.5 * math.log(4)) <= 0.2 * 0.5 * math.log(4)
    lo = kl_cauchy_to_gaussian_truncated(5, XI, 1e2)
    hi = kl_cauchy_to_gaussian_truncated(5, XI, 1e4)
    det["reverse_ratio"] = hi / lo
    ok &= hi > 10 * lo
    # independent quadrature of I_n at one point
    s = 100.0
    ref, _ = integrate.quad(lambda r: math.exp((s - 1) * math.log(r) - r - math.lgamma(s)) * math.log1p(2 * r), 0, np.inf, epsrel=1e-12, limit=200)
    det["i_n_gap_n200"] = abs(ref - kl_gaussian_to_cauchy(200, XI).i_n)
    ok &= det["i_n_gap_n200"] <= 1e-9
    return CheckResult("kl_divergence", ok, det)


def check_correlated(seed: int, trials: int) -> CheckResult:
    det = {}
    ok = True
    for n in range(3, 17):
        ok &= corr.ex2_errors(n) == corr.ex2_enumerate(n)
        if n <= 12:
            ok &= corr.ex1_enumerate(n, 0.5) == corr.ex1_closed_form(n, 0.5)
    det["enumeration_match"] = ok
    n = 10**5
    e2 = corr.ex2_errors(n)
    pf_const = e2.p_false_alarm * math.sqrt(n * math.log(n))
    miss_const = e2.p_miss * math.sqrt(n / math.log(n))
    det["ex2_pf_times_sqrt_nlnn"] = pf_const
    det["ex2_miss_times_sqrt_n_over_lnn"] = miss_const
    target = math.sqrt(2 / math.pi)
    ok &= abs(pf_const - target) <= 0.15 * target and abs(miss_const - 1) <= 0.15
    est = corr.ex3_simulate(100, trials, RngSpec(seed, 200))
    e3 = corr.ex3_errors(100)
    for p_hat, p in ((est.p_false_alarm_hat, e3.p_false_alarm), (est.p_miss_hat, e3.p_miss)):
        ok &= abs(p_hat - p) <= 4 * math.sqrt(p * (1 - p) / trials)
    det["ex3_mc"] = [est.p_false_alarm_hat, est.p_miss_hat]
    return CheckResult("correlated_examples", ok, det)


def check_asymmetry(seed: int, trials: int) -> CheckResult:
    pri = Priors(0.5)
    ratios = [
        (lambda e: e.p_false_alarm / e.p_miss)(bayes_error(pri, n, XI)[0]) for n in (50, 100, 200, 340, 1000, 3000)
    ]
    ok = all(a > b for a, b in zip(ratios, ratios[1:]))
    corr_ratios = {
        "ex1": [corr.ex1_closed_form(n, 0.5).p_miss / corr.ex1_closed_form(n, 0.5).p_false_alarm for n in (10, 100, 1000)],
        "ex2": [corr.ex2_errors(n).p_miss / corr.ex2_errors(n).p_false_alarm for n in (100, 1000, 10000)],
        "ex3": [corr.ex3_errors(n).p_miss / corr.ex3_errors(n).p_false_alarm for n in (100, 1000, 10000)],
    }
    for seq in corr_ratios.values():
        ok &= all(a < b for a, b in zip(seq, seq[1:]))
    return CheckResult("error_asymmetry", ok, {"main_pf_over_miss": ratios, **corr_ratios})


CHECKS: list[Callable[[int, int], CheckResult]] = [
    check_lambert_identity,
    check_incomplete_functions,
    check_root_consistency,
    check_exact_vs_mc,
    check_bayes_consistent,
    check_case1,
    check_case2,
    check_kl,
    check_correlated,
    check_asymmetry,
]


def run_all(seed: int, trials: int) -> list[CheckResult]:
    out = []
    for check in CHECKS:
        try:
            out.append(check(seed, trials))
        except Exception as exc:  # a crashing check is a failed check
            out.append(CheckResult(check.__name__.removeprefix("check_"), False, {"error": repr(exc)}))
    return out
