import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isocauchy import specfun
from isocauchy.specfun import Branch, SpecfunDomainError, q_function, q_inverse


W0_DOMAIN = st.floats(min_value=-1 / math.e, max_value=1e6, allow_nan=False)
WM1_DOMAIN = st.floats(min_value=-1 / math.e, max_value=-1e-300, allow_nan=False)


def _branch_slack(z):
    # forming 1 + e z costs one ulp, amplified by dW/dt ~ 1/sqrt(2t) near the branch point
    t = float(1 + mp.e * z)
    return 4e-16 / math.sqrt(2 * t) if t > 0 else 1e-300


class TestLambertW:
    def test_trivial_points(self, backend):
        assert backend.lambert_w(Branch.PRINCIPAL, 0.0) == 0.0
        assert backend.lambert_w(Branch.NEGATIVE_ONE, -1 / math.e) == pytest.approx(-1.0, abs=1e-7)
        assert backend.lambert_w(Branch.PRINCIPAL, -1 / math.e) == pytest.approx(-1.0, abs=1e-7)

    def test_principal_at_minus_0_2(self, backend):
        # root of w e^w = -0.2 from mpmath findroot
        assert backend.lambert_w(Branch.PRINCIPAL, -0.2) == pytest.approx(-0.25917110181907375, rel=1e-14)

    @pytest.mark.parametrize("z", [-0.3678, -0.3, -0.1, -1e-8, 1e-8, 0.5, 1.0, math.e, 50.0, 1e10, 1e300])
    def test_principal_vs_mpmath(self, backend, z):
        ref = float(mp.lambertw(z, 0).real)
        assert backend.lambert_w(Branch.PRINCIPAL, z) == pytest.approx(ref, rel=2e-15, abs=_branch_slack(z))

    @pytest.mark.parametrize("z", [-0.3678, -0.3, -0.1, -1e-3, -1e-20, -1e-300])
    def test_negative_one_vs_mpmath(self, backend, z):
        ref = float(mp.lambertw(z, -1).real)
        assert backend.lambert_w(Branch.NEGATIVE_ONE, z) == pytest.approx(ref, rel=2e-15, abs=_branch_slack(z))

    @pytest.mark.parametrize("t", [0.0, 1e-30, 1e-16, 1e-10, 1e-6, 1e-3, 0.1, 0.5, 0.999])
    def test_offset_form_near_branch_point(self, backend, t):
        z = (mp.mpf(t) - 1) / mp.e
        for br in (0, -1):
            ref = float(mp.lambertw(z, br).real)
            got = backend.lambert_w_offset(br, t)
            assert got == pytest.approx(ref, rel=1e-14, abs=1e-15)

    def test_offset_matches_branch_series(self, backend):
        # W = -1 +/- p - p^2/3 + 11 p^3/72 with p = sqrt(2t), accurate to O(p^4)
        t = 1e-8
        p = math.sqrt(2 * t)
        for br, sign in ((0, 1.0), (-1, -1.0)):
            q = sign * p
            assert backend.lambert_w_offset(br, t) == pytest.approx(-1 + q - q * q / 3 + 11 * q**3 / 72, abs=1e-15)

    @pytest.mark.parametrize("L", [-2.5, -10.0, -700.0, -800.0, -1e5])
    def test_wm1_log_form(self, backend, L):
        # W_{-1}(-e^L) solves w + ln(-w) = L
        ref = mp.findroot(lambda w: w + mp.log(-w) - L, L - math.log(-L))
        assert backend.lambert_wm1_log(L) == pytest.approx(float(ref), rel=1e-15)

    def test_wm1_log_agrees_with_direct(self, backend):
        z = -math.exp(-30.0)
        assert backend.lambert_wm1_log(-30.0) == pytest.approx(backend.lambert_w(-1, z), rel=1e-14)

    @settings(max_examples=300, deadline=None)
    @given(z=W0_DOMAIN)
    def test_identity_principal(self, z):
        for mod in specfun.available_backends().values():
            w = mod.lambert_w(Branch.PRINCIPAL, z)
            assert w >= -1.0
            assert abs(w * math.exp(w) - z) <= 1e-12 * max(1.0, abs(z))

    @settings(max_examples=300, deadline=None)
    @given(z=WM1_DOMAIN)
    def test_identity_negative_one(self, z):
        for mod in specfun.available_backends().values():
            w = mod.lambert_w(Branch.NEGATIVE_ONE, z)
            assert w <= -1.0
            assert abs(w * math.exp(w) - z) <= 1e-12 * max(1.0, abs(z))

    @pytest.mark.parametrize(
        "branch, z",
        [(0, -0.37), (-1, -0.37), (-1, 0.0), (-1, 0.5), (0, math.nan), (1, 0.5), (-2, -0.1)],
    )
    def test_domain_errors(self, backend, branch, z):
        with pytest.raises(SpecfunDomainError):
            backend.lambert_w(branch, z)

    def test_offset_domain_errors(self, backend):
        with pytest.raises(SpecfunDomainError):
            backend.lambert_w_offset(0, -1e-3)
        with pytest.raises(SpecfunDomainError):
            backend.lambert_w_offset(-1, 1.0)
        with pytest.raises(SpecfunDomainError):
            backend.lambert_wm1_log(-0.5)

    def test_slack_below_branch_point_accepted(self, backend):
        z = -1 / math.e
        below = math.nextafter(z, -1.0)
        assert backend.lambert_w(0, below) == pytest.approx(-1.0, abs=1e-7)


class TestLogGamma:
    @pytest.mark.parametrize(
        "x, expected",
        [(1.0, 0.0), (0.5, 0.5723649429247001), (10.0, 12.80182748008147)],
    )
    def test_values(self, backend, x, expected):
        assert backend.log_gamma(x) == pytest.approx(expected, rel=1e-13, abs=1e-15)

    @pytest.mark.parametrize("x", [1e-300, 1e-5, 3.7, 170.5, 1e5, 1e15])
    def test_vs_mpmath(self, backend, x):
        assert backend.log_gamma(x) == pytest.approx(float(mp.loggamma(x)), rel=1e-13)

    @pytest.mark.parametrize("x", [0.0, -1.0, math.nan])
    def test_domain(self, backend, x):
        with pytest.raises(SpecfunDomainError):
            backend.log_gamma(x)


class TestIncompleteGamma:
    def test_exponential_case(self, backend):
        assert backend.reg_gamma_lower(1.0, 0.7) == pytest.approx(1 - math.exp(-0.7), abs=1e-15)

    def test_zero_and_infinity(self, backend):
        assert backend.reg_gamma_lower(3.0, 0.0) == 0.0
        assert backend.reg_gamma_upper(3.0, math.inf) == 0.0

    def test_quadrature_value(self, backend):
        # mpmath quad of t^1.5 e^-t on [0, 2.5] over Gamma(2.5)
        assert backend.reg_gamma_lower(2.5, 2.5) == pytest.approx(0.58411981300449208, abs=1e-14)

    @pytest.mark.parametrize(
        "s, x, rel",
        [
            (0.5, 1e-10, 1e-12),
            (0.5, 30.0, 1e-12),
            (2.5, 0.1, 1e-12),
            (10.0, 9.0, 1e-12),
            (10.0, 11.0, 1e-12),
            (170.0, 140.0, 1e-12),
            (170.0, 210.0, 1e-12),
            (170.0, 400.0, 1e-12),
            # the continued fraction accumulates roughly sqrt(s) ulps here
            (5000.0, 5050.0, 1e-11),
        ],
    )
    def test_pair_vs_mpmath(self, backend, s, x, rel):
        p_ref = mp.gammainc(s, 0, x, regularized=True)
        q_ref = mp.gammainc(s, x, mp.inf, regularized=True)
        p, q = backend.reg_gamma_pair(s, x)
        # the small side carries relative accuracy
        assert p == pytest.approx(float(p_ref), rel=rel, abs=1e-15)
        assert q == pytest.approx(float(q_ref), rel=rel, abs=1e-15)

    def test_deep_tail_relative(self, backend):
        ref = float(mp.gammainc(170, 0, 20, regularized=True))
        assert backend.reg_gamma_lower(170.0, 20.0) == pytest.approx(ref, rel=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(s=st.floats(0.1, 500), x=st.floats(0, 2000))
    def test_complement_and_range(self, s, x):
        for mod in specfun.available_backends().values():
            p, q = mod.reg_gamma_pair(s, x)
            assert 0.0 <= p <= 1.0 and 0.0 <= q <= 1.0
            assert abs(p + q - 1.0) <= 1e-12

    @settings(max_examples=100, deadline=None)
    @given(s=st.floats(0.1, 300), x=st.floats(0, 600), dx=st.floats(0, 50))
    def test_monotone_in_x(self, s, x, dx):
        # slack: rounding of the prefactor exponent s ln x - x - lgamma(s), a few ulps of its magnitude
        slack = 4e-16 * (1.0 + s * abs(math.log(max(x, 1e-300))) + x + abs(math.lgamma(s)))
        assert specfun.reg_gamma_lower(s, x + dx) >= specfun.reg_gamma_lower(s, x) - slack

    @pytest.mark.parametrize("s, x", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5), (math.nan, 1.0)])
    def test_domain(self, backend, s, x):
        with pytest.raises(SpecfunDomainError):
            backend.reg_gamma_pair(s, x)


class TestIncompleteBeta:
    def test_endpoints(self, backend):
        assert backend.reg_beta(2.0, 3.0, 0.0) == 0.0
        assert backend.reg_beta(2.0, 3.0, 1.0) == 1.0

    def test_arcsine_symmetry(self, backend):
        assert backend.reg_beta(0.5, 0.5, 0.5) == pytest.approx(0.5, abs=1e-15)
        x = 0.3
        assert backend.reg_beta(0.5, 0.5, x) == pytest.approx(2 / math.pi * math.asin(math.sqrt(x)), abs=1e-14)

    def test_quadrature_value(self, backend):
        # mpmath quad of t^1.5 (1-t)^-0.5 on [0, 0.9] over B(2.5, 0.5)
        assert backend.reg_beta(2.5, 0.5, 0.9) == pytest.approx(0.48958974456442755, abs=1e-14)

    @pytest.mark.parametrize(
        "a, b, x",
        [(10.0, 0.5, 0.5), (10.0, 0.5, 0.99), (170.0, 0.5, 0.995), (170.0, 0.5, 0.9999), (170.0, 0.5, 0.9), (0.5, 170.0, 0.001), (3.0, 4.0, 0.4)],
    )
    def test_pair_vs_mpmath(self, backend, a, b, x):
        lo = float(mp.betainc(a, b, 0, x, regularized=True))
        hi = float(mp.betainc(a, b, x, 1, regularized=True))
        got_lo, got_hi = backend.reg_beta_pair(a, b, x)
        assert got_lo == pytest.approx(lo, rel=1e-12, abs=1e-15)
        assert got_hi == pytest.approx(hi, rel=1e-12, abs=1e-15)

    def test_accurate_complement_argument(self, backend):
        # x = r^2/(1+r^2) at r = 1e6: 1 - x is only representable through y
        r2 = 1e12
        x, y = r2 / (1 + r2), 1 / (1 + r2)
        ref = float(mp.betainc(10, 0.5, mp.mpf(r2) / (1 + r2), 1, regularized=True))
        assert backend.reg_beta_pair(10.0, 0.5, x, y)[1] == pytest.approx(ref, rel=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(a=st.floats(0.1, 300), b=st.floats(0.1, 300), x=st.floats(0, 1))
    def test_reflection(self, a, b, x):
        # snap x so that x + y == 1 holds exactly in floating point
        y = 1.0 - x
        x = 1.0 - y
        for mod in specfun.available_backends().values():
            assert abs(mod.reg_beta(a, b, x) - (1.0 - mod.reg_beta(b, a, y))) <= 1e-12

    @pytest.mark.parametrize("a, b, x", [(0.0, 1.0, 0.5), (1.0, -1.0, 0.5), (1.0, 1.0, 1.5), (1.0, 1.0, -0.1)])
    def test_domain(self, backend, a, b, x):
        with pytest.raises(SpecfunDomainError):
            backend.reg_beta(a, b, x)


class TestQuadratureOracle:
    """Each kernel against slow mpmath quadrature on 100 pseudo-random points."""

    def test_gamma_and_beta(self, backend):
        import random

        rnd = random.Random(2024)
        for _ in range(100):
            s = rnd.uniform(0.5, 60)
            x = rnd.uniform(0, 2 * s + 5)
            ref = mp.quad(lambda t: t ** (s - 1) * mp.exp(-t), [0, min(x, s), x]) / mp.gamma(s)
            assert abs(backend.reg_gamma_lower(s, x) - float(ref)) <= 1e-10
            a = rnd.uniform(0.5, 60)
            b = rnd.uniform(0.5, 3)
            u = rnd.uniform(0, 0.999)
            ref = mp.quad(lambda t: t ** (a - 1) * (1 - t) ** (b - 1), [0, u]) / mp.beta(a, b)
            assert abs(backend.reg_beta(a, b, u) - float(ref)) <= 1e-10


class TestBackendsAgree:
    @settings(max_examples=200, deadline=None)
    @given(s=st.floats(0.5, 400), x=st.floats(0, 800), z=st.floats(-1 / math.e, 100))
    def test_same_results(self, s, x, z):
        backs = list(specfun.available_backends().values())
        ref = backs[0]
        for mod in backs[1:]:
            # deep tails go through exp(s ln x - x - lgamma(s)); one ulp of a large exponent is ~1e-13 relative
            assert mod.reg_gamma_pair(s, x) == pytest.approx(ref.reg_gamma_pair(s, x), rel=1e-12, abs=1e-300)
            assert mod.lambert_w(0, z) == pytest.approx(ref.lambert_w(0, z), rel=1e-13, abs=1e-300)

    def test_backend_name(self):
        assert specfun.BACKEND in specfun.available_backends()


class TestGaussianTail:
    def test_symmetry_points(self):
        assert q_function(0.0) == 0.5
        assert q_inverse(0.5) == 0.0

    def test_q_inverse_value(self):
        # bisection on the mpmath-integrated Gaussian tail
        assert q_inverse(0.025) == pytest.approx(1.9599639845400542, abs=1e-12)

    @pytest.mark.parametrize("p", [1e-300, 1e-20, 1e-5, 0.3, 0.9, 1 - 1e-12])
    def test_q_inverse_vs_mpmath(self, p):
        with mp.workdps(400):
            ref = float(mp.sqrt(2) * mp.erfinv(1 - 2 * mp.mpf(p)))
        assert q_inverse(p) == pytest.approx(ref, rel=1e-9, abs=1e-9)

    @settings(max_examples=300)
    @given(x=st.floats(-2, 30))
    def test_round_trip(self, x):
        # for very negative x, Q(x) rounds to within an ulp of 1 and the inverse is ill-conditioned
        assert abs(q_inverse(q_function(x)) - x) <= 1e-9

    @settings(max_examples=300)
    @given(x=st.floats(-30, 30))
    def test_reflection(self, x):
        assert abs(q_function(x) + q_function(-x) - 1.0) <= 1e-14

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 2.0, math.nan])
    def test_q_inverse_domain(self, p):
        with pytest.raises(SpecfunDomainError):
            q_inverse(p)
