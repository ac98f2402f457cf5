"""Three correlated-hypothesis constructions where the two error kinds decay at different rates.

1. IID fair bits against a mixture that makes all bits equal with probability ``alpha``.
2. IID fair bits against the Beta-Binomial(n, 1, 1) law, whose number of zeros
   is uniform on ``{0, ..., n}``.
3. Uniform on the unit cube against a two-level density switching at
   ``||x||_inf = n^(-1/n)``.

Each comes with closed forms, an exhaustive or exact oracle where that is
feasible, and a simulator of the generative model with its ML rule.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import ErrorPair
from .sampling import ErrorEstimate, RngSpec, count_in_chunks, estimate_from_counts

__all__ = [
    "Ex2State",
    "ex1_closed_form",
    "ex1_enumerate",
    "ex2_i0",
    "ex2_decides_h1",
    "ex2_errors",
    "ex2_enumerate",
    "ex3_errors",
    "ex1_simulate",
    "ex2_simulate",
    "ex3_simulate",
]

MAX_ENUMERATE_N = 20
# below this n the binomial tail is summed in exact integers
EXACT_TAIL_MAX_N = 2000


@dataclass(frozen=True)
class Ex2State:
    """``i0``: smallest ``i >= ceil(n/2)`` with ``C(n, i) <= 2^n / (n + 1)``."""

    n: int
    i0: int


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")


def ex1_closed_form(n: int, alpha: float) -> ErrorPair:
    if n < 2:
        raise ValueError("n >= 2 required")
    _check_alpha(alpha)
    pf = 2.0 ** (1 - n)
    return ErrorPair(pf, (1.0 - alpha) * (1.0 - pf))


def ex1_enumerate(n: int, alpha: float | Fraction) -> ErrorPair:
    """Exact errors of the ML rule from all ``2^n`` sequences, in rational arithmetic."""
    if not (2 <= n <= MAX_ENUMERATE_N):
        raise ValueError(f"enumeration needs 2 <= n <= {MAX_ENUMERATE_N}")
    _check_alpha(float(alpha))
    a = Fraction(alpha)
    p0 = Fraction(1, 2**n)
    pf = Fraction(0)
    pm = Fraction(0)
    for bits in itertools.product((0, 1), repeat=n):
        equal = len(set(bits)) == 1
        p1 = (a / 2 if equal else 0) + (1 - a) * p0
        if p1 >= p0:
            pf += p0
        else:
            pm += p1
    return ErrorPair(float(pf), float(pm))


def _log_comb(n: int, i: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(i + 1) - math.lgamma(n - i + 1)


def ex2_decides_h1(n: int, i: int) -> bool:
    """ML rule for ``i`` zeros: H1 iff ``(n + 1) C(n, i) <= 2^n`` (ties to H1)."""
    gap = _log_comb(n, i) + math.log(n + 1) - n * math.log(2.0)
    # a few ulps of lgamma(n + 1); only closer calls pay for big-integer arithmetic
    if abs(gap) > 1e-14 * (n + 1) * math.log(n + 1) + 1e-12:
        return gap < 0
    return (n + 1) * math.comb(n, i) <= 2**n


def ex2_i0(n: int) -> Ex2State:
    if n < 3:
        raise ValueError("n >= 3 required")
    i = (n + 1) // 2
    while not ex2_decides_h1(n, i):
        i += 1
    return Ex2State(n, i)


def ex2_errors(n: int) -> ErrorPair:
    """Errors of the ML rule; ``P_F`` is a binomial tail sum (log domain for large n)."""
    i0 = ex2_i0(n).i0
    between = max(0, 2 * i0 - n - 1)
    if n <= EXACT_TAIL_MAX_N:
        tail = sum(math.comb(n, i) for i in range(i0, n + 1))
        return ErrorPair(float(Fraction(2 * tail, 2**n)), between / (n + 1))
    lead = _log_comb(n, i0)
    terms = []
    for i in range(i0, n + 1):
        t = _log_comb(n, i) - lead
        if t < -745.0:
            break
        terms.append(math.exp(t))
    log_tail = lead + math.log(math.fsum(terms))
    pf = math.exp(math.log(2.0) + log_tail - n * math.log(2.0))
    return ErrorPair(min(pf, 1.0), between / (n + 1))


def ex2_enumerate(n: int) -> ErrorPair:
    """Exact errors over all ``2^n`` sequences with likelihoods in rational arithmetic."""
    if not (3 <= n <= MAX_ENUMERATE_N):
        raise ValueError(f"enumeration needs 3 <= n <= {MAX_ENUMERATE_N}")
    p0 = Fraction(1, 2**n)
    pf = Fraction(0)
    pm = Fraction(0)
    for bits in itertools.product((0, 1), repeat=n):
        zeros = n - sum(bits)
        p1 = Fraction(1, (n + 1) * math.comb(n, zeros))
        if p1 >= p0:
            pf += p0
        else:
            pm += p1
    return ErrorPair(float(pf), float(pm))


def ex3_errors(n: int) -> ErrorPair:
    if n < 3:
        raise ValueError("n >= 3 required")
    return ErrorPair(1.0 / n, 1.0 / math.sqrt(n))


def ex1_simulate(n: int, alpha: float, trials: int, rng: RngSpec) -> ErrorEstimate:
    _check_alpha(alpha)

    def h0_errors(gen: np.random.Generator, size: int) -> int:
        bits = gen.integers(0, 2, size=(size, n), dtype=np.int8)
        return int(np.count_nonzero(np.all(bits == bits[:, :1], axis=1)))

    def h1_errors(gen: np.random.Generator, size: int) -> int:
        bits = gen.integers(0, 2, size=(size, n), dtype=np.int8)
        tied = gen.random(size) < alpha
        bits[tied] = bits[tied, :1]
        return int(np.count_nonzero(~np.all(bits == bits[:, :1], axis=1)))

    chunk = max(1, (1 << 22) // n)
    fa = count_in_chunks(h0_errors, trials, rng, chunk, lane=0)
    ms = count_in_chunks(h1_errors, trials, rng, chunk, lane=1)
    return estimate_from_counts(fa, ms, trials)


def ex2_simulate(n: int, trials: int, rng: RngSpec) -> ErrorEstimate:
    """H1 draws ``p ~ U(0, 1)`` and then ``n`` coin flips, tallied through their zero count."""
    i0 = ex2_i0(n).i0

    def h1_region(zeros: np.ndarray) -> np.ndarray:
        return (zeros >= i0) | (zeros <= n - i0)

    def h0_errors(gen: np.random.Generator, size: int) -> int:
        return int(np.count_nonzero(h1_region(gen.binomial(n, 0.5, size))))

    def h1_errors(gen: np.random.Generator, size: int) -> int:
        p = gen.random(size)
        return int(np.count_nonzero(~h1_region(gen.binomial(n, p))))

    fa = count_in_chunks(h0_errors, trials, rng, lane=0)
    ms = count_in_chunks(h1_errors, trials, rng, lane=1)
    return estimate_from_counts(fa, ms, trials)


def ex3_simulate(n: int, trials: int, rng: RngSpec) -> ErrorEstimate:
    """Draws ``||x||_inf`` under both laws; the ML rule picks H1 when it is ``<= n^(-1/n)``."""
    if n < 3:
        raise ValueError("n >= 3 required")
    cut = n ** (-1.0 / n)
    inner_mass = 1.0 - 1.0 / math.sqrt(n)

    def h0_errors(gen: np.random.Generator, size: int) -> int:
        # max of n uniforms is U^(1/n)
        return int(np.count_nonzero(gen.random(size) ** (1.0 / n) <= cut))

    def h1_errors(gen: np.random.Generator, size: int) -> int:
        inner = gen.random(size) < inner_mass
        u = gen.random(size)
        # outside the small cube, P(max <= m) = (m^n - 1/n) / (1 - 1/n)
        outer_max = (1.0 / n + u * (1.0 - 1.0 / n)) ** (1.0 / n)
        inner_max = cut * u ** (1.0 / n)
        return int(np.count_nonzero(np.where(inner, inner_max, outer_max) > cut))

    fa = count_in_chunks(h0_errors, trials, rng, lane=0)
    ms = count_in_chunks(h1_errors, trials, rng, lane=1)
    return estimate_from_counts(fa, ms, trials)
