"""Seeded Monte Carlo for the two hypotheses.

Streams are counter-based: ``(seed, stream_id)`` keys a Philox generator and
chunk ``k`` of lane ``h`` is the same key advanced by ``(2k + h) * 2**128``
draws, so a run's output does not depend on how chunks are spread over
workers. Tallies are integer counts, merged by plain summation.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .lrt import DetectorConfig, decision_radii, geometry

__all__ = [
    "RngSpec",
    "ErrorEstimate",
    "CHUNK_SIZE",
    "make_generator",
    "sample_gaussian_radius",
    "sample_cauchy_radius",
    "sample_gaussian_vectors",
    "sample_cauchy_vectors",
    "decide_gaussian",
    "wald_half_width",
    "estimate_from_counts",
    "count_in_chunks",
    "mc_error_estimate",
]

CHUNK_SIZE = 1 << 18
_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngSpec:
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not (isinstance(v, (int, np.integer)) and 0 <= v <= _U64):
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {v!r}")

    def substream(self, stream_id: int) -> "RngSpec":
        return RngSpec(self.seed, stream_id)


@dataclass(frozen=True)
class ErrorEstimate:
    p_false_alarm_hat: float
    p_miss_hat: float
    trials: int
    ci_half_width_pf: float
    ci_half_width_miss: float


def make_generator(spec: RngSpec, chunk: int = 0, lane: int = 0) -> np.random.Generator:
    """Generator for chunk ``chunk`` of lane ``lane`` (0 or 1) of the stream ``spec``."""
    key = int(spec.seed) | (int(spec.stream_id) << 64)
    bitgen = np.random.Philox(key=key)
    offset = 2 * chunk + lane
    if offset:
        bitgen = bitgen.jumped(offset)
    return np.random.Generator(bitgen)


def sample_gaussian_radius(n: int, xi: float, rng: np.random.Generator, size=None):
    """Radius of a circular N(0, xi^2/2) vector: ``r^2 = (xi^2/2) chi^2_n``."""
    return np.sqrt(0.5 * xi * xi * rng.chisquare(n, size))


def sample_cauchy_radius(n: int, rng: np.random.Generator, size=None):
    """Radius of a circular C(0, 1) vector, ``|Z| / |W|`` with Z ~ N(0, I_n), W ~ N(0, 1)."""
    num = np.sqrt(rng.chisquare(n, size))
    return num / np.abs(rng.standard_normal(size))


def sample_gaussian_vectors(n: int, xi: float, rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.standard_normal((size, n)) * (xi / math.sqrt(2.0))


def sample_cauchy_vectors(n: int, rng: np.random.Generator, size: int) -> np.ndarray:
    z = rng.standard_normal((size, n))
    w = rng.standard_normal((size, 1))
    return z / np.abs(w)


def decide_gaussian(r_sq: np.ndarray, r1_sq: float, r2_sq: float) -> np.ndarray:
    """True where the test picks the Gaussian hypothesis (``r1 <= r <= r2``)."""
    return (r_sq >= r1_sq) & (r_sq <= r2_sq)


def wald_half_width(p_hat: float, trials: int) -> float:
    return 1.96 * math.sqrt(p_hat * (1.0 - p_hat) / trials)


def estimate_from_counts(false_alarms: int, misses: int, trials: int) -> ErrorEstimate:
    pf = false_alarms / trials
    pm = misses / trials
    return ErrorEstimate(pf, pm, trials, wald_half_width(pf, trials), wald_half_width(pm, trials))


def _chunk_sizes(trials: int, chunk_size: int) -> list[int]:
    full, rest = divmod(trials, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def count_in_chunks(
    counter: Callable[[np.random.Generator, int], int],
    trials: int,
    spec: RngSpec,
    chunk_size: int = CHUNK_SIZE,
    workers: int = 1,
    lane: int = 0,
) -> int:
    """Sum ``counter(generator_k, size_k)`` over the deterministic chunks of ``spec``."""
    sizes = _chunk_sizes(trials, chunk_size)

    def job(k: int) -> int:
        return int(counter(make_generator(spec, k, lane), sizes[k]))

    if workers <= 1 or len(sizes) == 1:
        return sum(job(k) for k in range(len(sizes)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(job, range(len(sizes))))


def mc_error_estimate(
    cfg: DetectorConfig,
    trials: int,
    rng: RngSpec,
    workers: int = 1,
    chunk_size: int = CHUNK_SIZE,
) -> ErrorEstimate:
    """Empirical false-alarm and miss rates of the LRT from radial draws.

    Gaussian draws use lane 0 and Cauchy draws lane 1 of ``rng``, so the two
    hypotheses never share numbers.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    geo = geometry(cfg)
    if cfg.log_eta >= geo.log_eta_max:
        return estimate_from_counts(trials, 0, trials)
    radii = decision_radii(cfg, geo)
    n, xi = cfg.n, cfg.xi

    def gauss_errors(gen: np.random.Generator, size: int) -> int:
        r = sample_gaussian_radius(n, xi, gen, size)
        return int(np.count_nonzero(~decide_gaussian(r * r, radii.r1_sq, radii.r2_sq)))

    def cauchy_errors(gen: np.random.Generator, size: int) -> int:
        r = sample_cauchy_radius(n, gen, size)
        return int(np.count_nonzero(decide_gaussian(r * r, radii.r1_sq, radii.r2_sq)))

    fa = count_in_chunks(gauss_errors, trials, rng, chunk_size, workers, lane=0)
    ms = count_in_chunks(cauchy_errors, trials, rng, chunk_size, workers, lane=1)
    return estimate_from_counts(fa, ms, trials)
