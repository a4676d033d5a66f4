"""Seeded Monte Carlo estimates of outage, average SNR and ergodic rate.

Randomness is organised in fixed blocks of ``RNG_BLOCK`` trials. Block ``b``
draws each of its four channels (fog1, point1, fog2, point2) from its own
generator seeded by ``SeedSequence(master_seed, spawn_key=(b, channel))``, so a
trial's draws depend only on the master seed and the trial index. Chunks are
runs of whole blocks; per-block sums are merged in block order with
``math.fsum``, which makes results bit-identical across chunk sizes and
worker counts.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import LinkParams, log_fade_sf, sample_channel_gain
from .errors import DomainError
from .relay import MetricReport, RelayConfig

RNG_BLOCK = 1000
CHANNELS = ("fog1", "point1", "fog2", "point2")
MODES = ("direct", "relay_true", "relay_harmonic", "relay_min")
WILSON_Z = 1.959963984540054   # two-sided 95%
MIN_TRIALS_FOR_CI = 10_000


@dataclass(frozen=True)
class SimSpec:
    trials: int = 1_000_000
    master_seed: int = 20240611
    chunk_size: int = 100_000
    mode: str = "relay_true"
    gamma_th: float = 10.0 ** 0.6
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise DomainError(f"master_seed must fit in 64 unsigned bits, got {self.master_seed}")
        if self.chunk_size < RNG_BLOCK or self.chunk_size % RNG_BLOCK:
            raise DomainError(f"chunk_size must be a positive multiple of {RNG_BLOCK}")
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.gamma_th > 0:
            raise DomainError(f"gamma_th must be positive, got {self.gamma_th}")
        if self.workers < 1:
            raise DomainError("workers must be >= 1")


@dataclass(frozen=True)
class SimResult:
    mode: str
    trials_used: int
    outage_hat: float
    outage_lo: float
    outage_hi: float
    avg_snr_hat: float
    avg_snr_se: float
    rate_hat: float
    rate_se: float

    @property
    def outage_half_width(self) -> float:
        return 0.5 * (self.outage_hi - self.outage_lo)

    @property
    def ci_reliable(self) -> bool:
        return self.trials_used >= MIN_TRIALS_FOR_CI

    def to_report(self) -> MetricReport:
        notes = [f"{self.mode}, {self.trials_used} trials"]
        if not self.ci_reliable:
            notes.append(f"fewer than {MIN_TRIALS_FOR_CI} trials: intervals are indicative only")
        return MetricReport(
            self.outage_hat, self.avg_snr_hat, self.rate_hat, "monte_carlo",
            uncertainty={"outage": self.outage_half_width, "outage_ci": [self.outage_lo, self.outage_hi],
                         "avg_snr": self.avg_snr_se, "ergodic_rate": self.rate_se},
            notes=notes)


def wilson_interval(successes: int, n: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        raise DomainError("wilson_interval needs n > 0")
    p = successes / n
    z2n = z * z / n
    centre = (p + 0.5 * z2n) / (1.0 + z2n)
    half = z / (1.0 + z2n) * math.sqrt(p * (1.0 - p) / n + z2n / (4.0 * n))
    # the interval touches 0 (or 1) exactly when no (or every) trial failed
    lo = 0.0 if successes == 0 else max(0.0, min(p, centre - half))
    hi = 1.0 if successes == n else min(1.0, max(p, centre + half))
    return lo, hi


def _block_rngs(master_seed: int, block: int, channels: int):
    return [np.random.Generator(np.random.PCG64(np.random.SeedSequence(master_seed, spawn_key=(block, c))))
            for c in range(channels)]


def _hops(target):
    if isinstance(target, RelayConfig):
        return target.hop1, target.hop2
    if isinstance(target, LinkParams):
        return (target,)
    raise DomainError(f"simulate needs a RelayConfig or LinkParams, got {type(target).__name__}")


def draw_hop_snrs(target, master_seed: int, block: int, n: int, pointing=None) -> list[np.ndarray]:
    """Per-hop SNR draws gamma_i = gamma0 (h_f h_p)^2 for one RNG block."""
    hops = _hops(target)
    pointing = pointing or (None,) * len(hops)
    rngs = _block_rngs(master_seed, block, 2 * len(hops))
    out = []
    for i, link in enumerate(hops):
        h = sample_channel_gain(link, rngs[2 * i], n, point_rng=rngs[2 * i + 1], pp=pointing[i])
        out.append(link.gamma0 * h * h)
    return out


def combine(mode: str, snrs: list[np.ndarray]) -> np.ndarray:
    """End-to-end SNR from per-hop draws."""
    if mode == "direct":
        return snrs[0]
    # lo * (hi / sum) keeps true <= harmonic <= min exact under rounding;
    # g1 g2 / (g1 + g2) can land one ulp above the minimum
    lo, hi = np.minimum(*snrs), np.maximum(*snrs)
    if mode == "relay_true":
        return lo * (hi / (lo + hi + 1.0))
    if mode == "relay_harmonic":
        return lo * (hi / (lo + hi))
    if mode == "relay_min":
        return lo
    raise DomainError(f"unknown mode {mode!r}")


def coupled_draws(cfg: RelayConfig, trials: int, master_seed: int, pointing=None) -> dict:
    """True, harmonic and min end-to-end SNRs computed from the same hop draws."""
    parts = {m: [] for m in ("relay_true", "relay_harmonic", "relay_min")}
    for block in range(math.ceil(trials / RNG_BLOCK)):
        n = min(RNG_BLOCK, trials - block * RNG_BLOCK)
        snrs = draw_hop_snrs(cfg, master_seed, block, n, pointing)
        for m in parts:
            parts[m].append(combine(m, snrs))
    return {m: np.concatenate(v) for m, v in parts.items()}


def _block_sums(spec: SimSpec, target, pointing, block: int):
    n = min(RNG_BLOCK, spec.trials - block * RNG_BLOCK)
    g = combine(spec.mode, draw_hop_snrs(target, spec.master_seed, block, n, pointing))
    r = np.log1p(g) / math.log(2.0)
    return (int(np.count_nonzero(g < spec.gamma_th)), float(np.sum(g)), float(np.sum(g * g)),
            float(np.sum(r)), float(np.sum(r * r)))


def _chunk(spec, target, pointing, blocks):
    return [_block_sums(spec, target, pointing, b) for b in blocks]


def simulate(spec: SimSpec, target, pointing=None) -> SimResult:
    """Estimate outage, mean SNR and mean log2(1 + SNR) for ``spec.mode``.

    ``target`` is a LinkParams (mode ``direct``) or a RelayConfig. ``pointing``
    optionally gives per-hop PointingParams so jitter is drawn in metres; the
    SNR law is the same either way.
    """
    hops = _hops(target)
    if (spec.mode == "direct") != (len(hops) == 1):
        raise DomainError(f"mode {spec.mode!r} does not match a {type(target).__name__} target")
    n_blocks = math.ceil(spec.trials / RNG_BLOCK)
    per_chunk = spec.chunk_size // RNG_BLOCK
    chunks = [range(s, min(s + per_chunk, n_blocks)) for s in range(0, n_blocks, per_chunk)]
    if spec.workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(lambda c: _chunk(spec, target, pointing, c), chunks))
    else:
        results = [_chunk(spec, target, pointing, c) for c in chunks]
    sums = [s for chunk in results for s in chunk]

    n = spec.trials
    outages = sum(s[0] for s in sums)
    mean_g = math.fsum(s[1] for s in sums) / n
    mean_g2 = math.fsum(s[2] for s in sums) / n
    mean_r = math.fsum(s[3] for s in sums) / n
    mean_r2 = math.fsum(s[4] for s in sums) / n
    factor = 0.5 if isinstance(target, RelayConfig) and target.half_duplex_penalty else 1.0

    def std_err(m1, m2):
        if n < 2:
            return 0.0
        return math.sqrt(max(0.0, (m2 - m1 * m1) * n / (n - 1)) / n)

    lo, hi = wilson_interval(outages, n)
    return SimResult(
        mode=spec.mode, trials_used=n,
        outage_hat=outages / n, outage_lo=lo, outage_hi=hi,
        avg_snr_hat=mean_g, avg_snr_se=std_err(mean_g, mean_g2),
        rate_hat=factor * mean_r, rate_se=factor * std_err(mean_r, mean_r2))


def ks_statistic(samples: np.ndarray, cdf_values: np.ndarray) -> float:
    """Kolmogorov-Smirnov distance given the analytic CDF at the sorted samples."""
    n = len(samples)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf_values), np.max(cdf_values - (i - 1) / n)))


def snr_cdf_interpolated(samples: np.ndarray, link: LinkParams, grid_points: int = 4001):
    """Single-hop CDF at sorted SNR samples via a dense grid in the log-fade.

    Returns (cdf values, grid interpolation error estimate). The CDF is smooth
    in l = 0.5 ln(cap / gamma); the error estimate is the largest deviation
    at grid midpoints.
    """
    l = 0.5 * np.log(link.cap / samples)
    hi = float(np.max(l)) * (1.0 + 1e-12)
    grid = np.linspace(0.0, hi, grid_points)
    sf = np.array([log_fade_sf(x, link) for x in grid])
    mids = 0.5 * (grid[1:] + grid[:-1])
    exact_mid = np.array([log_fade_sf(x, link) for x in mids])
    interp_err = float(np.max(np.abs(np.interp(mids, grid, sf) - exact_mid)))
    return np.interp(l, grid, sf), interp_err
