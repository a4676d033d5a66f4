"""Single-hop SNR law under Gamma-distributed fog loss and pointing error.

Write u = A0 / sqrt(gamma / gamma0) and l = ln u >= 0. The log-fade
l = Y + W is the sum of the fog term Y ~ Gamma(k, rate z) and the pointing term
W ~ Exp(rate rho^2), which is what the density and CDF below encode.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .specfun import exp_integral_en, gamma_fn, lower_gamma_scaled, upper_incomplete_gamma
from .variates import gamma_variate, rayleigh_variate

# dB-to-neper style constant used in z = 4.343 / (beta d)
FOG_CONSTANT = 4.343


@dataclass(frozen=True)
class FogParams:
    k: float = 2.0          # shape
    beta: float = 13.12     # scale, dB/km

    def __post_init__(self):
        if not (self.k > 0 and self.beta > 0):
            raise DomainError(f"fog parameters must be positive, got k={self.k}, beta={self.beta}")


@dataclass(frozen=True)
class SystemParams:
    pt_dbm: float = 15.0
    responsivity_R: float = 0.41    # A/W
    noise_var: float = 1e-14        # A^2

    def __post_init__(self):
        if not (self.responsivity_R > 0 and self.noise_var > 0):
            raise DomainError("responsivity and noise variance must be positive")
        if not math.isfinite(self.pt_dbm):
            raise DomainError(f"pt_dbm must be finite, got {self.pt_dbm}")

    @property
    def pt_watts(self) -> float:
        return 10.0 ** ((self.pt_dbm - 30.0) / 10.0)

    @property
    def gamma0(self) -> float:
        return 2.0 * self.pt_watts ** 2 * self.responsivity_R ** 2 / self.noise_var


@dataclass(frozen=True)
class LinkParams:
    """Derived constants of one hop. ``d`` is in km."""

    d: float
    z: float
    rho2: float
    A0: float
    m: float
    gamma0: float
    k: float
    beta: float

    def __post_init__(self):
        if not (self.z > 0 and self.rho2 > 0 and self.gamma0 > 0):
            raise DomainError("z, rho^2 and gamma0 must be positive")
        if not 0.0 < self.A0 < 1.0:
            raise DomainError(f"A0 must lie in (0, 1), got {self.A0}")

    @property
    def cap(self) -> float:
        """Largest attainable SNR, A0^2 gamma0."""
        return self.A0 * self.A0 * self.gamma0

    @property
    def rho(self) -> float:
        return math.sqrt(self.rho2)


def make_link(d: float, fog: FogParams, pp, sys: SystemParams) -> LinkParams:
    """Per-hop constants at distance ``d`` km; ``pp`` supplies ``A0`` and ``rho``."""
    if not d > 0:
        raise DomainError(f"link distance must be positive, got {d}")
    z = FOG_CONSTANT / (fog.beta * d)
    rho2 = pp.rho * pp.rho
    return LinkParams(d=d, z=z, rho2=rho2, A0=pp.A0, m=z - rho2, gamma0=sys.gamma0,
                      k=fog.k, beta=fog.beta)


def with_gamma0(link: LinkParams, gamma0: float) -> LinkParams:
    return replace(link, gamma0=gamma0)


def log_fade(gamma: float, link: LinkParams) -> float:
    """l = ln(A0 / sqrt(gamma / gamma0)) = 0.5 ln(cap / gamma)."""
    return 0.5 * math.log(link.cap / gamma)


def _check_support(gamma, link, tolerant, what):
    if gamma > 0 and gamma <= link.cap:
        return True
    if not tolerant or math.isnan(gamma):
        raise DomainError(f"{what}: gamma={gamma} outside support (0, {link.cap:.6g}]")
    return False


def log_fade_pdf(l: float, link: LinkParams) -> float:
    """Density of the log-fade l = Y + W at l >= 0."""
    if l <= 0 or l == math.inf:
        return 0.0
    k = link.k
    return link.rho2 * link.z ** k / gamma_fn(k) * lower_gamma_scaled(k, link.m, l, link.rho2)


def snr_pdf(gamma: float, link: LinkParams, tolerant: bool = False) -> float:
    """Single-hop SNR density.

    The printed form z^k rho^2 / (2 m^k Gamma(k) A0^rho^2 sqrt(gamma gamma0))
    (sqrt(gamma/gamma0))^(rho^2-1) [Gamma(k) - Gamma(k, m ln u)] collapses to
    rho^2 z^k / (2 Gamma(k) gamma) * u^(-rho^2) [...] / m^k; the last factor is
    ``lower_gamma_scaled`` which stays real and cancellation-free for m < 0.
    """
    if not _check_support(gamma, link, tolerant, "snr_pdf"):
        return 0.0
    l = log_fade(gamma, link)
    return log_fade_pdf(l, link) / (2.0 * gamma)


def snr_cdf(gamma: float, link: LinkParams, tolerant: bool = False) -> float:
    """Single-hop SNR CDF, term by term.

    F = (z/m)^k u^-rho2 - (z^k / (m^k Gamma(k))) u^-rho2 Gamma(k, m l)
        + (z^k / (m^k Gamma(k))) (z l)^-1 (m l)^k (e^{-z l} + (k-1) E_{2-k}(z l))

    The first two terms share ``lower_gamma_scaled``; in the third, m^k cancels
    against (m l)^k because rho^2 + m = z.
    """
    if gamma <= 0 and tolerant and not math.isnan(gamma):
        return 0.0
    if not _check_support(gamma, link, tolerant, "snr_cdf"):
        return 1.0
    return log_fade_sf(log_fade(gamma, link), link)


def log_fade_sf(l: float, link: LinkParams) -> float:
    """P(L > l) for the log-fade, i.e. the SNR CDF at gamma = cap e^{-2 l}."""
    if l <= 0.0:
        return 1.0
    if l == math.inf:
        return 0.0
    k, z = link.k, link.z
    gk = gamma_fn(k)
    pointing_terms = z ** k * lower_gamma_scaled(k, link.m, l, link.rho2) / gk
    zl = z * l
    fog_term = zl ** (k - 1.0) / gk * (math.exp(-zl) + (k - 1.0) * exp_integral_en(2.0 - k, zl))
    return min(1.0, max(0.0, pointing_terms + fog_term))


def snr_cdf_fog_tail(l: float, k: float, z: float) -> float:
    """Gamma(k, z l) / Gamma(k), the exact limit of the fog term."""
    return upper_incomplete_gamma(k, z * l) / gamma_fn(k)


def sample_channel_gain(link: LinkParams, rng: np.random.Generator, size=None, *,
                        point_rng: np.random.Generator | None = None, pp=None):
    """Draw h = h_f h_p for one hop.

    h_f = 10^(-X d / 10) with X ~ Gamma(k, beta) dB/km and
    h_p = A0 exp(-2 r^2 / w_zeq^2) with r ~ Rayleigh(sigma_s). Only rho enters
    the law of h_p, so without ``pp`` sigma_s is normalised to 1 and
    w_zeq = 2 rho.
    """
    point_rng = rng if point_rng is None else point_rng
    if pp is not None:
        sigma_s = pp.w_zeq / (2.0 * pp.rho)
        w_zeq = pp.w_zeq
    else:
        sigma_s = 1.0
        w_zeq = 2.0 * link.rho
    x = gamma_variate(link.k, link.beta, rng, size)
    r = rayleigh_variate(sigma_s, point_rng, size)
    h_f = np.power(10.0, -x * link.d / 10.0)
    h_p = link.A0 * np.exp(-2.0 * r * r / (w_zeq * w_zeq))
    return h_f * h_p


def link_at(d: float, fog: FogParams, geom, sys: SystemParams) -> LinkParams:
    """Hop constants at ``d`` km with pointing parameters from beam optics."""
    from .geometry import pointing_params

    if not d > 0:
        raise DomainError(f"link distance must be positive, got {d}")
    return make_link(d, fog, pointing_params(1000.0 * d, geom), sys)
