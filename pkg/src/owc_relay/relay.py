"""Dual-hop amplify-and-forward metrics.

Three families live here:

* exact-by-quadrature: the harmonic-mean end-to-end SNR density (the sum of
  the inverse hop SNRs) and the min-bound density, integrated numerically;
* closed forms for the midpoint relay: outage (with its incomplete-Gamma
  approximation), average SNR and ergodic rate for general k, and the exact
  k = 2 average SNR with its rate lower bound;
* the direct-link baseline.

The long closed forms are transcribed verbatim; they are checked against the
quadrature paths in the test suite rather than trusted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .channel import LinkParams, link_at, log_fade, log_fade_pdf, log_fade_sf, snr_cdf, snr_pdf
from .errors import DomainError, NotSymmetric, SingularParameter
from .quadrature import QuadResult, QuadSpec, integrate
from .specfun import gamma_fn

M_GUARD = 1e-6
LN2 = math.log(2.0)

INNER_REL_TOL = 1e-10
OUTER_REL_TOL = 1e-8
# inner densities below this are irrelevant to any outer integral
INNER_ABS_TOL = 1e-30

METHODS = ("closed_form", "quadrature", "monte_carlo")


@dataclass(frozen=True)
class RelayConfig:
    hop1: LinkParams
    hop2: LinkParams
    half_duplex_penalty: bool = False

    @property
    def symmetric(self) -> bool:
        return self.hop1 == self.hop2

    @property
    def total_distance(self) -> float:
        return self.hop1.d + self.hop2.d

    @property
    def bound_cap(self) -> float:
        """Support edge of min(gamma1, gamma2)."""
        return min(self.hop1.cap, self.hop2.cap)

    @property
    def harmonic_cap(self) -> float:
        """Support edge of gamma1 gamma2 / (gamma1 + gamma2)."""
        c1, c2 = self.hop1.cap, self.hop2.cap
        return c1 * c2 / (c1 + c2)

    @classmethod
    def from_geometry(cls, d: float, d_r: float, fog, geom, sys,
                      half_duplex_penalty: bool = False) -> "RelayConfig":
        """Relay at ``d_r`` km from the source on a ``d`` km path."""
        if not 0 < d_r < d:
            raise DomainError(f"relay position d_r={d_r} km must lie strictly inside (0, d={d})")
        hop1 = link_at(d_r, fog, geom, sys)
        hop2 = hop1 if math.isclose(d - d_r, d_r, rel_tol=0, abs_tol=1e-12) else link_at(d - d_r, fog, geom, sys)
        return cls(hop1, hop2, half_duplex_penalty)

    def swapped(self) -> "RelayConfig":
        return RelayConfig(self.hop2, self.hop1, self.half_duplex_penalty)

    @property
    def rate_factor(self) -> float:
        return 0.5 if self.half_duplex_penalty else 1.0


@dataclass
class MetricReport:
    outage: float | None
    avg_snr: float | None
    ergodic_rate: float | None
    method: str
    uncertainty: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    bound_invalid: bool = False
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if self.outage is not None and not 0.0 <= self.outage <= 1.0:
            raise DomainError(f"outage {self.outage} outside [0, 1]")
        if self.avg_snr is not None and self.avg_snr < 0:
            raise DomainError(f"average SNR {self.avg_snr} is negative")

    @property
    def avg_snr_db(self) -> float | None:
        if self.avg_snr is None or self.avg_snr <= 0:
            return None
        return 10.0 * math.log10(self.avg_snr)

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "outage": self.outage,
            "avg_snr": self.avg_snr,
            "avg_snr_db": self.avg_snr_db,
            "ergodic_rate": self.ergodic_rate,
            "uncertainty": dict(self.uncertainty),
            "bound_invalid": self.bound_invalid,
            "notes": list(self.notes),
            "extras": dict(self.extras),
        }


def _require_symmetric(cfg: RelayConfig, what: str) -> LinkParams:
    if not cfg.symmetric:
        raise NotSymmetric(f"{what} covers only the midpoint relay (identical hops)")
    return cfg.hop1


def _guard_m(link: LinkParams, what: str) -> None:
    if abs(link.m) < M_GUARD:
        raise SingularParameter(
            f"{what}: |m| = |z_r - rho^2| = {abs(link.m):.3g} below {M_GUARD}")


def _real_power_base(link: LinkParams, what: str) -> None:
    if link.m < 0 and not float(link.k).is_integer():
        raise DomainError(f"{what}: m < 0 with non-integer k gives complex powers of m")


# --------------------------------------------------------------------------
# distributions

def _bound_support(gamma, cfg, tolerant, what):
    if 0 < gamma <= cfg.bound_cap:
        return True
    if not tolerant or math.isnan(gamma):
        raise DomainError(f"{what}: gamma={gamma} outside (0, {cfg.bound_cap:.6g}]")
    return False


def e2e_cdf_bound(gamma: float, cfg: RelayConfig, tolerant: bool = False) -> float:
    """CDF of min(gamma1, gamma2): F1 + F2 - F1 F2."""
    if gamma <= 0 and tolerant and not math.isnan(gamma):
        return 0.0
    if not _bound_support(gamma, cfg, tolerant, "e2e_cdf_bound"):
        return 1.0
    f1 = snr_cdf(gamma, cfg.hop1, tolerant=True)
    f2 = snr_cdf(gamma, cfg.hop2, tolerant=True)
    return f1 + f2 - f1 * f2


def e2e_pdf_bound(gamma: float, cfg: RelayConfig, tolerant: bool = False) -> float:
    """Density of min(gamma1, gamma2): f1 + f2 - f1 F2 - f2 F1."""
    if not _bound_support(gamma, cfg, tolerant, "e2e_pdf_bound"):
        return 0.0
    p1 = snr_pdf(gamma, cfg.hop1, tolerant=True)
    p2 = snr_pdf(gamma, cfg.hop2, tolerant=True)
    c1 = snr_cdf(gamma, cfg.hop1, tolerant=True)
    c2 = snr_cdf(gamma, cfg.hop2, tolerant=True)
    return p1 + p2 - p1 * c2 - p2 * c1


def harmonic_t_limits(gamma: float, cfg: RelayConfig) -> tuple[float, float]:
    """t range where both gamma/t and gamma/(1-t) lie inside their hop supports."""
    return gamma / cfg.hop1.cap, 1.0 - gamma / cfg.hop2.cap


def _harmonic_log_density(lam: float, cfg: RelayConfig, rel_tol: float) -> QuadResult:
    """Harmonic-mean density in lambda = 0.5 ln(harmonic_cap / gamma), i.e. 2 gamma f(gamma).

    With gamma_i = gamma / t_i each hop density is f_Li(l_i) / (2 gamma_i), so
    gamma f1 f2 / (t^2 (1-t)^2) dt = f_L1 f_L2 / (4 t (1-t)) dt, free of any
    1/gamma scale. The t range is split where both hops sit at the same
    log-fade and each half is integrated in its own hop's log-fade:
    t = t_min e^{2 l1} on the left, 1 - t = (gamma/cap2) e^{2 l2} on the right.
    """
    h1, h2 = cfg.hop1, cfg.hop2
    hc = cfg.harmonic_cap
    base1 = lam + 0.5 * math.log(h1.cap / hc)     # hop-1 log-fade at t = 1
    base2 = lam + 0.5 * math.log(h2.cap / hc)

    def left(l1):
        t = math.exp(2.0 * (l1 - base1))
        return log_fade_pdf(l1, h1) * log_fade_pdf(base2 + 0.5 * math.log1p(-t), h2) / (1.0 - t)

    def right(l2):
        omt = math.exp(2.0 * (l2 - base2))
        return log_fade_pdf(base1 + 0.5 * math.log1p(-omt), h1) * log_fade_pdf(l2, h2) / (1.0 - omt)

    # the t-endpoint singularities become l^k zeros here; only non-integer k
    # leaves an algebraic endpoint worth clustering nodes for
    flag = "none" if float(h1.k).is_integer() and float(h2.k).is_integer() else "both"

    def piece(g):
        return integrate(g, QuadSpec(0.0, lam, rel_tol=rel_tol, abs_tol=INNER_ABS_TOL,
                                     endpoint_singularity=flag, label="e2e_pdf_exact"))

    if cfg.symmetric:
        a = piece(left)
        return QuadResult(2.0 * a.value, 2.0 * a.err_estimate)
    a, b = piece(left), piece(right)
    return QuadResult(a.value + b.value, a.err_estimate + b.err_estimate)


def e2e_pdf_exact(gamma: float, cfg: RelayConfig, tolerant: bool = False,
                  rel_tol: float = INNER_REL_TOL, full_output: bool = False):
    """Density of the harmonic-mean SNR gamma1 gamma2 / (gamma1 + gamma2).

    gamma * int f1(gamma/t) f2(gamma/(1-t)) / (t^2 (1-t)^2) dt over
    t in (gamma/cap1, 1 - gamma/cap2), which is empty beyond the harmonic cap.
    """
    t_min, t_max = harmonic_t_limits(gamma, cfg)
    if not (gamma > 0 and t_min < t_max):
        if tolerant and not math.isnan(gamma):
            return QuadResult(0.0, 0.0) if full_output else 0.0
        raise DomainError(
            f"e2e_pdf_exact: gamma={gamma} outside (0, {cfg.harmonic_cap:.6g}) (t_min >= t_max)")
    res = _harmonic_log_density(0.5 * math.log(cfg.harmonic_cap / gamma), cfg, rel_tol)
    out = QuadResult(res.value / (2.0 * gamma), res.err_estimate / (2.0 * gamma))
    return out if full_output else out.value


def _bound_log_density(lam: float, cfg: RelayConfig) -> float:
    """Density of lambda = 0.5 ln(bound_cap / min): f_L1 P(L2 > l2) + f_L2 P(L1 > l1)."""
    h1, h2 = cfg.hop1, cfg.hop2
    l1 = lam + 0.5 * math.log(h1.cap / cfg.bound_cap)
    l2 = lam + 0.5 * math.log(h2.cap / cfg.bound_cap)
    return (log_fade_pdf(l1, h1) * (1.0 - log_fade_sf(l2, h2))
            + log_fade_pdf(l2, h2) * (1.0 - log_fade_sf(l1, h1)))


# --------------------------------------------------------------------------
# expectations over the end-to-end SNR, integrated in lambda = 0.5 ln(cap/gamma)

def _expect(log_density, weight, cap, lam_lo, rel_tol, label):
    def integrand(lam):
        return weight(cap * math.exp(-2.0 * lam)) * log_density(lam)

    return integrate(integrand, QuadSpec(lam_lo, math.inf, rel_tol=rel_tol, abs_tol=1e-15,
                                         label=label))


def _density(cfg: RelayConfig, mode: str):
    if mode == "bound":
        return (lambda lam: _bound_log_density(lam, cfg)), cfg.bound_cap
    if mode == "harmonic":
        return (lambda lam: _harmonic_log_density(lam, cfg, INNER_REL_TOL).value
                if lam > 0 else 0.0), cfg.harmonic_cap
    raise DomainError(f"mode must be 'bound' or 'harmonic', got {mode!r}")


def outage_exact(gamma_th: float, cfg: RelayConfig, mode: str = "bound",
                 rel_tol: float = OUTER_REL_TOL, full_output: bool = False):
    """Outage as the integral of the end-to-end density from 0 to gamma_th."""
    density, cap = _density(cfg, mode)
    if not gamma_th > 0:
        raise DomainError(f"gamma_th must be positive, got {gamma_th}")
    if gamma_th >= cap:
        res = QuadResult(1.0, 0.0)
    else:
        lam_th = 0.5 * math.log(cap / gamma_th)
        res = _expect(density, lambda g: 1.0, cap, lam_th, rel_tol, f"outage[{mode}]")
        res = QuadResult(min(1.0, max(0.0, res.value)), res.err_estimate)
    return res if full_output else res.value


def outage_harmonic_conditional(gamma_th: float, cfg: RelayConfig,
                                rel_tol: float = OUTER_REL_TOL) -> float:
    """Harmonic-mean outage conditioned on hop 1 (a one-dimensional cross-check).

    P(1/g1 + 1/g2 > 1/g_th) = F1(g_th) + int_{g1 > g_th} f1(g1) F2(g_th g1 / (g1 - g_th)).
    """
    h1, h2 = cfg.hop1, cfg.hop2
    if gamma_th >= cfg.harmonic_cap:
        return 1.0
    base = snr_cdf(gamma_th, h1, tolerant=True)
    if gamma_th >= h1.cap:
        return base
    l_th = log_fade(gamma_th, h1)

    def integrand(l1):
        g1 = h1.cap * math.exp(-2.0 * l1)
        if g1 <= gamma_th:
            return 0.0
        return log_fade_pdf(l1, h1) * snr_cdf(gamma_th * g1 / (g1 - gamma_th), h2, tolerant=True)

    # kink where the hop-2 threshold reaches its cap
    breaks = [0.0]
    if gamma_th < h2.cap:
        g1_kink = h2.cap * gamma_th / (h2.cap - gamma_th)
        if g1_kink < h1.cap:
            breaks.append(log_fade(g1_kink, h1))
    breaks.append(l_th)
    total = base
    for lo, hi in zip(breaks, breaks[1:]):
        if hi > lo:
            total += integrate(integrand, QuadSpec(lo, hi, rel_tol=rel_tol, abs_tol=1e-15,
                                                   endpoint_singularity="both",
                                                   label="outage_harmonic_conditional")).value
    return min(1.0, total)


def avg_snr_exact(cfg: RelayConfig, mode: str = "harmonic", rel_tol: float = OUTER_REL_TOL,
                  full_output: bool = False):
    """Mean end-to-end SNR by quadrature ("bound": min; "harmonic": half harmonic mean)."""
    density, cap = _density(cfg, mode)
    res = _expect(density, lambda g: g, cap, 0.0, rel_tol, f"avg_snr[{mode}]")
    return res if full_output else res.value


def ergodic_rate_exact(cfg: RelayConfig, mode: str = "harmonic", rel_tol: float = OUTER_REL_TOL,
                       full_output: bool = False):
    """E[log2(1 + gamma)] by quadrature, bits per channel use."""
    density, cap = _density(cfg, mode)
    res = _expect(density, lambda g: math.log1p(g) / LN2, cap, 0.0, rel_tol, f"rate[{mode}]")
    res = QuadResult(res.value * cfg.rate_factor, res.err_estimate * cfg.rate_factor)
    return res if full_output else res.value


# --------------------------------------------------------------------------
# moment identities behind the average-SNR closed forms

def log_power_moment(p: float, n: float) -> float:
    """int_1^inf (ln u)^p u^-n du = Gamma(p + 1) / (n - 1)^(p + 1)."""
    if not (p > -1 and n > 1):
        raise DomainError(f"log_power_moment needs p > -1 and n > 1, got p={p}, n={n}")
    return gamma_fn(p + 1.0) / (n - 1.0) ** (p + 1.0)


def gamma_tail_moment(k: float, n: float) -> float:
    """int_1^inf u^-n Gamma(k, n ln u) du = (1 - n^k (2n - 1)^-k) Gamma(k) / (n - 1)."""
    if not (k > 0 and n > 1):
        raise DomainError(f"gamma_tail_moment needs k > 0 and n > 1, got k={k}, n={n}")
    return (1.0 - (n / (2.0 * n - 1.0)) ** k) * gamma_fn(k) / (n - 1.0)


# --------------------------------------------------------------------------
# closed forms (midpoint relay)

def outage_single_hop_closed(gamma_th: float, link: LinkParams) -> float:
    """Per-hop outage with Gamma(k, m ln u) ~ u^-m (m ln u)^(k-1) (four terms)."""
    _guard_m(link, "outage_closed_form")
    _real_power_base(link, "outage_closed_form")
    if not 0.0 < gamma_th < link.cap:
        raise DomainError(f"gamma_th={gamma_th} outside (0, {link.cap:.6g})")
    k, z, r2, m = link.k, link.z, link.rho2, link.m
    gk = gamma_fn(k)
    snr_ratio = link.cap / gamma_th              # A0^2 gamma0 / gamma_th
    log_u = math.log(link.A0 * math.sqrt(link.gamma0) / math.sqrt(gamma_th))
    fog_decay = snr_ratio ** (-z / 2.0)
    t1 = (z / m) ** k * snr_ratio ** (-r2 / 2.0)
    t2 = -z ** k / (gk * m) * log_u ** (k - 1.0) * fog_decay
    t3 = (z * log_u) ** (k - 1.0) * fog_decay / gk
    t4 = (k - 1.0) / gk * (z * log_u) ** (k - 2.0) * fog_decay
    return t1 + t2 + t3 + t4


def dual_hop_outage(p_hop: float) -> float:
    """2P' - P'^2 for two independent hops of outage P'.

    P' is clamped to [0, 1] first: the approximated hop outage can overshoot 1
    at low SNR, where 2P' - P'^2 would turn back down.
    """
    p = min(1.0, max(0.0, p_hop))
    return min(1.0, max(0.0, 2.0 * p - p * p))


def outage_closed_form(gamma_th: float, cfg: RelayConfig) -> float:
    """Midpoint-relay outage 2P' - P'^2 with P' the approximated hop outage."""
    link = _require_symmetric(cfg, "outage_closed_form")
    return dual_hop_outage(outage_single_hop_closed(gamma_th, link))


def diversity_order(fog, d_r: float) -> float:
    """Outage exponent in A0^2 gamma0 at high SNR: 2.1715 / (beta d_r) = z_r / 2."""
    if not d_r > 0:
        raise DomainError(f"d_r must be positive, got {d_r}")
    return 2.1715 / (fog.beta * d_r)


def avg_snr_closed(cfg: RelayConfig) -> float:
    """Average SNR approximation for general k, transcribed as printed."""
    link = _require_symmetric(cfg, "avg_snr_closed")
    _guard_m(link, "avg_snr_closed")
    _real_power_base(link, "avg_snr_closed")
    k, z, r2, m = link.k, link.z, link.rho2, link.m
    gk = gamma_fn(k)
    g_half = gamma_fn(k - 0.5)
    inner = (
        (1.0 - 2.0 * ((2.0 + m + 2.0 * r2) / m) ** (-k)) * z ** k / (1.0 + r2)
        + m ** k * (
            -2.0 * z ** (k - 1.0) * (2.0 + r2 + z) ** (-k)
            + (-2.0 - 3.0 * r2
               + 2.0 * (1.0 + r2) * ((2.0 + m + r2) / m) ** (-k)
               + 2.0 * (1.0 + r2) * ((2.0 + r2 + z) / z) ** (1.0 - k))
            / (2.0 + 3.0 * r2 + r2 * r2)
        )
    )
    tail = (z ** (k - 2.0) * (1.0 + z) ** (1.0 - 2.0 * k) * (m + 2.0 * m * z - z * z) * g_half
            / (m * m * math.sqrt(math.pi) * gk))
    bracket = m ** (-2.0 * k) * inner + tail
    return link.A0 ** 2 * r2 * z ** k * link.gamma0 * bracket


def ergodic_rate_closed(cfg: RelayConfig) -> float:
    """Ergodic-rate approximation for general k, transcribed as printed.

    Natural logarithms throughout, divided by log 2 at the end; z and z_r are
    the same per-hop constant for the midpoint relay.
    """
    link = _require_symmetric(cfg, "ergodic_rate_closed")
    _guard_m(link, "ergodic_rate_closed")
    _real_power_base(link, "ergodic_rate_closed")
    k, z, r2, m = link.k, link.z, link.rho2, link.m
    r4 = r2 * r2
    la = math.log(link.A0)
    lg = math.log(link.gamma0)
    gk = gamma_fn(k)
    g_half = gamma_fn(k - 0.5)
    zr = z

    big = (
        2.0 * (-1.0 + r2 * la) / r4
        + 2.0 * z ** (k - 1.0) * (r2 + z) ** (-1.0 - k) * (k - (r2 + z) * la)
        - 2.0 / r4 * (
            -1.0 + r2 * la
            + ((m + r2) / m) ** (-1.0 - k) * (m + (1.0 + k) * r2 - r2 * (m + r2) * la) / m
        )
        + zr ** k / (m ** k * r4) * (
            -1.0 + 2.0 * r2 * la
            + (1.0 + 2.0 * r2 / m) ** (-k) * (m + 2.0 * (1.0 + k) * r2 - 2.0 * r2 * (m + 2.0 * r2) * la)
            / (m + 2.0 * r2)
        )
        + 2.0 / r4 * (
            1.0 - r2 * la
            + ((z + r2) / z) ** (-k) * (-z - k * r2 + r2 * (z + r2) * la) / z
        )
        + lg / r2
        + (-1.0 + ((m + r2) / m) ** (-k)) * lg / r2
        + (1.0 - (1.0 + 2.0 * r2 / m) ** (-k)) * zr ** k * lg / (m ** k * r2)
        - zr ** (k - 1.0) * (r2 + zr) ** (-k) * lg
        - (1.0 - ((z + r2) / z) ** (1.0 - k)) * lg / r2
    )
    value = (
        2.0 * m ** (-k) * r2 * zr ** k * big
        - m ** (-2.0 * k) * zr ** (2.0 * k) * (-1.0 + r2 * (2.0 * la + lg)) / (r2 * gk)
        - r2 * g_half * ((-3.0 + 4.0 * k) * m + zr - 2.0 * k * zr + zr * (-2.0 * m + zr) * (2.0 * la + lg))
        / (m * m * math.sqrt(math.pi) * zr * gk)
    ) / LN2
    return value * cfg.rate_factor


def _require_k2(link: LinkParams, what: str) -> None:
    if link.k != 2:
        raise DomainError(f"{what} holds only for k = 2, got k={link.k}")


def avg_snr_k2(cfg: RelayConfig) -> float:
    """Exact mean of min(gamma1, gamma2) for k = 2 (midpoint relay)."""
    link = _require_symmetric(cfg, "avg_snr_k2")
    _require_k2(link, "avg_snr_k2")
    z, r2 = link.z, link.rho2
    r4 = r2 * r2
    first = 1.0 / ((2.0 + r2) * (2.0 + z) ** 2)
    second = ((2.0 * (1.0 + z) ** 3 + r4 * (1.0 + 2.0 * z) + r2 * (3.0 + 4.0 * z * (2.0 + z)))
              / (4.0 * (1.0 + r2) * (1.0 + z) ** 3 * (2.0 + r2 + z) ** 2))
    return 2.0 * link.A0 ** 2 * r2 * z * z * link.gamma0 * (first - second)


ROUNDED_LOG_CONSTANT = 0.36
EXACT_LOG_CONSTANT = 1.0 / (4.0 * LN2)


def ergodic_rate_k2(cfg: RelayConfig, log_constant: float = ROUNDED_LOG_CONSTANT) -> float:
    """Lower bound on the k = 2 ergodic rate via log(1 + gamma) >= log(gamma).

    ``log_constant`` is printed as 0.36; with the exact 1/(4 ln 2) the
    expression equals E[log2 min(gamma1, gamma2)], while the rounded value
    overshoots it by a few hundredths of a bit, enough to break the bound at
    very high SNR.
    """
    link = _require_symmetric(cfg, "ergodic_rate_k2")
    _require_k2(link, "ergodic_rate_k2")
    z, r2 = link.z, link.rho2
    la = math.log(link.A0)
    lg = math.log(link.gamma0)
    lead = (r2 * z * (2.0 * la + lg) - 2.0 * (2.0 * r2 + z)) / (r2 * z * LN2)
    corr = log_constant * (r2 * (r2 + z) ** -2 - 2.0 / r2 - 5.0 / z - 3.0 / (r2 + z)
                           + 4.0 * la + 2.0 * lg)
    return 2.0 * (lead - corr) * cfg.rate_factor


# --------------------------------------------------------------------------
# direct link

def direct_avg_snr_closed(link: LinkParams) -> float:
    """Mean single-hop SNR A0^2 gamma0 (z/(z+2))^k rho^2/(rho^2+2).

    For k = 2 this is z^2 A0^2 rho^2 gamma0 / ((2+rho^2)(2+z)^2).
    """
    z, r2 = link.z, link.rho2
    return link.cap * (z / (z + 2.0)) ** link.k * r2 / (r2 + 2.0)


def direct_rate_lower(link: LinkParams) -> float:
    """E[log2 gamma] = (ln(A0^2 gamma0) - 2 (k/z + 1/rho^2)) / ln 2."""
    return (math.log(link.cap) - 2.0 * (link.k / link.z + 1.0 / link.rho2)) / LN2


def _single_expect(link, weight, rel_tol, label):
    def integrand(l):
        g = link.cap * math.exp(-2.0 * l)
        return weight(g) * log_fade_pdf(l, link)

    return integrate(integrand, QuadSpec(0.0, math.inf, rel_tol=rel_tol, abs_tol=1e-15, label=label))


def direct_avg_snr_exact(link: LinkParams, rel_tol: float = OUTER_REL_TOL) -> QuadResult:
    return _single_expect(link, lambda g: g, rel_tol, "direct avg_snr")


def direct_rate_exact(link: LinkParams, rel_tol: float = OUTER_REL_TOL) -> QuadResult:
    return _single_expect(link, lambda g: math.log1p(g) / LN2, rel_tol, "direct rate")


def direct_outage_exact(gamma_th: float, link: LinkParams, rel_tol: float = OUTER_REL_TOL) -> QuadResult:
    if gamma_th >= link.cap:
        return QuadResult(1.0, 0.0)
    l_th = log_fade(gamma_th, link)
    return integrate(lambda l: log_fade_pdf(l, link),
                     QuadSpec(l_th, math.inf, rel_tol=rel_tol, abs_tol=1e-15, label="direct outage"))


def direct_metrics(link: LinkParams, gamma_th: float, method: str = "closed_form") -> MetricReport:
    """Baseline without relaying."""
    notes = []
    if method == "closed_form":
        if gamma_th >= link.cap:
            notes.append("gamma_th at or above the support cap A0^2 gamma0: outage is 1")
        outage = snr_cdf(gamma_th, link, tolerant=True)
        rate = direct_rate_lower(link)
        report = MetricReport(outage, direct_avg_snr_closed(link), rate, method,
                              notes=notes, bound_invalid=rate < 0)
        report.notes.append("rate is the E[log2 gamma] lower bound")
        return report
    if method == "quadrature":
        out = direct_outage_exact(gamma_th, link)
        avg = direct_avg_snr_exact(link)
        rate = direct_rate_exact(link)
        if gamma_th >= link.cap:
            notes.append("gamma_th at or above the support cap A0^2 gamma0: outage is 1")
        return MetricReport(min(1.0, out.value), avg.value, rate.value, method,
                            uncertainty={"outage": out.err_estimate, "avg_snr": avg.err_estimate,
                                         "ergodic_rate": rate.err_estimate},
                            notes=notes)
    raise DomainError(f"direct_metrics: unsupported method {method!r}")


def relay_metrics(cfg: RelayConfig, gamma_th: float, method: str = "closed_form") -> MetricReport:
    """Outage, average SNR and ergodic rate of the relayed link.

    ``closed_form``: outage is the min-bound CDF built from the closed-form hop
    CDFs (the incomplete-Gamma approximation goes to ``extras['outage_approx']``
    for the midpoint relay); average SNR and rate use the midpoint formulas
    (exact k = 2 average SNR and its rate bound when k = 2). Formulas that hit
    the |m| guard are replaced by min-bound quadrature with a note.
    ``quadrature`` integrates the harmonic-mean density.
    """
    notes = []
    if method == "quadrature":
        out = outage_exact(gamma_th, cfg, "harmonic", full_output=True)
        avg = avg_snr_exact(cfg, "harmonic", full_output=True)
        rate = ergodic_rate_exact(cfg, "harmonic", full_output=True)
        if gamma_th >= cfg.harmonic_cap:
            notes.append("gamma_th at or above the end-to-end support cap: outage is 1")
        return MetricReport(out.value, avg.value, rate.value, method,
                            uncertainty={"outage": out.err_estimate, "avg_snr": avg.err_estimate,
                                         "ergodic_rate": rate.err_estimate},
                            notes=["harmonic-mean end-to-end SNR"] + notes)
    if method != "closed_form":
        raise DomainError(f"relay_metrics: unsupported method {method!r}")

    extras = {}
    if gamma_th >= cfg.bound_cap:
        outage = 1.0
        notes.append("gamma_th at or above the support cap: outage is 1")
    else:
        outage = e2e_cdf_bound(gamma_th, cfg)
        notes.append("outage from the min-bound CDF of the closed-form hop CDFs")
        if cfg.symmetric:
            try:
                extras["outage_approx"] = outage_closed_form(gamma_th, cfg)
            except (SingularParameter, DomainError) as exc:
                notes.append(f"no incomplete-Gamma outage approximation ({exc})")

    avg = rate = None
    bound_invalid = False
    if cfg.symmetric:
        try:
            if cfg.hop1.k == 2:
                avg, rate = avg_snr_k2(cfg), ergodic_rate_k2(cfg)
                notes.append("k = 2: exact min-bound average SNR, rate lower bound")
            else:
                avg, rate = avg_snr_closed(cfg), ergodic_rate_closed(cfg)
        except (SingularParameter, DomainError) as exc:
            avg = avg_snr_exact(cfg, "bound")
            rate = ergodic_rate_exact(cfg, "bound")
            notes.append(f"average SNR and rate from min-bound quadrature ({exc})")
        bound_invalid = rate < 0
        if avg < 0:
            notes.append(f"closed-form average SNR is negative ({avg:.6g}); not reported")
            avg = None
    else:
        notes.append("asymmetric hops: no closed-form average SNR or rate")
    return MetricReport(outage, avg, rate, method, notes=notes, bound_invalid=bound_invalid,
                        extras=extras)
