"""Real-valued special functions: Gamma, incomplete Gamma, generalized
exponential integral and erf.

Everything here is scalar, pure and deterministic. The complete Gamma function
and erf are thin wrappers over :mod:`math`; the incomplete Gamma family is
implemented directly because the fading distributions need the integer-shape
continuation to negative arguments, which no standard library provides.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NonConvergence

EULER_GAMMA = 0.57721566490153286061
_EPS = 2.220446049250313e-16
_TINY = 1e-300


@dataclass(frozen=True)
class EvalOptions:
    rel_tol: float = 1e-15
    max_terms: int = 1000

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-3):
            raise DomainError(f"rel_tol must lie in (0, 1e-3], got {self.rel_tol}")
        if self.max_terms < 50:
            raise DomainError(f"max_terms must be >= 50, got {self.max_terms}")


DEFAULT_OPTIONS = EvalOptions()


def _is_pos_int(a: float) -> bool:
    return a >= 1 and float(a).is_integer()


def gamma_fn(x: float) -> float:
    """Gamma function for x > 0."""
    if not x > 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


def log_gamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def erf(x: float) -> float:
    return math.erf(x)


def _finite_series(n: int, x: float) -> float:
    # (n-1)! e^{-x} sum_{j<n} x^j / j!
    term = 1.0
    total = 1.0
    for j in range(1, n):
        term *= x / j
        total += term
    return math.factorial(n - 1) * math.exp(-x) * total


def _lower_series_sum(a: float, x: float, opts: EvalOptions) -> float:
    """sum_n x^n / (a (a+1) ... (a+n)); gamma(a, x) = x^a e^{-x} times this."""
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(opts.max_terms):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * opts.rel_tol:
            return total
    raise NonConvergence(f"lower incomplete gamma series: a={a}, x={x}")


def _upper_cf(a: float, x: float, opts: EvalOptions) -> float:
    """Continued fraction h with Gamma(a, x) = e^{-x} x^a h (modified Lentz)."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b if b != 0.0 else 1.0 / _TINY
    h = d
    for i in range(1, opts.max_terms + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < opts.rel_tol:
            return h
    raise NonConvergence(f"incomplete gamma continued fraction: a={a}, x={x}")


def _e1_series(x: float, opts: EvalOptions) -> float:
    # E1(x) = -gamma - ln x - sum_{n>=1} (-x)^n / (n n!)
    total = 0.0
    fact = 1.0
    for n in range(1, opts.max_terms + 1):
        fact *= -x / n
        term = fact / n
        total += term
        if abs(term) < opts.rel_tol * max(abs(total), 1e-300):
            return -EULER_GAMMA - math.log(x) - total
    raise NonConvergence(f"E1 series: x={x}")


_SMALL_A = 0.05
# zeta(2..13) for the Taylor series of ln Gamma(1 + a)
_ZETA = (1.6449340668482264, 1.2020569031595943, 1.0823232337111382, 1.0369277551433699,
         1.0173430619844491, 1.0083492773819228, 1.0040773561979443, 1.0020083928260822,
         1.0009945751278181, 1.0004941886041195, 1.0002460865533080, 1.0001227133475785)


def _gamma1p_minus1_over_a(a: float) -> float:
    """(Gamma(1 + a) - 1) / a for |a| < 0.05 without cancellation."""
    log_g = -EULER_GAMMA * a
    power = -a
    for j, zeta in enumerate(_ZETA, start=2):
        power *= -a
        log_g += zeta * power / j
    return math.expm1(log_g) / a


def _upper_gamma_small_a(a: float, x: float, opts: EvalOptions) -> float:
    """Gamma(a, x) for 0 < |a| < 0.05 and 0 < x <~ 1.

    Gamma(a) - x^a / a is split as (Gamma(1+a) - 1)/a + (1 - x^a)/a, both
    evaluated without the 1/a cancellation; the rest of the lower series is
    x^a sum_{n>=1} (-x)^n / (n! (a + n)).
    """
    la = math.log(x)
    head = _gamma1p_minus1_over_a(a) - math.expm1(a * la) / a
    term = 1.0
    total = 0.0
    for n in range(1, opts.max_terms + 1):
        term *= -x / n
        inc = term / (a + n)
        total += inc
        if abs(inc) < opts.rel_tol * max(abs(total), 1e-300):
            return head - math.exp(a * la) * total
    raise NonConvergence(f"small-shape incomplete gamma series: a={a}, x={x}")


def upper_incomplete_gamma(a: float, x: float, opts: EvalOptions = DEFAULT_OPTIONS) -> float:
    """Upper incomplete Gamma function Gamma(a, x) = int_x^inf s^(a-1) e^(-s) ds.

    Integer ``a`` uses the finite series (a-1)! e^{-x} sum_{n<a} x^n/n!, which
    also serves as the continuation to x < 0. Real ``a`` needs x >= 0; a <= 0
    additionally needs x > 0.
    """
    if x == math.inf:
        return 0.0
    if _is_pos_int(a) and a <= 170:
        return _finite_series(int(a), x)
    if x < 0:
        raise DomainError(
            f"upper_incomplete_gamma: negative x={x} needs a positive integer a, got a={a}")
    if x == 0:
        if a > 0:
            return gamma_fn(a)
        raise DomainError(f"Gamma({a}, 0) diverges")
    if 0.0 < abs(a) < _SMALL_A and x < 1.0 + _SMALL_A:
        return _upper_gamma_small_a(a, x, opts)
    if a > 0:
        if x < a + 1.0:
            lower = math.exp(a * math.log(x) - x) * _lower_series_sum(a, x, opts)
            return gamma_fn(a) - lower
        return math.exp(a * math.log(x) - x) * _upper_cf(a, x, opts)
    # a <= 0
    if x >= 1.0:
        return math.exp(a * math.log(x) - x) * _upper_cf(a, x, opts)
    # recur downward: Gamma(s-1, x) = (Gamma(s, x) - x^(s-1) e^-x) / (s-1)
    nearest = round(a)
    if a == nearest:
        s = 0.0
        value = _e1_series(x, opts)
    elif abs(a - nearest) < _SMALL_A:
        # start next to the integer so no recurrence step divides by a tiny s - 1
        s = a - nearest
        value = _upper_gamma_small_a(s, x, opts)
    else:
        s = a + math.ceil(-a)  # in (0, 1), away from both ends
        value = upper_incomplete_gamma(s, x, opts)
    while s > a + 0.5:
        value = (value - math.exp((s - 1.0) * math.log(x) - x)) / (s - 1.0)
        s -= 1.0
    return value


def exp_integral_en(a: float, r: float, opts: EvalOptions = DEFAULT_OPTIONS) -> float:
    """Generalized exponential integral E_a(r) = int_1^inf e^{-r t} t^{-a} dt."""
    if r < 0:
        raise DomainError(f"exp_integral_en diverges for r={r} < 0")
    if r == 0:
        if a > 1:
            return 1.0 / (a - 1.0)
        raise DomainError(f"exp_integral_en({a}, 0) diverges for a <= 1")
    if r == math.inf:
        return 0.0
    s = 1.0 - a
    if r >= max(1.0, s + 1.0):
        # r^{a-1} Gamma(1-a, r) = e^{-r} * h, prefactor cancels exactly
        return math.exp(-r) * _upper_cf(s, r, opts)
    return math.exp((a - 1.0) * math.log(r)) * upper_incomplete_gamma(s, r, opts)


def _tilted_moment(k: float, x: float, opts: EvalOptions) -> float:
    """I_k(x) = int_0^1 t^(k-1) e^{-x (1-t)} dt for x >= 0 (bounded by 1/k)."""
    if x == 0:
        return 1.0 / k
    if float(k).is_integer() and x >= k:
        value = -math.expm1(-x) / x
        for j in range(2, int(k) + 1):
            value = (1.0 - (j - 1) * value) / x
        return value
    if x > 600.0:
        # asymptotic sum_j (1-k)_j / x^(j+1); remainder is O(e^-x)
        term = 1.0 / x
        total = term
        for j in range(1, opts.max_terms):
            nxt = term * (j - k) / x
            if abs(nxt) >= abs(term):
                break
            term = nxt
            total += term
            if abs(term) < opts.rel_tol * abs(total):
                break
        return total
    # e^{-x} sum_n x^n / (n! (k+n)), positive terms
    term = 1.0
    total = 1.0 / k
    n = 0
    limit = int(x + 12.0 * math.sqrt(x) + 60.0)
    while n < max(limit, 50):
        n += 1
        term *= x / n
        inc = term / (k + n)
        total += inc
        if n > x and inc < opts.rel_tol * total:
            break
    return math.exp(-x) * total


def _lower_gamma_scaled_k2(m: float, l: float, scale: float) -> float:
    # l^2 int_0^1 t e^{-x t} dt; the closed form is cancellation-free once |x| > 0.5
    x = m * l
    if abs(x) < 0.5:
        term = 1.0
        total = 0.5
        for n in range(1, 20):
            term *= -x / n
            total += term / (n + 2)
        return l * l * total * math.exp(-scale * l)
    return (math.exp(-scale * l) - math.exp(-(scale + m) * l) * (1.0 + x)) / (m * m)


def lower_gamma_scaled(k: float, m: float, l: float, scale: float = 0.0,
                       opts: EvalOptions = DEFAULT_OPTIONS) -> float:
    """e^{-scale*l} * int_0^l y^(k-1) e^{-m y} dy for k > 0, l >= 0, any real m.

    For m != 0 this equals e^{-scale*l} [Gamma(k) - Gamma(k, m l)] / m^k, the
    bracket of the single-hop SNR density, evaluated without cancellation and
    without complex intermediates when m < 0.
    """
    if not k > 0:
        raise DomainError(f"lower_gamma_scaled requires k > 0, got {k}")
    if l < 0:
        raise DomainError(f"lower_gamma_scaled requires l >= 0, got {l}")
    if l == 0:
        return 0.0
    x = m * l
    if k == 2.0:
        return _lower_gamma_scaled_k2(m, l, scale)
    log_lk = k * math.log(l)
    if x < 0:
        return math.exp(log_lk - x - scale * l) * _tilted_moment(k, -x, opts)
    if x == 0:
        return math.exp(log_lk - scale * l) / k
    if x < k + 1.0:
        return math.exp(log_lk - x - scale * l) * _lower_series_sum(k, x, opts)
    lower = gamma_fn(k) - upper_incomplete_gamma(k, x, opts)
    return lower * math.exp(-k * math.log(m) - scale * l)
