"""Closed-form performance metrics of k-th best feasible antenna selection.

Notation used in comments: P_M / P_S primary and secondary transmit power,
N0 noise power, T interference threshold, lam_ps / lam_ss / lam_sp the
exponential rates of |h0|^2, |h_i|^2, |g_i|^2, and xi_k the SINR when the
k-th strongest antenna (k = 1 is the strongest) transmits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .model import SystemParams
from .quadrature import integrate
from .specfun import (
    binomial,
    exp_integral_e1_scaled,
    harmonic,
    hyp2f1_terminating,
    hyp3f2_terminating,
    upper_incomplete_gamma_nonpos_scaled,
)

__all__ = [
    "RankMetricTable",
    "UndefinedMetricError",
    "amount_of_fading",
    "ergodic_capacity",
    "ergodic_capacity_k",
    "halt_prob",
    "outage_probability",
    "rank_table",
    "selection_prob",
    "single_antenna_pa_outage",
    "sinr_cdf",
    "sinr_mean",
    "sinr_moment",
    "sinr_pdf",
    "sinr_pdf_hypergeometric",
]

MAX_MOMENT_ORDER = 8
MAX_EXACT_WEIGHT_N = 20
# Relative width of the band around P_M lam_ss m = P_S lam_ps where the
# capacity term is integrated numerically. The closed form's difference
# quotient loses about 1e-16 / gap digits, so the band is kept wide.
CAPACITY_SINGULAR_RTOL = 1e-3

LN2 = math.log(2.0)


class UndefinedMetricError(ArithmeticError):
    """The metric has a zero denominator for these parameters."""


@dataclass(frozen=True)
class RankMetricTable:
    """Per-rank values for k = 1..N plus the halt probability."""

    values: tuple[float, ...]
    halt: float

    def __getitem__(self, k: int) -> float:
        if not 1 <= k <= len(self.values):
            raise IndexError(f"rank {k} outside 1..{len(self.values)}")
        return self.values[k - 1]

    def total(self) -> float:
        return math.fsum(self.values) + self.halt


def _check_rank(params: SystemParams, k: int) -> None:
    if not 1 <= k <= params.n_antennas:
        raise ValueError(f"rank k={k} outside 1..{params.n_antennas}")


def _check_x(x: float) -> None:
    if not x >= 0:
        raise ValueError(f"SINR argument must be >= 0, got {x!r}")


def _feasibility_exponent(params: SystemParams) -> float:
    # lam_sp T / P_S; -log of the probability that one antenna is infeasible
    return params.rate_sp * params.interference_threshold / params.st_power


def selection_prob(params: SystemParams, k: int) -> float:
    """Probability that the k-th strongest antenna is the one selected."""
    _check_rank(params, k)
    s = _feasibility_exponent(params)
    if math.isinf(s):
        return 1.0 if k == 1 else 0.0
    return math.exp(-(k - 1) * s) * -math.expm1(-s)


def halt_prob(params: SystemParams) -> float:
    """Probability that no antenna satisfies the interference constraint."""
    return math.exp(-params.n_antennas * _feasibility_exponent(params))


def rank_table(params: SystemParams) -> RankMetricTable:
    n = params.n_antennas
    return RankMetricTable(tuple(selection_prob(params, k) for k in range(1, n + 1)),
                           halt_prob(params))


# --------------------------------------------------------------------------
# SINR density and distribution
# --------------------------------------------------------------------------

def sinr_pdf(params: SystemParams, k: int, x: float) -> float:
    """Density of xi_k at ``x`` from the binomially expanded finite sum."""
    _check_rank(params, k)
    _check_x(x)
    n = params.n_antennas
    pm, ps, n0 = params.pt_power, params.st_power, params.noise
    lps, lss = params.rate_ps, params.rate_ss
    terms = []
    for j in range(n - k + 1):
        m = k + j
        denom = ps * lps + lss * m * pm * x
        terms.append((-1) ** j * binomial(n - k, j) * math.exp(-n0 * x * lss * m / ps)
                     * (n0 / denom + ps * pm / (denom * denom)))
    return k * binomial(n, k) * lss * lps * math.fsum(terms)


def sinr_pdf_hypergeometric(params: SystemParams, k: int, x: float) -> float:
    """Density of xi_k written with terminating 2F1 / 3F2 series.

    Independent of :func:`sinr_pdf` except at ``x == 0``, where the series
    parameters are unbounded and the finite-sum form is returned.
    """
    _check_rank(params, k)
    _check_x(x)
    if x == 0:
        return sinr_pdf(params, k, 0.0)
    n = params.n_antennas
    pm, ps, n0 = params.pt_power, params.st_power, params.noise
    lps, lss = params.rate_ps, params.rate_ss
    ratio = k + lps * ps / (lss * pm * x)
    z = math.exp(-lss * n0 * x / ps)
    d = k * lss * pm * x + lps * ps
    f32 = hyp3f2_terminating(ratio, ratio, k - n, ratio + 1, ratio + 1, z)
    f21 = hyp2f1_terminating(ratio, k - n, ratio + 1, z)
    pref = k * lss * lps * math.exp(-k * lss * n0 * x / ps) / (d * d) * binomial(n, k)
    return pref * (pm * ps * f32 + n0 * d * f21)


def sinr_cdf(params: SystemParams, k: int, x: float) -> float:
    """P(xi_k <= x); zero at ``x == 0`` by continuity."""
    _check_rank(params, k)
    _check_x(x)
    if x == 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    n = params.n_antennas
    pm, ps, n0 = params.pt_power, params.st_power, params.noise
    lps, lss = params.rate_ps, params.rate_ss
    base = lps * ps / (lss * pm * x)
    z = math.exp(-lss * n0 * x / ps)
    terms = []
    for i in range(k):
        f21 = hyp2f1_terminating(i + base, i - n, i + 1 + base, z)
        terms.append(binomial(n, i) * math.exp(-n0 * i * lss * x / ps) * f21
                     / (lps * ps + lss * pm * i * x))
    return lps * ps * math.fsum(terms)


def outage_probability(params: SystemParams) -> float:
    """Halt probability plus rank-weighted P(xi_k < threshold)."""
    xt = params.outage_threshold
    tbl = rank_table(params)
    terms = [tbl.halt]
    terms += [p * sinr_cdf(params, k, xt) for k, p in enumerate(tbl.values, start=1) if p > 0]
    return math.fsum(terms)


# --------------------------------------------------------------------------
# Moments and amount of fading
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _order_stat_moment_weight(n_ant: int, k: int, n: int) -> float:
    """sum_{l=k}^{N} 1 / (l^(n+N-k) prod_{j=k..N, j!=l} (1/l - 1/j)), exactly.

    This is the complete homogeneous symmetric polynomial of degree n in
    1/k, ..., 1/N; the partial-fraction terms alternate wildly in sign so
    the sum is done in rationals.
    """
    total = Fraction(0)
    for l in range(k, n_ant + 1):
        prod = Fraction(1)
        for j in range(k, n_ant + 1):
            if j != l:
                prod *= Fraction(1, l) - Fraction(1, j)
        total += 1 / (Fraction(l) ** (n + n_ant - k) * prod)
    return float(total)


def sinr_moment(params: SystemParams, k: int, n: int) -> float:
    """n-th raw moment E[xi_k^n] for 1 <= n <= 8."""
    _check_rank(params, k)
    if not 1 <= n <= MAX_MOMENT_ORDER:
        raise ValueError(f"moment order n={n} outside 1..{MAX_MOMENT_ORDER}")
    if params.n_antennas > MAX_EXACT_WEIGHT_N:
        raise ValueError(f"moments supported for N <= {MAX_EXACT_WEIGHT_N}")
    rho = params.rate_ps * params.st_power / (params.rate_ss * params.pt_power)
    z = params.rate_ps * params.noise / params.pt_power
    weight = _order_stat_moment_weight(params.n_antennas, k, n)
    return math.factorial(n) * rho ** n * upper_incomplete_gamma_nonpos_scaled(1 - n, z) * weight


def sinr_mean(params: SystemParams, k: int) -> float:
    """E[xi_k] via E1 and harmonic numbers."""
    _check_rank(params, k)
    rho = params.rate_ps * params.st_power / (params.rate_ss * params.pt_power)
    z = params.rate_ps * params.noise / params.pt_power
    return rho * exp_integral_e1_scaled(z) * (harmonic(params.n_antennas) - harmonic(k - 1))


def amount_of_fading(params: SystemParams, n: int = 2, normalized: bool = False) -> float:
    """Higher-order amount of fading AF^(n).

    With ``normalized=False`` the weights are the raw selection
    probabilities, i.e. a halted slot counts as zero SINR. ``normalized=True``
    conditions on a transmission taking place (divides the weights by
    ``1 - halt``).
    """
    if not 2 <= n <= MAX_MOMENT_ORDER:
        raise ValueError(f"AF order n={n} outside 2..{MAX_MOMENT_ORDER}")
    tbl = rank_table(params)
    ks = [k for k, p in enumerate(tbl.values, start=1) if p > 0]
    if not ks:
        raise UndefinedMetricError("amount of fading undefined: every slot is halted")
    num = math.fsum(tbl[k] * sinr_moment(params, k, n) for k in ks)
    den = math.fsum(tbl[k] * sinr_mean(params, k) for k in ks)
    if normalized:
        tx = -math.expm1(-params.n_antennas * _feasibility_exponent(params))
        num /= tx
        den /= tx
    return num / den ** n - 1.0


# --------------------------------------------------------------------------
# Ergodic capacity
# --------------------------------------------------------------------------

def _capacity_term_quadrature(params: SystemParams, m: int) -> float:
    """lam_ss * int_0^inf ln(1+x) e^{-a x} (N0/D + P_S P_M / D^2) dx, D = P_S lam_ps + lam_ss m P_M x."""
    pm, ps, n0 = params.pt_power, params.st_power, params.noise
    lps, lss = params.rate_ps, params.rate_ss
    alpha = n0 * lss * m / ps

    def integrand(x):
        d = ps * lps + lss * m * pm * x
        return math.log1p(x) * math.exp(-alpha * x) * (n0 / d + ps * pm / (d * d))

    val, _ = integrate(integrand, 0.0, math.inf, abs_tol=1e-13, rel_tol=1e-12,
                       breakpoints=(1.0, 1.0 / alpha))
    return lss * val


def _capacity_term(params: SystemParams, m: int) -> float:
    pm, ps, n0 = params.pt_power, params.st_power, params.noise
    lps, lss = params.rate_ps, params.rate_ss
    u = pm * lss * m
    v = ps * lps
    if abs(u - v) < CAPACITY_SINGULAR_RTOL * max(u, v):
        return _capacity_term_quadrature(params, m)
    diff = exp_integral_e1_scaled(n0 * lps / pm) - exp_integral_e1_scaled(n0 * lss * m / ps)
    return ps * diff / (m * (u - v))


def ergodic_capacity_k(params: SystemParams, k: int) -> float:
    """E[log2(1 + xi_k)] in bits/s/Hz."""
    _check_rank(params, k)
    n = params.n_antennas
    terms = [(-1) ** j * binomial(n - k, j) * _capacity_term(params, k + j)
             for j in range(n - k + 1)]
    return k * binomial(n, k) * params.rate_ps / LN2 * math.fsum(terms)


def ergodic_capacity(params: SystemParams) -> float:
    """Average rate over selection outcomes; halted slots carry zero rate."""
    tbl = rank_table(params)
    return math.fsum(p * ergodic_capacity_k(params, k)
                     for k, p in enumerate(tbl.values, start=1) if p > 0)


# --------------------------------------------------------------------------
# Single-antenna power-adaptation baseline
# --------------------------------------------------------------------------

def single_antenna_pa_outage(params: SystemParams) -> float:
    """Outage of one antenna transmitting with power min(P_S, T/|g_1|^2).

    Conditioning on |g_1|^2 and |h0|^2 gives
    ``1 - E[exp(-c1 s) lam_ps / (lam_ps + c2 s)]`` with ``s = 1/power``,
    ``c1 = lam_ss xi_T N0`` and ``c2 = lam_ss xi_T P_M``; the part where
    power is capped by T integrates to an E1 term.
    """
    xt = params.outage_threshold
    t = params.interference_threshold
    if xt == 0:
        return 0.0
    if t == 0:
        return 1.0
    pm, ps, n0 = params.pt_power, params.st_power, params.noise
    lps, lss, lsp = params.rate_ps, params.rate_ss, params.rate_sp
    c1 = lss * xt * n0
    c2 = lss * xt * pm
    u0 = 1.0 / ps
    full_power = math.exp(-c1 * u0) * lps / (lps + c2 * u0)
    if math.isinf(t):
        return 1.0 - full_power
    p_full = -math.expm1(-lsp * t / ps)
    a = lsp * t + c1
    beta = lps / c2
    capped = lsp * t * beta * math.exp(-a * u0) * exp_integral_e1_scaled(a * (u0 + beta))
    return 1.0 - p_full * full_power - capped

