"""Special functions needed by the closed-form metrics.

Only the real-argument cases that actually occur are covered: terminating
hypergeometric series, E1, upper incomplete gamma at non-positive integer
order, harmonic numbers and binomial coefficients. Finite series are summed
with :func:`math.fsum`.
"""

from __future__ import annotations

import math

from .quadrature import integrate

__all__ = [
    "binomial",
    "exp_integral_e1",
    "exp_integral_e1_scaled",
    "harmonic",
    "hyp2f1_terminating",
    "hyp3f2_terminating",
    "hyp_terminating",
    "upper_incomplete_gamma_nonpos",
    "upper_incomplete_gamma_nonpos_scaled",
]

EULER_GAMMA = 0.57721566490153286060651209008240243

_EPS = 1e-16
_TINY = 1e-300
_MAX_CF_ITER = 10_000

# E1 branch switch: series at or below, continued fraction above.
E1_CROSSOVER = 1.0
# Upper incomplete gamma: recurrence from E1 for z up to here, continued fraction above.
GAMMA_RECURRENCE_ZMAX = 4.0
# Deepest order handled by the recurrence; lower orders go to quadrature.
GAMMA_RECURRENCE_MIN_ORDER = -7


def _as_nonpositive_integer(b: float, name: str = "b") -> int:
    if not math.isfinite(b) or b > 0 or not float(b).is_integer():
        raise ValueError(
            f"{name}={b!r} must be a non-positive integer for the series to terminate"
        )
    return -int(b)


def hyp_terminating(numer, denom, z: float) -> float:
    """Generalized hypergeometric series that terminates.

    ``numer`` must contain at least one non-positive integer; the first one
    found fixes the degree ``d``. Terms are built by their ratio recurrence
    so large parameters (the x -> 0 regime of the SINR density) do not
    overflow Pochhammer symbols.
    """
    numer = [float(a) for a in numer]
    denom = [float(c) for c in denom]
    d = None
    for a in numer:
        if math.isfinite(a) and a <= 0 and a.is_integer():
            d = -int(a) if d is None else min(d, -int(a))
    if d is None:
        raise ValueError(f"no non-positive integer among numerator parameters {numer}")
    for c in denom:
        if not math.isfinite(c):
            raise ValueError(f"denominator parameter {c!r} is not finite")
        for m in range(d + 1):
            if c + m == 0.0:
                raise ValueError(
                    f"denominator parameter {c!r} hits a pole at term m={m} (degree {d})"
                )
    if not math.isfinite(z):
        raise ValueError(f"argument z={z!r} is not finite")

    terms = [1.0]
    t = 1.0
    for m in range(d):
        num = 1.0
        for a in numer:
            num *= a + m
        den = float(m + 1)
        for c in denom:
            den *= c + m
        t *= num / den * z
        terms.append(t)
    return math.fsum(terms)


def hyp2f1_terminating(a: float, b: float, c: float, z: float) -> float:
    """2F1(a, b; c; z) for ``b = -d`` a non-positive integer."""
    _as_nonpositive_integer(b)
    return hyp_terminating((a, b), (c,), z)


def hyp3f2_terminating(a1: float, a2: float, b: float, c1: float, c2: float, z: float) -> float:
    """3F2(a1, a2, b; c1, c2; z) for ``b = -d`` a non-positive integer."""
    _as_nonpositive_integer(b)
    return hyp_terminating((a1, a2, b), (c1, c2), z)


def _e1_series(z: float) -> float:
    # E1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!)
    terms = [-EULER_GAMMA, -math.log(z)]
    t = 1.0
    k = 1
    while True:
        t *= -z / k
        term = -t / k
        terms.append(term)
        if abs(term) < _EPS * 1e-3:
            break
        k += 1
    return math.fsum(terms)


def _gamma_cf_scaled(a: float, z: float) -> float:
    """e^z Gamma(a, z) by the Legendre continued fraction (modified Lentz)."""
    b = z + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_CF_ITER):
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
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise ArithmeticError(f"continued fraction for Gamma({a}, {z}) did not converge")
    return z ** a * h


def exp_integral_e1(z: float) -> float:
    """Exponential integral E1(z) = int_z^inf e^{-t}/t dt for real z > 0."""
    if not z > 0:
        raise ValueError(f"E1 requires z > 0, got {z!r}")
    if z <= E1_CROSSOVER:
        return _e1_series(z)
    if z > 745.0:
        return 0.0
    return math.exp(-z) * _gamma_cf_scaled(0.0, z)


def exp_integral_e1_scaled(z: float) -> float:
    """e^z E1(z), finite for every z > 0 (no overflow/underflow)."""
    if not z > 0:
        raise ValueError(f"E1 requires z > 0, got {z!r}")
    if z <= E1_CROSSOVER:
        return math.exp(z) * _e1_series(z)
    return _gamma_cf_scaled(0.0, z)


def upper_incomplete_gamma_nonpos_scaled(order: int, z: float) -> float:
    """e^z Gamma(order, z) for integer ``order <= 0`` and ``z > 0``.

    For small ``z`` this is the downward recurrence from E1,
    ``G(a) = (G(a+1) - z^a) / a`` with ``G = e^z Gamma(., z)``.
    For ``z > GAMMA_RECURRENCE_ZMAX`` each step would cancel roughly
    ``z/|a|`` digits, so the continued fraction is used instead. Orders
    below ``GAMMA_RECURRENCE_MIN_ORDER`` fall back to quadrature.
    """
    if isinstance(order, float):
        if not order.is_integer():
            raise ValueError(f"order must be an integer, got {order!r}")
        order = int(order)
    if order > 0:
        raise ValueError(f"order must be <= 0, got {order}")
    if not z > 0:
        raise ValueError(f"incomplete gamma requires z > 0, got {z!r}")

    if order < GAMMA_RECURRENCE_MIN_ORDER:
        # e^z Gamma(a, z) = int_0^inf (z + s)^(a-1) e^(-s) ds
        val, _ = integrate(lambda s: (z + s) ** (order - 1) * math.exp(-s), 0.0, math.inf,
                           abs_tol=0.0, rel_tol=1e-14)
        return val
    if z > GAMMA_RECURRENCE_ZMAX:
        return _gamma_cf_scaled(float(order), z)

    g = exp_integral_e1_scaled(z)
    for a in range(-1, order - 1, -1):
        g = (g - z ** a) / a
    return g


def upper_incomplete_gamma_nonpos(order: int, z: float) -> float:
    """Gamma(order, z) = int_z^inf t^(order-1) e^(-t) dt, integer order <= 0."""
    return math.exp(-z) * upper_incomplete_gamma_nonpos_scaled(order, z)


def harmonic(m: int) -> float:
    """Harmonic number H_m, with H_0 = 0."""
    if m < 0:
        raise ValueError(f"harmonic number needs m >= 0, got {m}")
    return math.fsum(1.0 / i for i in range(1, m + 1))


def binomial(n: int, k: int) -> float:
    if k < 0 or k > n:
        return 0.0
    return float(math.comb(n, k))
