"""Value types shared by the analytic and simulation code.

Every channel quantity is a squared magnitude. Powers are in arbitrary but
consistent units.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields

import numpy as np

__all__ = [
    "ChannelRealization",
    "HALT",
    "MetricEstimate",
    "Method",
    "ParameterError",
    "SelectionOutcome",
    "SystemParams",
    "validate",
]


class ParameterError(ValueError):
    """Invalid system parameters; ``violations`` lists every failed check."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class SystemParams:
    """Scalar parameters of the underlay setup.

    Attributes mirror the usual notation: ``pt_power`` is P_M, ``st_power``
    P_S, ``noise`` N0, ``interference_threshold`` T, ``rate_ps`` / ``rate_ss``
    / ``rate_sp`` the exponential rates of |h0|^2, |h_i|^2 and |g_i|^2,
    ``outage_threshold`` the SINR threshold and ``ds_weight`` the difference
    selection weight eta.
    """

    n_antennas: int = 4
    pt_power: float = 1.0
    st_power: float = 0.5
    noise: float = 1e-2
    interference_threshold: float = 0.1
    rate_ps: float = 10.0
    rate_ss: float = 3.0
    rate_sp: float = 10.0
    outage_threshold: float = 1.0
    ds_weight: float = 0.2

    def __post_init__(self):
        validate(self)

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def replace(self, **changes) -> "SystemParams":
        kwargs = {name: getattr(self, name) for name in self.field_names()}
        kwargs.update(changes)
        return SystemParams(**kwargs)

    @property
    def feasibility_level(self) -> float:
        """Largest |g|^2 that keeps P_S |g|^2 <= T."""
        return self.interference_threshold / self.st_power


def _violations(p: SystemParams) -> list[str]:
    out = []
    n = p.n_antennas
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        out.append(f"n_antennas must be an integer, got {n!r}")
    elif n < 1:
        out.append(f"n_antennas must be >= 1, got {n}")
    for name in ("pt_power", "st_power", "noise", "rate_ps", "rate_ss", "rate_sp"):
        v = getattr(p, name)
        if not (isinstance(v, (int, float, np.floating, np.integer)) and math.isfinite(v) and v > 0):
            out.append(f"{name} must be a finite positive number, got {v!r}")
    for name in ("interference_threshold", "outage_threshold"):
        v = getattr(p, name)
        # T = inf is allowed: it is the unconstrained limit.
        if not (isinstance(v, (int, float, np.floating, np.integer)) and v >= 0 and not math.isnan(v)):
            out.append(f"{name} must be >= 0, got {v!r}")
    eta = p.ds_weight
    if not (isinstance(eta, (int, float, np.floating, np.integer)) and 0.0 <= eta <= 1.0):
        out.append(f"ds_weight must lie in [0, 1], got {eta!r}")
    return out


def validate(params: SystemParams) -> SystemParams:
    """Return ``params`` unchanged or raise :class:`ParameterError`."""
    problems = _violations(params)
    if problems:
        raise ParameterError(problems)
    return params


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of |h0|^2, |h_i|^2 and |g_i|^2 (antenna i = 1..N)."""

    h0_sq: float
    h_sq: np.ndarray
    g_sq: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h_sq, dtype=float)
        g = np.asarray(self.g_sq, dtype=float)
        object.__setattr__(self, "h_sq", h)
        object.__setattr__(self, "g_sq", g)
        if h.ndim != 1 or g.shape != h.shape or h.size == 0:
            raise ValueError(f"h_sq and g_sq must be equal-length vectors, got {h.shape} and {g.shape}")
        vals = np.concatenate([[self.h0_sq], h, g])
        if not (np.all(np.isfinite(vals)) and np.all(vals >= 0)):
            raise ValueError("channel gains must be finite and non-negative")

    @property
    def n_antennas(self) -> int:
        return self.h_sq.size


@dataclass(frozen=True)
class SelectionOutcome:
    """Chosen antenna (1-based) and its rank in the descending |h|^2 order.

    Both fields are ``None`` for a halted slot.
    """

    antenna: int | None = None
    rank: int | None = None

    def __post_init__(self):
        if (self.antenna is None) != (self.rank is None):
            raise ValueError("antenna and rank must both be set or both be None")

    @property
    def halted(self) -> bool:
        return self.antenna is None

    @classmethod
    def selected(cls, antenna: int, rank: int) -> "SelectionOutcome":
        return cls(int(antenna), int(rank))


HALT = SelectionOutcome()


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    MONTE_CARLO = "monte_carlo"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class MetricEstimate:
    value: float
    stderr: float = 0.0
    method: Method = Method.CLOSED_FORM
    trials: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.stderr < 0:
            raise ValueError("stderr must be non-negative")
        if self.method is not Method.MONTE_CARLO and self.stderr != 0:
            raise ValueError("exact methods carry zero stderr")

    def within(self, reference: float, n_sigma: float = 3.0) -> bool:
        """True if ``reference`` lies within ``n_sigma`` standard errors."""
        return abs(self.value - reference) <= n_sigma * self.stderr
