"""Transmit antenna selection in underlay cognitive radio.

Closed-form outage, amount of fading and ergodic capacity of k-th best
feasible antenna selection, plus a reproducible Monte-Carlo simulator for it
and for the MMI / MUC / MMSLIR / MDS / single-antenna power-adaptation
baselines.
"""

from .model import (
    HALT,
    ChannelRealization,
    MetricEstimate,
    Method,
    ParameterError,
    SelectionOutcome,
    SystemParams,
    validate,
)
from .montecarlo import SimConfig
from .schemes import SchemeId

__version__ = "0.1.0"

__all__ = [
    "HALT",
    "ChannelRealization",
    "MetricEstimate",
    "Method",
    "ParameterError",
    "SchemeId",
    "SelectionOutcome",
    "SimConfig",
    "SystemParams",
    "validate",
]
