"""Antenna selection rules.

Each rule maps one channel draw to a :class:`SelectionOutcome`. The
``*_batch`` variants do the same for arrays of draws (rows are trials) and
are what the simulator uses; they return 0-based antenna indices with -1
for a halted trial, and ranks with 0 for a halted trial.

Ties are broken towards the lowest antenna index everywhere.
"""

from __future__ import annotations

import enum

import numpy as np

from .model import HALT, ChannelRealization, SelectionOutcome, SystemParams

__all__ = [
    "SchemeId",
    "select",
    "select_batch",
    "select_mds",
    "select_mmi",
    "select_mmslir",
    "select_muc",
    "select_proposed",
    "single_antenna_pa",
    "single_antenna_pa_batch",
]


class SchemeId(str, enum.Enum):
    PROPOSED = "proposed"
    MMI = "mmi"
    MUC = "muc"
    MMSLIR = "mmslir"
    MDS = "mds"
    SA_PA = "sa-pa"

    @classmethod
    def parse(cls, text: str) -> "SchemeId":
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = "|".join(s.value for s in cls)
            raise ValueError(f"unknown scheme {text!r}; expected one of {names}") from None


def _rank_of(h: np.ndarray, idx: int) -> int:
    # position in the descending sort with lower index first among ties
    hv = h[idx]
    return 1 + int(np.count_nonzero(h > hv)) + int(np.count_nonzero(h[:idx] == hv))


def _gated(params: SystemParams, ch: ChannelRealization, idx: int) -> SelectionOutcome:
    if params.st_power * ch.g_sq[idx] <= params.interference_threshold:
        return SelectionOutcome.selected(idx + 1, _rank_of(ch.h_sq, idx))
    return HALT


def select_proposed(params: SystemParams, ch: ChannelRealization) -> SelectionOutcome:
    """Strongest antenna (by |h|^2) among those with P_S |g|^2 <= T."""
    order = sorted(range(ch.n_antennas), key=lambda i: (-ch.h_sq[i], i))
    for rank, i in enumerate(order, start=1):
        if params.st_power * ch.g_sq[i] <= params.interference_threshold:
            return SelectionOutcome.selected(i + 1, rank)
    return HALT


def select_mmi(params: SystemParams, ch: ChannelRealization) -> SelectionOutcome:
    return _gated(params, ch, int(np.argmin(ch.g_sq)))


def select_muc(params: SystemParams, ch: ChannelRealization) -> SelectionOutcome:
    return _gated(params, ch, int(np.argmax(ch.h_sq)))


def _slir(h, g):
    # |g|^2 = 0 means no leakage at all: the ratio is taken as +inf.
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return np.where(g == 0, np.inf, h / np.where(g == 0, 1.0, g))


def select_mmslir(params: SystemParams, ch: ChannelRealization) -> SelectionOutcome:
    return _gated(params, ch, int(np.argmax(_slir(ch.h_sq, ch.g_sq))))


def select_mds(params: SystemParams, ch: ChannelRealization) -> SelectionOutcome:
    eta = params.ds_weight
    return _gated(params, ch, int(np.argmax(eta * ch.h_sq - (1 - eta) * ch.g_sq)))


def single_antenna_pa(params: SystemParams, ch: ChannelRealization) -> tuple[float, float]:
    """(power, SINR) for antenna 1 with power min(P_S, T/|g_1|^2)."""
    g1 = float(ch.g_sq[0])
    t = params.interference_threshold
    power = params.st_power if g1 == 0 else min(params.st_power, t / g1)
    sinr = power * float(ch.h_sq[0]) / (params.noise + params.pt_power * ch.h0_sq)
    return power, sinr


_SCALAR = {
    SchemeId.PROPOSED: select_proposed,
    SchemeId.MMI: select_mmi,
    SchemeId.MUC: select_muc,
    SchemeId.MMSLIR: select_mmslir,
    SchemeId.MDS: select_mds,
}


def select(scheme: SchemeId, params: SystemParams, ch: ChannelRealization) -> SelectionOutcome:
    if scheme is SchemeId.SA_PA:
        raise ValueError("sa-pa adapts power instead of selecting; use single_antenna_pa")
    return _SCALAR[SchemeId(scheme)](params, ch)


def _batch_rank(h: np.ndarray, idx: np.ndarray) -> np.ndarray:
    rows = np.arange(h.shape[0])
    hv = h[rows, idx][:, None]
    cols = np.arange(h.shape[1])[None, :]
    ahead = (h > hv) | ((h == hv) & (cols < idx[:, None]))
    return 1 + np.count_nonzero(ahead, axis=1)


def select_batch(scheme: SchemeId, params: SystemParams,
                 h_sq: np.ndarray, g_sq: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised selection over rows of ``h_sq`` / ``g_sq`` (trials x N)."""
    scheme = SchemeId(scheme)
    feasible = params.st_power * g_sq <= params.interference_threshold
    if scheme is SchemeId.PROPOSED:
        masked = np.where(feasible, h_sq, -np.inf)
        idx = np.argmax(masked, axis=1)
        ok = feasible.any(axis=1)
    else:
        if scheme is SchemeId.MMI:
            idx = np.argmin(g_sq, axis=1)
        elif scheme is SchemeId.MUC:
            idx = np.argmax(h_sq, axis=1)
        elif scheme is SchemeId.MMSLIR:
            idx = np.argmax(_slir(h_sq, g_sq), axis=1)
        elif scheme is SchemeId.MDS:
            eta = params.ds_weight
            idx = np.argmax(eta * h_sq - (1 - eta) * g_sq, axis=1)
        else:
            raise ValueError("sa-pa adapts power instead of selecting; use single_antenna_pa_batch")
        ok = feasible[np.arange(idx.size), idx]
    rank = np.where(ok, _batch_rank(h_sq, idx), 0)
    return np.where(ok, idx, -1), rank


def single_antenna_pa_batch(params: SystemParams, h0_sq, h_sq, g_sq) -> tuple[np.ndarray, np.ndarray]:
    g1 = g_sq[:, 0]
    with np.errstate(divide="ignore"):
        capped = params.interference_threshold / np.where(g1 == 0, 1.0, g1)
    power = np.where(g1 == 0, params.st_power, np.minimum(params.st_power, capped))
    sinr = power * h_sq[:, 0] / (params.noise + params.pt_power * h0_sq)
    return power, sinr
