"""Monte-Carlo oracle for the selection schemes.

Random numbers come from counter-based Philox streams keyed by the master
seed. Stream 0 holds |h0|^2 (one value per trial); stream ``i`` holds the
pair (|h_i|^2, |g_i|^2) of antenna ``i``. Trial ``t`` always reads the same
counter positions, so

* results do not depend on how trials are split into chunks, and
* runs with different N, T, P_S, ... share their channel draws (common
  random numbers) as long as the seed is the same.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import UndefinedMetricError
from .model import ChannelRealization, MetricEstimate, Method, SystemParams
from .schemes import SchemeId, select_batch, single_antenna_pa_batch

__all__ = [
    "RankHistogram",
    "SimConfig",
    "TrialRecords",
    "af_from_records",
    "capacity_from_records",
    "conditional_rank_mean",
    "draw_channel_block",
    "draw_channels",
    "estimate_af",
    "estimate_capacity",
    "estimate_outage",
    "outage_from_records",
    "rank_histogram",
    "simulate",
]

# Trials processed per vectorised step; bounds memory, never affects results.
BLOCK_TRIALS = 1 << 16
BOOTSTRAP_RESAMPLES = 200

_UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SimConfig:
    trials: int = 100_000
    master_seed: int = 0
    parallel_chunks: int = 1
    crn: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.master_seed <= _UINT64_MASK:
            raise ValueError(f"master_seed must be an unsigned 64-bit integer, got {self.master_seed}")
        if self.parallel_chunks < 1:
            raise ValueError(f"parallel_chunks must be >= 1, got {self.parallel_chunks}")


def _uniforms(seed: int, stream: int, width: int, start: int, stop: int) -> np.ndarray:
    bg = np.random.Philox(key=seed, counter=[0, stream, 0, 0])
    offset = start * width
    # Philox emits 4 words per counter step.
    bg.advance(offset // 4)
    gen = np.random.Generator(bg)
    skip = offset % 4
    u = gen.random(skip + (stop - start) * width)[skip:]
    return u.reshape(stop - start, width)


def draw_channel_block(params: SystemParams, seed: int, start: int, stop: int):
    """Squared channel gains for trials ``start .. stop-1``.

    Returns ``(h0_sq, h_sq, g_sq)`` with shapes ``(n,)``, ``(n, N)``, ``(n, N)``.
    """
    n_ant = params.n_antennas
    u0 = _uniforms(seed, 0, 1, start, stop)[:, 0]
    h0 = -np.log1p(-u0) / params.rate_ps
    h = np.empty((stop - start, n_ant))
    g = np.empty((stop - start, n_ant))
    for i in range(n_ant):
        u = _uniforms(seed, i + 1, 2, start, stop)
        h[:, i] = -np.log1p(-u[:, 0]) / params.rate_ss
        g[:, i] = -np.log1p(-u[:, 1]) / params.rate_sp
    return h0, h, g


def draw_channels(params: SystemParams, seed: int, trial: int) -> ChannelRealization:
    """The single realization used as trial number ``trial``."""
    h0, h, g = draw_channel_block(params, seed, trial, trial + 1)
    return ChannelRealization(float(h0[0]), h[0], g[0])


@dataclass
class TrialRecords:
    """Per-trial outcomes of one scheme.

    ``antenna`` is 0-based with -1 for a halted trial, ``rank`` is 0 for a
    halted trial, and ``sinr`` is 0 for a halted trial.
    """

    antenna: np.ndarray
    rank: np.ndarray
    sinr: np.ndarray

    @property
    def trials(self) -> int:
        return self.sinr.size

    @property
    def halted(self) -> np.ndarray:
        return self.antenna < 0

    @property
    def rate(self) -> np.ndarray:
        return np.log2(1.0 + self.sinr)

    @classmethod
    def concat(cls, parts) -> "TrialRecords":
        parts = list(parts)
        return cls(np.concatenate([p.antenna for p in parts]),
                   np.concatenate([p.rank for p in parts]),
                   np.concatenate([p.sinr for p in parts]))


def _apply(scheme: SchemeId, params: SystemParams, h0, h, g) -> TrialRecords:
    if scheme is SchemeId.SA_PA:
        _, sinr = single_antenna_pa_batch(params, h0, h, g)
        n = sinr.size
        return TrialRecords(np.zeros(n, dtype=np.int64), np.ones(n, dtype=np.int64), sinr)
    idx, rank = select_batch(scheme, params, h, g)
    ok = idx >= 0
    rows = np.arange(idx.size)
    h_sel = np.where(ok, h[rows, np.maximum(idx, 0)], 0.0)
    sinr = params.st_power * h_sel / (params.noise + params.pt_power * h0)
    return TrialRecords(idx.astype(np.int64), rank.astype(np.int64), sinr)


def _scheme_seed(master_seed: int, scheme: SchemeId) -> int:
    tag = list(SchemeId).index(scheme) + 1
    return int(np.random.SeedSequence([master_seed, tag]).generate_state(1, np.uint64)[0])


def _run_range(params, schemes, seed, start, stop):
    pieces = {s: [] for s in schemes}
    for lo in range(start, stop, BLOCK_TRIALS):
        hi = min(stop, lo + BLOCK_TRIALS)
        h0, h, g = draw_channel_block(params, seed, lo, hi)
        for s in schemes:
            pieces[s].append(_apply(s, params, h0, h, g))
    return pieces


def _run_group(params, schemes, seed, sim: SimConfig):
    n = sim.trials
    chunks = min(sim.parallel_chunks, n)
    bounds = [n * c // chunks for c in range(chunks + 1)]
    ranges = list(zip(bounds[:-1], bounds[1:]))
    if chunks == 1:
        results = [_run_range(params, schemes, seed, *ranges[0])]
    else:
        with ThreadPoolExecutor(max_workers=chunks) as pool:
            results = list(pool.map(lambda r: _run_range(params, schemes, seed, *r), ranges))
    return {s: TrialRecords.concat(p for res in results for p in res[s]) for s in schemes}


def simulate(params: SystemParams, schemes, sim: SimConfig) -> dict:
    """Run every scheme on ``sim.trials`` trials.

    With ``sim.crn`` all schemes see the same channel draws; otherwise each
    scheme uses its own seed derived from the master seed.
    """
    schemes = [SchemeId(s) for s in schemes]
    if sim.crn:
        return _run_group(params, schemes, sim.master_seed, sim)
    out = {}
    for s in schemes:
        out.update(_run_group(params, [s], _scheme_seed(sim.master_seed, s), sim))
    return out


def _mean_and_stderr(values: np.ndarray) -> tuple[float, float]:
    n = values.size
    mean = math.fsum(values) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((values - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


# --------------------------------------------------------------------------
# Estimators over already simulated records
# --------------------------------------------------------------------------

def outage_from_records(rec: TrialRecords, params: SystemParams) -> MetricEstimate:
    out = rec.halted | (rec.sinr < params.outage_threshold)
    n = rec.trials
    p = int(np.count_nonzero(out)) / n
    return MetricEstimate(p, math.sqrt(p * (1 - p) / n), Method.MONTE_CARLO, n)


def capacity_from_records(rec: TrialRecords) -> MetricEstimate:
    mean, se = _mean_and_stderr(rec.rate)
    return MetricEstimate(mean, se, Method.MONTE_CARLO, rec.trials)


def _af(sum_n, sum_1, n_trials, order):
    return (sum_n / n_trials) / (sum_1 / n_trials) ** order - 1.0


def af_from_records(rec: TrialRecords, order: int = 2, seed: int = 0,
                    resamples: int = BOOTSTRAP_RESAMPLES) -> MetricEstimate:
    """Plug-in AF^(n) with a nonparametric bootstrap standard error.

    Halted trials enter both moments as zero SINR.
    """
    x = rec.sinr
    n = x.size
    nz = x[x > 0]
    if nz.size == 0:
        raise UndefinedMetricError("amount of fading undefined: every trial halted")
    xn = nz ** order
    value = _af(math.fsum(xn), math.fsum(nz), n, order)

    # Resampling all n trials is equivalent to drawing how many non-zero
    # values land in the resample, then resampling only those.
    rng = np.random.Generator(np.random.Philox(key=seed))
    boots = np.empty(resamples)
    q = nz.size / n
    for b in range(resamples):
        c = rng.binomial(n, q)
        counts = np.bincount(rng.integers(0, nz.size, size=c), minlength=nz.size).astype(float)
        s1 = float(counts @ nz)
        boots[b] = _af(float(counts @ xn), s1, n, order) if s1 > 0 else np.nan
    boots = boots[np.isfinite(boots)]
    se = float(np.std(boots, ddof=1)) if boots.size > 1 else 0.0
    return MetricEstimate(value, se, Method.MONTE_CARLO, n)


def conditional_rank_mean(rec: TrialRecords, k: int, values: np.ndarray | None = None) -> MetricEstimate:
    """Mean of ``values`` (default: SINR) over trials that selected rank ``k``."""
    mask = rec.rank == k
    vals = (rec.sinr if values is None else values)[mask]
    if vals.size == 0:
        raise UndefinedMetricError(f"no trial selected rank {k}")
    mean, se = _mean_and_stderr(vals)
    return MetricEstimate(mean, se, Method.MONTE_CARLO, int(vals.size))


@dataclass(frozen=True)
class RankHistogram:
    freq: np.ndarray
    halt: float
    freq_stderr: np.ndarray
    halt_stderr: float
    trials: int


def histogram_from_records(rec: TrialRecords, n_antennas: int) -> RankHistogram:
    n = rec.trials
    counts = np.bincount(rec.rank, minlength=n_antennas + 1)
    freq = counts[1:n_antennas + 1] / n
    halt = counts[0] / n
    return RankHistogram(freq, float(halt), np.sqrt(freq * (1 - freq) / n),
                         math.sqrt(halt * (1 - halt) / n), n)


# --------------------------------------------------------------------------
# One-call estimators
# --------------------------------------------------------------------------

def estimate_outage(params: SystemParams, scheme, sim: SimConfig) -> MetricEstimate:
    scheme = SchemeId(scheme)
    return outage_from_records(simulate(params, [scheme], sim)[scheme], params)


def estimate_capacity(params: SystemParams, scheme, sim: SimConfig) -> MetricEstimate:
    scheme = SchemeId(scheme)
    return capacity_from_records(simulate(params, [scheme], sim)[scheme])


def bootstrap_seed(sim: SimConfig) -> int:
    return int(np.random.SeedSequence([sim.master_seed, 0xAF]).generate_state(1, np.uint64)[0])


def estimate_af(params: SystemParams, scheme, sim: SimConfig, n: int = 2) -> MetricEstimate:
    if not 2 <= n <= 8:
        raise ValueError(f"AF order n={n} outside 2..8")
    scheme = SchemeId(scheme)
    rec = simulate(params, [scheme], sim)[scheme]
    return af_from_records(rec, n, seed=bootstrap_seed(sim))


def rank_histogram(params: SystemParams, sim: SimConfig, scheme=SchemeId.PROPOSED) -> RankHistogram:
    scheme = SchemeId(scheme)
    if scheme is SchemeId.SA_PA:
        raise ValueError("rank histogram is not defined for the power-adaptation baseline")
    return histogram_from_records(simulate(params, [scheme], sim)[scheme], params.n_antennas)
