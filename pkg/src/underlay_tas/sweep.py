"""Parameter sweeps: config parsing, evaluation and CSV output."""

from __future__ import annotations

import configparser
import csv
import io
import math
from dataclasses import dataclass, replace

import numpy as np

from . import analytic
from .model import SystemParams
from .montecarlo import (
    SimConfig,
    af_from_records,
    bootstrap_seed,
    capacity_from_records,
    histogram_from_records,
    outage_from_records,
    simulate,
)
from .schemes import SchemeId

__all__ = [
    "AXES",
    "CSV_COLUMNS",
    "ConfigError",
    "SweepSpec",
    "format_summary",
    "load_config",
    "parse_config",
    "run_sweep",
    "write_csv",
]

AXES = {
    "T": "interference_threshold",
    "P_S": "st_power",
    "N": "n_antennas",
    "xi_T": "outage_threshold",
}
METRICS = ("outage", "af", "capacity", "rank-hist")
METHODS = ("analytic", "mc")
CSV_COLUMNS = ("axis_name", "axis_value", "scheme", "metric", "method",
               "value", "stderr", "trials")

_ANALYTIC_SUPPORT = {
    SchemeId.PROPOSED: set(METRICS),
    SchemeId.SA_PA: {"outage"},
}


class ConfigError(ValueError):
    """Bad sweep configuration; the message names the offending field."""


@dataclass(frozen=True)
class SweepSpec:
    base: SystemParams
    axis: str
    values: tuple
    metrics: tuple[str, ...]
    schemes: tuple[SchemeId, ...]
    sim: SimConfig | None = None
    methods: tuple[str, ...] = ("analytic",)
    af_order: int = 2
    af_normalized: bool = False

    def __post_init__(self):
        if self.axis not in AXES:
            raise ConfigError(f"axis: {self.axis!r} not one of {', '.join(AXES)}")
        if not self.values:
            raise ConfigError("values: axis needs at least one value")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ConfigError("values: axis values must be strictly increasing")
        if self.axis == "N" and any(float(v) != int(v) or v < 1 for v in self.values):
            raise ConfigError("values: antenna counts must be positive integers")
        if not self.metrics:
            raise ConfigError("metrics: at least one metric is required")
        for m in self.metrics:
            if m not in METRICS:
                raise ConfigError(f"metrics: unknown metric {m!r}; expected {', '.join(METRICS)}")
        if not self.schemes:
            raise ConfigError("schemes: at least one scheme is required")
        if not self.methods:
            raise ConfigError("methods: at least one method is required")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"methods: unknown method {m!r}; expected analytic or mc")
        if "mc" in self.methods and self.sim is None:
            raise ConfigError("sim: Monte-Carlo requested but no [sim] section or --trials given")
        if not 2 <= self.af_order <= analytic.MAX_MOMENT_ORDER:
            raise ConfigError(f"af_order: {self.af_order} outside 2..{analytic.MAX_MOMENT_ORDER}")
        if "analytic" in self.methods:
            for s in self.schemes:
                for m in self.metrics:
                    if m not in _ANALYTIC_SUPPORT.get(s, ()):
                        raise ConfigError(
                            f"methods: no closed form for metric {m!r} under scheme {s.value!r} "
                            "(analytic results exist for proposed, and for sa-pa outage)")
        if "mc" in self.methods and "rank-hist" in self.metrics and SchemeId.SA_PA in self.schemes:
            raise ConfigError("metrics: rank-hist is not defined for scheme 'sa-pa'")

    def params_at(self, value) -> SystemParams:
        name = AXES[self.axis]
        if self.axis == "N":
            value = int(value)
        return self.base.replace(**{name: value})


# --------------------------------------------------------------------------
# Config files
# --------------------------------------------------------------------------

def _floats(text: str, key: str) -> list[float]:
    try:
        return [float(v) for v in text.replace("\n", ",").split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None


def _names(text: str) -> list[str]:
    return [v.strip() for v in text.replace("\n", ",").split(",") if v.strip()]


def _flag(text: str, key: str) -> bool:
    t = text.strip().lower()
    if t in ("on", "true", "yes", "1"):
        return True
    if t in ("off", "false", "no", "0"):
        return False
    raise ConfigError(f"{key}: expected on/off, got {text!r}")


def parse_config(text: str, seed=None, trials=None, crn=None) -> SweepSpec:
    """Build a :class:`SweepSpec` from INI text.

    ``seed`` / ``trials`` / ``crn`` override the ``[sim]`` section and create
    one if it is missing.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config: {exc}") from None
    for section in cp.sections():
        if section not in ("params", "sweep", "sim"):
            raise ConfigError(f"config: unknown section [{section}]")
    if not cp.has_section("sweep"):
        raise ConfigError("sweep: missing [sweep] section")

    kwargs = {}
    if cp.has_section("params"):
        fields = set(SystemParams.field_names())
        for key, raw in cp.items("params"):
            if key not in fields:
                raise ConfigError(f"params.{key}: unknown parameter")
            try:
                kwargs[key] = int(raw) if key == "n_antennas" else float(raw)
            except ValueError:
                raise ConfigError(f"params.{key}: not a number: {raw!r}") from None
    try:
        base = SystemParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"params: {exc}") from None

    sw = cp["sweep"]
    allowed = {"axis", "values", "logspace", "ps_units", "metrics", "schemes",
               "methods", "af_order", "af_normalized"}
    for key in sw:
        if key not in allowed:
            raise ConfigError(f"sweep.{key}: unknown key")
    axis = sw.get("axis", "").strip()
    if "values" in sw and "logspace" in sw:
        raise ConfigError("sweep.values: give either values or logspace, not both")
    if "values" in sw:
        values = _floats(sw["values"], "sweep.values")
    elif "logspace" in sw:
        spec = _floats(sw["logspace"], "sweep.logspace")
        if len(spec) != 3 or spec[0] <= 0 or spec[1] <= 0 or spec[2] < 1 or not float(spec[2]).is_integer():
            raise ConfigError("sweep.logspace: expected 'start, stop, count' with positive endpoints")
        values = [float(v) for v in np.geomspace(spec[0], spec[1], int(spec[2]))]
    else:
        raise ConfigError("sweep.values: missing axis values")
    units = sw.get("ps_units", "linear").strip().lower()
    if units not in ("linear", "db"):
        raise ConfigError(f"sweep.ps_units: expected linear or dB, got {units!r}")
    if units == "db":
        if axis != "P_S":
            raise ConfigError("sweep.ps_units: dB values are only meaningful for axis P_S")
        # dB relative to the noise power.
        values = [base.noise * 10.0 ** (v / 10.0) for v in values]
    if axis == "N":
        values = [int(v) for v in values]

    try:
        schemes = tuple(SchemeId.parse(s) for s in _names(sw.get("schemes", "proposed")))
    except ValueError as exc:
        raise ConfigError(f"sweep.schemes: {exc}") from None

    sim = None
    if cp.has_section("sim") or seed is not None or trials is not None:
        s = cp["sim"] if cp.has_section("sim") else {}
        for key in s:
            if key not in ("trials", "seed", "parallel_chunks", "crn"):
                raise ConfigError(f"sim.{key}: unknown key")
        try:
            sim = SimConfig(
                trials=int(trials if trials is not None else s.get("trials", 100_000)),
                master_seed=int(seed if seed is not None else s.get("seed", 0)),
                parallel_chunks=int(s.get("parallel_chunks", 1)),
                crn=_flag(s.get("crn", "on"), "sim.crn") if crn is None else crn,
            )
        except ValueError as exc:
            raise ConfigError(f"sim: {exc}") from None

    default_methods = "analytic, mc" if sim is not None else "analytic"
    try:
        af_order = int(sw.get("af_order", "2"))
    except ValueError:
        raise ConfigError(f"sweep.af_order: not an integer: {sw['af_order']!r}") from None
    return SweepSpec(
        base=base,
        axis=axis,
        values=tuple(values),
        metrics=tuple(_names(sw.get("metrics", ""))),
        schemes=schemes,
        sim=sim,
        methods=tuple(m.lower() for m in _names(sw.get("methods", default_methods))),
        af_order=af_order,
        af_normalized=_flag(sw.get("af_normalized", "off"), "sweep.af_normalized"),
    )


def load_config(path, **overrides) -> SweepSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), **overrides)


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------

def _analytic_rows(spec: SweepSpec, params: SystemParams, scheme: SchemeId, metric: str):
    if metric == "outage":
        v = (analytic.outage_probability(params) if scheme is SchemeId.PROPOSED
             else analytic.single_antenna_pa_outage(params))
        return [(metric, v, 0.0)]
    if metric == "capacity":
        return [(metric, analytic.ergodic_capacity(params), 0.0)]
    if metric == "af":
        try:
            v = analytic.amount_of_fading(params, spec.af_order, spec.af_normalized)
        except analytic.UndefinedMetricError:
            v = math.nan
        return [(metric, v, 0.0)]
    tbl = analytic.rank_table(params)
    rows = [(f"rank-hist:{k}", p, 0.0) for k, p in enumerate(tbl.values, start=1)]
    rows.append(("rank-hist:halt", tbl.halt, 0.0))
    return rows


def _mc_rows(spec: SweepSpec, params: SystemParams, rec, metric: str):
    if metric == "outage":
        e = outage_from_records(rec, params)
        return [(metric, e.value, e.stderr)]
    if metric == "capacity":
        e = capacity_from_records(rec)
        return [(metric, e.value, e.stderr)]
    if metric == "af":
        if spec.af_normalized:
            rec = type(rec)(rec.antenna[~rec.halted], rec.rank[~rec.halted], rec.sinr[~rec.halted])
        try:
            e = af_from_records(rec, spec.af_order, seed=bootstrap_seed(spec.sim))
        except analytic.UndefinedMetricError:
            return [(metric, math.nan, math.nan)]
        return [(metric, e.value, e.stderr)]
    hist = histogram_from_records(rec, params.n_antennas)
    rows = [(f"rank-hist:{k}", float(f), float(se))
            for k, (f, se) in enumerate(zip(hist.freq, hist.freq_stderr), start=1)]
    rows.append(("rank-hist:halt", hist.halt, hist.halt_stderr))
    return rows


def run_sweep(spec: SweepSpec) -> list[tuple]:
    """Evaluate the sweep; rows follow :data:`CSV_COLUMNS`.

    Row order is axis value, then scheme, then metric, then method.
    """
    rows = []
    for value in spec.values:
        params = spec.params_at(value)
        records = None
        if "mc" in spec.methods:
            records = simulate(params, spec.schemes, spec.sim)
        for scheme in spec.schemes:
            for metric in spec.metrics:
                if "analytic" in spec.methods:
                    for name, v, se in _analytic_rows(spec, params, scheme, metric):
                        rows.append((spec.axis, value, scheme.value, name, "closed_form", v, se, 0))
                if records is not None:
                    rec = records[scheme]
                    for name, v, se in _mc_rows(spec, params, rec, metric):
                        rows.append((spec.axis, value, scheme.value, name, "monte_carlo", v, se,
                                     rec.trials))
    return rows


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(rows, stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([r[0], _fmt(r[1]), r[2], r[3], r[4], _fmt(r[5]), _fmt(r[6]), str(r[7])])


def csv_text(rows) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def format_summary(spec: SweepSpec, rows) -> str:
    """Short human-readable table of the sweep results."""
    lines = [f"sweep over {spec.axis}: {len(spec.values)} values, "
             f"{len(spec.schemes)} scheme(s), metrics {', '.join(spec.metrics)}"]
    if spec.sim is not None and "mc" in spec.methods:
        lines.append(f"monte carlo: {spec.sim.trials} trials, seed {spec.sim.master_seed}, "
                     f"crn {'on' if spec.sim.crn else 'off'}")
    for r in rows:
        se = f" +/- {r[6]:.2e}" if r[4] == "monte_carlo" else ""
        lines.append(f"  {r[0]}={r[1]:<10.6g} {r[2]:<8} {r[3]:<15} {r[4]:<12} {r[5]:.6g}{se}")
    return "\n".join(lines) + "\n"


def with_sim(spec: SweepSpec, sim: SimConfig) -> SweepSpec:
    return replace(spec, sim=sim)
