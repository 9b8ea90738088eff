"""Consistency suite behind ``underlay-tas validate`` and the acceptance tests.

Every check returns a :class:`CheckResult` with the worst measured
discrepancy next to the tolerance it was judged against. ``quick`` mode cuts
trial counts and sample sizes for a smoke run; tolerances never change.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from . import analytic, figures
from .model import ChannelRealization, SystemParams
from .montecarlo import (
    SimConfig,
    af_from_records,
    bootstrap_seed,
    capacity_from_records,
    draw_channel_block,
    outage_from_records,
    simulate,
)
from .quadrature import integrate
from .schemes import SchemeId, select_batch, select_proposed
from .specfun import exp_integral_e1_scaled, hyp2f1_terminating, hyp3f2_terminating

__all__ = ["CHECKS", "CheckResult", "run_all"]

DEFAULT_SEED = 20240917


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} [{self.number:02d}] {self.name}: measured {self.measured:.3e} (tol {self.tolerance:.1e})"
        return text + (f"  {self.detail}" if self.detail else "")


def _rng(seed: int, tag: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, tag]))


def _loguniform(rng, lo, hi):
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def _z(est, exact) -> float:
    """Standardised MC error; a zero stderr demands (near) equality."""
    diff = abs(est.value - exact)
    if est.stderr == 0:
        return 0.0 if diff <= 1e-12 else math.inf
    return diff / est.stderr


# --------------------------------------------------------------------------

def check_probability_closure(quick=False, seed=DEFAULT_SEED) -> CheckResult:
    rng = _rng(seed, 1)
    worst = 0.0
    draws = 200 if quick else 1000
    for _ in range(draws):
        p = SystemParams(
            n_antennas=int(rng.integers(1, 17)),
            st_power=_loguniform(rng, 1e-2, 1e2),
            interference_threshold=_loguniform(rng, 1e-4, 1e2),
            rate_sp=_loguniform(rng, 1e-1, 1e2),
        )
        worst = max(worst, abs(analytic.rank_table(p).total() - 1.0))
    return CheckResult(1, "probability closure sum p_k + p_halt = 1", worst <= 1e-12, worst, 1e-12,
                       f"{draws} random parameter sets")


def check_dual_pdf(quick=False, seed=DEFAULT_SEED) -> CheckResult:
    xs = np.geomspace(0.1, 1e3, 50)
    worst = 0.0
    where = ""
    for n in range(1, 9):
        p = figures.FIG2.replace(n_antennas=n)
        for k in range(1, n + 1):
            for x in xs:
                a = analytic.sinr_pdf(p, k, float(x))
                b = analytic.sinr_pdf_hypergeometric(p, k, float(x))
                r = abs(a - b) / abs(a)
                if r > worst:
                    worst, where = r, f"N={n} k={k} x={x:.3g}"
    return CheckResult(2, "finite-sum vs hypergeometric SINR density", worst <= 1e-9, worst, 1e-9,
                       f"worst at {where}; 50 points on [0.1, 1e3]")


def _config_points():
    yield "fig2", figures.FIG2
    yield "fig3", figures.FIG3.replace(interference_threshold=0.05)
    for ps in (0.1, 1.0, 10.0, 100.0):
        yield f"fig4 P_S={ps:g}", figures.FIG4.replace(st_power=ps)


def check_pdf_cdf(quick=False, seed=DEFAULT_SEED) -> CheckResult:
    worst_norm = worst_cdf = 0.0
    for label, base in _config_points():
        for n in figures.ANTENNA_COUNTS:
            p = base.replace(n_antennas=n)
            for k in range(1, n + 1):
                pdf = lambda x: analytic.sinr_pdf(p, k, x)  # noqa: E731
                total, _ = integrate(pdf, 0.0, math.inf, breakpoints=(1.0, 10.0, 100.0))
                worst_norm = max(worst_norm, abs(total - 1.0))
                for x in (0.5, 1.0, 2.0, 5.0, 10.0):
                    partial, _ = integrate(pdf, 0.0, x)
                    worst_cdf = max(worst_cdf, abs(analytic.sinr_cdf(p, k, x) - partial))
    ok = worst_norm <= 1e-8 and worst_cdf <= 1e-6
    return CheckResult(3, "density integrates to 1 and CDF = integral of density",
                       ok, max(worst_norm / 1e-8, worst_cdf / 1e-6), 1.0,
                       f"|int f - 1| = {worst_norm:.2e} (tol 1e-8), |F - int f| = {worst_cdf:.2e} (tol 1e-6); "
                       "measured is the worst ratio to tolerance")


def check_moment_identity(quick=False, seed=DEFAULT_SEED) -> CheckResult:
    worst = 0.0
    for _, base in _config_points():
        for n in figures.ANTENNA_COUNTS:
            p = base.replace(n_antennas=n)
            for k in range(1, n + 1):
                m1 = analytic.sinr_moment(p, k, 1)
                mean = analytic.sinr_mean(p, k)
                worst = max(worst, abs(m1 - mean) / abs(mean))
    return CheckResult(4, "first moment = mean via harmonic numbers", worst <= 1e-9, worst, 1e-9)


def _capacity_helper_closed(a, l1, b, l2):
    # same closed form, written out independently of the capacity code
    num = exp_integral_e1_scaled(b * l2) - exp_integral_e1_scaled(a * l1)
    return num / (a * a * l1 * l1 - a * b * l1 * l2)


def check_integral_identities(quick=False, seed=DEFAULT_SEED) -> CheckResult:
    rng = _rng(seed, 5)
    worst_a = 0.0
    for _ in range(20):
        ratio = rng.uniform(0.2, 5.0)
        b = _loguniform(rng, 0.1, 10.0)
        c = rng.uniform(0.0, 1.0)
        d = int(rng.integers(0, 8))
        a = ratio * b
        f1 = lambda x: math.exp(-a * x) * (1 - c * math.exp(-b * x)) ** d  # noqa: E731
        f2 = lambda x: x * f1(x)  # noqa: E731
        q1, _ = integrate(f1, 0.0, math.inf, abs_tol=0.0, rel_tol=1e-13)
        q2, _ = integrate(f2, 0.0, math.inf, abs_tol=0.0, rel_tol=1e-13)
        c1 = hyp2f1_terminating(ratio, -d, ratio + 1, c) / a
        c2 = hyp3f2_terminating(ratio, ratio, -d, ratio + 1, ratio + 1, c) / (a * a)
        worst_a = max(worst_a, abs(q1 - c1) / abs(q1), abs(q2 - c2) / abs(q2))
    worst_c = 0.0
    count = 0
    while count < 20:
        a, l1, b, l2 = (_loguniform(rng, 0.1, 10.0) for _ in range(4))
        if abs(a * l1 - b * l2) < 1e-3 * max(a * l1, b * l2):
            continue
        count += 1
        A, B = a * l1, b * l2

        def integrand(x):
            d = A * x + B
            return math.exp(-A * x) * math.log1p(x) * (1 / (d * d) + 1 / d)

        q, _ = integrate(integrand, 0.0, math.inf, abs_tol=0.0, rel_tol=1e-13, breakpoints=(1.0,))
        worst_c = max(worst_c, abs(q - _capacity_helper_closed(a, l1, b, l2)) / abs(q))
    ok = worst_a <= 1e-10 and worst_c <= 1e-8
    return CheckResult(5, "integral identities (hypergeometric and ergodic-capacity helper)", ok,
                       max(worst_a / 1e-10, worst_c / 1e-8), 1.0,
                       f"hypergeometric rel err {worst_a:.2e} (tol 1e-10), capacity helper rel err "
                       f"{worst_c:.2e} (tol 1e-8); measured is the worst ratio to tolerance")


def check_analytic_vs_mc(quick=False, seed=DEFAULT_SEED) -> CheckResult:
    trials = 100_000 if quick else 1_000_000
    sim = SimConfig(trials=trials, master_seed=seed)
    worst = 0.0
    where = ""
    points = 0
    for n in figures.ANTENNA_COUNTS:
        for t in figures.T_GRID:
            p = figures.FIG2.replace(n_antennas=n, interference_threshold=t)
            rec = simulate(p, [SchemeId.PROPOSED], sim)[SchemeId.PROPOSED]
            z_out = _z(outage_from_records(rec, p), analytic.outage_probability(p))
            z_af = _z(af_from_records(rec, 2, seed=bootstrap_seed(sim)), analytic.amount_of_fading(p, 2))
            points += 2
            for z, label in ((z_out, "outage"), (z_af, "AF")):
                if z > worst:
                    worst, where = z, f"{label} N={n} T={t:g}"
        for ps in figures.PS_GRID:
            p = figures.FIG4.replace(n_antennas=n, st_power=ps)
            rec = simulate(p, [SchemeId.PROPOSED], sim)[SchemeId.PROPOSED]
            z = _z(capacity_from_records(rec), analytic.ergodic_capacity(p))
            points += 1
            if z > worst:
                worst, where = z, f"capacity N={n} P_S={ps:.3g}"
    return CheckResult(6, "closed forms within 3 standard errors of Monte-Carlo", worst <= 3.0, worst, 3.0,
                       f"{points} grid points, {trials} trials each; worst |z| at {where}")


def _paired(rec_a, rec_b):
    diff = rec_a.rate - rec_b.rate
    n = diff.size
    mean = math.fsum(diff) / n
    se = math.sqrt(math.fsum((diff - mean) ** 2) / (n - 1) / n)
    return mean, se


def check_qualitative_claims(quick=False, seed=DEFAULT_SEED) -> CheckResult:
    trials = 100_000 if quick else 1_000_000
    sim = SimConfig(trials=trials, master_seed=seed, crn=True)
    others = (SchemeId.MMI, SchemeId.MUC, SchemeId.MMSLIR, SchemeId.MDS)
    failures = []
    margin = 0.0  # worst violation in units of the relevant standard error (<= 3 passes)
    ps_values = [figures.FIG5.noise * 10 ** (db / 10) for db in figures.PS_DB_GRID]
    caps = {}
    for ps in ps_values:
        p = figures.FIG5.replace(st_power=ps)
        recs = simulate(p, (SchemeId.PROPOSED,) + others, sim)
        caps[ps] = {s: capacity_from_records(r) for s, r in recs.items()}
        for s in others:
            mean, se = _paired(recs[SchemeId.PROPOSED], recs[s])
            # proposed must not be worse by more than 3 paired standard errors
            z = -mean / se if se > 0 else (0.0 if mean >= 0 else math.inf)
            margin = max(margin, z)
            if z > 3:
                failures.append(f"{s.value} beats proposed at P_S={ps:.3g}")

    def close(ps, other):
        a, b = caps[ps][SchemeId.PROPOSED], caps[ps][other]
        z = abs(a.value - b.value) / math.hypot(a.stderr, b.stderr)
        return z

    z_muc = close(ps_values[0], SchemeId.MUC)
    z_mmi = close(ps_values[-1], SchemeId.MMI)
    margin = max(margin, z_muc, z_mmi)
    if z_muc > 3:
        failures.append(f"proposed differs from MUC at smallest P_S (z={z_muc:.2f})")
    if z_mmi > 3:
        failures.append(f"proposed differs from MMI at largest P_S (z={z_mmi:.2f})")

    # more antennas: higher capacity, lower outage (analytic strictly, MC with shared draws)
    for ps in figures.PS_GRID:
        exact = [analytic.ergodic_capacity(figures.FIG4.replace(n_antennas=n, st_power=ps))
                 for n in figures.ANTENNA_COUNTS]
        mc = [capacity_from_records(simulate(figures.FIG4.replace(n_antennas=n, st_power=ps),
                                             [SchemeId.PROPOSED], sim)[SchemeId.PROPOSED]).value
              for n in figures.ANTENNA_COUNTS]
        if not (all(b > a for a, b in zip(exact, exact[1:])) and all(b >= a for a, b in zip(mc, mc[1:]))):
            failures.append(f"capacity not increasing in N at P_S={ps:.3g}")
    for t in figures.T_GRID:
        exact = [analytic.outage_probability(figures.FIG2.replace(n_antennas=n, interference_threshold=t))
                 for n in figures.ANTENNA_COUNTS]
        mc = []
        for n in figures.ANTENNA_COUNTS:
            p = figures.FIG2.replace(n_antennas=n, interference_threshold=t)
            mc.append(outage_from_records(simulate(p, [SchemeId.PROPOSED], sim)[SchemeId.PROPOSED], p).value)
        if not (all(b < a for a, b in zip(exact, exact[1:])) and all(b <= a for a, b in zip(mc, mc[1:]))):
            failures.append(f"outage not decreasing in N at T={t:g}")

    ok = not failures
    detail = "; ".join(failures) if failures else (
        "proposed >= MMI/MUC/MMSLIR/MDS at every P_S/N0; ~MUC at low P_S, ~MMI at high P_S; "
        "capacity up and outage down with N")
    return CheckResult(7, "qualitative ordering of schemes and antenna counts", ok, margin, 3.0, detail)


def check_capacity_singularity(quick=False, seed=DEFAULT_SEED) -> CheckResult:
    worst = 0.0
    where = ""
    base = figures.FIG4
    for n in (2, 4, 8):
        for m in range(1, n + 1):
            # P_M lam_ss m = P_S lam_ps exactly
            ps = base.pt_power * base.rate_ss * m / base.rate_ps
            p0 = base.replace(n_antennas=n, st_power=ps)
            for k in range(1, m + 1):
                c0 = analytic.ergodic_capacity_k(p0, k)
                for sign in (-1, 1):
                    c1 = analytic.ergodic_capacity_k(base.replace(n_antennas=n, st_power=ps * (1 + sign * 1e-6)), k)
                    r = abs(c1 - c0) / abs(c0)
                    if r > worst:
                        worst, where = r, f"N={n} k={k} m={m}"
    return CheckResult(8, "ergodic capacity continuous across its removable singularity",
                       worst <= 1e-6, worst, 1e-6, f"P_S perturbed by 1e-6 relative; worst at {where}")


def _brute_force(h, g, ps, t):
    best = None
    for i in range(h.size):
        if ps * g[i] <= t and (best is None or h[i] > h[best]):
            best = i
    return -1 if best is None else best


def check_scheme_brute_force(quick=False, seed=DEFAULT_SEED) -> CheckResult:
    rng = _rng(seed, 9)
    total = 10_000 if quick else 100_000
    per = total // 10
    mismatches = 0
    for batch in range(10):
        p = SystemParams(n_antennas=int(rng.integers(1, 9)),
                         st_power=_loguniform(rng, 0.05, 20.0),
                         interference_threshold=_loguniform(rng, 1e-3, 1.0))
        h0, h, g = draw_channel_block(p, seed + batch, 0, per)
        idx_vec, _ = select_batch(SchemeId.PROPOSED, p, h, g)
        for r in range(per):
            expect = _brute_force(h[r], g[r], p.st_power, p.interference_threshold)
            out = select_proposed(p, ChannelRealization(float(h0[r]), h[r], g[r]))
            got = -1 if out.halted else out.antenna - 1
            if got != expect or idx_vec[r] != expect:
                mismatches += 1
    return CheckResult(9, "proposed selection equals exhaustive feasible argmax", mismatches == 0,
                       float(mismatches), 0.0, f"{total} random realizations")


_REPRO_CONFIG = """\
[params]
n_antennas = 4
st_power = 0.5
noise = 0.01
interference_threshold = 0.1
rate_ps = 10
rate_ss = 3
rate_sp = 10
outage_threshold = 1

[sweep]
axis = T
values = 0.02, 0.1, 0.5
metrics = outage, af, capacity, rank-hist
schemes = proposed
methods = analytic, mc

[sim]
trials = {trials}
seed = {seed}
parallel_chunks = {chunks}
"""


def check_reproducibility(quick=False, seed=DEFAULT_SEED) -> CheckResult:
    from .cli import main

    trials = 20_000 if quick else 100_000
    outputs = []
    with tempfile.TemporaryDirectory() as tmp:
        for run, chunks in enumerate((1, 1, 3)):
            cfg = os.path.join(tmp, f"sweep{run}.ini")
            out = os.path.join(tmp, f"out{run}.csv")
            with open(cfg, "w", encoding="utf-8") as fh:
                fh.write(_REPRO_CONFIG.format(trials=trials, seed=seed, chunks=chunks))
            code = main(["sweep", cfg, "--out", out, "--quiet"])
            if code != 0:
                return CheckResult(10, "sweep CSV byte-identical across runs", False, math.inf, 0.0,
                                   f"sweep exited with status {code}")
            with open(out, "rb") as fh:
                outputs.append(fh.read())
    differing = sum(o != outputs[0] for o in outputs[1:])
    return CheckResult(10, "sweep CSV byte-identical across runs", differing == 0, float(differing), 0.0,
                       "two identical runs plus one with 3 parallel chunks")


CHECKS = (
    check_probability_closure,
    check_dual_pdf,
    check_pdf_cdf,
    check_moment_identity,
    check_integral_identities,
    check_analytic_vs_mc,
    check_qualitative_claims,
    check_capacity_singularity,
    check_scheme_brute_force,
    check_reproducibility,
)


def run_all(quick=False, seed=DEFAULT_SEED, echo=None) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        res = check(quick=quick, seed=seed)
        results.append(res)
        if echo is not None:
            echo(res.line())
    return results
