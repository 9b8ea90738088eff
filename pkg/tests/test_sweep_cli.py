import math
from pathlib import Path

import pytest

from underlay_tas import cli
from underlay_tas.analytic import outage_probability
from underlay_tas.figures import FIG2
from underlay_tas.sweep import CSV_COLUMNS, ConfigError, csv_text, load_config, parse_config, run_sweep

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"
SHIPPED = sorted(CONFIG_DIR.glob("*.ini"))

BASIC = """
[params]
n_antennas = 4
st_power = 0.5

[sweep]
axis = T
values = 0.05, 0.1
metrics = outage
schemes = proposed
"""


def test_analytic_only_sweep():
    spec = parse_config(BASIC)
    assert spec.sim is None and spec.methods == ("analytic",)
    rows = run_sweep(spec)
    assert len(rows) == 2
    assert rows[1][5] == pytest.approx(outage_probability(FIG2))


def test_overrides_create_sim_section():
    spec = parse_config(BASIC, seed=4, trials=100)
    assert spec.sim.trials == 100 and spec.sim.master_seed == 4
    assert spec.methods == ("analytic", "mc")


def test_rank_hist_rows():
    text = BASIC.replace("metrics = outage", "metrics = rank-hist")
    rows = run_sweep(parse_config(text))
    names = [r[3] for r in rows[:5]]
    assert names == ["rank-hist:1", "rank-hist:2", "rank-hist:3", "rank-hist:4", "rank-hist:halt"]
    assert math.fsum(r[5] for r in rows[:5]) == pytest.approx(1.0)


def test_db_axis():
    text = BASIC.replace("axis = T", "axis = P_S").replace("values = 0.05, 0.1", "values = 10, 20\nps_units = dB")
    spec = parse_config(text)
    assert spec.values == pytest.approx((0.1, 1.0))


def test_logspace():
    text = BASIC.replace("values = 0.05, 0.1", "logspace = 0.01, 1, 3")
    assert parse_config(text).values == pytest.approx((0.01, 0.1, 1.0))


def test_undefined_af_is_nan():
    text = BASIC.replace("values = 0.05, 0.1", "values = 0").replace("outage", "af")
    rows = run_sweep(parse_config(text))
    assert math.isnan(rows[0][5])


BAD = [
    ("[sweep]\naxis = Q\nvalues = 1\nmetrics = outage\n", "axis"),
    ("[sweep]\naxis = T\nvalues = 0.2, 0.1\nmetrics = outage\n", "increasing"),
    ("[sweep]\naxis = T\nvalues = 0.1\nmetrics = snr\n", "metric"),
    ("[sweep]\naxis = T\nvalues = 0.1\nmetrics = outage\nschemes = best\n", "scheme"),
    ("[sweep]\naxis = T\nvalues = 0.1\nmetrics = capacity\nschemes = mmi\n", "closed form"),
    ("[sweep]\naxis = T\nvalues = 0.1\nmetrics = outage\nmethods = mc\n", "sim"),
    ("[sweep]\naxis = T\nvalues = 0.1\nmetrics = outage\nbogus = 1\n", "bogus"),
    ("[params]\nnoise = -1\n[sweep]\naxis = T\nvalues = 0.1\nmetrics = outage\n", "noise"),
    ("[params]\nwidth = 3\n[sweep]\naxis = T\nvalues = 0.1\nmetrics = outage\n", "width"),
    ("[extra]\n[sweep]\naxis = T\nvalues = 0.1\nmetrics = outage\n", "extra"),
    ("[params]\nn_antennas = 2\n", "sweep"),
    ("[sweep]\naxis = T\nvalues = 0.1\nps_units = dB\nmetrics = outage\n", "ps_units"),
    ("[sweep]\naxis = T\nvalues = 0.1\nmetrics = outage\n[sim]\ncrn = maybe\n", "crn"),
    ("[sweep]\naxis = T\nvalues = 0.1\nmetrics = outage\n[sim]\ntrials = 0\n", "trials"),
]


@pytest.mark.parametrize("text,fragment", BAD)
def test_config_errors_name_the_field(text, fragment):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert fragment.lower() in str(info.value).lower()


def test_cli_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text(BAD[0][0])
    assert cli.main(["sweep", str(bad)]) == cli.EXIT_CONFIG_ERROR
    assert "axis" in capsys.readouterr().err


def test_cli_missing_file(tmp_path):
    assert cli.main(["sweep", str(tmp_path / "nope.ini")]) == cli.EXIT_CONFIG_ERROR


def test_cli_writes_csv(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text(BASIC)
    out = tmp_path / "o.csv"
    assert cli.main(["sweep", str(cfg), "--trials", "500", "--seed", "1", "--out", str(out), "--quiet"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 4


def test_cli_reproducible_and_seed_sensitive(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text(BASIC)
    outs = []
    for seed in ("1", "1", "2"):
        out = tmp_path / f"o{len(outs)}.csv"
        cli.main(["sweep", str(cfg), "--trials", "2000", "--seed", seed, "--out", str(out), "--quiet"])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0] != outs[2]


def test_cli_rejects_bad_seed():
    with pytest.raises(SystemExit):
        cli.main(["sweep", "x.ini", "--seed", "-3"])


def test_shipped_configs_present():
    names = {p.name for p in SHIPPED}
    for n in (2, 4, 8):
        assert {f"fig2_outage_N{n}.ini", f"fig3_af_N{n}.ini", f"fig4_capacity_N{n}.ini"} <= names
    assert "fig5_schemes.ini" in names


@pytest.mark.parametrize("path", SHIPPED, ids=lambda p: p.stem)
def test_shipped_config_runs(path):
    rows = run_sweep(load_config(path, trials=3000))
    assert rows
    text = csv_text(rows)
    assert "nan" not in text
