"""CLI behavior: commands, file emission, config round-trip, exit codes."""

import csv
import json
import math

import pytest

from icnash.cli import EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC, EXIT_OK, RunConfig, main
from icnash.presets import PRESETS


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_preset_table_matches_figure_captions():
    assert PRESETS["fig2z"].snr_fwd_db == (24.0, 3.0)
    assert PRESETS["fig2z"].inr_db == (16.0, 9.0)
    assert PRESETS["fig2z"].snr_bwd_db == (18.0, 8.0)
    assert PRESETS["fig2z"].snr_bwd_1_variants_db == (-100.0, 18.0, 50.0)
    assert PRESETS["fig3"].snr_fwd_db == (24.0, 18.0)
    assert PRESETS["fig3"].inr_db == (16.0, 10.0)
    assert PRESETS["fig3"].snr_bwd_db == (18.0, 12.0)
    assert PRESETS["fig4"].snr_fwd_db == (24.0, 18.0)
    assert PRESETS["fig4"].inr_db == (48.0, 30.0)
    assert PRESETS["fig4"].snr_bwd_db == (18.0, 12.0)
    for preset in PRESETS.values():
        assert preset.eta == 1.0


def test_region_preset_emits_three_frontiers(tmp_path, capsys):
    out = tmp_path / "fig2z"
    code, stdout, _ = run(
        capsys, "region", "--preset", "fig2z", "--grid", "4,3,3",
        "--raster-n", "96", "--out", str(out), "--dump-config",
    )
    assert code == EXIT_OK
    labels = ["bwd1_-100dB", "bwd1_18dB", "bwd1_50dB"]
    for label in labels:
        csv_path = out / f"frontier_{label}.csv"
        assert csv_path.exists()
        rows = list(csv.reader(csv_path.open()))
        assert rows[0] == ["R1", "R2"]
        assert len(rows) > 1
        r1 = [float(r[0]) for r in rows[1:]]
        r2 = [float(r[1]) for r in rows[1:]]
        assert r1 == sorted(r1)
        assert r2 == sorted(r2, reverse=True)
        cond_path = out / f"conditions_{label}.csv"
        cond_rows = list(csv.reader(cond_path.open()))
        assert cond_rows[0] == [
            "rho", "mu1", "mu2", "condition_id", "i", "c1", "c2", "rhs", "sense",
        ]
        assert len(cond_rows) == 1 + 45 * 10  # coarse 5x3x3 grid, 10 planes each
        stats = json.loads((out / f"stats_{label}.json").read_text())
        assert stats["sweep"]["n_points"] == 36
        assert "active_counts" in stats["sweep"]
    svg = (out / "region.svg").read_text()
    assert svg.count("<polyline") >= 3
    assert "bits per channel use" in svg
    assert "bwd1_50dB" in svg


def test_region_dump_config_round_trip(tmp_path, capsys):
    out = tmp_path / "rt"
    code, *_ = run(
        capsys, "region", "--preset", "fig3", "--grid", "3,3,3",
        "--raster-n", "64", "--out", str(out), "--dump-config",
        "--formats", "csv,json",
    )
    assert code == EXIT_OK
    doc = json.loads((out / "config.json").read_text())
    cfg = RunConfig.from_json_dict(doc)
    assert cfg.to_json_dict() == doc
    assert cfg.sweep.n_rho == 3
    assert cfg.preset == "fig3"
    assert cfg.formats == ("csv", "json")


def test_region_with_achievable_polygon(tmp_path, capsys):
    poly = tmp_path / "cap.csv"
    poly.write_text("R1,R2\n0,0\n3,0\n3,2\n0,2\n")
    out = tmp_path / "out"
    code, *_ = run(
        capsys, "region", "--preset", "fig2z", "--grid", "3,3,3",
        "--raster-n", "64", "--out", str(out), "--achievable", str(poly),
    )
    assert code == EXIT_OK
    svg = (out / "region.svg").read_text()
    assert "stroke-dasharray" in svg  # capacity overlay drawn dashed
    for label in ("bwd1_-100dB", "bwd1_18dB", "bwd1_50dB"):
        rows = list(csv.reader((out / f"frontier_{label}.csv").open()))[1:]
        assert all(float(r[0]) <= 3.0 + 1e-9 and float(r[1]) <= 2.0 + 1e-9 for r in rows)


def test_region_from_config_file(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(
        json.dumps(
            {
                "snr_fwd_db": [24.0, 3.0],
                "inr_db": [16.0, 9.0],
                "snr_bwd_db": [18.0, 8.0],
                "eta": 1.0,
            }
        )
    )
    out = tmp_path / "out"
    code, stdout, _ = run(
        capsys, "region", "--config", str(cfg_path), "--grid", "3,3,3",
        "--raster-n", "64", "--out", str(out),
    )
    assert code == EXIT_OK
    assert (out / "frontier_run.csv").exists()


def test_eval_table_values(capsys):
    code, stdout, _ = run(capsys, "eval", "--preset", "fig2z", "--point", "0,1,1")
    assert code == EXIT_OK
    rows = {(r[0], int(r[1])): float(r[2]) for r in csv.reader(stdout.splitlines()[1:])}
    assert rows[("a4", 1)] == pytest.approx(0.0, abs=1e-12)
    assert rows[("a3", 1)] == pytest.approx(1.155347659808195, rel=1e-11)
    assert rows[("a1", 1)] == pytest.approx(2.0356834817722766, rel=1e-11)

    code, stdout, _ = run(capsys, "eval", "--preset", "fig2z", "--point", "0,0,0")
    rows = {(r[0], int(r[1])): float(r[2]) for r in csv.reader(stdout.splitlines()[1:])}
    assert rows[("a3", 1)] == 0.0
    assert rows[("a3", 2)] == 0.0


def test_eval_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "eval", "--preset", "fig2z", "--point", "0.95,0,0")
    assert code == EXIT_NUMERIC
    assert "domain" in err.lower()


def test_eval_bad_point_exit_code(capsys):
    code, _, err = run(capsys, "eval", "--preset", "fig2z", "--point", "0,1")
    assert code == EXIT_CONFIG


def test_limits_report(capsys):
    code, stdout, _ = run(capsys, "limits", "--preset", "fig2z", "--grid", "8,5,5")
    assert code == EXIT_OK
    assert "limits: PASS" in stdout
    assert "perfect-limit pair=1" in stdout
    assert "no-feedback pair=2" in stdout


def test_tin_output(capsys):
    code, stdout, _ = run(capsys, "tin", "--preset", "fig2z")
    assert code == EXIT_OK
    rows = dict(
        (int(r[0]), float(r[1]))
        for r in csv.reader(stdout.splitlines()[1:])
        if r and r[0] in ("1", "2")
    )
    assert rows[1] == pytest.approx(0.41947262178797086, rel=1e-9)
    assert rows[2] == 0.0


def test_tin_writes_impossibility_region(tmp_path, capsys):
    out = tmp_path / "tin"
    code, stdout, _ = run(capsys, "tin", "--preset", "fig2z", "--out", str(out))
    assert code == EXIT_OK
    rows = list(csv.reader((out / "impossibility_region.csv").open()))[1:]
    xs = [float(r[0]) for r in rows]
    assert min(xs) == pytest.approx(0.41947262178797086, abs=1e-9)


def test_simcheck(capsys):
    code, stdout, _ = run(
        capsys, "simcheck", "--gains", "1,1,1,1,1,1", "-N", "200000", "--seed", "3"
    )
    assert code == EXIT_OK
    assert "simcheck: PASS" in stdout
    assert "closed_form=5" in stdout


def test_simcheck_bad_gains(capsys):
    code, _, err = run(capsys, "simcheck", "--gains", "1,1", "-N", "1000")
    assert code == EXIT_CONFIG


def test_missing_config_field_names_it(tmp_path, capsys):
    cfg_path = tmp_path / "bad.json"
    cfg_path.write_text(json.dumps({"snr_fwd_db": [24.0, 3.0], "inr_db": [16.0, 9.0]}))
    code, _, err = run(capsys, "region", "--config", str(cfg_path), "--out", str(tmp_path / "o"))
    assert code == EXIT_CONFIG
    assert "snr_bwd_db" in err


def test_unknown_preset(capsys):
    code, _, err = run(capsys, "region", "--preset", "fig9", "--out", "/tmp/x")
    assert code == EXIT_CONFIG
    assert "fig9" in err


def test_excluded_regime_config_is_numeric_error(tmp_path, capsys):
    cfg_path = tmp_path / "bad.json"
    cfg_path.write_text(
        json.dumps(
            {"snr_fwd_db": [24.0, 3.0], "inr_db": [-3.0, 9.0], "snr_bwd_db": [0.0, 0.0]}
        )
    )
    code, _, err = run(capsys, "tin", "--config", str(cfg_path))
    assert code == EXIT_NUMERIC


def test_unwritable_out_is_io_error(tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("a file, not a directory")
    code, _, err = run(
        capsys, "region", "--preset", "fig2z", "--grid", "2,2,2",
        "--raster-n", "32", "--out", str(blocker),
    )
    assert code == EXIT_IO


def test_limit_mode_config(tmp_path, capsys):
    cfg_path = tmp_path / "modes.json"
    cfg_path.write_text(
        json.dumps(
            {
                "snr_fwd_db": [24.0, 3.0],
                "inr_db": [16.0, 9.0],
                "snr_bwd_db": ["inf", "-inf"],
                "eta": 1.0,
            }
        )
    )
    code, stdout, _ = run(capsys, "eval", "--config", str(cfg_path), "--point", "0,1,1")
    assert code == EXIT_OK
    rows = {(r[0], int(r[1])): float(r[2]) for r in csv.reader(stdout.splitlines()[1:])}
    assert rows[("a3", 1)] == pytest.approx(2.1754380771243011, rel=1e-11)  # perfect limit
    assert rows[("a3", 2)] == 0.0  # no feedback


def test_gains_config_channel(tmp_path, capsys):
    cfg_path = tmp_path / "gains.json"
    cfg_path.write_text(json.dumps({"gains": [2.0, 1.0, 3.0, 2.0, 1.0, 1.0], "eta": 1.0}))
    code, stdout, _ = run(capsys, "tin", "--config", str(cfg_path))
    assert code == EXIT_OK
    val = float(stdout.splitlines()[1].split(",")[1])
    # L1 = (0.5*log2(1 + 4/(1+9)) - 1)^+ = 0
    assert val == 0.0
