"""CLI behavior: schemas, exit codes, manifests, reproducibility."""

import csv
import json

import pytest

from prismconn.cli import main
from prismconn.validation import CHECK_NAMES, run_checks


def run_cli(args):
    return main(args)


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_mass_siso_value(tmp_path):
    out = tmp_path / "mass.csv"
    rc = run_cli(
        ["mass", "--model", "siso", "--d", "2", "--eta", "2", "--beta", "1",
         "--output", str(out)]
    )
    assert rc == 0
    header, rows = read_csv(out)
    assert header[:5] == ["model", "k", "d", "eta", "beta"]
    assert len(rows) == 1
    closed = float(rows[0][header.index("closed_form")])
    assert closed == pytest.approx(0.5, rel=1e-12)


def test_mass_mimo_value_and_json(tmp_path):
    out = tmp_path / "mass.json"
    rc = run_cli(
        ["mass", "--model", "mimo", "--n", "2", "--d", "3", "--eta", "2",
         "--beta", "1", "--format", "json", "--output", str(out)]
    )
    assert rc == 0
    payload = json.loads(out.read_text())
    row = payload["rows"][0]
    assert row["closed_form"] == pytest.approx(2.3912381435122416, rel=1e-10)
    assert abs(row["closed_form"] - row["quadrature"]) < 1e-6


def test_mass_sweep_rows(tmp_path):
    out = tmp_path / "mass.csv"
    rc = run_cli(
        ["mass", "--model", "simo", "--m", "1..4", "--d", "3",
         "--eta", "2,3,4", "--beta", "1", "--output", str(out)]
    )
    assert rc == 0
    _, rows = read_csv(out)
    assert len(rows) == 12  # 4 orders x 3 exponents


def test_pfc_table(tmp_path):
    out = tmp_path / "pfc.csv"
    rc = run_cli(
        ["pfc", "--prism", "house", "--L", "7", "--beta", "1",
         "--rho", "0.5:0.7:0.1", "--output", str(out)]
    )
    assert rc == 0
    header, rows = read_csv(out)
    assert header[0] == "rho"
    assert {"p_fc", "p_out", "in_regime", "p_fc_bulk", "p_fc_bulk_faces",
            "p_fc_bulk_faces_edges", "term_corners"} <= set(header)
    assert len(rows) == 3
    p_fc = float(rows[0][header.index("p_fc")])
    p_out = float(rows[0][header.index("p_out")])
    assert p_fc == pytest.approx(1.0 - p_out, rel=1e-12)


def test_pfc_single_point_and_low_density_flag(tmp_path):
    out = tmp_path / "pfc.csv"
    rc = run_cli(
        ["pfc", "--prism", "house", "--L", "7", "--beta", "1",
         "--rho", "1e-9", "--output", str(out)]
    )
    assert rc == 0
    header, rows = read_csv(out)
    assert len(rows) == 1
    assert rows[0][header.index("in_regime")] == "false"
    # with a vanishing density prefactor only the bulk survives: P_fc -> 1
    assert float(rows[0][header.index("p_fc_bulk")]) == pytest.approx(1.0, abs=1e-6)


def test_pfc_json_has_feature_table(tmp_path):
    out = tmp_path / "pfc.json"
    rc = run_cli(
        ["pfc", "--prism", "house", "--L", "7", "--beta", "1", "--rho", "0.8",
         "--format", "json", "--output", str(out)]
    )
    assert rc == 0
    payload = json.loads(out.read_text())
    table = payload["feature_table"]
    classes = {row["class"] for row in table}
    assert classes == {"corners", "edges", "faces", "bulk"}
    assert sum(r["multiplicity"] for r in table if r["class"] == "corners") == 10
    assert sum(r["multiplicity"] for r in table if r["class"] == "edges") == 15


def test_pfc_capability_exit_code(tmp_path):
    rc = run_cli(
        ["pfc", "--prism", "house", "--L", "7", "--beta", "1", "--eta", "3",
         "--rho", "0.8", "--output", str(tmp_path / "x.csv")]
    )
    assert rc == 3


def test_usage_errors():
    assert run_cli(["mass", "--model", "warp", "--output", "/dev/null"]) == 2
    assert run_cli(["pfc", "--prism", "house", "--rho", "0:1:-1"]) == 2
    assert run_cli(["simulate", "--prism", "house", "--rho", "0.5"]) == 2  # no seed
    assert run_cli(["nonsense"]) == 2


def test_simulate_reproducible(tmp_path):
    args = ["simulate", "--prism", "house", "--L", "7", "--beta", "1",
            "--rho", "0.5:0.6:0.1", "--trials", "30", "--seed", "42"]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(args + ["--output", str(out1)]) == 0
    assert run_cli(args + ["--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    header, rows = read_csv(out1)
    assert header == ["rho", "n_nodes", "trials", "p_fc_hat", "ci_low",
                      "ci_high", "mean_isolated", "p_fc_analytic"]
    assert len(rows) == 2
    for row in rows:
        assert 0.0 <= float(row[3]) <= 1.0
        assert float(row[4]) <= float(row[3]) <= float(row[5])


def test_simulate_single_trial(tmp_path):
    out = tmp_path / "one.csv"
    rc = run_cli(
        ["simulate", "--prism", "cube", "--L", "4", "--beta", "1",
         "--rho", "0.2", "--trials", "1", "--seed", "7", "--output", str(out)]
    )
    assert rc == 0
    header, rows = read_csv(out)
    assert len(rows) == 1
    low, high = float(rows[0][4]), float(rows[0][5])
    assert 0.0 <= low <= high <= 1.0


def test_field_square(tmp_path):
    out = tmp_path / "field.csv"
    args = ["field", "--square", "10", "--rho", "0.3", "--model", "siso",
            "--beta", "1", "--eta", "2", "--grid", "21", "--seed", "5",
            "--output", str(out)]
    assert run_cli(args) == 0
    header, rows = read_csv(out)
    assert header == ["x", "y", "value"]
    assert len(rows) == 21 * 21
    values = [float(r[2]) for r in rows]
    assert all(0.0 <= v <= 1.0 for v in values)
    out2 = tmp_path / "field2.csv"
    assert run_cli(args[:-1] + [str(out2)]) == 0
    assert out.read_bytes() == out2.read_bytes()


def test_field_zero_density_is_uniform_zero(tmp_path):
    out = tmp_path / "field0.csv"
    rc = run_cli(
        ["field", "--square", "10", "--rho", "0.001", "--model", "siso",
         "--beta", "1", "--eta", "2", "--grid", "11", "--seed", "5",
         "--output", str(out)]
    )
    assert rc == 0
    _, rows = read_csv(out)
    assert all(float(r[2]) == 0.0 for r in rows)


def test_field_prism_3d(tmp_path):
    out = tmp_path / "field3.csv"
    rc = run_cli(
        ["field", "--prism", "cube", "--L", "3", "--rho", "0.5",
         "--model", "mimo", "--n", "2", "--beta", "1", "--eta", "2",
         "--grid", "6", "--seed", "11", "--output", str(out)]
    )
    assert rc == 0
    header, rows = read_csv(out)
    assert header == ["x", "y", "z", "value"]
    assert len(rows) == 6 * 6 * 6  # cube: every lattice point is inside


def test_manifest_round_trip(tmp_path):
    out1 = tmp_path / "sim.csv"
    manifest = tmp_path / "sim.manifest.json"
    rc = run_cli(
        ["simulate", "--prism", "house", "--L", "7", "--beta", "1",
         "--rho", "0.5", "--trials", "25", "--seed", "9",
         "--output", str(out1), "--manifest", str(manifest)]
    )
    assert rc == 0
    payload = json.loads(manifest.read_text())
    assert payload["command"] == "simulate"
    assert payload["parameters"]["seed"] == 9
    out2 = tmp_path / "sim2.csv"
    rc = run_cli(["simulate", "--config", str(manifest), "--output", str(out2)])
    assert rc == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_config_flags_win(tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"model": "siso", "d": 2, "eta": "2", "beta": 1.0}))
    out = tmp_path / "m.csv"
    rc = run_cli(
        ["mass", "--config", str(config), "--beta", "4", "--output", str(out)]
    )
    assert rc == 0
    header, rows = read_csv(out)
    assert float(rows[0][header.index("beta")]) == 4.0
    # closed form scales as 1/beta for d = 2, eta = 2
    assert float(rows[0][header.index("closed_form")]) == pytest.approx(
        0.125, rel=1e-12
    )


def test_default_manifest_alongside_output(tmp_path):
    out = tmp_path / "mass.csv"
    rc = run_cli(
        ["mass", "--model", "siso", "--d", "2", "--eta", "2", "--beta", "1",
         "--output", str(out)]
    )
    assert rc == 0
    manifest = tmp_path / "mass.csv.manifest.json"
    assert manifest.exists()
    assert json.loads(manifest.read_text())["command"] == "mass"


def test_validate_subset_and_exit_codes(tmp_path):
    out = tmp_path / "checks.csv"
    rc = run_cli(
        ["validate", "--check", "union-find,exact-oracle", "--output", str(out)]
    )
    assert rc == 0
    header, rows = read_csv(out)
    assert [r[0] for r in rows] == ["union-find", "exact-oracle"]
    assert all(r[1] == "PASS" for r in rows)


def test_validate_perturb_negative_control(tmp_path):
    rc = run_cli(
        ["validate", "--check", "exponent-rates", "--perturb",
         "--output", str(tmp_path / "p.csv")]
    )
    assert rc == 4
    header, rows = read_csv(tmp_path / "p.csv")
    assert rows[0][1] == "FAIL"


def test_validate_unknown_check():
    assert run_cli(["validate", "--check", "no-such-check"]) == 2


def test_run_checks_registry():
    assert set(CHECK_NAMES) == {
        "cross-form-h", "mass-oracle", "exponent-rates", "scaling-slopes",
        "union-find", "exact-oracle",
    }
    results = run_checks(["exponent-rates"])
    assert results[0].passed


def test_stdout_output(capsys):
    rc = run_cli(["mass", "--model", "siso", "--d", "2", "--eta", "2", "--beta", "1"])
    assert rc == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("model,k,d,eta,beta")
