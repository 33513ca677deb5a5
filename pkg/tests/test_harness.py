"""End-to-end checks of the command line interface via cli.main()."""

import csv
import json

import pytest

from splitgrad import cli


def _read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def _report(out_dir):
    with open(out_dir / "report.json") as fh:
        return json.load(fh)


def test_run_trajectory_and_energy_column(tmp_path):
    out = tmp_path / "o"
    rc = cli.main(["run", "--s", "0.1", "--record-energy", "--out", str(out)])
    assert rc == 0
    rep = _report(out)
    assert rep["objective"] == "f2" and rep["algorithm"] == "agm2"
    assert rep["termination"] == "tolerance_met" and rep["stop"] == "known_min_f"
    header, rows = _read_csv(out / "trajectory.csv")
    assert header == ["n", "x0", "x1", "f", "fgap", "gradnorm", "v0", "v1", "E"]
    assert len(rows) == rep["n_final"] + 1
    assert rows[0][0] == "0" and rows[0][-1] == "nan"
    # t_1 = 0, so E_1 is |x0 - x*|^2 / (2s) = 5 / 0.2
    assert float(rows[1][-1]) == 25.0
    assert float(rows[0][4]) == 3.6502815398728847 - 2.0   # f(x0) - f_min


def test_run_rerun_is_byte_identical(tmp_path):
    args = ["run", "--algorithm", "igahd", "--beta", "1.0", "--s", "0.05",
            "--max-iter", "400"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b)]) == 0
    for name in ("trajectory.csv", "report.json", "report.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_run_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"algorithm": "pim", "gamma": 1.0, "s": 0.05}))
    out = tmp_path / "o"
    rc = cli.main(["run", "--config", str(cfg), "--objective", "f1",
                   "--s", "0.02", "--out", str(out)])
    assert rc == 0
    rep = _report(out)
    assert rep["algorithm"] == "pim"
    assert rep["objective"] == "f1"
    assert rep["s"] == 0.02            # flag beats config
    assert rep["fgap_final"] <= 1e-9


def test_run_schedule_reports_admissibility(tmp_path):
    out = tmp_path / "o"
    rc = cli.main(["run", "--algorithm", "lt_s_igahd", "--schedule", "e25",
                   "--schedule-params", '{"beta": 0.1, "b": 2.0, "mu": 0.1}',
                   "--s", "0.1", "--out", str(out)])
    assert rc == 0
    rep = _report(out)
    for key in ("n1", "n2", "n_prime", "n_threshold",
                "assumption_i_holds_from", "assumption_ii_exact"):
        assert key in rep
    assert rep["assumption_ii_exact"] is True
    assert rep["n_threshold"] >= rep["n1"]


def test_run_rejects_bad_stepsize(tmp_path, capsys):
    rc = cli.main(["run", "--objective", "f1", "--s", "0.3",
                   "--out", str(tmp_path / "o")])
    assert rc == 2
    assert capsys.readouterr().err.startswith("error:")


def test_run_rejects_bad_beta(tmp_path, capsys):
    rc = cli.main(["run", "--algorithm", "lt_s_igahd", "--schedule", "e25",
                   "--schedule-params", '{"beta": 0.8, "b": 1.0, "mu": 0.0}',
                   "--s", "0.04", "--out", str(tmp_path / "o")])
    assert rc == 2
    assert "beta" in capsys.readouterr().err


def test_run_schedule_stepper_needs_schedule(tmp_path, capsys):
    rc = cli.main(["run", "--algorithm", "lt_s_igahd", "--s", "0.1",
                   "--out", str(tmp_path / "o")])
    assert rc == 2
    assert capsys.readouterr().err.startswith("error:")


def test_verify_suite_exit_codes(capsys):
    assert cli.main(["verify", "fixed-points"]) == 0
    text = capsys.readouterr().out
    assert "PASS" in text and "FAIL" not in text
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "bogus"])
    assert exc.value.code == 2


def test_table_subset_and_rerun(tmp_path):
    args = ["table", "--table", "1"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b)]) == 0
    header, rows = _read_csv(a / "tables.csv")
    assert header[:6] == ["case", "table", "group", "objective", "schedule", "mu"]
    for col in ("below_print_precision", "match_nprime", "n2_at_stop",
                "nprime_alt", "ref_n2", "match_n"):
        assert col in header
    assert rows and all(r[header.index("table")] == "1" for r in rows)
    # at s = 0.1 every run stops well above float noise but below epsilon
    assert all(r[header.index("below_print_precision")] == "false" for r in rows)
    assert all(r[header.index("match_nprime")] == "true" for r in rows)
    rep = _report(a)
    assert rep["rows"] == len(rows) and rep["tolerance_met"] == len(rows)
    assert (a / "tables.csv").read_bytes() == (b / "tables.csv").read_bytes()
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()


def test_sweep_isolates_failing_cells(tmp_path):
    args = ["sweep", "--schedule", "e25", "--s", "0.04", "--max-iter", "2000",
            "--grid", '{"beta": [0.05, 0.8], "b": [1.0]}']
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b)]) == 0
    header, rows = _read_csv(a / "sweep.csv")
    assert header[:2] == ["b", "beta"]           # grid keys, sorted
    assert len(rows) == 2
    status = {float(r[header.index("beta")]): r[header.index("status")]
              for r in rows}
    assert status == {0.05: "ok", 0.8: "error"}
    bad = next(r for r in rows if r[header.index("status")] == "error")
    assert bad[header.index("message")].startswith("ValueError")
    assert bad[header.index("n_final")] == "-1"
    rep = _report(a)
    assert rep["cells"] == 2 and rep["errors"] == 1
    assert (a / "sweep.csv").read_bytes() == (b / "sweep.csv").read_bytes()


def test_ode_compare_outputs(tmp_path):
    out = tmp_path / "o"
    rc = cli.main(["ode-compare", "--dt", "0.05", "--out", str(out)])
    assert rc == 0
    header, rows = _read_csv(out / "ode_compare.csv")
    assert header == ["dt", "sup_gap", "order"]
    assert len(rows) == 3
    assert rows[0][2] == "nan"
    rep = _report(out)
    assert 3.5 <= rep["order_1"] <= 4.5
    assert 3.5 <= rep["order_2"] <= 4.5
    assert rep["sup_gap_dt"] > rep["sup_gap_dt2"] > rep["sup_gap_dt4"]
    t_header, t_rows = _read_csv(out / "trajectory.csv")
    assert t_header == ["t", "x0", "x1", "v0", "v1", "fgap"]
    assert float(t_rows[0][0]) == 1.0
    assert float(t_rows[-1][0]) == pytest.approx(10.0)
