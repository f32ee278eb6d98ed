import json

from sipm.cli import main


def test_solve_quadratic_json(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["solve", "--model", "quadratic", "--dim", "2", "--maxiter", "30",
                 "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["runs"][0]["solver"] == "sipm"
    assert "error" not in report["runs"][0]


def test_bench_csv_to_stdout(capsys):
    code = main(["bench", "--model", "quadratic", "--dim", "2", "--maxiter", "25",
                 "--solver", "sipm,psgm", "--seeds", "0,1", "--format", "csv"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("problem,solver,seed")
    assert len(lines) == 5  # header + 2 solvers x 2 seeds


def test_estimate_subcommand(capsys):
    code = main(["estimate", "--model", "quadratic", "--dim", "3"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["constants"]["sigma_inf_bar"] == 0.0
    assert payload["constants"]["ell_f_bar"] > 0.0


def test_stochastic_epochs_budget(tmp_path):
    out = tmp_path / "r.json"
    code = main(["solve", "--model", "logistic", "--mode", "stoch", "--epochs", "1",
                 "--batch-frac", "0.05", "--dim", "4", "--samples", "40",
                 "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["config"]["resolved_maxiter"] == 20


def test_parse_check_ok(tmp_path, capsys):
    data = tmp_path / "ok.libsvm"
    data.write_text("+1 1:0.5 3:-1.2\n-1 2:1.0\n")
    assert main(["parse-check", "--train", str(data)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["train"]["m"] == 2
    assert summary["train"]["n_f"] == 3


def test_parse_check_bad_line(tmp_path, capsys):
    data = tmp_path / "bad.libsvm"
    data.write_text("+1 1:0.5\nabc 1:2\n")
    assert main(["parse-check", "--train", str(data)]) == 1
    err = capsys.readouterr().err
    assert "line 2" in err
