import csv
import io
import json
import os
import subprocess
import sys

import pytest

from genbilinear import cli
from genbilinear.bessel import bessel_k

SUITE_NAMES = ["gamma_identities", "bessel_identities", "gegenbauer_identities",
               "bilinear_closed_vs_oracle", "asymptotics", "dimreg"]


def run(capsys, *argv):
    try:
        code = cli.main(list(argv))
    except SystemExit as exc:  # argparse exits directly on usage errors
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def run_proc(*argv, env=None):
    full_env = dict(os.environ, **(env or {}))
    return subprocess.run([sys.executable, "-m", "genbilinear", *argv], capture_output=True, text=True,
                          env=full_env, timeout=300)


def test_eval_examples(capsys):
    code, out, _ = run(capsys, "eval", "bessel_k", "--alpha", "0.5", "--r", "2")
    assert code == 0 and out.splitlines()[0].startswith("0.119937771968")
    code, out, _ = run(capsys, "eval", "gegen_s", "--alpha", "0", "--lambda", "1.5", "--w", "0.7")
    assert code == 0 and out.splitlines()[0] == "0.7"
    code, out, _ = run(capsys, "eval", "gen_integrate", "--example", "gamma_example")
    assert code == 0 and out.splitlines()[0].startswith("-0.577215664901")


def test_eval_metadata(capsys):
    code, out, _ = run(capsys, "eval", "macdonald_bilinear", "--alpha", "1", "--a", "1", "--b", "1")
    assert code == 0
    assert "method: closed_form" in out and "anomalous: True" in out
    code, out, _ = run(capsys, "eval", "gegenbauer_z_bilinear", "--alpha", "0", "--lambda", "0.5",
                       "--method", "oracle", "--format", "json")
    doc = json.loads(out)
    assert doc["method"] == "oracle"
    assert abs(doc["value"] - 4.1887902047863905) < 1e-8


def test_eval_round_trip(capsys):
    code, out, _ = run(capsys, "eval", "bessel_k", "--alpha", "0.3+0.2i", "--r", "1.7", "--format", "json")
    doc = json.loads(out)
    want = bessel_k(0.3 + 0.2j, 1.7)
    assert cli.parse_complex(doc["value_exact"]) == want
    # the 15-digit rendering re-parses to within a couple of ulps
    back = cli.parse_complex(doc["value_15g"])
    assert abs(back.real - want.real) <= 2 * abs(want.real) * 2.3e-16 * 10
    code, out, _ = run(capsys, "eval", "ln_gamma", "--z", "3.7")
    exact = [ln for ln in out.splitlines() if ln.strip().startswith("exact:")][0].split(":", 1)[1].strip()
    from genbilinear.gammakit import ln_gamma
    assert cli.parse_complex(exact) == ln_gamma(3.7)


def test_eval_csv(capsys):
    code, out, _ = run(capsys, "eval", "digamma", "--z", "1", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["function", "value", "value_exact", "method"]
    assert rows[1][0] == "digamma" and rows[1][1].startswith("-0.577215664901")


@pytest.mark.parametrize("text, want", [
    ("1", 1), ("-2.5", -2.5), ("1+2i", 1 + 2j), ("(1-2i)", 1 - 2j), ("3j", 3j), ("-i", -1j),
    ("1e-3-4.5e2i", 1e-3 - 450j), (" 0.5 ", 0.5),
])
def test_parse_complex(text, want):
    assert cli.parse_complex(text) == want


@pytest.mark.parametrize("text", ["", "abc", "1+", "1++2i", "nan", "inf"])
def test_parse_complex_rejects(text):
    with pytest.raises(cli.UsageError):
        cli.parse_complex(text)


def test_parse_grid():
    assert cli.parse_grid(None) is None
    assert cli.parse_grid([]) == []
    assert cli.parse_grid(["0.25:0.75:3"]) == [0.25, 0.5, 0.75]
    assert cli.parse_grid(["1", "2+i"]) == [1, 2 + 1j]
    with pytest.raises(cli.UsageError):
        cli.parse_grid(["1:2"])


def test_eval_errors(capsys):
    code, _, err = run(capsys, "eval", "bessel_k", "--alpha", "x1", "--r", "2")
    assert code == 2
    code, _, err = run(capsys, "eval", "no_such_function")
    assert code == 2
    code, _, err = run(capsys, "eval", "bessel_k", "--alpha", "0.5")
    assert code == 2 and "--r" in err
    code, _, err = run(capsys, "eval", "gamma", "--z", "-2")
    assert code == 3 and "Pole" in err
    code, _, err = run(capsys, "eval", "gegen_z", "--alpha", "0.3", "--lambda", "1", "--w", "0.5")
    assert code == 3 and "DomainError" in err


@pytest.mark.slow
def test_verify_all_suites_exit_zero():
    proc = run_proc("verify", "all")
    assert proc.returncode == 0, proc.stdout[-2000:]
    doc = json.loads(proc.stdout)
    assert doc["passed"] is True
    assert sorted(s["suite"] for s in doc["suites"]) == sorted(SUITE_NAMES)


def test_verify_report_schema(capsys):
    code, out, _ = run(capsys, "verify", "gamma_identities")
    assert code == 0
    doc = json.loads(out)
    assert doc["suite"] == "gamma_identities" and doc["passed"] is True
    assert doc["max_residual"] <= 1e-11
    for c in doc["checks"]:
        assert set(c) >= {"name", "residual", "tol", "passed"}


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "gamma_identities", "--tol", "1e-18")
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "dimreg", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["suite", "check", "residual", "tol", "passed"]
    assert all(r[4] == "True" for r in rows[1:])


def test_verify_asymptotics_rate_table(capsys):
    code, out, _ = run(capsys, "verify", "asymptotics")
    doc = json.loads(out)
    assert code == 0
    table = doc["rate_table"]
    thm45 = [r["exponent"] for r in table if r["theorem"] == "4.5"]
    assert all(-1.2 < e < -0.8 for e in thm45)


def _sweep_lines(text):
    lines = text.splitlines()
    assert lines[0].startswith("# genbilinear sweep format_version=1")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_sweep_macdonald(capsys):
    code, out, _ = run(capsys, "sweep", "macdonald_bilinear", "--alpha", "0.25:0.75:5", "--a", "1", "--b", "2")
    rows = _sweep_lines(out)
    assert code == 0 and len(rows) == 5
    assert [r["index"] for r in rows] == [str(i) for i in range(5)]
    assert all(float(r["rel_err"]) <= 1e-8 for r in rows)
    assert list(rows[0]) == list(cli.SWEEP_COLUMNS)


def test_sweep_z_anomalous_flag(capsys):
    code, out, _ = run(capsys, "sweep", "gegenbauer_z_bilinear", "--alpha", "1", "--lambda", "0.8:1.6:4")
    rows = _sweep_lines(out)
    assert code == 0 and rows and all(r["anomalous"] == "true" for r in rows)


def test_sweep_empty_grid(capsys):
    code, out, _ = run(capsys, "sweep", "macdonald_bilinear", "--alpha")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 2 and lines[1].split(",") == list(cli.SWEEP_COLUMNS)


def test_sweep_too_large(capsys):
    code, _, err = run(capsys, "sweep", "macdonald_bilinear", "--alpha", "0.1:0.9:200", "--a", "0.5:2:100")
    assert code == 2 and "limit" in err


def test_sweep_records_point_errors(capsys):
    code, out, _ = run(capsys, "sweep", "gegenbauer_z_bilinear", "--alpha", "0.5", "--lambda", "-0.5", "1")
    rows = _sweep_lines(out)
    assert code == 0
    assert rows[0]["error"] and not rows[1]["error"]


def test_sweep_json(capsys):
    code, out, _ = run(capsys, "sweep", "gegenbauer_s_bilinear", "--alpha", "0.4", "--beta", "0.5",
                       "--beta2", "1.5", "--format", "json")
    doc = json.loads(out)
    assert doc["format_version"] == 1 and doc["columns"] == list(cli.SWEEP_COLUMNS)
    assert len(doc["rows"]) == 1 and doc["rows"][0]["rel_err"] < 1e-7


def test_sweep_deterministic_across_jobs(tmp_path):
    argv = ["sweep", "macdonald_bilinear", "--alpha", "-0.7", "-0.3", "0.3", "0.7", "--a", "1", "0.5",
            "--b", "2", "1.3", "--zip", "--no-timing"]
    outs = []
    for jobs in ("1", "3", "3"):
        path = tmp_path / f"out{len(outs)}.csv"
        assert cli.main(argv + ["--jobs", jobs, "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_out_file_and_logging(tmp_path):
    path = tmp_path / "v.txt"
    proc = run_proc("eval", "gamma", "--z", "5", "--out", str(path), env={"GENINT_LOG": "DEBUG"})
    assert proc.returncode == 0 and proc.stdout == ""
    assert path.read_text().splitlines()[0] == "24"


def test_console_script_version():
    proc = run_proc("--version")
    assert proc.returncode == 0 and "0.1.0" in proc.stdout
