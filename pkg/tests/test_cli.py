import json
import subprocess
import sys

import pytest

from dedekind_todd.cli import SELFTESTS, _default_workers, build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sum(capsys):
    assert run(capsys, "sum", "--n", "2", "--r", "1,1", "--q", "3", "--p", "1")[:2] == (0, "1/18\n")
    code, out, _ = run(capsys, "sum", "--r", "1,1", "--q", "3", "--p", "1", "--kind", "t")
    assert out == "11/36\n"
    assert run(capsys, "sum", "--kind", "zagier", "--q", "3", "--p", "1")[1] == "2/3\n"
    out = run(capsys, "sum", "--r", "1,1", "--q", "3", "--p", "1", "--format", "json")[1]
    assert json.loads(out)["value"] == {"num": 1, "den": 18}


def test_denominator(capsys):
    assert run(capsys, "denominator", "--N", "4", "--n", "4")[1] == "720\n"


def test_usage_errors_name_the_flag(capsys):
    code, _, err = run(capsys, "sum", "--r", "1,1", "--q", "3")
    assert code == 1 and "--p" in err
    code, _, err = run(capsys, "sum", "--r", "1,x", "--q", "3", "--p", "1")
    assert code == 1 and "--r" in err
    code, _, err = run(capsys, "sum", "--n", "3", "--r", "1,1", "--q", "3", "--p", "1")
    assert code == 1 and "--r" in err
    assert run(capsys, "nonsense")[0] == 1


def test_todd_and_subdivide(capsys):
    out = run(capsys, "todd", "--q", "3", "--p", "1", "--N", "2", "--format", "json")[1]
    data = json.loads(out)
    assert {"index": [1, 1], "num": "11", "den": "12"} in data["terms"]
    out = run(capsys, "subdivide", "--cone", '{"generators": [[1, 0], [1, 2]]}', "--vector", "1,1")[1]
    chain = json.loads(out)["chain"]
    assert {"coeff": 1, "generators": [[1, 0], [1, 1]]} in chain
    assert {"coeff": 1, "generators": [[1, 1], [1, 2]]} in chain
    out = json.loads(run(capsys, "subdivide", "--q", "5", "--p", "2,3")[1])
    assert len(out["outer"]) == 3
    code, _, err = run(capsys, "subdivide", "--cone", '{"generators": [[2, 0], [1, 2]]}')
    assert code == 1 and "--cone" in err


def test_fr_poly(capsys):
    assert run(capsys, "fr-poly", "--r", "1,1")[1] == "p1 + p1^-1\n"
    data = json.loads(run(capsys, "fr-poly", "--r", "1,1", "--format", "json")[1])
    assert data["vars"] == ["p1"]


def test_verify_congruence(capsys, tmp_path):
    code, out, _ = run(capsys, "verify-congruence", "--n", "2", "--rmax", "4", "--qmax", "12")
    assert code == 0
    lines = [json.loads(l) for l in out.splitlines()]
    assert lines and all(l["holds"] for l in lines)
    code, out, _ = run(capsys, "verify-congruence", "--r", "1,1", "--q", "3", "--p", "1", "--kind", "s")
    assert json.loads(out)["lhs"] == 2


def test_verify_congruence_deterministic_across_workers(capsys, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(["verify-congruence", "--n", "3", "--rmax", "5", "--qmax", "9", "-o", str(a)]) == 0
    assert main(["verify-congruence", "--n", "3", "--rmax", "5", "--qmax", "9", "-o", str(b),
                 "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_failed_congruence_exit_code(capsys, monkeypatch):
    from dedekind_todd import congruence
    real = congruence.evaluate_mod
    monkeypatch.setattr(congruence, "evaluate_mod", lambda poly, p, q: (real(poly, p, q) + 1) % q)
    code, out, err = run(capsys, "verify-congruence", "--r", "2,2", "--q", "5", "--p", "2", "--kind", "s")
    assert code == 2 and "failed" in err


def test_ict(capsys):
    assert run(capsys, "ict", "--expr", "1/(x - y)", "--vars", "x,y", "--exps=-1,0")[1] == "1\n"
    assert run(capsys, "ict", "--expr", "1/(x - y)", "--vars", "y,x", "--exps=-1,0")[1] == "-1\n"
    assert run(capsys, "ict", "--expr", "1/(x - y)", "--vars", "x,y", "--exps", "-1,0")[1] == "1\n"
    assert run(capsys, "ict", "--expr", "(x^2*y + 3)/((1 - x)*(2 + y))", "--vars", "x,y")[1] == "3/2\n"
    out = run(capsys, "ict", "--expr", "1/(3 + x)", "--vars", "x", "--ring", "ZZ/q", "--modulus", "6",
              "--check")[1]
    assert out == "inadmissible\n"
    code, _, err = run(capsys, "ict", "--expr", "1/(2 - 2*x)", "--vars", "x", "--ring", "ZZ/q",
                       "--modulus", "4")
    assert code == 1 and "--expr" in err


def test_expsum_csv(capsys):
    out = run(capsys, "expsum", "--r", "1,1", "--primes", "--qmax", "11")[1].splitlines()
    assert out[0] == "q,re,im,abs,bound"
    assert [row.split(",")[0] for row in out[1:]] == ["2", "3", "5", "7", "11"]
    out = run(capsys, "expsum", "--poly", "p1 + p1^-1", "--vars", "p1", "--q", "7")[1].splitlines()
    assert out[1].startswith("7,2.0489")


def test_equidist_csv(capsys):
    code, out, err = run(capsys, "equidist", "--r", "1,1", "--x", "60", "--mode", "histogram", "--bins", "4")
    rows = out.splitlines()
    assert rows[0] == "bin_lo,bin_hi,count" and rows[1].startswith("0,1/4,")
    assert "star_discrepancy" in err
    out = run(capsys, "equidist", "--r", "1,1", "--x", "60", "--k", "2")[1].splitlines()
    assert out[0] == "x,k,re,im,abs,count"


def test_roots(capsys):
    code, out, _ = run(capsys, "roots-modpk", "--coeffs", "0,0,1", "--prime", "3", "--k", "2")
    assert code == 0 and json.loads(out)["count"] == 3
    code, out, _ = run(capsys, "roots-modpk", "--coeffs", "0,-2,1", "--prime", "2", "--k", "3")
    assert code == 2 and json.loads(out)["within"] is False
    code, _, err = run(capsys, "roots-modpk", "--coeffs", "1,3", "--prime", "3", "--k", "2")
    assert code == 1 and "--coeffs" in err


@pytest.mark.parametrize("command", sorted(SELFTESTS))
def test_selftests(capsys, command):
    code, out, _ = run(capsys, command, "--selftest")
    assert code == 0 and "FAIL" not in out


def test_config_file_and_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep\nn = 2\nr=1,1\nq=5\np=2\nkind=t\n")
    assert run(capsys, "sum", "--config", str(cfg))[1] == "1/4\n"          # t_{1,1}(5;2) = 0 + 1/4
    assert run(capsys, "sum", "--config", str(cfg), "--kind", "s")[1] == "0\n"
    bad = tmp_path / "bad.cfg"
    bad.write_text("just words\n")
    code, _, err = run(capsys, "sum", "--config", str(bad))
    assert code == 1 and "--config" in err


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv("DEDEKIND_TODD_WORKERS", "3")
    assert _default_workers() == 3
    assert build_parser().parse_args(["denominator"]).workers == 3
    monkeypatch.setenv("DEDEKIND_TODD_WORKERS", "junk")
    assert _default_workers() == 1


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "dedekind_todd.cli", "denominator", "--N", "2", "--n", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "12\n"


def test_negative_coefficients_as_separate_token(capsys):
    code, out, _ = run(capsys, "roots-modpk", "--coeffs", "-1,0,1", "--prime", "2", "--k", "3")
    data = json.loads(out)
    assert data["count"] == 4 and data["refined_bound"] == 4
    assert code == 2  # exceeds c p^(n - ceil(n/l))


def test_closed_pipe_is_not_an_error():
    cmd = (f"{sys.executable} -m dedekind_todd.cli verify-congruence --n 2 --qmax 60 --rmax 6 | head -n 1")
    proc = subprocess.run(["bash", "-o", "pipefail", "-c", cmd], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "Traceback" not in proc.stderr
