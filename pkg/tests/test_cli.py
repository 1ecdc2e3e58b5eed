import json
import os
import shutil
import subprocess
import sys

import pytest

from eiscong.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_lvalue_anchor(capsys):
    code, out, _ = run(capsys, "lvalue", "--d", "2", "--cond", "5", "--char-index", "1", "--s", "-1")
    assert code == 0
    assert out.strip() == "28/5"


def test_lvalue_numeric_json(capsys):
    code, out, _ = run(capsys, "lvalue", "--d", "2", "--cond", "5", "--char-index", "1", "--s", "-1", "--numeric", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["value"] == "2:[28]/5" and data["pretty"] == "28/5"
    assert data["difference"] < 1e-8
    assert complex(data["numeric"]).real == pytest.approx(5.6)


def test_eis_bound_one(capsys):
    code, out, _ = run(capsys, "eis", "--d", "2", "--phi", "chi5", "--psi", "triv", "--bound", "1")
    assert code == 0
    assert out == "O_F\t1\n"


def test_eis_lines(capsys):
    code, out, _ = run(capsys, "eis", "--d", "2", "--bound", "25")
    lines = out.strip().split("\n")
    assert code == 0 and lines[0] == "O_F\t1"
    assert "[[5,0],[0,5]]/1\t25" in lines


def test_criterion_table(capsys):
    code, out, _ = run(capsys, "criterion", "--d", "2", "--level", "5", "--p", "7")
    # condition (iii) fails as literally stated, so the run is a verification failure
    assert code == 1
    for tag in ("p_coprime_6n", "i_unit_index", "ii_unit_norm", "iii_eigenvalue_vs_norm", "iv_c_constant"):
        assert tag in out
    assert "25 == 25 mod 7" in out
    assert "discrepancy" in out


def test_criterion_json(capsys):
    code, out, _ = run(capsys, "criterion", "--d", "2", "--level", "5", "--p", "7", "--json")
    data = json.loads(out)
    assert data["schema"] == "eiscong.report.v1"
    assert len(data["rows"]) == 5


def test_check_congruence(capsys):
    code, out, _ = run(capsys, "check-congruence", "--d", "2", "--p", "7", "--bound", "100")
    assert code == 0
    code, out, _ = run(capsys, "check-congruence", "--d", "2", "--p", "11", "--bound", "100", "--json")
    assert code == 1
    data = json.loads(out)
    assert data["verdict"] is False and data["first_mismatch"]["norm"] == 2


def test_c_constant_cmd(capsys):
    code, out, _ = run(capsys, "c-constant", "--d", "2", "--p", "7", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["valuation"] == 1 and data["pretty"] == "7/5000"


def test_field_and_gauss(capsys):
    code, out, _ = run(capsys, "field", "--d", "2", "--json")
    assert code == 0 and json.loads(out)["disc"] == 8
    code, out, _ = run(capsys, "gauss-sum", "--d", "2", "--cond", "5", "--char-index", "1")
    assert code == 0 and "5" in out


def test_ray_class_and_const_terms(capsys):
    code, out, _ = run(capsys, "ray-class", "--d", "2", "--modulus", "5", "--json")
    assert code == 0
    code, out, _ = run(capsys, "const-terms", "--d", "2", "--p", "7")
    assert code == 0 and "7/5000" in out


def test_special_value_cmd(capsys):
    code, out, _ = run(capsys, "special-value", "--d", "2", "--max-norm", "20", "--p", "11", "--json")
    assert code == 0
    code2, out2, _ = run(capsys, "special-value", "--d", "2", "--max-norm", "20", "--p", "11", "--json")
    assert out2 == out


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "lvalue", "--d", "2")[0] == 2
    assert run(capsys, "lvalue", "--d", "2", "--cond", "5", "--char-index", "9", "--s", "-1")[0] == 2


def test_library_error_exit(capsys):
    code, _, err = run(capsys, "field", "--d", "4")
    assert code == 1 and "NotSquarefree" in err


def test_cache_cmd(capsys):
    run(capsys, "special-value", "--d", "2", "--max-norm", "10")
    code, out, _ = run(capsys, "cache", "list", "--json")
    assert code == 0
    keys = json.loads(out)["keys"]
    assert keys
    code, out, _ = run(capsys, "cache", "show", keys[0])
    assert code == 0 and out.strip()
    assert run(capsys, "cache", "show", "absent-key")[0] == 1
    code, out, _ = run(capsys, "cache", "clear")
    assert code == 0


@pytest.mark.property
@pytest.mark.skipif(shutil.which("eiscong") is None, reason="console script not installed")
def test_cli_determinism(tmp_path):
    env = dict(os.environ, EISCONG_CACHE_DIR=str(tmp_path))
    argv = ["eiscong", "special-value", "--d", "2", "--max-norm", "20", "--p", "7"]
    outs = [subprocess.run(argv, env=env, capture_output=True, check=False) for _ in range(3)]
    assert all(o.returncode == outs[0].returncode for o in outs)
    assert outs[1].stdout == outs[2].stdout
    assert outs[0].stdout == outs[1].stdout
    argv = ["eiscong", "criterion", "--d", "2", "--level", "5", "--p", "7", "--json"]
    a = subprocess.run(argv, env=env, capture_output=True)
    b = subprocess.run(argv, env=env, capture_output=True)
    assert a.stdout == b.stdout and a.returncode == b.returncode == 1


def test_module_entry(tmp_path):
    env = dict(os.environ, EISCONG_CACHE_DIR=str(tmp_path))
    r = subprocess.run([sys.executable, "-m", "eiscong.cli", "eis", "--d", "2", "--bound", "1"],
                       env=env, capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "O_F\t1\n"
