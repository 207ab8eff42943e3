import json
from pathlib import Path

import pytest

from f2derived import cli, unstable
from f2derived.rchain import concentrated
from f2derived.restricted import direct_sum, free

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


def test_decompose(capsys):
    assert run(capsys, "decompose", DATA / "f2_plus_t12.json")[:2] == (0, "F(2) + T(1,2)")
    assert run(capsys, "decompose", DATA / "empty.json")[:2] == (0, "0")


def test_decompose_json_format(capsys):
    code, out, _ = run(capsys, "decompose", DATA / "f2_plus_t12.json", "--format", "json")
    assert code == 0
    assert json.loads(out)["summands"] == ["F(2)", "T(1,2)"]


def test_bad_input_names_degree(capsys):
    code, _, err = run(capsys, "decompose", DATA / "bad_phi_shape.json")
    assert code == 2 and "degree 1" in err


def test_missing_and_malformed_files(capsys, tmp_path):
    assert run(capsys, "decompose", tmp_path / "nope.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    code, _, err = run(capsys, "decompose", bad)
    assert code == 2 and "line 1" in err


def test_chain_decompose(capsys):
    code, out, _ = run(capsys, "chain-decompose", DATA / "c11_plus_sigma1_f3.json")
    assert (code, out) == (0, "S^0C(1,1) + S^1C(3)")
    assert run(capsys, "chain-decompose", DATA / "zero_complex.json")[:2] == (0, "0")


def test_pi_u_with_oracle(capsys):
    code, out, _ = run(capsys, "pi-u", DATA / "sigma1_c11.json", "--max-homotopy", "3", "--oracle")
    assert code == 0 and out.splitlines()[-1] == "MATCH"
    assert out.splitlines()[0].split() == ["t\\q", "0", "1", "2", "3", "4"]


def test_pi_u_bounds(capsys):
    code, _, err = run(capsys, "pi-u", DATA / "sigma1_c11.json", "--max-internal", "9")
    assert code == 2 and "N=4" in err
    code, _, _ = run(capsys, "pi-u", DATA / "sigma1_c11.json", "--oracle", "--max-homotopy", "3", "--levels", "2")
    assert code == 2


def test_pi_u_mismatch_exit_code(capsys, monkeypatch):
    real = unstable.pi_U_closed_form

    def off_by_one(C, T, Q, *a, **kw):
        res = real(C, T, Q, *a, **kw)
        res.dims[(0, 0)] += 1
        return res

    monkeypatch.setattr(unstable, "pi_U_closed_form", off_by_one)
    code, out, _ = run(capsys, "pi-u", DATA / "sigma1_c11.json", "--max-homotopy", "2", "--oracle")
    assert code == 1 and "MISMATCH at (t,q)=(0, 0)" in out


def test_size_guardrail(capsys, tmp_path):
    C = concentrated(direct_sum([free(0, 2)] * 21), 0)
    path = tmp_path / "big.json"
    path.write_text(json.dumps(C.to_json()))
    code, _, err = run(capsys, "pi-u", path, "--max-homotopy", "1")
    assert code == 3 and "size limit" in err


def test_e_infinity(capsys):
    code, out, _ = run(capsys, "e-infinity", DATA / "sigma1_c11.json", "--max-homotopy", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["dims"] == {"(0,0,0)": 1, "(1,1,1)": 1, "(1,2,2)": 1}


def test_listings(capsys):
    code, out, _ = run(capsys, "qx", "--max-degree", "4")
    assert code == 0
    assert [line.strip() for line in out.splitlines()] == ["1  v", "2  {0}(v)", "3  {1}(v)", "4  {0,0}(v)", "4  {2}(v)"]
    code, out, _ = run(capsys, "e2", "--max-degree", "4")
    assert [line.strip() for line in out.splitlines()] == ["1  v", "2  [0](v)", "3  [1](v)", "4  [2](v)", "4  d1 [0](v)"]
    assert run(capsys, "qx")[0] == 2
    assert run(capsys, "qx", "--max-degree", "4", "--degrees", "0")[0] == 2


def test_collapse(capsys):
    code, out, _ = run(capsys, "collapse", "--degrees", "1", "--max-degree", "20")
    assert code == 0 and out.splitlines()[0] == "EQUAL through degree 20"
    code, out, _ = run(capsys, "collapse", "--degrees", "1", "2", "--max-degree", "16", "--format", "json")
    assert json.loads(out)["series_equal"] is True


def test_adem(capsys):
    assert run(capsys, "adem", "3", "4")[:2] == (0, "d5 d2")
    assert run(capsys, "adem", "2", "2")[:2] == (0, "0")
    assert run(capsys, "adem", "0", "1")[0] == 2


def test_selftest_subset(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "4", "9")
    assert code == 0
    assert any(line.startswith("[PASS] 4.") for line in out.splitlines())
    assert run(capsys, "selftest", "--only", "12")[0] == 2


def test_usage_error():
    with pytest.raises(SystemExit):
        cli.main(["no-such-command"])


def test_selftest_golden_snapshots(capsys, tmp_path):
    assert run(capsys, "selftest", "--only", "4", "9", "--golden", tmp_path)[0] == 0
    assert (tmp_path / "criterion_9.json").exists()
    assert run(capsys, "selftest", "--only", "4", "9", "--golden", tmp_path)[0] == 0
    (tmp_path / "criterion_9.json").write_text('{"1": [0]}')
    code, out, _ = run(capsys, "selftest", "--only", "4", "9", "--golden", tmp_path)
    assert code == 1 and "[GOLDEN] criterion 9 differs" in out
