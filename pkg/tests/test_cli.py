import json
import subprocess
import sys

import pytest

from perispec import cli
from perispec.fixtures import DESCRIPTORS


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def fixdir(tmp_path, capsys):
    assert cli.main(["fixtures", str(tmp_path)]) == 0
    capsys.readouterr()
    return tmp_path


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_classify(fixdir, capsys):
    code, out, _ = run(["classify", str(fixdir / "descriptor_semi_jordan_k3.json")], capsys)
    assert code == 0
    assert json.loads(out) == {"width": 7, "p": 4, "semi_jordan": True, "quasi_semi_jordan": True}


def test_fixtures_written(fixdir):
    names = {p.name for p in fixdir.iterdir()}
    assert "embedding_m2_m3.json" in names
    assert {f"descriptor_{k}.json" for k in DESCRIPTORS} <= names


def test_product_eval(tmp_path, capsys):
    d = write(tmp_path, "d.json", {"k": 2, "seq": [2, 1, 2]})
    a = {"n": 2, "data": [[0, 0], [1, 0], [0, 0], [0, 0]]}
    b = {"n": 2, "data": [[0, 0], [0, 0], [1, 0], [0, 0]]}
    ops = write(tmp_path, "ops.json", [a, b])
    code, out, _ = run(["product", "eval", "--descriptor", d, "--ops", ops], capsys)
    assert code == 0
    res = json.loads(out)
    # B A B = E21 E12 E21 = E21
    assert res["product"]["data"][2] == [1.0, 0.0]
    assert res["peripheral_spectrum"]["points"] == [[0.0, 0.0]]


def test_rank_test(tmp_path, capsys):
    swap = write(tmp_path, "a.json", {"n": 2, "data": [[0, 0], [1, 0], [1, 0], [0, 0]]})
    code, out, _ = run(["rank-test", "--matrix", swap, "--r", "1", "--s", "1"], capsys)
    res = json.loads(out)
    assert code == 0 and res["rank_one"] is False and res["case"] == "Case3"
    assert len(res["spectrum"]) == 2
    one = write(tmp_path, "b.json", {"n": 2, "data": [[1, 0], [1, 0], [1, 0], [1, 0]]})
    code, out, _ = run(["rank-test", "--matrix", one, "--r", "2", "--s", "1"], capsys)
    assert json.loads(out)["rank_one"] is True


def test_map_verify_and_recover(fixdir, capsys):
    emb = str(fixdir / "embedding_m2_m3.json")
    d = str(fixdir / "descriptor_jordan_semi_triple.json")
    code, out, _ = run(["map", "verify", "--map", emb, "--descriptor", d, "--trials", "40"], capsys)
    assert code == 0 and json.loads(out)["preserves"] is True
    code, out, _ = run(["map", "recover", "--map", emb, "--model", "banach", "--m", "3"], capsys)
    assert code == 0 and json.loads(out)["form"] == "NonStandard"


def test_map_verify_failure_exit(tmp_path, fixdir, capsys):
    from perispec.recovery import standard_map
    import numpy as np

    t = np.array([[1, 2, 0], [0, 1, 1], [1, 0, 1]], dtype=complex)
    m = write(tmp_path, "t.json", standard_map(t, transpose=True).to_json())
    d = str(fixdir / "descriptor_non_quasi_k3.json")
    code, out, _ = run(["map", "verify", "--map", m, "--descriptor", d], capsys)
    res = json.loads(out)
    assert code == 1 and res["preserves"] is False and len(res["counterexample"]) == 3


def test_fuzz_determinism(tmp_path, capsys):
    argv = ["fuzz", "--seed", "5", "--trials", "4", "--max-dim", "3"]
    code1, out1, _ = run(argv + ["--out", str(tmp_path / "a.json")], capsys)
    code2, out2, _ = run(argv + ["--out", str(tmp_path / "b.json")], capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_fuzz_tiny_tol_fails(capsys):
    code, out, _ = run(["fuzz", "--seed", "1", "--tol", "1e-30", "--trials", "3", "--max-dim", "3"], capsys)
    res = json.loads(out)
    assert code == 1
    assert any(p.get("tolerance_induced") for p in res["properties"])


@pytest.mark.parametrize(
    "content, kind",
    [
        ("{", "parse"),
        ('{"k": 2, "seq": [1, 1, 2, 2]}', "NoUniqueOccurrence"),
        ('{"k": 3, "seq": [1, 2, 2]}', "MissingIndex"),
        ('{"k": 2, "seq": [1, 5]}', "OutOfRange"),
    ],
)
def test_input_errors(tmp_path, capsys, content, kind):
    path = tmp_path / "d.json"
    path.write_text(content)
    code, out, err = run(["classify", str(path)], capsys)
    assert code == 2 and out == ""
    lines = err.strip().splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["error"] == kind


def test_missing_file_and_bad_matrix(tmp_path, capsys):
    code, _, err = run(["classify", str(tmp_path / "nope.json")], capsys)
    assert code == 2 and json.loads(err)["error"] == "io"
    bad = write(tmp_path, "m.json", {"n": 2, "data": [[1, 0]]})
    code, _, err = run(["rank-test", "--matrix", bad, "--r", "1", "--s", "1"], capsys)
    assert code == 2 and json.loads(err)["error"] == "InvalidMatrix"
    zero = write(tmp_path, "z.json", {"n": 2, "data": [[0, 0]] * 4})
    code, _, err = run(["rank-test", "--matrix", zero, "--r", "1", "--s", "1"], capsys)
    assert code == 2 and json.loads(err)["error"] == "ZeroOperator"


def test_dimension_mismatch(tmp_path, capsys):
    d = write(tmp_path, "d.json", {"k": 2, "seq": [1, 2]})
    ops = write(tmp_path, "o.json", [{"n": 1, "data": [[1, 0]]}, {"n": 2, "data": [[1, 0]] * 4}])
    code, _, err = run(["product", "eval", "--descriptor", d, "--ops", ops], capsys)
    assert code == 2 and json.loads(err)["error"] == "DimensionMismatch"


def test_usage_error(capsys):
    code, _, err = run(["rank-test"], capsys)
    assert code == 2
    lines = err.strip().splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["error"] == "usage"
    code, _, err = run(["map", "recover", "--map", "x", "--m", "two"], capsys)
    assert code == 2 and json.loads(err)["error"] == "usage"


def test_module_entry_point(fixdir):
    proc = subprocess.run(
        [sys.executable, "-m", "perispec.cli", "classify", str(fixdir / "descriptor_usual_product.json")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["quasi_semi_jordan"] is True
