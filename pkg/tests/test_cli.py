import json
import subprocess
import sys

import pytest

from hkrlab.cli import main
from hkrlab.jacobi import strut, to_sexpr

THETA = "(diagram (tri v1 (h1 h2 h3)) (tri v2 (h4 h5 h6)) (edge h1 h4) (edge h2 h6) (edge h3 h5))"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_suite_innermax(capsys):
    code, out, _ = run(capsys, "suite", "run", "innermax")
    rep = json.loads(out)
    assert code == 0 and rep["summary"]["fail"] == 0 and rep["summary"]["pass"] == len(rep["cases"])
    assert set(rep) == {"suite", "seed", "cases", "summary"}
    assert all(set(c) == {"name", "status", "details", "anchor"} for c in rep["cases"])


def test_suite_all_deterministic(capsys):
    code1, out1, _ = run(capsys, "suite", "run", "all", "--seed", "7")
    code2, out2, _ = run(capsys, "suite", "run", "all", "--seed", "7")
    assert code1 == code2 == 0
    assert out1 == out2
    names = [c["name"] for c in json.loads(out1)["cases"]]
    assert names == sorted(names)


def test_unknown_suite_is_usage_error(capsys):
    with pytest.raises(SystemExit) as e:
        main(["suite", "run", "nosuch"])
    assert e.value.code == 2


def test_genus_series(capsys):
    code, out, _ = run(capsys, "genus", "series", "--name", "ahat", "--roots", "1", "--degree", "4")
    assert code == 0
    assert json.loads(out)["coefficients"] == {"0": "1/1", "2": "-1/24", "4": "7/5760"}
    code, out, _ = run(capsys, "genus", "series", "--name", "ahat", "--roots", "2", "--degree", "2",
                       "--basis", "elementary")
    assert json.loads(out)["coefficients"] == {"0,0": "1/1", "0,1": "1/12", "2,0": "-1/24"}


def test_verbitsky_dims(capsys, tmp_path):
    model = tmp_path / "k3_b3.json"
    model.write_text(json.dumps({"gram": [[1, 0, 0], [0, 1, 0], [0, 0, -1]], "n": 1}))
    code, out, _ = run(capsys, "verbitsky", "dims", "--model", str(model), "--max-degree", "4")
    assert code == 0 and json.loads(out)["dims"] == [1, 3, 1]
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "verbitsky", "dims", "--model", str(bad), "--max-degree", "4")[0] == 2
    small = tmp_path / "small.json"
    small.write_text(json.dumps({"gram": [[1, 0], [0, 1]], "n": 1}))
    code, _, err = run(capsys, "verbitsky", "dims", "--model", str(small), "--max-degree", "2")
    assert code == 1 and json.loads(err)["error"]["type"] == "domain"


def test_holonomy(capsys, tmp_path):
    code, out, _ = run(capsys, "holonomy", "solve", "--power-equation", "--kmax", "64")
    rep = json.loads(out)
    assert code == 0 and rep["solutions"] == [[1, 1]] and rep["proof_checked"]
    code, out, _ = run(capsys, "holonomy", "solve", "--n", "3")
    assert {"d": 2, "partition": [1, 1, 1]} in json.loads(out)["solutions"]
    swap = tmp_path / "swap.json"
    swap.write_text(json.dumps([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]))
    code, out, _ = run(capsys, "holonomy", "perm", "--matrix", str(swap), "--blocks", "1,1")
    assert code == 0 and json.loads(out) == {"in_normalizer": True, "rho": [1, 0], "lambda": ["1/1", "1/1"]}
    mix = tmp_path / "mix.json"
    mix.write_text(json.dumps([[1, 1, 0, 1], [0, 1, 0, 0], [0, 1, 1, 1], [0, 0, 0, 1]]))
    code, _, err = run(capsys, "holonomy", "perm", "--matrix", str(mix), "--blocks", "1,1")
    assert code == 1 and json.loads(err)["error"]["class"] == "NormalizerError"
    assert run(capsys, "holonomy", "perm", "--matrix", str(swap), "--blocks", "a,b")[0] == 2


def test_weights_and_diagrams(capsys, tmp_path):
    theta = tmp_path / "theta.sexpr"
    theta.write_text(THETA)
    code, out, _ = run(capsys, "weights", "eval", "--diagram", str(theta), "--backend", "sl2")
    assert code == 0 and json.loads(out)["value"] == [{"key": [], "value": "12/1"}]
    code, out, _ = run(capsys, "weights", "eval", "--diagram", str(theta), "--backend", '{"kind": "gl", "n": 2}')
    assert code == 0
    code, out, _ = run(capsys, "diagram", "eval", "--diagram", str(theta))
    assert json.loads(out)["degree"] == 1
    a, b = tmp_path / "a.sexpr", tmp_path / "b.sexpr"
    a.write_text(to_sexpr(strut("x", "y")))
    b.write_text(to_sexpr(strut("x", "z")))
    code, out, _ = run(capsys, "diagram", "op", "pairing", "--left", str(a), "--right", str(b), "--label", "x")
    assert code == 0 and json.loads(out)["terms"] == 1
    assert run(capsys, "diagram", "op", "union", "--left", str(a))[0] == 2
    assert run(capsys, "diagram", "op", "juxtapose", "--left", str(a), "--right", str(b), "--label", "x")[0] == 1
    broken = tmp_path / "broken.sexpr"
    broken.write_text("(diagram (tri v1 (h1 h2)))")
    assert run(capsys, "weights", "eval", "--diagram", str(broken), "--backend", "sl2")[0] == 2


def test_pair(capsys, tmp_path):
    m = tmp_path / "torus.json"
    m.write_text(json.dumps({"kind": "torus", "n": 2}))
    code, out, _ = run(capsys, "pair", "suite", "--model", str(m), "--seed", "1")
    assert code == 0 and json.loads(out)["summary"]["fail"] == 0
    cy = tmp_path / "cy.json"
    cy.write_text(json.dumps({"kind": "synthetic", "m": 3}))
    code, out, _ = run(capsys, "pair", "annihilators", "--model", str(cy))
    assert code == 0 and json.loads(out)["corner_containment"] is True


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "hkrlab", "holonomy", "solve", "--n", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["solutions"] == [{"d": 1, "partition": [1]}]
