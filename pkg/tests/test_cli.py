import json

import pytest

from gtedkit.cli import main
from gtedkit.fixtures import ALPHA_PAIR


@pytest.fixture
def files(tmp_path):
    a = tmp_path / "a.lean"
    b = tmp_path / "b.lean"
    bad = tmp_path / "bad.lean"
    a.write_text(ALPHA_PAIR[0] + "\n", encoding="utf-8")
    b.write_text(ALPHA_PAIR[1] + "\n", encoding="utf-8")
    bad.write_text("theorem t (x : ", encoding="utf-8")
    data = tmp_path / "d.jsonl"
    rows = [
        {"id": "1", "nl": "", "label_fl": ALPHA_PAIR[0], "pred_fl": ALPHA_PAIR[1], "human": True},
        {"id": "2", "nl": "", "label_fl": "theorem a : 1 = 1", "pred_fl": "theorem a : (1 =", "human": False},
        {"id": "3", "nl": "", "label_fl": "theorem a : 1 = 1", "pred_fl": "theorem b : 2 = 3", "human": False},
    ]
    data.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    return {"a": str(a), "b": str(b), "bad": str(bad), "data": str(data), "dir": tmp_path}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse(capsys, files):
    code, out, _ = run(capsys, "parse", files["a"])
    assert code == 0 and "goal (app P x)" in out


def test_tree(capsys, files):
    code, out, _ = run(capsys, "tree", files["a"])
    assert code == 0 and out.splitlines()[:2] == ["0 thm", "  1 _ : _"]
    code, out, _ = run(capsys, "tree", "--oneline", files["a"])
    assert out.strip() == "thm(_ : _(x,Nat),_ _(P,x))"


def test_distance(capsys, files):
    code, out, _ = run(capsys, "distance", files["a"], files["b"])
    assert code == 0 and out.split() == ["distance", "2", "size_a", "7", "size_b", "7"]


def test_similarity(capsys, files):
    _, out, _ = run(capsys, "similarity", files["a"], files["b"], "--theta", "0.99")
    assert "similarity\t1.000000" in out and "decision\taccept" in out
    _, out, _ = run(capsys, "similarity", files["a"], files["b"], "--alpha", "off")
    assert "similarity\t0.714286" in out and "decision\taccept" in out
    _, out, _ = run(capsys, "similarity", files["a"], files["b"], "--alpha", "off", "--theta", "0.8")
    assert "decision\treject" in out
    _, out, _ = run(capsys, "similarity", files["a"], files["b"], "--alpha", "off", "--no-dumb-ops")
    assert "distance\tinf" in out and "similarity\tundefined" in out


def test_exit_codes(capsys, files):
    assert run(capsys, "tree", files["bad"])[0] == 1
    assert run(capsys, "tree", str(files["dir"] / "missing.lean"))[0] == 1
    assert run(capsys, "similarity", files["a"], files["b"], "--theta", "7")[0] == 2
    assert run(capsys, "evaluate", files["data"], "--config", str(files["dir"] / "missing.ini"))[0] == 2
    assert run(capsys, "sweep", files["data"], "--thetas", "0.5,0.2")[0] == 2


def test_evaluate(capsys, files):
    code, out, _ = run(capsys, "evaluate", files["data"])
    assert code == 0
    report = json.loads(out[: out.rindex("}") + 1])
    assert [r["id"] for r in report["records"]] == ["1", "3"]
    assert report["skipped"][0]["id"] == "2"
    assert out.rstrip().endswith("1,2,0,0,100.00%,100.00%,100.00%,1.000")


def test_evaluate_with_config_outputs(capsys, files):
    d = files["dir"]
    ini = d / "c.ini"
    ini.write_text(f"[gted]\ntheta = 0.95\nalpha = off\n[output]\nreport = {d / 'r.json'}\nsummary = {d / 's.csv'}\n")
    code, out, _ = run(capsys, "evaluate", files["data"], "--config", str(ini))
    assert code == 0
    report = json.loads((d / "r.json").read_text())
    assert report["config"]["theta"] == 0.95 and report["config"]["alpha"] == "off"
    assert (d / "s.csv").read_text().splitlines()[1] == "0,2,0,1,0/0,0.00%,66.67%,0.000"


def test_sweep(capsys, files):
    code, out, _ = run(capsys, "sweep", files["data"], "--thetas", "0:1:0.1")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 12 and lines[0].startswith("theta,tp,tn,fp,fn")
    target = files["dir"] / "sweep.csv"
    run(capsys, "sweep", files["data"], "--thetas", "0,0.5", "-o", str(target))
    assert len(target.read_text().splitlines()) == 3


def test_baselines(capsys, files):
    code, out, _ = run(capsys, "baselines", files["data"])
    assert code == 0 and out.splitlines()[1].startswith("identity,0,2,0,1")
    code, out, _ = run(capsys, "baselines", files["data"], "--metric", "bleu")
    assert code == 0 and out.splitlines()[1].startswith("bleu,")
