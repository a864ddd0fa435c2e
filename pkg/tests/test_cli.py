import json
import subprocess
import sys

import pytest

from linkagelab.cli import dispatch


def run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(out):
    return json.loads(out)


@pytest.fixture
def files(tmp_path):
    paths = {
        "k2": "p 2 1\ne 0 1\n",
        "k3": "p 3 3\ne 0 1\ne 1 2\ne 0 2\n",
        "k4": "p 4 6\ne 0 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3\ne 2 3\n",
        "star": "p 4 3\ne 0 1\ne 0 2\ne 0 3\n",
        "p3": "p 3 2\ne 0 1\ne 1 2\n",
        "bad": "p 2 1\ne 0 q\n",
        "host": "p 6 5\ne 0 1\ne 1 2\ne 3 4\ne 4 5\ne 0 4\nc 0 0\nc 1 1\nc 2 2\nc 3 0\nc 4 1\nc 5 2\n",
        "match": "0 3\n1 2\n",
        "table": "k 3\nv 1 0 1 1 2\n",
    }
    out = {}
    for name, text in paths.items():
        p = tmp_path / name
        p.write_text(text)
        out[name] = str(p)
    return out


def test_reduce_pipeline_k3(capsys, files):
    code, out, err = run(capsys, "reduce", "pipeline", "--instance", files["k3"],
                         "--pattern", "benes:2", "--verify")
    assert code == 0
    r = report(out)["result"]
    assert r["three_colorings"] == r["three_assignments"] == r["colorful_subgraphs"] == 6
    assert "ok" in err


def test_reduce_pipeline_file_pattern(capsys, files):
    code, out, _ = run(capsys, "reduce", "pipeline", "--instance", files["k2"],
                       "--pattern", "file:" + files["p3"], "--verify")
    assert code == 0
    assert report(out)["result"]["colorful_subgraphs"] == 6


def test_flow_eps_k2(capsys, files):
    code, out, _ = run(capsys, "flow", "eps", "--graph", files["k2"], "--terminals", "0,1")
    assert code == 0
    assert report(out)["result"]["epsilon"] == "1/3"


def test_flow_eps_certify(capsys, files):
    code, out, _ = run(capsys, "flow", "eps", "--graph", files["k2"], "--terminals", "0,1",
                       "--certify")
    assert code == 0
    assert report(out)["result"]["certificate"]["certified"]


def test_linkage_certify_and_refute(capsys, files):
    code, out, _ = run(capsys, "linkage", "certify", "--graph", files["k3"], "--set", "0,1,2,3,4,5",
                       "--blowup", "2")
    assert code == 0 and report(out)["result"]["status"] == "certified"
    code, out, _ = run(capsys, "linkage", "certify", "--graph", files["star"], "--set", "0,1,2,3")
    assert code == 1
    assert report(out)["verdicts"] == {"linkage certify": False}


def test_linkage_inconclusive_exits_2(capsys, tmp_path):
    edges = [(x * 5 + y, (x + 1) * 5 + y) for x in range(4) for y in range(5)]
    edges += [(x * 5 + y, x * 5 + y + 1) for x in range(5) for y in range(4)]
    p = tmp_path / "grid.graph"
    p.write_text(f"p 25 {len(edges)}\n" + "".join(f"e {u} {v}\n" for u, v in edges))
    code, _, _ = run(capsys, "linkage", "certify", "--graph", str(p), "--set", "0,4,20,24,12,2",
                     "--budget", "1")
    assert code == 2


def test_linkage_max(capsys, files):
    code, out, _ = run(capsys, "linkage", "max", "--graph", files["p3"], "--blowup", "2")
    assert code == 0
    assert len(report(out)["result"]["set"]) == 5


def test_benes_build_and_route(capsys, files, tmp_path):
    target = tmp_path / "b.graph"
    code, out, _ = run(capsys, "benes", "build", "--level", "2", "--augment", "--out", str(target))
    assert code == 0
    rep = report(out)
    assert rep["artifacts"] == [str(target)]
    assert rep["result"]["vertices"] == 16
    assert target.read_text().startswith("p 16 ")
    code, out, _ = run(capsys, "benes", "route", "--level", "2", "--matching", files["match"],
                       "--augmented")
    assert code == 0 and report(out)["result"]["max_congestion"] == 1
    code, out, _ = run(capsys, "benes", "route", "--level", "2", "--matching", files["match"])
    assert code == 2  # not a perfect input-output matching


def test_benes_build_to_stdout(capsys):
    code, out, _ = run(capsys, "benes", "build", "--level", "1")
    assert code == 0
    assert out.splitlines()[0] == "p 4 4"


def test_random_experiment_seeded(capsys, monkeypatch):
    monkeypatch.setenv("LINKAGELAB_SEED", "17")
    code, out, _ = run(capsys, "random", "experiment", "--k", "10", "--p", "0.5", "--r", "2",
                       "--trials", "5")
    first = report(out)
    assert code == 0 and first["seed"] == 17
    code, out, _ = run(capsys, "random", "experiment", "--k", "10", "--p", "0.5", "--r", "2",
                       "--trials", "5", "--seed", "17")
    assert report(out)["result"] == first["result"]


def test_indsub_reduce(capsys, files):
    for inv in ("indicator", "connected", "table:" + files["table"]):
        code, out, _ = run(capsys, "indsub", "reduce", "--pattern", files["p3"], "--host",
                           files["host"], "--invariant", inv)
        assert code == 0, inv
        r = report(out)["result"]
        assert r["match"] and r["reduced_count"] == r["direct_count"]
    code, _, err = run(capsys, "indsub", "reduce", "--pattern", files["p3"], "--host",
                       files["host"], "--invariant", "one")
    assert code == 2 and "zero" in err


def test_format_error_exit_2(capsys, files):
    code, _, err = run(capsys, "flow", "eps", "--graph", files["bad"], "--terminals", "0,1")
    assert code == 2
    assert ":2:" in err


def test_envelope_error_exit_2(capsys, files):
    code, _, _ = run(capsys, "reduce", "pipeline", "--instance", files["k4"], "--pattern", "benes:0")
    assert code == 2


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        dispatch(["frobnicate"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        dispatch(["flow", "eps", "--nope"])
    assert info.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "linkagelab", "flow", "eps", "--graph", files["k2"],
                           "--terminals", "0,1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["epsilon"] == "1/3"
