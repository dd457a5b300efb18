import json
import subprocess
import sys

import numpy as np
import pytest

from codeclass import bounds as bnd
from codeclass.cli import main
from codeclass.db import CodeDB
from codeclass.k2 import code_from_multiplicities
from codeclass.linear_code import LinearCode


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def small_config(tmp_path):
    cfg = {
        "q": 5,
        "window": {"n_max": 30, "k_max": 6},
        "facts": [
            {"kind": "not_exists", "n": 6, "k": 2, "d": 6, "source": "test"},
            {"kind": "not_exists", "n": 7, "k": 3, "d": 6, "source": "test"},
        ],
        "report": [],
    }
    path = tmp_path / "bounds.json"
    path.write_text(json.dumps(cfg))
    return path


def test_classify_k2(capsys, tmp_path):
    for d, count in ((15, 1), (14, 10), (16, 0)):
        code, out, _ = run(capsys, "classify-k2", "--n", 18, "--d", d, "--db-dir", tmp_path)
        assert code == 0
        assert f": {count} codes" in out
        assert len(CodeDB.load(tmp_path / f"q5_n18_k2_d{d}.qdb")) == count
    assert len((tmp_path / "journal.log").read_text().splitlines()) == 3


def test_bad_input_exit_4(capsys, tmp_path):
    assert run(capsys, "classify-k2", "--n", 18, "--db-dir", tmp_path)[0] == 4
    assert run(capsys, "classify-k2", "--n", 18, "--d", 14, "--k", 3, "--db-dir", tmp_path)[0] == 4
    with pytest.raises(SystemExit) as exc:
        main(["classify-k2", "--n", "eighteen"])
    assert exc.value.code == 4
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 4
    code, _, err = run(capsys, "extend-step", "--n", 19, "--k", 3, "--d", 14, "--db-dir", tmp_path)
    assert code == 4 and "missing" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("q=5 n=3 k=1\n129\n")
    assert run(capsys, "equiv", bad, bad)[0] == 4
    assert run(capsys, "verify", "--file", tmp_path / "nope.qdb")[0] == 4
    assert run(capsys, "extend-step", "--n", 7, "--k", 3, "--d", 4, "--shards", 2, "--shard-index", 5,
               "--db-dir", tmp_path)[0] == 4


def test_extend_step_sharded_and_table(capsys, tmp_path, small_config):
    common = ["--db-dir", tmp_path, "--config", small_config]
    for d in (4, 5):
        assert run(capsys, "classify-k2", "--n", 6, "--d", d, *common)[0] == 0
    code, out, _ = run(capsys, "extend-step", "--n", 7, "--k", 3, "--d", 4, "--shards", 2, "--shard-index", 1,
                       "--split-depth", 1, *common)
    assert code == 0 and "sealed" not in out
    code, out, _ = run(capsys, "extend-step", "--n", 7, "--k", 3, "--d", 4, "--shards", 2, "--shard-index", 0,
                       "--split-depth", 1, *common)
    assert code == 0 and "sealed" in out
    assert (tmp_path / "q5_n7_k3_d4.qdb").exists()
    code, out, _ = run(capsys, "verify", "--n", 7, "--k", 3, "--d", 4, *common)
    assert code == 0 and "clean" in out
    code, out, _ = run(capsys, "table", *common)
    assert code == 0 and "[18,2,14]_5" in out


def test_verify_exit_2_on_duplicate(capsys, tmp_path):
    c = code_from_multiplicities(0, (3,) * 6)
    db = CodeDB(5, 18, 2, 15, [c, c])
    db.write(tmp_path / "dup.qdb")
    code, out, _ = run(capsys, "verify", "--file", tmp_path / "dup.qdb")
    assert code == 2 and "duplicate" in out


def test_covrad(capsys, tmp_path):
    f = tmp_path / "rep.txt"
    f.write_text("q=5 n=2 k=1\n11\n")
    assert run(capsys, "covrad", "--code", f)[1] == "0 1\n"
    assert run(capsys, "covrad", "--code", f, "--t", 2)[1] == "0 <2\n"
    assert run(capsys, "covrad", "--code", f, "--method", "sweep")[1] == "0 1\n"
    big = tmp_path / "big.txt"
    G = np.hstack([np.eye(11, dtype=int), np.ones((11, 16), dtype=int)])
    big.write_text(LinearCode(G, 5).to_text())
    code, _, err = run(capsys, "covrad", "--code", big)
    assert code == 3 and "budget" in err


def test_equiv(capsys, tmp_path):
    c = code_from_multiplicities(0, (3,) * 6)
    a, b, o = tmp_path / "a.txt", tmp_path / "b.txt", tmp_path / "o.txt"
    a.write_text(c.to_text())
    b.write_text(c.transform(list(range(17, -1, -1)), [2] * 18).to_text())
    o.write_text(code_from_multiplicities(0, (4, 4, 3, 3, 2, 2)).to_text())
    assert run(capsys, "equiv", a, b)[1] == "equivalent\n"
    assert run(capsys, "equiv", a, o)[1] == "inequivalent\n"
    full = tmp_path / "full.txt"
    full.write_text(LinearCode(np.eye(6, dtype=int), 5).to_text())
    assert run(capsys, "equiv", full, full)[0] == 3


def test_derive(capsys, tmp_path):
    code, out, _ = run(capsys, "derive", "--db-dir", tmp_path)
    assert code == 2 and "MISMATCH" in out
    code, out, _ = run(capsys, "derive", "--db-dir", tmp_path, "--assume", "21,5,14")
    assert code == 0 and "MISMATCH" not in out
    assert "no [87,6,66]_5" in out
    code, _, err = run(capsys, "derive", "--db-dir", tmp_path, "--assume", "21,5,13")
    assert code == 2 and "contradictory" in err
    assert run(capsys, "derive", "--db-dir", tmp_path, "--assume", "21,5")[0] == 4


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "codeclass", "classify-k2", "--n", "18", "--d", "15",
                        "--db-dir", str(tmp_path)], capture_output=True, text=True)
    assert r.returncode == 0 and "1 codes" in r.stdout
    r = subprocess.run([sys.executable, "-m", "codeclass", "--help"], capture_output=True, text=True)
    assert r.returncode == 0
    for sub in ("classify-k2", "extend-step", "covrad", "equiv", "verify", "table", "derive", "prove-21-5-14"):
        assert sub in r.stdout
