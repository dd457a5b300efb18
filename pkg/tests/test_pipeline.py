import numpy as np
import pytest

from codeclass import bounds as bnd
from codeclass import pipeline
from codeclass.canon import cert_of
from codeclass.db import CodeDB, verify_db
from codeclass.extend import ExtensionTask, enumerate_children, shard_prefixes
from codeclass.k2 import code_from_multiplicities
from codeclass.linear_code import LinearCode
from codeclass.pipeline import (
    MissingInputError,
    ProofInvariantError,
    Workspace,
    classify_k2,
    computed_axioms,
    conclude_nonexistence,
    covrad_tally,
    report_table,
    run_step,
)

from conftest import all_rref, column_multiset_reps, min_weights

Q = 5


def known_with(*cells, report=()):
    facts = [bnd.BoundsFact(bnd.NOT_EXISTS, 5, n, k, d, source="test") for n, k, d in cells]
    return bnd.KnownBounds(5, 96, 10, facts, list(report))


def brute_db(n, k, d):
    reps = column_multiset_reps(all_rref(Q, n, k), Q)
    return CodeDB.from_codes(Q, n, k, d, [LinearCode(G, Q) for G in reps[min_weights(reps, Q) == d]])


def test_small_instance_end_to_end(tmp_path):
    """[6,2,4] and [6,2,3] from brute-force [5,1,>=d] parents match brute force on [6,2]."""
    ws = Workspace.open(tmp_path, known=known_with((5, 1, 6)))
    for d in range(3, 6):
        ws.store(brute_db(5, 1, d))
    for d in (4, 3):
        res = run_step(ws, (6, 2, d), split_depth=1)
        assert res.complete
        assert res.db.to_bytes() == brute_db(6, 2, d).to_bytes()
        assert verify_db(res.db).ok


def test_refuses_incomplete_parents(tmp_path):
    ws = Workspace.open(tmp_path, known=known_with((6, 2, 6)))
    ws.store(classify_k2(6, 5))
    with pytest.raises(MissingInputError, match="missing"):
        run_step(ws, (7, 3, 4))
    bare = Workspace.open(tmp_path / "bare", known=known_with())
    with pytest.raises(MissingInputError, match="upper bound"):
        run_step(bare, (7, 3, 4))


def test_child_above_config_bound_is_an_invariant_violation(tmp_path):
    # claim (wrongly) that no [7,3,4] code exists, then extend to d = 3
    ws = Workspace.open(tmp_path, known=known_with((6, 2, 6), (7, 3, 4)))
    for d in (3, 4, 5):
        ws.store(classify_k2(6, d))
    with pytest.raises(ProofInvariantError, match=r"\[7,3,"):
        run_step(ws, (7, 3, 3))


def _mds_workspace(path):
    ws = Workspace.open(path, known=known_with((6, 2, 6)))
    ws.store(classify_k2(6, 5))
    return ws


def test_conclude_nonexistence_small(tmp_path):
    """No [7,3,5]_5 code: both routes, and the journal gets a proof record."""
    ws = _mds_workspace(tmp_path)
    rep = conclude_nonexistence(ws, 7, 3, 5)
    assert rep.route_a and rep.route_b and rep.proved
    assert "routes agree" in str(rep)
    assert [f.params for f in computed_axioms(ws)] == [(7, 3, 5)]
    again = conclude_nonexistence(ws, 7, 3, 5)
    assert again.proved


def test_conclude_existing_code(tmp_path):
    ws = Workspace.open(tmp_path, known=known_with((6, 2, 6)))
    for d in (4, 5):
        ws.store(classify_k2(6, d))
    rep = conclude_nonexistence(ws, 7, 3, 4)
    assert not rep.route_a and not rep.route_b and not rep.proved
    assert computed_axioms(ws) == []


def test_routes_disagreeing_aborts(tmp_path, monkeypatch):
    ws = _mds_workspace(tmp_path)
    monkeypatch.setattr(pipeline, "covers_at_least", lambda q: True)
    with pytest.raises(ProofInvariantError, match="disagree"):
        conclude_nonexistence(ws, 7, 3, 5)


def test_covrad_tally_is_journalled(tmp_path):
    ws = Workspace.open(tmp_path)
    db = classify_k2(18, 14)
    t = covrad_tally(ws, db)
    assert (t.ge_high, t.eq_below, t.lower) == (10, 0, 0)
    assert len(ws.journal.records("covrad")) == 10
    covrad_tally(ws, db)
    assert len(ws.journal.records("covrad")) == 10


def test_table_with_gaps(tmp_path):
    ws = Workspace.open(tmp_path)
    lines = report_table(ws).splitlines()
    assert len(lines) == 6 and all("?" in s for s in lines[1:])
    for d in (14, 15):
        db = classify_k2(18, d)
        ws.store(db)
        covrad_tally(ws, db)
    ws.store(CodeDB(5, 21, 5, 14, []))
    rows = {s.split()[0]: s.split()[1:] for s in report_table(ws).splitlines()[1:]}
    assert rows["[18,2,14]_5"] == ["10", "9", "10", "0"]
    assert rows["[18,2,15]_5"] == ["1", "1", "1", "0"]
    assert rows["[19,3,14]_5"] == ["?"] * 4
    assert rows["[21,5,14]_5"] == ["0", "-", "-", "-"]


def test_smoke_one_shard_of_the_20_4_14_step(tmp_path):
    """One [19,3,14] parent, one DFS shard: soundness invariants only."""
    top = code_from_multiplicities(0, (3,) * 6)
    parent = enumerate_children(ExtensionTask(top, 14))[0]
    assert parent.params == (19, 3, 14)
    ws = Workspace.open(tmp_path)
    task = ExtensionTask(parent, 14)
    prefixes = shard_prefixes(task, 1)
    part, n_cand, above = pipeline._run_unit(ws, parent, 20, 4, 14, prefixes[0], "aut")
    assert above == {}
    assert all(c.params == (20, 4, 14) for c in part.codes)
    assert verify_db(part).ok
    union = set()
    for p in prefixes:
        union.update(pipeline._run_unit(ws, parent, 20, 4, 14, p, "aut")[0].ensure_certs())
    whole = {cert_of(c) for c in enumerate_children(task) if c.min_weight() == 14}
    assert union == whole
