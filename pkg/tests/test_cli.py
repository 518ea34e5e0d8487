import json

import pytest

from icphi import cli
from icphi.cli import EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, RunConfig, main, run_verify
from icphi.corpus import build_corpus, write_group
from icphi.verify import Conclusion, Hypothesis, StatementId, VerificationVerdict


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_list(capsys):
    code, out, _ = run(capsys, "list", "--max-order", "1")
    assert code == EXIT_OK and out.splitlines() == ["   1  C1  C1"]
    code, out, _ = run(capsys, "list", "--max-order", "8")
    names = [line.split()[1] for line in out.splitlines()]
    assert "Q8" in names and "D4" in names
    code, out, _ = run(capsys, "list", "--max-order", "24", "--format", "json")
    assert any(r["name"] == "SL(2,3)" for r in json.loads(out))


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", "Q8")
    assert code == EXIT_OK
    assert "all 6 subgroups ICPhi" in out
    code, out, _ = run(capsys, "analyze", "SL(2,3)")
    assert "2-nilpotent: false" in out
    code, out, _ = run(capsys, "analyze", "C1", "--format", "json")
    a = json.loads(out)
    assert a["subgroup_count"] == 1
    assert a["predicates"]["abelian"] and a["predicates"]["nilpotent"] and a["predicates"]["solvable"]
    assert all(v["order"] == 1 for v in a["subgroups"].values())


def test_analyze_fields(capsys):
    code, out, _ = run(capsys, "analyze", "S4", "--format", "json")
    a = json.loads(out)
    assert a["subgroup_count"] == 30
    assert a["subgroups"]["F"]["order"] == 4 and a["subgroups"]["Z_U"]["order"] == 1
    assert a["predicates"]["supersolvable"] is False
    assert a["subgroups_by_order"] == {"1": 1, "2": 9, "3": 4, "4": 7, "6": 4, "8": 3, "12": 1, "24": 1}


def test_analyze_group_file(capsys, tmp_path):
    from conftest import group

    path = tmp_path / "a4.json"
    write_group(group("A4"), path, "alt4")
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == EXIT_OK and out.startswith("group alt4: order 12")


@pytest.mark.parametrize("argv", [
    ["analyze", "no-such-group"],
    ["analyze", "(C2 x C3"],
    ["verify", "--statement", "T99"],
    ["verify", "--max-order", "0"],
    ["verify", "--corpus", "/nonexistent/corpus.json"],
    ["bogus"],
    [],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == EXIT_USAGE


def test_verify_t19_at_24(capsys):
    code, out, _ = run(capsys, "verify", "--max-order", "24", "--statement", "T19", "--format", "json")
    assert code == EXIT_OK
    r = json.loads(out)
    assert r["schema_version"] == 1 and r["violations"] == 0
    (row,) = [v for v in r["verdicts"] if v["group_id"] == "SL(2,3)"]
    assert row["hypothesis"] == "satisfied" and row["conclusion"] == "verified"


def test_verify_t17_at_24(capsys):
    code, out, _ = run(capsys, "verify", "--max-order", "24", "--statement", "t17", "--format", "json")
    r = json.loads(out)
    assert code == EXIT_OK and r["summary"]["T17"]["violated"] == 0
    assert r["summary"]["T17"]["satisfied"] >= 1


def test_verify_l15_single_row(capsys):
    code, out, _ = run(capsys, "verify", "--max-order", "8", "--statement", "L15", "--format", "json")
    r = json.loads(out)
    rows = [v for v in r["verdicts"] if v["hypothesis"] == "satisfied"]
    assert code == EXIT_OK and len(rows) == 1
    assert rows[0]["group_id"] == "Q8" and rows[0]["conclusion"] == "verified"


def test_summary_tallies_verdicts_and_text_report(capsys):
    cfg = RunConfig(max_order=12, statements=(StatementId.T17, StatementId.L14))
    rep = run_verify(cfg)
    for s, c in rep.summary.items():
        rows = [v for v in rep.verdicts if v["statement"] == s]
        assert c["satisfied"] + c["vacuous"] + c["not-satisfied"] == len(rows)
        assert c["verified"] + c["violated"] <= c["satisfied"]
    text = cli.format_report_text(rep)
    assert "violations: 0" in text and "T17" in text


def test_jobs_give_same_report():
    c = build_corpus(16)
    cfg1 = RunConfig(max_order=16, statements=(StatementId.T11, StatementId.L01))
    cfg2 = RunConfig(max_order=16, statements=(StatementId.T11, StatementId.L01), jobs=2)
    assert json.dumps(run_verify(cfg1, c).to_json()) == json.dumps(run_verify(cfg2, c).to_json())


def test_violation_exit_code(capsys, monkeypatch):
    def fake(G, s, gid=None):
        return VerificationVerdict(gid, StatementId(s), Hypothesis.SATISFIED, Conclusion.VIOLATED, "forced")

    monkeypatch.setattr(cli, "verify", fake)
    code, out, _ = run(capsys, "verify", "--max-order", "2", "--statement", "T11")
    assert code == EXIT_VIOLATION
    assert "T11 C2: forced" in out


def test_corpus_command_and_override(capsys, tmp_path):
    path = tmp_path / "c.json"
    code, _, _ = run(capsys, "corpus", "--max-order", "6", "--out", str(path))
    assert code == EXIT_OK
    code, out, _ = run(capsys, "list", "--corpus", str(path))
    assert [line.split()[1] for line in out.splitlines()] == ["C1", "C2", "C3", "C4", "C2^2", "C5", "S3", "C6"]
    code, out, _ = run(capsys, "verify", "--corpus", str(path), "--statement", "T17", "--out", str(tmp_path / "r.txt"))
    assert code == EXIT_OK and out == ""
    assert "violations: 0" in (tmp_path / "r.txt").read_text()


def test_timings_flag(capsys):
    code, out, _ = run(capsys, "verify", "--max-order", "4", "--statement", "T11", "--format", "json", "--timings")
    assert "seconds" in json.loads(out)
    code, out, _ = run(capsys, "verify", "--max-order", "4", "--statement", "T11", "--format", "json")
    assert "seconds" not in json.loads(out)
