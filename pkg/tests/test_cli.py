import json
import subprocess
import sys
from pathlib import Path

import pytest

from gridsat.cli import main
from gridsat.family import load_family
from gridsat.report import FORMAT_TAG, parse_stream

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_saturated_maximal_chain(capsys):
    code, out, _ = run(capsys, "check-saturated", "--poset", DATA / "a2.poset", "--family", DATA / "chain.fam")
    assert code == 0 and "yes" in out


def test_check_saturated_reports_violating_point(capsys, tmp_path):
    fam = tmp_path / "f.fam"
    fam.write_text("grid 2 2\n1 1\n")
    code, out, _ = run(capsys, "check-saturated", "--poset", "C3", "--family", fam)
    assert code == 1 and "witness point: 1 2" in out


def test_check_saturated_not_free(capsys, tmp_path):
    fam = tmp_path / "f.fam"
    fam.write_text("grid 2 2\n1 2\n2 1\n")
    code, out, _ = run(capsys, "check-saturated", "--poset", "A2", "--family", fam)
    assert code == 1 and "witness embedding" in out


def test_check_free(capsys):
    code, out, _ = run(capsys, "check-free", "--poset", "A2", "--family", DATA / "chain.fam")
    assert code == 0
    code, out, _ = run(capsys, "check-free", "--poset", "C3", "--family", DATA / "chain.fam")
    assert code == 1 and "witness embedding: 0 -> 1 1" in out


def test_sat_min(capsys):
    code, out, _ = run(capsys, "sat-min", "--poset", DATA / "c3.poset", "-t", 2, "-n", 2)
    assert code == 0
    assert "= 2" in out and "1 1" in out and "2 2" in out


def test_sat_min_oracle(capsys):
    code, out, _ = run(capsys, "sat-min", "--poset", "A2", "-t", 2, "-n", 3, "--oracle", "--json")
    assert code == 0
    _, recs = parse_stream(out)
    assert recs[0]["value"] == 4 and recs[0]["oracle"] == 4 and recs[0]["oracle_agrees"]


def test_sat_min_oracle_cap_is_usage_error(capsys):
    code, _, err = run(capsys, "sat-min", "--poset", "A2", "-t", 3, "-n", 3, "--oracle")
    assert code == 2 and "16" in err


def test_sat_min_budget_is_resource_cap(capsys):
    code, out, _ = run(capsys, "sat-min", "--poset", "A3", "-t", 3, "-n", 3, "--budget", 20)
    assert code == 4 and "budget exhausted" in out


def test_sat_min_not_embeddable(capsys):
    code, _, err = run(capsys, "sat-min", "--poset", "D2", "-t", 3, "-n", 1)
    assert code == 2 and "embed" in err


def test_uctp(capsys):
    code, out, _ = run(capsys, "uctp", "--poset", DATA / "c2.poset")
    assert code == 1 and "0 covered by 1" in out
    code, _, _ = run(capsys, "uctp", "--poset", "Lambda")
    assert code == 0


def test_format_errors(capsys):
    code, _, err = run(capsys, "uctp", "--poset", DATA / "cycle.poset")
    assert code == 3 and "line 3" in err
    code, _, err = run(capsys, "check-free", "--poset", "A2", "--family", DATA / "dup.fam")
    assert code == 3 and "line 3" in err


def test_usage_errors(capsys):
    code, _, _ = run(capsys, "uctp", "--poset", "nonsense")
    assert code == 2
    code, _, _ = run(capsys, "check-free", "--poset", "A2", "--family", "/nonexistent/f.fam")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["sat-min", "--poset", "A2", "-t", "0", "-n", "2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--poset", "C3", "-t", 2, "--n-max", 3, "--json")
    assert code == 0
    head, recs = parse_stream(out)
    assert head["format"] == FORMAT_TAG
    assert recs[0]["verdict"] == "bounded-witness-found" and recs[0]["verified"]
    code, out, _ = run(capsys, "classify", "--poset", "A2", "-t", 2, "--n-max", 3)
    assert code == 0 and "all-separating-up-to-range" in out


def test_classify_budget(capsys):
    code, _, _ = run(capsys, "classify", "--poset", "A3", "-t", 3, "--budget", 5)
    assert code == 4


def test_separating(capsys):
    code, out, _ = run(capsys, "separating", "--family", DATA / "chain.fam")
    assert code == 0 and "witness pair" in out and "none" in out


def test_construct_chain_round_trip(capsys, tmp_path):
    dest = tmp_path / "c4.fam"
    code, out, _ = run(capsys, "construct", "chain", "-k", 4, "-t", 3, "-n", 3, "--out", dest)
    assert code == 0
    fam = load_family(dest)
    assert len(fam) == 4
    code, _, _ = run(capsys, "check-saturated", "--poset", "C4", "--family", dest)
    assert code == 0


def test_sat_min_witness_round_trip(capsys, tmp_path):
    dest = tmp_path / "w.fam"
    code, out, _ = run(capsys, "sat-min", "--poset", "Lambda", "-t", 3, "-n", 2, "--out", dest, "--json")
    _, recs = parse_stream(out)
    assert [list(f) for f in load_family(dest).points] == recs[0]["witness"]


def test_construct_antichain_audit(capsys):
    code, out, _ = run(capsys, "construct", "antichain-audit", "-k", 3, "-t", 3, "-n", 2)
    assert code == 0 and "[5, 8]" in out


def test_construct_poly(capsys):
    code, out, _ = run(capsys, "construct", "poly", "--p1", "C1", "-k", 2, "--p2", "C1", "-t", 2, "-n", 3)
    assert code == 0 and "audit: ok" in out


def test_natarajan(capsys):
    code, out, _ = run(capsys, "natarajan", "--family", DATA / "chain.fam", "--json")
    assert code == 0
    _, recs = parse_stream(out)
    assert recs[0]["dimension"] == 1 and recs[0]["bound_holds"]


def test_embed_cube(capsys):
    code, out, _ = run(capsys, "embed-cube", "--p1", "C1", "-k", 2, "--p2", "C1")
    assert code == 0 and "[2]^4" in out


def test_height_width(capsys):
    code, out, _ = run(capsys, "height-width", "--poset", "A3", "--json")
    _, recs = parse_stream(out)
    assert code == 0 and recs[0]["h_plus"] == 2 and recs[0]["w_plus"] == 3


def test_oracle_diff(capsys):
    code, out, _ = run(capsys, "oracle-diff", "--poset", "V", "-t", 2, "-n", 3)
    assert code == 0 and "agree: True" in out
    code, _, _ = run(capsys, "oracle-diff", "--poset", "V", "-t", 3, "-n", 3)
    assert code == 2


def test_verify_lemmas_small_grid(capsys):
    args = ["verify-lemmas", "--posets", "C3,A2", "--ts", "2", "--ns", "1,2", "--json", "--seed", "7"]
    code, out1, _ = run(capsys, *args, "--workers", 1)
    assert code == 0
    code, out2, _ = run(capsys, *args, "--workers", 2)
    assert out1 == out2
    head, recs = parse_stream(out1)
    assert head["config"]["seed"] == 7 and recs[-1]["kind"] == "sweep-summary"
    assert recs[-1]["violations"] == 0


def test_verify_lemmas_unknown_poset():
    with pytest.raises(SystemExit) as exc:
        main(["verify-lemmas", "--posets", "C3,Q9"])
    assert exc.value.code == 2


def test_structured_output_is_deterministic(capsys):
    argv = ["classify", "--poset", "Lambda", "-t", 2, "--n-max", 2, "--json"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    assert all(json.loads(line) for line in a.splitlines())


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "gridsat.cli", "uctp", "--poset", "A2"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0 and "yes" in out.stdout
