import json
import shutil
import subprocess
import sys

import jsonschema
import pytest

from labelbracket.cli import main, parse_moves
from conftest import CORPUS_DIR, FIXTURES
from oracle import laurent_to_sympy, skein_bracket
from labelbracket.laurent import Laurent

SCHEMA = json.loads((FIXTURES.parent.parent / "docs" / "report-schema.json").read_text())


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def corpus(name):
    return CORPUS_DIR / f"{name}.kd"


def test_validate_exit_codes(capsys):
    assert run(capsys, "validate", corpus("theta"))[0] == 0
    code, out, _ = run(capsys, "validate", FIXTURES / "invalid" / "mixed-orientation.kd")
    assert code == 1 and "mixed orientation" in out
    code, _, err = run(capsys, "validate", "no/such/file.kd")
    assert code == 2 and "no such file" in err
    code, _, err = run(capsys, "validate", FIXTURES / "unparseable" / "bad-slot.kd")
    assert code == 2 and "line 2" in err


def test_bracket_text(capsys):
    code, out, _ = run(capsys, "bracket", "--diagram", corpus("unknot"), "--rules", "kauffman")
    assert code == 0 and out.strip() == "(-A^2 - A^-2) * [empty]"


def test_bracket_json_matches_oracle(capsys):
    code, out, _ = run(capsys, "bracket", "--diagram", corpus("trefoil"), "--rules", "kauffman", "--json")
    data = json.loads(out)
    assert code == 0 and data["ruleset"] == "kauffman" and data["state_count"] == 8 and data["fixpoint"]
    (term,) = data["terms"]
    assert term["representative"] == "empty"
    value = laurent_to_sympy(Laurent.parse(term["coefficient"], ("A",)))
    assert value == skein_bracket(corpus("trefoil").read_text())


def test_bracket_json_worker_independent(capsys):
    args = ["bracket", "--diagram", corpus("torus-2-5"), "--rules", "kauffman", "--json"]
    assert run(capsys, *args)[1] == run(capsys, *args, "--workers", "3")[1]


def test_bracket_skeleton_is_incomplete(capsys):
    code, _, err = run(capsys, "bracket", "--diagram", corpus("theta"), "--rules", "label-bracket")
    assert code == 1 and "ruleset incomplete: RS.1" in err


def test_bracket_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("LABELBRACKET_BUDGET", "1")
    code, out, _ = run(capsys, "bracket", "--diagram", corpus("trefoil"), "--rules", "kauffman", "--json")
    assert code == 0 and json.loads(out)["fixpoint"] is False
    code, out, _ = run(capsys, "bracket", "--diagram", corpus("trefoil"), "--rules", "kauffman",
                       "--json", "--budget", "100")
    assert json.loads(out)["fixpoint"] is True


def test_bracket_rules_from_path_and_missing(capsys, kauffman):
    from labelbracket.rules import DATA_DIR
    assert run(capsys, "bracket", "--diagram", corpus("hopf"), "--rules", DATA_DIR / "kauffman.rules")[0] == 0
    assert run(capsys, "bracket", "--diagram", corpus("hopf"), "--rules", "nonesuch")[0] == 2


def write_sum(path, terms, **extra):
    path.write_text(json.dumps({"terms": terms, **extra}))
    return path


def test_equiv_identical_files(capsys, tmp_path):
    a = write_sum(tmp_path / "a.json", [{"representative": "O[0]", "coefficient": "A"}])
    code, out, _ = run(capsys, "equiv", a, a, "--rules", "kauffman", "--json")
    data = json.loads(out)
    assert code == 0 and data["outcome"] == "Equal"
    assert data["trace"] == {"from_a": [], "from_b": []}


def test_equiv_one_step_apart(capsys, tmp_path):
    a = write_sum(tmp_path / "a.json", [{"representative": "O[0]", "coefficient": "1"}])
    b = write_sum(tmp_path / "b.json", [{"representative": "empty", "coefficient": "-A^2 - A^-2"}])
    code, out, _ = run(capsys, "equiv", a, b, "--rules", "kauffman", "--json")
    trace = json.loads(out)["trace"]
    assert code == 0 and len(trace["from_a"]) + len(trace["from_b"]) == 1


def test_equiv_kink_pair_is_unknown(capsys):
    code, out, _ = run(capsys, "equiv", corpus("kink-right"), corpus("unknot"), "--rules", "kauffman",
                       "--max-nodes", "1000", "--max-depth", "4")
    assert code == 3 and out.startswith("Unknown")


def test_equiv_bigon_unknot_is_equal(capsys):
    code, out, _ = run(capsys, "equiv", corpus("unknot-bigon"), corpus("unknot"), "--rules", "kauffman")
    assert code == 0 and out.startswith("Equal")


def test_equiv_ring_mismatch(capsys, tmp_path):
    a = write_sum(tmp_path / "a.json", [{"representative": "O[0]", "coefficient": "t"}], variables=["t"])
    code, _, err = run(capsys, "equiv", a, a, "--rules", "kauffman")
    assert code == 1 and "ruleset over" in err


def test_certify_single_site(capsys):
    code, out, _ = run(capsys, "certify", "--diagram", corpus("hopf"), "--rules", "kauffman",
                       "--move", "Ω2", "--variant", "over", "--site", "0", "--json")
    rows = json.loads(out)["rows"]
    assert code == 0 and [r["outcome"] for r in rows] == ["Certified"]


def test_certify_without_sites_is_identity(capsys):
    code, out, _ = run(capsys, "certify", "--diagram", corpus("hopf"), "--rules", "kauffman",
                       "--move", "Ω5", "--json")
    (row,) = json.loads(out)["rows"]
    assert code == 0 and row["outcome"] == "Certified" and row["trace"] == {"from_a": [], "from_b": []}


def test_certify_kink_unknown(capsys):
    code, _, _ = run(capsys, "certify", "--diagram", corpus("unknot"), "--rules", "kauffman",
                     "--move", "1", "--variant", "0", "--max-nodes", "300", "--max-depth", "3")
    assert code == 3


def test_certify_bad_variant_and_site(capsys):
    base = ["certify", "--diagram", corpus("hopf"), "--rules", "kauffman", "--move", "Ω2"]
    assert run(capsys, *base, "--variant", "sideways")[0] == 1
    assert run(capsys, *base, "--site", "99")[0] == 1
    assert run(capsys, *base[:-1], "Ω7")[0] == 1


def small_corpus(tmp_path, names):
    tmp_path.mkdir(exist_ok=True)
    for n in names:
        shutil.copy(corpus(n), tmp_path / f"{n}.kd")
    return tmp_path


def test_sweep_empty_corpus(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, _, _ = run(capsys, "sweep", "--corpus", small_corpus(tmp_path / "c", []), "--rules", "kauffman",
                     "--moves", "Ω1..Ω5", "--out", out)
    report = json.loads(out.read_text())
    jsonschema.validate(report, SCHEMA)
    assert code == 0 and report["rows"] == [] and report["corpus"] == []


def test_sweep_classical_moves_certified(capsys, tmp_path):
    out = tmp_path / "report.json"
    c = small_corpus(tmp_path / "c", ["hopf", "unknot-bigon", "unknot-triangle"])
    code, _, _ = run(capsys, "sweep", "--corpus", c, "--rules", "kauffman", "--moves", "Ω2,Ω3",
                     "--out", out, "--deterministic")
    report = json.loads(out.read_text())
    jsonschema.validate(report, SCHEMA)
    assert code == 0 and report["rows"]
    assert {r["outcome"] for r in report["rows"]} == {"Certified"}


def test_sweep_unknown_cell_exit(capsys, tmp_path):
    c = small_corpus(tmp_path / "c", ["unknot"])
    code, out, _ = run(capsys, "sweep", "--corpus", c, "--rules", "kauffman", "--moves", "Ω1",
                       "--max-nodes", "300", "--max-depth", "3")
    assert code == 3 and "Unknown" in out


def test_sweep_skeleton_incomplete(capsys, tmp_path):
    out = tmp_path / "r.json"
    c = small_corpus(tmp_path / "c", ["theta"])
    code, _, _ = run(capsys, "sweep", "--corpus", c, "--rules", "label-bracket", "--moves", "Ω5", "--out", out)
    report = json.loads(out.read_text())
    jsonschema.validate(report, SCHEMA)
    assert code == 1
    assert {r["detail"] for r in report["rows"]} == {"ruleset incomplete: RS.1"}


def test_sweep_missing_corpus(capsys):
    assert run(capsys, "sweep", "--corpus", "no/such/dir", "--rules", "kauffman")[0] == 2


def test_parse_moves():
    assert parse_moves("Ω1..Ω5") == ("Ω1", "Ω2", "Ω3", "Ω4", "Ω5")
    assert parse_moves("O2,R3") == ("Ω2", "Ω3")


def test_nonpositive_budget_rejected(capsys):
    assert run(capsys, "bracket", "--diagram", corpus("hopf"), "--rules", "kauffman", "--workers", "0")[0] == 1


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "labelbracket.cli", "bracket", "--diagram",
                           str(corpus("unknot")), "--rules", "kauffman"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "(-A^2 - A^-2) * [empty]"
