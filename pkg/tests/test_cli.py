import json

import pytest

from pdlfix.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_classify_worked_example(capsys):
    code, doc = run_json(capsys, "classify", "--var", "X", "p & [a](q | (r & X))")
    assert code == 0
    assert doc["status"] == "classified"
    assert doc["kind"] == "Pi"
    assert doc["level"] == 2
    assert doc["pairs"] == [
        {"phi": "false", "psi": "p", "alpha": None},
        {"phi": "q", "psi": "r", "alpha": "a"},
    ]


def test_classify_x_free(capsys):
    code, doc = run_json(capsys, "classify", "--var", "X", "p")
    assert code == 0
    assert doc["status"] == "x-free"


def test_classify_not_in_class(capsys):
    code, doc = run_json(capsys, "classify", "--var", "X", "[X?]p")
    assert code == 2
    assert doc["status"] == "not-in-class"


def test_classify_strict_rejects_commuted_layers(capsys):
    code, doc = run_json(capsys, "classify", "--var", "X", "(q & X) | p")
    assert code == 0
    code, doc = run_json(capsys, "classify", "--var", "X", "--strict", "(q & X) | p")
    assert code == 2
    assert doc["status"] == "not-in-class"


def test_classify_parse_error_has_position(capsys):
    code, doc = run_json(capsys, "classify", "--var", "X", "p & (")
    assert code == 2
    assert "line 1" in doc["message"]


def test_solve_prints_the_worked_example_solution(capsys):
    code, out = run(capsys, "solve", "--var", "X", "p & [a](q | (r & X))")
    assert code == 0
    assert out.strip() == "[(true? ; a ; (~q)?)*]([true?]p & [true? ; a ; (~q)?]r)"


def test_solve_bare_unknown(capsys):
    code, out = run(capsys, "solve", "--var", "X", "X")
    assert code == 0
    assert out.strip() == "[true?*][true?]true"


def test_solve_not_in_class_exits_2(capsys):
    code, _ = run(capsys, "solve", "--var", "X", "[X?]p")
    assert code == 2


def test_solve_with_certificate(tmp_path, capsys):
    cert_path = tmp_path / "cert.json"
    code, doc = run_json(capsys, "solve", "--var", "X", "--certify", str(cert_path),
                         "p & [a](q | (r & X))")
    assert code == 0
    assert doc["certificateGroups"] == [["E4"], ["E1", "E3"], ["E1", "E5"], ["E3"], ["E7"]]
    code, doc = run_json(capsys, "verify-cert", str(cert_path))
    assert code == 0
    assert doc["ok"] is True


def test_formula_from_file(tmp_path, capsys):
    path = tmp_path / "phi.txt"
    path.write_text("p & [a](q | (r & X))")
    code, out = run(capsys, "solve", "--var", "X", f"@{path}")
    assert code == 0
    assert out.startswith("[(true? ; a ; (~q)?)*]")


def test_check_counterexample_exits_1(tmp_path, capsys):
    model = tmp_path / "m.json"
    model.write_text(json.dumps({
        "worlds": ["w0"], "programs": {},
        "valuation": {"p": ["w0"], "q": ["w0"]},
    }))
    code, doc = run_json(capsys, "check", "--var", "X",
                         "--equation", "p & (q | X)", "--candidate", "~p & q",
                         "--model", str(model))
    assert code == 1
    assert doc["counterexampleWorld"] == "w0"


def test_check_random_suite_passes(capsys):
    code, doc = run_json(capsys, "check", "--var", "X",
                         "--equation", "p & (q | X)", "--candidate", "<p?*><p?>q",
                         "--random", "200", "--seed", "5")
    assert code == 0
    assert doc["checked"] == 200


def test_check_candidate_with_unknown_exits_2(capsys):
    code, _ = run(capsys, "check", "--var", "X", "--equation", "p & (q | X)",
                  "--candidate", "p & X", "--random", "3")
    assert code == 2


def test_check_malformed_model_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{]")
    code, _ = run(capsys, "check", "--var", "X", "--equation", "p | X",
                  "--candidate", "true", "--model", str(bad))
    assert code == 2


def test_fuzz_rules_scope(capsys):
    code, doc = run_json(capsys, "fuzz", "--scope", "rules", "--trials", "10",
                         "--models-per-trial", "4", "--seed", "3")
    assert code == 0
    assert doc["failures"] == 0
    assert doc["checks"] > 0


def test_fuzz_solutions_scope(capsys):
    code, doc = run_json(capsys, "fuzz", "--scope", "solutions", "--trials", "12",
                         "--models-per-trial", "4", "--seed", "3")
    assert code == 0
    assert doc["failures"] == 0


def test_fuzz_is_reproducible(capsys):
    _, first = run_json(capsys, "fuzz", "--scope", "solutions", "--trials", "8",
                        "--models-per-trial", "3", "--seed", "21")
    _, second = run_json(capsys, "fuzz", "--scope", "solutions", "--trials", "8",
                         "--models-per-trial", "3", "--seed", "21")
    first.pop("wallTime")
    second.pop("wallTime")
    assert first == second


def test_env_seed_overrides_flag(capsys, monkeypatch):
    monkeypatch.setenv("PDLFIX_SEED", "77")
    code, doc = run_json(capsys, "fuzz", "--scope", "rules", "--trials", "2",
                         "--models-per-trial", "2", "--seed", "3")
    assert code == 0
    assert doc["seed"] == 77


def test_verify_cert_rejects_tampering(tmp_path, capsys):
    cert_path = tmp_path / "cert.json"
    code, _ = run(capsys, "solve", "--var", "X", "--certify", str(cert_path),
                  "p & [a](q | (r & X))")
    assert code == 0
    doc = json.loads(cert_path.read_text())
    doc["steps"][3]["bindings"]["phi"] = "false"
    cert_path.write_text(json.dumps(doc))
    code, report = run_json(capsys, "verify-cert", str(cert_path))
    assert code == 1
    assert report["failedStep"] == 3


def test_verify_cert_malformed_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("not json")
    code, _ = run(capsys, "verify-cert", str(bad))
    assert code == 2


def test_usage_error_exits_2(capsys):
    assert main(["classify"]) == 2  # missing --var and formula


def test_lowercase_var_rejected(capsys):
    code, _ = run(capsys, "classify", "--var", "x", "p & q")
    assert code == 2


def test_uncertifiable_strategy_exits_3(tmp_path, capsys):
    cert_path = tmp_path / "cert.json"
    code, _ = run(capsys, "solve", "--var", "X", "--strategy", "literal",
                  "--certify", str(cert_path), "p & (q | X)")
    assert code == 3


def test_json_mode_emits_exactly_one_document(capsys):
    code, out = run(capsys, "classify", "--var", "X", "--json", "p & [a](q | (r & X))")
    assert code == 0
    json.loads(out)  # a single well-formed document
