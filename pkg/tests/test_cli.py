"""The command-line driver: subcommands, exit codes, output contracts."""

import json
import subprocess
import sys

import jsonschema

from ethica.cli import main
from ethica.dsl import serialize_model
from ethica.experiments import REPORT_SCHEMA


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_corpus_a12_confirmed(capsys):
    code, out, _ = run_cli(capsys, "verify", "corpus:A12CounterModel",
                           "--premises", "PSRSubstance", "--target", "A12")
    assert code == 0
    assert "confirmed" in out
    assert "(s1, s2, a_shared)" in out


def test_verify_premise_failure_exits_one(capsys):
    code, out, _ = run_cli(capsys, "verify", "corpus:A15CounterModel",
                           "--premises", "PSRPlenitude", "--target", "A15")
    assert code == 1
    assert "premise-failure(A26)" in out


def test_verify_model_file(tmp_path, capsys, a12):
    path = tmp_path / "m.model"
    path.write_text(serialize_model(a12.model))
    code, out, _ = run_cli(capsys, "verify", str(path),
                           "--premises", "A22", "--target", "A12")
    assert code == 0
    assert "confirmed" in out


def test_verify_json_output(capsys):
    code, out, _ = run_cli(capsys, "verify", "corpus:A12CounterModel",
                           "--premises", "PSRSubstance", "--target", "A12",
                           "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "confirmed"
    assert ["s1", "s2", "a_shared"] in doc["witnesses"]


def test_verify_bad_model_file_exits_two(tmp_path, capsys):
    path = tmp_path / "bad.model"
    path.write_text("model m\nthings x\npred nosuch: x\n")
    code, _, err = run_cli(capsys, "verify", str(path),
                           "--premises", "A22", "--target", "A12")
    assert code == 2
    assert "unknown predicate" in err


def test_verify_unknown_corpus_exits_two(capsys):
    code, _, err = run_cli(capsys, "verify", "corpus:NoSuchModel",
                           "--premises", "A22", "--target", "A12")
    assert code == 2
    assert "unknown corpus model" in err


# ---------------------------------------------------------------------------
# search / entail
# ---------------------------------------------------------------------------

def test_search_refutation_prints_model(capsys):
    code, out, _ = run_cli(capsys, "search", "--premises", "PSRSubstance",
                           "--target", "A12", "--max-things", "4")
    assert code == 0
    assert "Refuted(size=2)" in out
    assert "model countermodel" in out


def test_entail_reports_verdict_only(capsys):
    code, out, _ = run_cli(capsys, "entail", "--premises", "PSRPlenitude",
                           "--target", "A15", "--max-things", "3")
    assert code == 0
    assert out.strip() == "NoCounterexampleUpTo(3)"


def test_search_json_validates_direction_schema(capsys):
    code, out, _ = run_cli(capsys, "search", "--premises", "PSRSubstance",
                           "--target", "A12", "--max-things", "2", "--json")
    assert code == 0
    doc = json.loads(out)
    direction_schema = dict(REPORT_SCHEMA["properties"]["forward"])
    direction_schema["properties"] = dict(direction_schema["properties"])
    direction_schema["properties"]["stats"] = {"type": "object"}
    jsonschema.validate(doc, direction_schema)
    assert doc["verdict"] == "refuted"


def test_search_unknown_axiom_exits_two(capsys):
    code, _, err = run_cli(capsys, "search", "--premises", "A99",
                           "--target", "A12")
    assert code == 2
    assert "unknown axiom id" in err


def test_usage_error_exits_two(capsys):
    assert main(["search", "--premises", "A22"]) == 2  # missing --target
    capsys.readouterr()


def test_node_budget_env_exits_three(capsys, monkeypatch):
    monkeypatch.setenv("ETHICA_NODE_BUDGET", "5")
    code, _, err = run_cli(capsys, "entail", "--premises", "PSRSubstance",
                           "--target", "PropV_allshared", "--max-things", "4")
    assert code == 3
    assert "node budget" in err


def test_no_prune_flag(capsys):
    code, out, _ = run_cli(capsys, "entail", "--premises", "A24",
                           "--target", "A14", "--max-things", "3", "--no-prune")
    assert code == 0
    assert "NoCounterexampleUpTo(3)" in out


# ---------------------------------------------------------------------------
# experiment / table / probe / export
# ---------------------------------------------------------------------------

def test_experiment_run_single(capsys):
    code, out, _ = run_cli(capsys, "experiment", "run", "A14_demote")
    assert code == 0
    assert "EqualStrengthTranslation" in out
    assert "expectations: ok" in out


def test_experiment_run_all_json_validates(capsys):
    code, out, _ = run_cli(capsys, "experiment", "run", "all", "--json")
    assert code == 0
    docs = json.loads(out)
    assert isinstance(docs, list) and len(docs) == 7
    for doc in docs:
        jsonschema.validate(doc, REPORT_SCHEMA)


def test_experiment_unknown_name_exits_two(capsys):
    code, _, err = run_cli(capsys, "experiment", "run", "A99_demote")
    assert code == 2
    assert "unknown experiment" in err


def test_experiment_strict_claims_suppresses_labels(capsys):
    code, out, _ = run_cli(capsys, "experiment", "run", "A14_demote",
                           "--strict-claims")
    assert code == 0
    assert "outcome:" not in out
    assert "NoCounterexampleUpTo" in out


def test_table_markdown_and_exit(capsys):
    code, out, _ = run_cli(capsys, "table")
    assert code == 0
    assert out.startswith("| Axiom | Demote premises | Outcome |")
    assert "Decomposition only" in out


def test_table_byte_identical_across_invocations(capsys):
    _, first, _ = run_cli(capsys, "table")
    _, second, _ = run_cli(capsys, "table")
    assert first == second


def test_table_json(capsys):
    code, out, _ = run_cli(capsys, "table", "--json")
    assert code == 0
    doc = json.loads(out)
    assert [row["axiom"] for row in doc["rows"]] == ["A12", "A13", "A14", "A15"]


def test_probe_full_register(capsys):
    code, out, _ = run_cli(capsys, "probe", "full-register", "--max-things", "3")
    assert code == 0
    assert "full-register probe" in out
    assert "no expected verdict" in out
    if "Refuted" in out:
        assert "verifier cross-check: confirmed" in out


def test_export_axioms_json(capsys):
    code, out, _ = run_cli(capsys, "export-axioms", "--json")
    assert code == 0
    entries = {entry["id"]: entry for entry in json.loads(out)}
    assert "A12" in entries and "A22" in entries and "PropV_allshared" in entries
    assert entries["A22"]["section"] == "PSRCandidate"
    assert entries["A12"]["formula"].startswith("∀s1 s2 a.")
    assert all("citation" in entry for entry in entries.values())


def test_cli_byte_identity_across_processes():
    # A fresh process per invocation: no shared caches, and the search path
    # (model rendering included) must still come out byte-identical.
    argv = [sys.executable, "-m", "ethica", "search", "--premises",
            "PSRSubstance", "--target", "A12", "--max-things", "3"]
    first = subprocess.run(argv, capture_output=True, text=True)
    second = subprocess.run(argv, capture_output=True, text=True)
    assert first.returncode == 0
    assert "Refuted(size=2)" in first.stdout
    assert first.stdout == second.stdout
