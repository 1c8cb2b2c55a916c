import csv
import io
import json
import subprocess
import sys

import pytest

from reliances.cli import EXIT_NO, EXIT_OK, EXIT_PARSE, EXIT_USAGE, main

from conftest import SAMPLES


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


def edges(doc):
    return {(e["from"], e["to"], e["kind"]) for e in doc["edges"]}


def test_analyze_json_example1():
    code, text = run("analyze", SAMPLES / "example1.erls", "--positive", "--restraints")
    assert code == EXIT_OK
    doc = json.loads(text)
    assert (0, 1, "positive") in edges(doc)
    assert (2, 0, "restraint") in edges(doc)
    assert doc["stratified"] == "yes"


def test_analyze_json_is_deterministic():
    _, a = run("analyze", SAMPLES / "transitivity.erls")
    _, b = run("analyze", SAMPLES / "transitivity.erls")
    assert a == b


def test_analyze_single_kind():
    _, text = run("analyze", SAMPLES / "example1.erls", "--positive")
    doc = json.loads(text)
    assert {k for _, _, k in edges(doc)} == {"positive"}
    assert "stratified" not in doc


def test_analyze_empty_file():
    code, text = run("analyze", SAMPLES / "empty.erls")
    assert code == EXIT_OK
    doc = json.loads(text)
    assert doc["edges"] == [] and doc["rules"] == []


@pytest.mark.parametrize("variant", ["N", "L", "G"])
def test_analyze_variants_agree(variant):
    _, base = run("analyze", SAMPLES / "example1.erls")
    _, other = run("analyze", SAMPLES / "example1.erls", "--variant", variant)
    assert edges(json.loads(base)) == edges(json.loads(other))


def test_analyze_dot_to_file(tmp_path):
    target = tmp_path / "g.dot"
    code, text = run("analyze", SAMPLES / "example1.erls", "--format", "dot", "--out", target)
    assert code == EXIT_OK and text == ""
    dot = target.read_text()
    assert dot.startswith("digraph reliances {")
    assert "r0 -> r1;" in dot
    assert 'r2 -> r0 [style=dashed, label="R"];' in dot


def test_analyze_with_threads():
    _, one = run("analyze", SAMPLES / "example1.erls")
    _, two = run("analyze", SAMPLES / "example1.erls", "--threads", "2")
    assert edges(json.loads(one)) == edges(json.loads(two))


def test_stratify_example1():
    code, text = run("stratify", SAMPLES / "example1.erls")
    assert (code, text) == (EXIT_OK, "core-stratified: yes\n")


def test_stratify_transitivity_witness():
    code, text = run("stratify", SAMPLES / "transitivity.erls")
    assert code == EXIT_NO
    lines = text.splitlines()
    assert lines[0] == "core-stratified: no"
    assert lines[1] == "witness: 1 restrains 0"


def test_stratify_inverse_role_set():
    # Rules 0 and 2 share no predicate, so no restraint closes a cycle.
    code, text = run("stratify", SAMPLES / "inverse_role.erls")
    assert (code, text) == (EXIT_OK, "core-stratified: yes\n")


def test_stratify_pieces():
    code, text = run("stratify", SAMPLES / "pieces.erls", "--pieces")
    assert (code, text) == (EXIT_OK, "core-stratified: yes\n")


def test_mfa_samples():
    assert run("mfa", SAMPLES / "mfa_true.erls") == (EXIT_OK, "mfa: yes\n")
    code, text = run("mfa", SAMPLES / "mfa_false.erls")
    assert code == EXIT_NO
    assert text.splitlines() == ["mfa: no", "cyclic term: f0_v(f0_v(*)) (depth 2)"]


def test_mfa_by_components():
    code, text = run("mfa", SAMPLES / "example1.erls", "--by-components")
    assert code == EXIT_OK
    assert text.splitlines() == ["mfa: yes", "components: 3"]


def test_mfa_depth_limit():
    code, text = run("mfa", SAMPLES / "chain.erls", "--depth-limit", "1")
    assert code == EXIT_OK
    code, text = run("mfa", SAMPLES / "mfa_false.erls", "--depth-limit", "1")
    assert code == EXIT_NO


def test_bench_all_variants():
    code, text = run("bench", SAMPLES / "example1.erls")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["variant", "kind", "edges", "unknown", "candidates", "cache_hits", "millis"]
    assert len(rows) == 8
    for kind in ("positive", "restraint"):
        counts = {r["edges"] for r in rows if r["kind"] == kind}
        assert len(counts) == 1


def test_bench_single_variant_and_kind():
    _, text = run("bench", SAMPLES / "example1.erls", "--variants", "A", "--repeat", "3")
    assert len(text.splitlines()) == 3
    _, text = run("bench", SAMPLES / "example1.erls", "--variants", "A", "--kinds", "positive")
    assert len(text.splitlines()) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", SAMPLES / "example1.erls", "--bogus"],
        ["analyze", SAMPLES / "example1.erls", "--variant", "X"],
        ["bench", SAMPLES / "example1.erls", "--variants", "A,Z"],
        ["mfa", SAMPLES / "example1.erls", "--depth-limit", "0"],
        ["frobnicate", SAMPLES / "example1.erls"],
        [],
        ["stratify", SAMPLES / "no-such-file.erls"],
    ],
)
def test_usage_errors(argv, capsys):
    assert run(*argv)[0] == EXIT_USAGE


def test_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.erls"
    bad.write_text("a(?x) -> b(?x)\n")
    assert run("analyze", bad)[0] == EXIT_PARSE
    assert "parse error" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "reliances", "stratify", str(SAMPLES / "transitivity.erls")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == EXIT_NO
    assert proc.stdout.startswith("core-stratified: no")
