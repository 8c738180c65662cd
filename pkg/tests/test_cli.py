import json
from pathlib import Path

import pytest

from shadowtrace.cli import corpus_files, main

DATA = Path(__file__).with_name("data")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_corpus(capsys):
    code, out, err = run(capsys, "validate", *map(str, corpus_files()))
    assert code == 0 and err == ""
    assert "trace: []@R -> []@R" in out


def test_validate_reports_bad_rotation(capsys):
    code, out, err = run(capsys, "validate", "tests/data/bad_rotation.st")
    assert code == 1
    assert err.strip() == "tests/data/bad_rotation.st:16: layer 3: rotation 5 ≥ word length 4"


def test_validate_reports_dangling_edge(capsys):
    code, _, err = run(capsys, "validate", "tests/data/dangling_edge.st")
    assert code == 1
    assert err.strip() == "tests/data/dangling_edge.st:11: layer 1: unknown edge Zed"


def test_validate_reports_redeclaration(capsys):
    code, _, err = run(capsys, "validate", "tests/data/redeclared.st")
    assert code == 1
    assert err.strip() == "tests/data/redeclared.st:5: R is declared twice"


def test_euler_of_rank(capsys):
    assert run(capsys, "euler", "--instance", "matmod", "--rank", "4") == (0, "4\n", "")


def test_eval_and_trace_agree(capsys):
    _, diagram, _ = run(capsys, "eval", "matmod_trace.st", "--diagram", "trace", "--format", "machine")
    _, trace, _ = run(capsys, "trace", "matmod_trace.st", "--cell", "f", "--format", "machine")
    d, t = json.loads(diagram), json.loads(trace)
    assert d["matrix"] == t["matrix"] == [["4"]]


def test_span_trace_lists_the_function(capsys):
    code, out, _ = run(capsys, "trace", "span_trace.st", "--cell", "f")
    assert code == 0
    lines = out.split("function:\n")[1].split()
    assert " ".join(lines) == "a -> x b -> y c -> x d -> x"


def test_rotation_diagram_is_a_permutation(capsys):
    _, out, _ = run(capsys, "eval", "matmod_rotation.st", "--diagram", "spin", "--format", "machine")
    m = json.loads(out)["matrix"]
    assert sorted(map(tuple, m)) == sorted(
        tuple("1" if i == j else "0" for j in range(5)) for i in range(5)
    )


def test_circle(capsys):
    assert run(capsys, "reidemeister", "circle.st") == (0, "-2[e]\n", "")
    assert run(capsys, "lefschetz", "circle.st") == (0, "-2\n", "")


def test_twisted_complex(capsys):
    assert run(capsys, "reidemeister", "reidemeister_z3.st")[1] == "-3[e]\n"
    assert run(capsys, "lefschetz", "reidemeister_z3.st")[1] == "-3\n"


def test_hs_and_twisted(capsys):
    assert run(capsys, "hs", "grbimod_hs.st", "--cell", "f")[1] == "2[e] + 3[g]\n"
    assert run(capsys, "hs", "--group", "Z2", "--matrix", "[2*e+3*g]")[1] == "2[e] + 3[g]\n"
    assert run(capsys, "twisted", "--group", "Z3", "--matrix", "[g]", "--psi", "e g2 g")[1] == "1[e]\n"


def test_regular_euler(capsys):
    _, out, _ = run(capsys, "euler", "regular_z2.st", "--cell", "V", "--format", "machine")
    assert json.loads(out)["matrix"] == [["2", "0"]]


def test_transfer_map(capsys):
    _, out, _ = run(capsys, "transfer", "--instance", "span", "--map", "0,2,1", "--format", "machine")
    assert json.loads(out)["matrix"] == [["1"], ["0"], ["0"]]


def test_laws_and_axioms(capsys):
    code, out, _ = run(capsys, "laws", "--law", "sliding", "--instance", "matmod-z", "--trials", "20")
    assert code == 0 and out.startswith("sliding[matmod-z]: PASS (20 trials")
    code, out, _ = run(capsys, "axioms", "--instance", "span", "--trials", "10")
    assert code == 0 and "PASS" in out


def test_unknown_names_fail_cleanly(capsys):
    code, _, err = run(capsys, "hs", "grbimod_hs.st", "--cell", "nope")
    assert code == 1 and "nope" in err
    code, _, err = run(capsys, "twisted", "--group", "Z3", "--matrix", "[g]", "--psi", "e,g2,g")
    assert code == 1 and "--psi" in err


def test_machine_output_is_deterministic(capsys):
    argv = ("laws", "--law", "cube", "--trials", "5", "--seed", "7", "--format", "machine")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    json.loads(first[1].splitlines()[0])


def test_corpus_override(capsys, tmp_path, monkeypatch):
    (tmp_path / "mine.st").write_text("[complex]\ngroup 1 ring Z\nranks 2\nf0 [1,0;0,6]\n")
    monkeypatch.setenv("SHADOWTRACE_CORPUS", str(tmp_path))
    assert run(capsys, "lefschetz", "mine.st") == (0, "7\n", "")
    with pytest.raises(SystemExit):
        main(["laws", "--law", "bogus"])
