from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from shadowtrace.cli import corpus_files
from shadowtrace.evaluator import value
from shadowtrace.groups import standard_group
from shadowtrace.textio import (
    WorkspaceError,
    canonical_matrix,
    format_element,
    load_workspace,
    parse_element,
    parse_workspace,
)

DATA = Path(__file__).with_name("data")


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
def test_corpus_round_trips(path):
    ws = load_workspace([path])
    again = parse_workspace(ws.serialize())
    assert again == ws
    assert again.serialize() == ws.serialize()


def test_corpus_is_not_empty():
    assert len(corpus_files()) >= 5


def test_rationals_print_in_lowest_terms():
    assert canonical_matrix("[2/4, -6/3; 0, 7]") == "[1/2,-2;0,7]"


def test_group_ring_entries():
    S3 = standard_group("S3")
    c = parse_element("132 + 2*e - 1/2*132 + 3", S3)
    assert c == {1: Fraction(1, 2), 0: 5}
    assert format_element(c, S3) == "5*e+1/2*132"
    with pytest.raises(WorkspaceError):
        parse_element("2*h", S3)


names = st.sampled_from(["e", "g", "g2"])
coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@given(st.dictionaries(st.integers(0, 2), coeff, max_size=3))
def test_element_format_round_trips(coeffs):
    Z3 = standard_group("Z3")
    text = format_element(coeffs, Z3)
    back = parse_element(text, Z3)
    assert {k: v for k, v in back.items() if v} == {k: v for k, v in coeffs.items() if v}


@st.composite
def workspaces(draw):
    """Random matmod workspaces over one set, written as text."""
    n = draw(st.integers(1, 3))
    elems = [f"r{i}" for i in range(n)]
    lines = ["instance matmod-q", "", "[zero-cells]", "R: " + " ".join(elems), "", "[one-cells]"]
    ranks = {}
    for name in ("A", "B"):
        rk = [[draw(st.integers(0, 2)) for _ in range(n)] for _ in range(n)]
        ranks[name] = rk
        lines.append(f"{name}: R -> R ranks " + "; ".join(" ".join(map(str, r)) for r in rk))
    lines += ["", "[generators]", "f: A -> A", "", "[valuation]"]
    blocks = []
    for i in range(n):
        k = ranks["A"][i][i]
        if k:
            rows = [[str(draw(coeff)) for _ in range(k)] for _ in range(k)]
            blocks.append(f"{elems[i]},{elems[i]}=[" + ";".join(",".join(r) for r in rows) + "]")
    lines.append("f: blocks " + " ".join(blocks))
    lines += ["", "[layers main]", "top: A B", "slots <f> B", f"rotate {draw(st.integers(0, 1))}"]
    return "\n".join(lines) + "\n"


@given(workspaces())
def test_generated_workspaces_round_trip_and_evaluate(text):
    ws = parse_workspace(text)
    again = parse_workspace(ws.serialize())
    assert again == ws
    b1, b2 = ws.build(), again.build()
    d1, v1 = b1.diagram("main")
    d2, v2 = b2.diagram("main")
    assert value(b1.B, d1, v1).rows() == value(b2.B, d2, v2).rows()


def test_errors_carry_file_and_line():
    with pytest.raises(WorkspaceError, match=r"bad_rotation\.st:16: layer 3: rotation 5 ≥ word length 4$"):
        ws = load_workspace([DATA / "bad_rotation.st"])
        ws.build().diagram("main")
    with pytest.raises(WorkspaceError, match=r"redeclared\.st:5: R is declared twice"):
        load_workspace([DATA / "redeclared.st"])


def test_redeclaration_across_files(tmp_path):
    a = tmp_path / "a.st"
    b = tmp_path / "b.st"
    a.write_text("[complex c]\ngroup 1 ring Z\nranks 1\nf0 [1]\n")
    b.write_text("\n[complex c]\ngroup 1 ring Z\nranks 1\n")
    with pytest.raises(WorkspaceError, match=r"b\.st:2: c is declared twice"):
        load_workspace([a, b])


def test_unknown_section_and_bad_matrix():
    with pytest.raises(WorkspaceError, match="<text>:1: unknown section"):
        parse_workspace("[cells]\n")
    with pytest.raises(WorkspaceError, match="<text>:3:"):
        parse_workspace("[complex]\ngroup 1 ring Z\nd1 [1,2;3]\n")


def test_custom_group_section():
    ws = parse_workspace(
        "[group V]\nnames e a\n2\n0 1\n1 0\n\n[complex]\ngroup V ring Q\nranks 1\nf0 [1/2*a]\n"
    )
    C = ws.build().complex("main")
    assert C.group.names == ("e", "a")
    assert parse_workspace(ws.serialize()) == ws


def test_valuation_type_is_checked():
    text = "instance span\n[zero-cells]\nR: a b\n[one-cells]\nM: R -> R legs 1:a,b\nN: R -> R legs 1:a,a\n[generators]\nf: M -> N\n[valuation]\nf: map a.1=a.1\n"
    ws = parse_workspace(text, "s.st")
    with pytest.raises(WorkspaceError, match=r"s\.st:10: generator f"):
        ws.build().two_cell("f")
