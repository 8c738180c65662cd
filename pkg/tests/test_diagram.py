import random

import pytest
from hypothesis import given, strategies as st

from shadowtrace import traces
from shadowtrace.core import ShadowMorphism
from shadowtrace.diagram import (
    Box,
    ConjugateByRotation,
    CyclicWord,
    Diagram,
    DiagramError,
    DropBoxFreeElementary,
    Edge,
    Elementary,
    FuseRotations,
    Generator,
    Rotation,
    SplitElementary,
    Valuation,
    Wire,
    applicable_moves,
    apply_move,
    codomain_word,
    normalize,
    validate,
)
from shadowtrace.evaluator import theta_power, value
from shadowtrace.instances import MatMod
from shadowtrace.instances.matmod import finite_set
from shadowtrace.laws import INSTANCES, make_shapes
from shadowtrace.linalg import QQ, ZZ, to_rows
from shadowtrace.samplers import random_diagram

A, B_, C, D = (Edge(x, "R", "R") for x in "ABCD")


def test_rotation_two_on_three_letters():
    w = CyclicWord((A, B_, C))
    assert codomain_word(Rotation(2), w).letters == (C, A, B_)


def test_elementary_codomain():
    g = Generator("g", (B_, C), (D,))
    w = CyclicWord((A, B_, C))
    assert codomain_word(Elementary([Wire(A), Box(g)]), w).letters == (A, D)


def test_fuse_rotations_wraps_around():
    d = Diagram(CyclicWord((A, B_, C)), [Rotation(1), Rotation(2)])
    assert apply_move(d, FuseRotations(0)).layers == (Rotation(0),)


def test_conjugate_by_rotation_with_every_slot_first():
    layer = Elementary([Wire(A), Wire(B_), Wire(C)])
    d = Diagram(CyclicWord((A, B_, C)), [layer])
    out = apply_move(d, ConjugateByRotation(0, 3))
    assert out.layers[0] == Rotation(0)


def test_rotation_out_of_range_names_the_layer():
    d = Diagram(CyclicWord((A, B_, C, D)), [Elementary([Wire(A), Wire(B_), Wire(C), Wire(D)]), Rotation(1), Rotation(5)])
    with pytest.raises(DiagramError, match="^layer 3: rotation 5 ≥ word length 4$"):
        validate(d)


def test_interface_mismatch_is_reported():
    d = Diagram(CyclicWord((A, B_)), [Elementary([Wire(B_), Wire(A)])])
    with pytest.raises(DiagramError, match="layer 1: interface mismatch"):
        validate(d)


def test_empty_word_needs_region():
    with pytest.raises(DiagramError):
        CyclicWord(())


def point_valuation(ring=ZZ, ranks=(1, 2, 3)):
    B = MatMod(ring)
    R = finite_set("R", ("a", "b"))
    cells = {}
    for name, n in zip("ABC", ranks):
        cells[name] = B.one_cell(name, R, R, [[n, 0], [1, n]])
    return B, Valuation({"R": R}, cells, {})


def test_empty_diagram_is_identity_on_rank_of_set():
    B, v = point_valuation()
    d = Diagram(CyclicWord((), "R"), [])
    t = value(B, d, v)
    assert to_rows(t.matrix) == [[1, 0], [0, 1]]


def test_rotation_only_diagram_is_a_permutation():
    B, v = point_valuation(QQ)
    word = (A, B_, C)
    for k in range(3):
        t = value(B, Diagram(CyclicWord(word), [Rotation(k)]), v)
        rows = to_rows(t.matrix)
        assert all(sorted(r) == [0] * (len(r) - 1) + [1] for r in rows)
        assert all(sorted(c) == [0] * (len(c) - 1) + [1] for c in zip(*rows))
        if k == 0:
            assert t == ShadowMorphism.identity(t.src)


@pytest.mark.parametrize("instance", INSTANCES)
def test_theta_powers_compose_cyclically(instance):
    sh = make_shapes(instance)
    rng = random.Random(2)
    for _ in range(10):
        M, N, P = sh.S.triple(rng)
        word = [M, N, P]
        for k in range(3):
            for m in range(3):
                rot = word[k:] + word[:k]
                lhs = theta_power(sh.B, rot, m) @ theta_power(sh.B, word, k)
                assert lhs == theta_power(sh.B, word, (k + m) % 3)


@pytest.mark.parametrize("instance", INSTANCES)
def test_trace_diagram_value_is_trace(instance):
    sh = make_shapes(instance)
    rng = random.Random(4)
    for _ in range(10):
        f, d = sh.trace_input(rng)
        diagram, v = traces.build_trace_diagram(sh.B, f, d)
        assert value(sh.B, diagram, v) == traces.trace(sh.B, f, d)


@pytest.mark.parametrize("instance", INSTANCES)
@given(seed=st.integers(0, 10**6))
def test_every_move_preserves_boundary_and_value(instance, seed):
    sh = make_shapes(instance)
    rng = random.Random(seed)
    d, v = random_diagram(sh.S, rng)
    before = value(sh.B, d, v)
    for m in applicable_moves(d):
        d2 = apply_move(d, m)
        assert validate(d2) == validate(d)
        assert value(sh.B, d2, v) == before


@given(seed=st.integers(0, 10**6))
def test_normalize_is_idempotent(seed):
    sh = make_shapes("matmod-z")
    d, v = random_diagram(sh.S, random.Random(seed))
    n = normalize(d)
    assert normalize(n) == n
    assert value(sh.B, n, v) == value(sh.B, d, v)


def test_split_then_merge_round_trip():
    g = Generator("g", (B_,), (C,))
    d = Diagram(CyclicWord((A, B_)), [Elementary([Wire(A), Box(g)])])
    split = apply_move(d, SplitElementary(0, (True,)))
    assert len(split.layers) == 2
    assert normalize(split).words()[-1] == d.words()[-1]
    with pytest.raises(DiagramError):
        apply_move(d, DropBoxFreeElementary(0))
