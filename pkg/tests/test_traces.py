import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from shadowtrace import traces
from shadowtrace.core import CellError
from shadowtrace.groups import GroupError, GroupRingElement, GRMatrix, cyclic_group, standard_group, trivial_group
from shadowtrace.instances import GRBimod, MatMod
from shadowtrace.instances.grbimod import group_object, regular_module, representation
from shadowtrace.instances.matmod import finite_set
from shadowtrace.linalg import QQ, ZZ, matrix, to_rows
from shadowtrace.samplers import random_complex, random_grmatrix

Z2, Z3 = cyclic_group(2), cyclic_group(3)


def one_object_trace(rows, ring=ZZ):
    B = MatMod(ring)
    pt = finite_set("pt", ("*",))
    n = len(rows)
    M = B.one_cell("M", pt, pt, [[n]])
    f = B.two_cell(M, M, {(0, 0): rows})
    return to_rows(traces.trace(B, f, B.make_dual(M)).matrix)


@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_one_object_trace_is_diagonal_sum(rows):
    assert one_object_trace(rows) == [[sum(rows[i][i] for i in range(len(rows)))]]


def test_one_object_trace_over_q():
    rows = [[QQ(1, 2), 7], [3, QQ(-5, 3)]]
    assert one_object_trace(rows, QQ) == [[QQ(-7, 6)]]


def test_mate_of_two_by_two_is_transpose():
    B = MatMod(QQ)
    pt = finite_set("pt", ("*",))
    M = B.one_cell("M", pt, pt, [[2]])
    d = B.make_dual(M)
    rows = [[1, QQ(2, 3)], [-4, 5]]
    f = B.two_cell(M, M, {(0, 0): rows})
    g = traces.mate(B, f, d, d)
    assert to_rows(g.data[(0, 0)]) == [[1, -4], [QQ(2, 3), 5]]
    assert B.equal2(traces.unmate(B, g, d, d), f)


# -- euler and transfer --------------------------------------------------------------------------


@pytest.mark.parametrize("n", [0, 1, 4])
def test_euler_of_rank_n_is_n(n):
    B = MatMod(ZZ)
    pt = finite_set("pt", ("*",))
    d = B.make_dual(B.one_cell("M", pt, pt, [[n]]))
    assert to_rows(traces.euler(B, d).matrix) == [[n]]


def character_oracle(mats):
    return [sum(A[i][i] for i in range(len(A))) for A in mats]


def test_euler_of_regular_representation_is_its_character():
    B = GRBimod()
    R, one = group_object(Z2, QQ), group_object(trivial_group(), QQ)
    V = regular_module(B, R, one)
    t = traces.euler(B, B.make_dual(V))
    mats = [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]
    assert to_rows(t.matrix) == [character_oracle(mats)] == [[2, 0]]


def test_euler_of_a_twisted_free_representation():
    B = GRBimod()
    R, one = group_object(Z2, QQ), group_object(trivial_group(), QQ)
    mats = [[[1, 0], [0, 1]], [[0, -1], [-1, 0]]]
    V = representation(B, "V", R, one, [matrix(m, QQ) for m in mats])
    assert to_rows(traces.euler(B, B.make_dual(V)).matrix) == [character_oracle(mats)]


def test_sign_representation_has_no_free_dual():
    B = GRBimod()
    R, one = group_object(Z2, QQ), group_object(trivial_group(), QQ)
    V = representation(B, "sign", R, one, [matrix([[1]], QQ), matrix([[-1]], QQ)])
    with pytest.raises(CellError):
        B.make_dual(V)


@pytest.mark.parametrize(
    "fhat, fixed",
    [([0, 1, 2], [0, 1, 2]), ([1, 2, 0], []), ([1, 0, 2], [2]), ([2, 1, 1, 0], [1])],
)
def test_transfer_sums_fixed_points(fhat, fixed):
    B = MatMod(ZZ)
    delta, d = traces.point_diagonal(B, fhat)
    col = [r[0] for r in to_rows(traces.transfer(B, delta, d).matrix)]
    assert col == [1 if s in fixed else 0 for s in range(len(fhat))]


def test_transfer_rejects_a_non_diagonal():
    B = MatMod(ZZ)
    _, d = traces.point_diagonal(B, [0])
    with pytest.raises(CellError):
        traces.transfer(B, B.identity2(d.M), d)


# -- Hattori-Stallings and twisted traces -------------------------------------------------------


def gr(G, ring, rows):
    return GRMatrix.from_entries(G, ring, [[GroupRingElement(G, ring, c) if isinstance(c, list) else c for c in r] for r in rows])


def test_hs_of_two_plus_three_g():
    f = gr(Z2, ZZ, [[[2, 3]]])
    x = traces.hattori_stallings(f)
    assert x.coeffs == (2, 3) and repr(x) == "2[e] + 3[g]"
    assert traces.hattori_stallings_via_trace(f) == x


def test_hs_of_idempotent():
    e = gr(Z2, QQ, [[1, 0], [0, 0]])
    x = traces.hattori_stallings(e, traces.IdempotentModule(e))
    assert x.coeffs == (1, 0)


def test_hs_rejects_maps_off_the_summand():
    e = gr(Z2, QQ, [[1, 0], [0, 0]])
    with pytest.raises(GroupError):
        traces.hattori_stallings(gr(Z2, QQ, [[1, 1], [0, 0]]), traces.IdempotentModule(e))


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("name", ["Z2", "S3"])
def test_hs_of_identity_is_rank(name, n):
    G = standard_group(name)
    x = traces.hattori_stallings(GRMatrix.identity(G, ZZ, n))
    assert x.coeffs[0] == n and sum(x.coeffs) == n


def test_twisted_trace_z3_square():
    psi = (0, 2, 1)
    f = gr(Z3, ZZ, [[[0, 1, 0]]])
    x = traces.twisted_trace(f, psi)
    assert len(x.classes) == 1 and x.coeffs == (1,)
    assert traces.twisted_trace_via_trace(f, psi) == x


@pytest.mark.parametrize("name", ["Z2", "Z3", "S3"])
def test_twisted_trace_agrees_with_bicategory(name):
    G = standard_group(name)
    rng = random.Random(11)
    for psi in G.homomorphisms(G):
        for _ in range(3):
            n = rng.randint(1, 2)
            f = random_grmatrix(rng, G, ZZ, n, n, density=0.6)
            assert traces.twisted_trace_via_trace(f, psi) == traces.twisted_trace(f, psi)
            if psi == tuple(G.elements):
                assert traces.hattori_stallings_via_trace(f) == traces.hattori_stallings(f)


def test_untwisted_twisted_trace_is_hs():
    f = gr(Z3, ZZ, [[[1, 2, 0], 0], [[0, 0, 5], [0, 1, 1]]])
    assert traces.twisted_trace(f, None) == traces.hattori_stallings(f)


# -- chain complexes ------------------------------------------------------------------------------


def circle(deg, ring=ZZ):
    T = trivial_group()
    return traces.EquivariantChainComplex(T, ring, [1, 1], [None, gr(T, ring, [[0]])], [gr(T, ring, [[1]]), gr(T, ring, [[deg]])])


@pytest.mark.parametrize("deg", [-2, 0, 1, 3])
def test_circle_complex(deg):
    C = circle(deg)
    assert traces.reidemeister(C).coeffs == (1 - deg,)
    assert traces.lefschetz(C) == 1 - deg


def test_augment_of_two_plus_three_g():
    x = traces.hattori_stallings(gr(Z2, ZZ, [[[2, 3]]]))
    assert traces.augment_reidemeister(x) == 5


def test_lefschetz_needs_trivial_group():
    T = Z2
    C = traces.EquivariantChainComplex(T, ZZ, [1], [None], [gr(T, ZZ, [[[1, 1]]])])
    with pytest.raises(CellError):
        traces.lefschetz(C)
    assert traces.lefschetz(C.augmented()) == 2


def test_chain_map_condition_is_checked():
    T = trivial_group()
    with pytest.raises(CellError):
        traces.EquivariantChainComplex(T, ZZ, [1, 1], [None, gr(T, ZZ, [[1]])], [gr(T, ZZ, [[1]]), gr(T, ZZ, [[2]])])


@pytest.mark.parametrize("name", ["1", "Z2", "Z3", "S3"])
def test_reidemeister_augments_to_lefschetz(name):
    G = standard_group(name)
    rng = random.Random(5)
    for _ in range(15):
        C = random_complex(rng, G)
        assert traces.augment_reidemeister(traces.reidemeister(C)) == traces.lefschetz(C.augmented())
        if G.is_trivial:
            assert traces.reidemeister(C).coeffs == (traces.lefschetz(C),)


def test_class_vector_arithmetic():
    C = traces.twisted_conjugacy_classes(Z2)
    a = traces.ClassVector(C, ZZ, [1, 2])
    b = traces.ClassVector(C, QQ, [Fraction(1, 2), 0])
    assert (a - b).coeffs == (QQ(1, 2), QQ(2))
    assert repr(a.scaled(-1)) == "-1[e] - 2[g]"
