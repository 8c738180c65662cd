import random

import pytest
from hypothesis import given, strategies as st

from shadowtrace.core import CellError, check_axioms
from shadowtrace.groups import cyclic_group, standard_group, symmetric_group, twisted_conjugacy_classes
from shadowtrace.instances import GRBimod, MatMod, Span
from shadowtrace.instances.grbimod import group_object, twisted_unit
from shadowtrace.instances.matmod import finite_set
from shadowtrace.laws import INSTANCES, make_shapes
from shadowtrace.linalg import QQ, ZZ


@pytest.mark.parametrize("instance", INSTANCES)
def test_axioms_smoke(instance):
    sh = make_shapes(instance)
    rep = check_axioms(sh.B, sh.S, 15, seed=7)
    assert rep.ok, list(rep.lines())


# -- MatMod -------------------------------------------------------------------------------

ranks_st = st.integers(0, 3)


@st.composite
def rank_matrix(draw, m, n):
    return [[draw(ranks_st) for _ in range(n)] for _ in range(m)]


@given(st.data())
def test_matmod_composition_multiplies_rank_matrices(data):
    a, b, c = (data.draw(st.integers(1, 3)) for _ in range(3))
    R, S, T = finite_set("R", a), finite_set("S", b), finite_set("T", c)
    X, Y = data.draw(rank_matrix(a, b)), data.draw(rank_matrix(b, c))
    B = MatMod(ZZ)
    W = B.compose1(B.one_cell("X", R, S, X), B.one_cell("Y", S, T, Y))
    want = [[sum(X[i][k] * Y[k][j] for k in range(b)) for j in range(c)] for i in range(a)]
    assert [list(r) for r in B.ranks(W)] == want


def test_matmod_shadow_is_sum_of_diagonal_ranks():
    B = MatMod(QQ)
    R = finite_set("R", 3)
    M = B.one_cell("M", R, R, [[2, 1, 0], [0, 0, 4], [1, 1, 3]])
    assert B.shadow_ob(M).ngens == 5


def test_matmod_dual_triangles():
    B = MatMod(ZZ)
    R, S = finite_set("R", 2), finite_set("S", 3)
    d = B.make_dual(B.one_cell("M", R, S, [[1, 0, 2], [0, 3, 1]]))
    assert d.triangle_identities(B)


# -- Span ------------------------------------------------------------------------------------


def test_span_unit_is_identity_legs():
    B = Span()
    R = finite_set("R", ("a", "b", "c"))
    xs, left, right = B.apex(B.unit(R))
    assert xs == (("a",), ("b",), ("c",))
    assert all(left[x] == right[x] == x[0] for x in xs)


@given(st.lists(st.integers(0, 4), min_size=1, max_size=5))
def test_span_shadow_of_graph_is_fixed_point_set(images):
    n = len(images)
    f = [y % n for y in images]
    B = Span()
    R = finite_set("R", tuple(range(n)))
    M = B.one_cell("G", R, R, {r: (r, f[r]) for r in range(n)})
    assert tuple(x[1] for x in B.shadow_ob(M).labels) == tuple(r for r in range(n) if f[r] == r)


def test_span_dual_reverses_legs():
    B = Span()
    R, S = finite_set("R", ("a", "b", "c")), finite_set("S", ("x", "y"))
    g = {"a": "x", "b": "y", "c": "x"}
    M = B.one_cell("M", R, S, {r: (r, g[r]) for r in g})
    d = B.make_dual(M)
    xs, left, right = B.apex(d.Mdual)
    assert {(left[x], right[x]) for x in xs} == {(g[r], r) for r in g}
    assert d.triangle_identities(B)


def test_span_with_non_bijective_left_leg_is_not_dualizable():
    B = Span()
    R, S = finite_set("R", ("a", "b")), finite_set("S", ("x",))
    with pytest.raises(CellError):
        B.make_dual(B.one_cell("M", R, S, {1: ("a", "x"), 2: ("a", "x")}))


def test_span_composition_is_strictly_associative():
    rng = random.Random(3)
    sh = make_shapes("span")
    for _ in range(30):
        M, N, P = sh.S.triple(rng)
        B = sh.B
        assert B.compose1(B.compose1(M, N), P) == B.compose1(M, B.compose1(N, P))
        assert B.apex(B.compose1(B.compose1(M, N), P)) == B.apex(B.compose1(M, B.compose1(N, P)))


# -- GRBimod --------------------------------------------------------------------------------


def test_twisted_unit_shadow_counts_twisted_classes():
    B = GRBimod()
    Z3 = cyclic_group(3)
    R = group_object(Z3, ZZ)
    psi = (0, 2, 1)
    X = twisted_unit(B, R, psi)
    P = B.shadow_ob(X).presentation
    assert P.free_rank == len(twisted_conjugacy_classes(Z3, psi)) == 1
    assert P.torsion == []


@pytest.mark.parametrize("name", ["1", "Z2", "Z3", "S3"])
def test_unit_shadow_is_free_on_conjugacy_classes(name):
    G = standard_group(name)
    B = GRBimod()
    P = B.shadow_ob(B.unit(group_object(G, ZZ))).presentation
    assert P.free_rank == len(twisted_conjugacy_classes(G))


def test_grbimod_two_cells_must_be_equivariant():
    from shadowtrace.instances.grbimod import regular_module

    B = GRBimod()
    S3 = symmetric_group(3)
    one = group_object(standard_group("1"), QQ)
    V = regular_module(B, group_object(S3, QQ), one)
    with pytest.raises(CellError):
        B.two_cell(V, V, [[1 if (i, j) == (0, 1) else 0 for j in range(6)] for i in range(6)])
