import random

import pytest

from shadowtrace import traces
from shadowtrace.functors import Linearization, Rationalization, ScalarExtension, fixed_point_index, functoriality_square
from shadowtrace.instances.matmod import finite_set
from shadowtrace.laws import make_shapes
from shadowtrace.linalg import to_rows


def test_unit_span_linearizes_to_unit_ranks():
    F = Linearization()
    R = finite_set("R", ("a", "b"))
    U = F.source.unit(R)
    assert F.one(U) == F.target.unit(R)


def test_linearized_ranks_are_fiber_counts():
    F = Linearization()
    R, S = finite_set("R", ("a", "b")), finite_set("S", ("x", "y", "z"))
    legs = {1: ("a", "x"), 2: ("a", "x"), 3: ("b", "z"), 4: ("a", "y")}
    M = F.source.one_cell("M", R, S, legs)
    oracle = [[sum(1 for l, r in legs.values() if (l, r) == (a, s)) for s in S.payload] for a in R.payload]
    assert [list(r) for r in F.target.ranks(F.one(M))] == oracle


def test_phi_is_a_bijection_onto_fixed_points():
    sh = make_shapes("span")
    F = Linearization(sh.B)
    rng = random.Random(1)
    for _ in range(20):
        R = sh.S.zero_cell(rng)
        M = sh.S.one_cell(rng, R, R)
        rows = to_rows(F.phi(M).matrix)
        assert len(rows) == len(sh.B.fixed_points(M))
        assert all(sum(r) == 1 for r in rows) and all(sum(c) == 1 for c in zip(*rows))


def test_linearized_trace_counts_fixed_points():
    sh = make_shapes("span")
    F = Linearization(sh.B)
    rng = random.Random(8)
    for _ in range(20):
        d = sh.dualizable(rng)
        N = sh.S.one_cell(rng, d.M.src, d.M.tgt, "N")
        f = sh.S.endo2(rng, N)
        C = F.target
        t = to_rows(traces.trace(C, F.two(f), C.make_dual(F.one(N))).matrix)
        for i, r in enumerate(N.src.payload):
            for j, s in enumerate(N.tgt.payload):
                assert t[j][i] == fixed_point_index(f, N, r, s)


@pytest.mark.parametrize("instance, functor", [("span", Linearization), ("grbimod-z", Rationalization)])
def test_functoriality_square_commutes(instance, functor):
    sh = make_shapes(instance)
    F = functor(sh.B)
    rng = random.Random(6)
    for _ in range(15):
        f, d = sh.trace_input(rng)
        lhs, rhs = functoriality_square(F, f, d)
        assert lhs == rhs


def test_scalar_extension_components_are_invertible_and_cube_commutes():
    sh = make_shapes("grbimod-z")
    E = ScalarExtension(sh.B)
    B = sh.B
    rng = random.Random(9)
    for _ in range(10):
        f, d = sh.trace_input(rng)
        a, inv = E.at(d.M), E.inverse(d)
        assert B.equal2(B.vcompose(inv, a), B.identity2(a.src))
        assert B.equal2(B.vcompose(a, inv), B.identity2(a.tgt))
        for name, (lhs, rhs) in E.cube(f, d).items():
            assert lhs == rhs, name


def test_integral_reidemeister_rationalizes():
    from shadowtrace.groups import standard_group
    from shadowtrace.samplers import random_complex

    rng = random.Random(2)
    for name in ("Z2", "Z3", "S3"):
        G = standard_group(name)
        for _ in range(5):
            C = random_complex(rng, G)
            assert traces.reidemeister(C).to_ring(C.rationalized().ring) == traces.reidemeister(C.rationalized())
