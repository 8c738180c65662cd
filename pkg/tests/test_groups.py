from itertools import permutations, product

import pytest
from hypothesis import given, strategies as st

from shadowtrace.groups import (
    FiniteGroup,
    GroupError,
    GroupRingElement,
    GRMatrix,
    cyclic_group,
    parse_group,
    standard_group,
    symmetric_group,
    twisted_conjugacy_classes,
)
from shadowtrace.linalg import QQ, ZZ

GROUPS = [standard_group(n) for n in ("1", "Z2", "Z3", "S3")]


def orbit_count(G, psi):
    """Twisted classes by union-find over x ~ h x psi(h)^-1."""
    parent = list(G.elements)

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for x in G.elements:
        for h in G.elements:
            y = G.mul(G.mul(h, x), G.inv(psi[h]))
            parent[find(x)] = find(y)
    return len({find(x) for x in G.elements})


def test_s3_has_three_classes():
    assert len(twisted_conjugacy_classes(symmetric_group(3))) == 3


def test_z3_squared_twist_has_one_class():
    Z3 = cyclic_group(3)
    psi = [Z3.names.index(x) for x in ("e", "g2", "g")]
    C = twisted_conjugacy_classes(Z3, psi)
    assert len(C) == 1


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.name)
def test_class_counts_match_orbit_oracle(G):
    for psi in G.homomorphisms(G):
        C = twisted_conjugacy_classes(G, psi)
        assert len(C) == orbit_count(G, psi)
        assert sorted(x for c in C.classes for x in c) == list(G.elements)
        assert list(C.reps) == sorted(C.reps)


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.name)
def test_homomorphisms_are_all_maps_that_respect_products(G):
    brute = {imgs for imgs in product(G.elements, repeat=G.order) if G.order <= 3 and G.is_homomorphism(G, imgs)}
    found = set(G.homomorphisms(G))
    if G.order <= 3:
        assert found == brute
    assert all(G.is_homomorphism(G, h) for h in found)
    assert tuple(G.elements) in found


def test_symmetric_group_is_composition_of_permutations():
    S3 = symmetric_group(3)
    perms = list(permutations(range(3)))
    name = {"".join(str(x + 1) for x in p): p for p in perms}
    name["e"] = (0, 1, 2)
    for a in S3.elements:
        for b in S3.elements:
            p, q = name[S3.names[a]], name[S3.names[b]]
            r = name[S3.names[S3.mul(a, b)]]
            assert r == tuple(p[q[x]] for x in range(3))


def test_parse_group_with_names():
    G = parse_group(["names e a", "2", "0 1", "1 0"])
    assert G.order == 2 and G.names == ("e", "a") and G.inv(1) == 1


def test_bad_tables_are_rejected():
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [0, 1]])
    with pytest.raises(GroupError):
        standard_group("Q8")


def elements(G, ring=ZZ):
    return st.lists(st.integers(-4, 4), min_size=G.order, max_size=G.order).map(lambda c: GroupRingElement(G, ring, c))


S3 = symmetric_group(3)


@given(elements(S3), elements(S3), elements(S3))
def test_group_ring_is_an_associative_ring(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).augmentation() == a.augmentation() * b.augmentation()
    assert (a * b).involution() == b.involution() * a.involution()


@st.composite
def grmatrices(draw, G, m, n):
    rows = [[draw(elements(G)) for _ in range(n)] for _ in range(m)]
    return rows, GRMatrix.from_entries(G, ZZ, rows, (m, n))


@given(st.data())
def test_grmatrix_product_matches_entrywise_oracle(data):
    G = data.draw(st.sampled_from(GROUPS[1:]))
    m, k, n = (data.draw(st.integers(1, 3)) for _ in range(3))
    ra, A = data.draw(grmatrices(G, m, k))
    rb, B = data.draw(grmatrices(G, k, n))
    P = A @ B
    for i in range(m):
        for j in range(n):
            want = GroupRingElement(G, ZZ, [0] * G.order)
            for t in range(k):
                want = want + ra[i][t] * rb[t][j]
            assert P.entry(i, j) == want


def test_diagonal_sum_and_rational_coefficients():
    Z2 = cyclic_group(2)
    A = GRMatrix.from_entries(Z2, QQ, [[GroupRingElement(Z2, QQ, [QQ(1, 2), 3]), 0], [0, 1]])
    assert A.diagonal_sum().coeffs == (QQ(3, 2), QQ(3))
