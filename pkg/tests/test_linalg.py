from itertools import combinations
from math import gcd

from hypothesis import given, strategies as st

from shadowtrace.linalg import QQ, ZZ, cokernel_form, matrix, smith_normal_form, to_rows


def determinantal_divisors(rows):
    """gcd of the k x k minors, for every k, by cofactor expansion."""

    def det(M):
        if len(M) == 1:
            return M[0][0]
        return sum((-1) ** j * M[0][j] * det([r[:j] + r[j + 1 :] for r in M[1:]]) for j in range(len(M)))

    m, n = len(rows), len(rows[0])
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for I in combinations(range(m), k):
            for J in combinations(range(n), k):
                g = gcd(g, det([[rows[i][j] for j in J] for i in I]))
        out.append(g)
    return out


def diagonal(D):
    rows = to_rows(D)
    return [int(rows[i][i]) for i in range(min(len(rows), len(rows[0]) if rows else 0))]


def test_snf_example():
    D, U, V = smith_normal_form([[2, 4], [6, 8]])
    assert to_rows(D) == [[2, 0], [0, 4]]
    A = matrix([[2, 4], [6, 8]])
    assert U.matmul(A).matmul(V) == D


small = st.integers(-9, 9)


@st.composite
def int_matrices(draw, max_dim=4):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    return [[draw(small) for _ in range(n)] for _ in range(m)]


@given(int_matrices())
def test_snf_factorization(rows):
    D, U, V = smith_normal_form(rows)
    A = matrix(rows)
    assert U.matmul(A).matmul(V) == D
    assert abs(int(U.det())) == 1 and abs(int(V.det())) == 1
    d = diagonal(D)
    assert all(x >= 0 for x in d)
    assert all(b % a == 0 for a, b in zip(d, d[1:]) if a)
    assert all(b == 0 for a, b in zip(d, d[1:]) if a == 0)
    assert sum(1 for r in to_rows(D) for x in r if x) == sum(1 for x in d if x)


@given(int_matrices(3))
def test_snf_matches_determinantal_divisors(rows):
    d = diagonal(smith_normal_form(rows)[0])
    divisors = determinantal_divisors(rows)
    prod = 1
    for k, x in enumerate(d):
        prod *= x
        assert prod == divisors[k]


def test_cokernel_of_diag():
    form = cokernel_form(matrix([[2, 0], [0, 0], [0, 3]]), 3)
    assert form.free_rank == 1
    assert [int(x) for x in form.moduli] == [6]


def test_rational_matrix_entries_stay_exact():
    A = matrix([[1, 2], [3, 4]], QQ)
    assert to_rows(A.inv()) == [[QQ(-2), QQ(1)], [QQ(3, 2), QQ(-1, 2)]]
    assert matrix([[1]], ZZ).domain == ZZ


@given(int_matrices())
def test_snf_diagonal_agrees_with_sympy(rows):
    from sympy.polys.matrices.normalforms import smith_normal_form as sympy_snf

    A = matrix(rows, ZZ)
    D = smith_normal_form(A)[0]
    ref = to_rows(sympy_snf(A))
    k = min(A.shape)
    assert [to_rows(D)[i][i] for i in range(k)] == [abs(ref[i][i]) for i in range(k)]
