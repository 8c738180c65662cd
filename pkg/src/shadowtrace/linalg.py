"""Exact matrix helpers over ZZ and QQ.

Matrices are sympy ``DomainMatrix`` objects in sparse format.  This module
adds the few constructions the bicategories need (Kronecker products, block
sums, permutations) together with a Smith normal form and a sparse cokernel
reduction used to present shadows.
"""

from __future__ import annotations

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

__all__ = [
    "ZZ",
    "QQ",
    "join_ring",
    "ring_name",
    "matrix",
    "zeros",
    "eye",
    "permutation_matrix",
    "kron",
    "block_diag",
    "hstack",
    "vstack",
    "to_ring",
    "entries",
    "to_rows",
    "is_zero",
    "smith_normal_form",
    "CokernelForm",
    "cokernel_form",
]


def join_ring(*rings):
    """Smallest of ZZ and QQ containing all the given rings."""
    return QQ if any(K == QQ for K in rings) else ZZ


def ring_name(K):
    return "QQ" if K == QQ else "ZZ"


def matrix(rows, K=ZZ, shape=None):
    """Build a sparse matrix from a list of rows of Python numbers."""
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    data = {}
    for i, row in enumerate(rows):
        r = {j: K.convert(v) for j, v in enumerate(row) if v}
        if r:
            data[i] = r
    return DomainMatrix(data, shape, K)


def zeros(m, n, K=ZZ):
    return DomainMatrix({}, (m, n), K)


def eye(n, K=ZZ):
    return DomainMatrix({i: {i: K.one} for i in range(n)}, (n, n), K)


def permutation_matrix(images, n_target, K=ZZ, signs=None):
    """Matrix sending basis vector j to ``signs[j] * e_{images[j]}``."""
    data = {}
    for j, i in enumerate(images):
        s = K.one if signs is None else K.convert(signs[j])
        data.setdefault(i, {})[j] = s
    return DomainMatrix(data, (n_target, len(images)), K)


def _sdm(A):
    return A.to_sparse().rep


def kron(A, B):
    """Kronecker product, with A's indices outermost."""
    K = A.domain
    if B.domain != K:
        K = join_ring(K, B.domain)
        A, B = A.convert_to(K), B.convert_to(K)
    (m, n), (p, q) = A.shape, B.shape
    a, b = _sdm(A), _sdm(B)
    data = {}
    for i, arow in a.items():
        for k, brow in b.items():
            row = {}
            for j, x in arow.items():
                for l, y in brow.items():
                    row[j * q + l] = x * y
            data[i * p + k] = row
    return DomainMatrix(data, (m * p, n * q), K)


def block_diag(blocks, K=ZZ):
    """Direct sum of a sequence of matrices."""
    data = {}
    r0 = c0 = 0
    for B in blocks:
        if B.domain != K:
            B = B.convert_to(K)
        for i, row in _sdm(B).items():
            data[r0 + i] = {c0 + j: v for j, v in row.items()}
        r0 += B.shape[0]
        c0 += B.shape[1]
    return DomainMatrix(data, (r0, c0), K)


def hstack(blocks, m, K=ZZ):
    data = {}
    c0 = 0
    for B in blocks:
        if B.domain != K:
            B = B.convert_to(K)
        assert B.shape[0] == m
        for i, row in _sdm(B).items():
            data.setdefault(i, {}).update({c0 + j: v for j, v in row.items()})
        c0 += B.shape[1]
    return DomainMatrix(data, (m, c0), K)


def vstack(blocks, n, K=ZZ):
    data = {}
    r0 = 0
    for B in blocks:
        if B.domain != K:
            B = B.convert_to(K)
        assert B.shape[1] == n
        for i, row in _sdm(B).items():
            data[r0 + i] = dict(row)
        r0 += B.shape[0]
    return DomainMatrix(data, (r0, n), K)


def to_ring(A, K):
    return A if A.domain == K else A.convert_to(K)


def entries(A):
    """Nonzero entries as a dict ``{(i, j): value}``."""
    return {(i, j): v for i, row in _sdm(A).items() for j, v in row.items() if v}


def to_rows(A):
    m, n = A.shape
    rows = [[A.domain.zero] * n for _ in range(m)]
    for (i, j), v in entries(A).items():
        rows[i][j] = v
    return rows


def is_zero(A):
    return not any(v for row in _sdm(A).values() for v in row.values())


# -- Smith normal form -------------------------------------------------------


def _dense_snf(A, m, n, K, want_u=True, want_v=True, want_uinv=False):
    """Diagonalize a dense list-of-lists matrix in place.

    Returns ``(A, U, V, Uinv)`` with ``U @ A0 @ V == A`` diagonal.  Over ZZ the
    diagonal is nonnegative with each entry dividing the next; over QQ it is a
    run of ones followed by zeros.
    """
    field = K == QQ
    one, zero = K.one, K.zero
    U = [[one if i == j else zero for j in range(m)] for i in range(m)] if want_u else None
    Ui = [[one if i == j else zero for j in range(m)] for i in range(m)] if want_uinv else None
    V = [[one if i == j else zero for j in range(n)] for i in range(n)] if want_v else None

    def row_axpy(t, s, c):
        # row_t -= c * row_s
        At, As = A[t], A[s]
        for j in range(n):
            if As[j]:
                At[j] -= c * As[j]
        if U is not None:
            Ut, Us = U[t], U[s]
            for j in range(m):
                if Us[j]:
                    Ut[j] -= c * Us[j]
        if Ui is not None:
            for r in Ui:
                if r[t]:
                    r[s] += c * r[t]

    def col_axpy(t, s, c):
        # col_t -= c * col_s
        for r in A:
            if r[s]:
                r[t] -= c * r[s]
        if V is not None:
            for r in V:
                if r[s]:
                    r[t] -= c * r[s]

    def swap_rows(a, b):
        if a == b:
            return
        A[a], A[b] = A[b], A[a]
        if U is not None:
            U[a], U[b] = U[b], U[a]
        if Ui is not None:
            for r in Ui:
                r[a], r[b] = r[b], r[a]

    def swap_cols(a, b):
        if a == b:
            return
        for r in A:
            r[a], r[b] = r[b], r[a]
        if V is not None:
            for r in V:
                r[a], r[b] = r[b], r[a]

    def scale_row(t, c):
        # row_t *= c, c a unit
        A[t] = [x * c for x in A[t]]
        if U is not None:
            U[t] = [x * c for x in U[t]]
        if Ui is not None:
            inv = one / c if field else c
            for r in Ui:
                r[t] = r[t] * inv

    def smallest(t, rows, cols):
        best = None
        for i in rows:
            r = A[i]
            for j in cols:
                a = r[j]
                if a:
                    size = abs(a)
                    if best is None or size < best[0]:
                        best = (size, i, j)
                        if size == 1 or field:
                            return best
        return best

    quo = (lambda a, b: a / b) if field else (lambda a, b: a // b)
    t = 0
    while t < min(m, n):
        found = smallest(t, range(t, m), range(t, n))
        if found is None:
            break
        swap_rows(t, found[1])
        swap_cols(t, found[2])
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    row_axpy(i, t, quo(A[i][t], p))
            for j in range(t + 1, n):
                if A[t][j]:
                    col_axpy(j, t, quo(A[t][j], p))
            rest = smallest(t, range(t + 1, m), [t]) or smallest(t, [t], range(t + 1, n))
            if rest is not None:
                swap_rows(t, rest[1])
                swap_cols(t, rest[2])
                continue
            if not field:
                bad = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                    None,
                )
                if bad is not None:
                    row_axpy(t, bad, -one)
                    continue
            break
        p = A[t][t]
        if field:
            if p != one:
                scale_row(t, one / p)
        elif p < 0:
            scale_row(t, -one)
        t += 1
    return A, U, V, Ui


def smith_normal_form(A):
    """Return ``(D, U, V)`` with ``U * A * V == D``.

    ``A`` is an integer ``DomainMatrix`` (or a list of rows).  ``D`` is diagonal
    with nonnegative entries, each dividing the next; ``U`` and ``V`` are
    unimodular.
    """
    if not isinstance(A, DomainMatrix):
        A = matrix(A, ZZ)
    K = A.domain
    m, n = A.shape
    rows = to_rows(A)
    D, U, V, _ = _dense_snf(rows, m, n, K)
    return matrix(D, K, (m, n)), matrix(U, K, (m, m)), matrix(V, K, (n, n))


# -- cokernels ----------------------------------------------------------------


class CokernelForm:
    """Normal form of ``K^m / colspan(A)``.

    ``free`` is an ``r x m`` matrix whose rows give the free coordinates,
    ``torsion`` a list of ``(row, modulus)`` pairs and ``basis`` an ``m x k``
    matrix whose columns generate the same lattice as the columns of ``A``.
    """

    __slots__ = ("ring", "ngens", "free", "torsion", "basis")

    def __init__(self, ring, ngens, free, torsion, basis):
        self.ring = ring
        self.ngens = ngens
        self.free = free
        self.torsion = torsion
        self.basis = basis

    @property
    def free_rank(self):
        return self.free.shape[0]

    @property
    def moduli(self):
        return [d for _, d in self.torsion]

    def coordinates(self, X):
        """Canonical coordinates of the columns of ``X`` in the quotient."""
        X = to_ring(X, self.ring)
        free = self.free.matmul(X)
        tors = []
        for row, d in self.torsion:
            vals = row.matmul(X)
            tors.append(tuple(v % d for v in to_rows(vals)[0]))
        return free, tuple(tors)

    def kills(self, X):
        """True when every column of ``X`` vanishes in the quotient."""
        free, tors = self.coordinates(X)
        return is_zero(free) and not any(v for t in tors for v in t)


def cokernel_form(A, ngens=None):
    """Compute a :class:`CokernelForm` for the relation matrix ``A``.

    Unit pivots are eliminated sparsely first (they are the bulk of the
    relations that arise from bimodule shadows); whatever is left over ZZ goes
    through the dense Smith normal form.
    """
    K = A.domain
    m = A.shape[0] if ngens is None else ngens
    field = K == QQ
    rows = {i: dict(r) for i, r in _sdm(A).items() if any(r.values())}
    for r in rows.values():
        for j in [j for j, v in r.items() if not v]:
            del r[j]
    cols = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    U = {i: {i: K.one} for i in range(m)}
    Ui = {i: {i: K.one} for i in range(m)}  # columns of U^{-1}
    pivots = []

    def is_unit(v):
        return bool(v) if field else v in (1, -1)

    def eliminate(t, p, c):
        # row_t -= c * row_p ; U likewise ; Uinv col_p += c * col_t
        rt, rp = rows.setdefault(t, {}), rows[p]
        for j, v in rp.items():
            nv = rt.get(j, K.zero) - c * v
            if nv:
                rt[j] = nv
                cols[j].add(t)
            else:
                rt.pop(j, None)
                cols[j].discard(t)
        ut, up = U[t], U[p]
        for j, v in up.items():
            nv = ut.get(j, K.zero) - c * v
            if nv:
                ut[j] = nv
            else:
                ut.pop(j, None)
        ct, cp = Ui[t], Ui[p]
        for j, v in ct.items():
            nv = cp.get(j, K.zero) + c * v
            if nv:
                cp[j] = nv
            else:
                cp.pop(j, None)

    while True:
        best = None
        for j, rs in cols.items():
            if not rs:
                continue
            cj = len(rs) - 1
            for i in rs:
                v = rows[i][j]
                if is_unit(v):
                    cost = cj * (len(rows[i]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, p, j = best
        pv = rows[p][j]
        for t in sorted(cols[j] - {p}):
            c = rows[t][j] / pv if field else rows[t][j] * pv
            eliminate(t, p, c)
        for k in rows[p]:
            cols[k].discard(p)
        del rows[p]
        del cols[j]
        pivots.append(p)

    pivot_set = set(pivots)
    basis_cols = [Ui[p] for p in pivots]
    live = sorted(i for i, r in rows.items() if r and i not in pivot_set)
    diag = {}
    if live:
        live_cols = sorted({j for i in live for j in rows[i]})
        B = [[rows[i].get(j, K.zero) for j in live_cols] for i in live]
        D, Ub, _, Ubi = _dense_snf(B, len(live), len(live_cols), K, want_v=False, want_uinv=True)
        newU = {}
        newUi = {}
        for a, i in enumerate(live):
            acc = {}
            for b, c in enumerate(Ub[a]):
                if c:
                    for j, v in U[live[b]].items():
                        acc[j] = acc.get(j, K.zero) + c * v
            newU[i] = {j: v for j, v in acc.items() if v}
            # column i of the new Uinv is sum_b Uinv[:, live[b]] * Ubi[b][a]
            acc = {}
            for b in range(len(live)):
                c = Ubi[b][a]
                if c:
                    for j, v in Ui[live[b]].items():
                        acc[j] = acc.get(j, K.zero) + c * v
            newUi[i] = {j: v for j, v in acc.items() if v}
        U.update(newU)
        Ui.update(newUi)
        for a, i in enumerate(live):
            if a < len(live_cols) and D[a][a]:
                diag[i] = D[a][a]
                basis_cols.append({j: v * D[a][a] for j, v in Ui[i].items()})

    free_rows, torsion = [], []
    for i in range(m):
        if i in pivot_set:
            continue
        d = diag.get(i)
        if d is None:
            free_rows.append(U[i])
        elif not field and d != 1:
            torsion.append((DomainMatrix({0: dict(U[i])}, (1, m), K), d))
    free = DomainMatrix({a: dict(r) for a, r in enumerate(free_rows) if r}, (len(free_rows), m), K)
    basis = DomainMatrix({}, (m, len(basis_cols)), K)
    data = {}
    for c, col in enumerate(basis_cols):
        for i, v in col.items():
            data.setdefault(i, {})[c] = v
    basis = DomainMatrix(data, (m, len(basis_cols)), K)
    return CokernelForm(K, m, free, torsion, basis)
