"""Bimodules over group rings that are free of finite rank on the right.

A 0-cell is a pair ``(G, K)`` of a finite group and a ground ring.  A 1-cell
``(G, K) -|-> (H, K')`` is the free right module ``L[H]^n`` where ``L`` is the
larger of ``K`` and ``K'``, together with a left action ``lam(g)``: an
``n x n`` matrix over ``L[H]`` for each ``g`` in ``G``.  Elements of the module
are column vectors and right-linear maps are matrices acting on the left, so
a 2-cell ``M => N`` is a matrix ``f`` with ``f lam_M(g) = lam_N(g) f``.

For ``M: G -|-> H`` and ``N: H -|-> K`` the product ``M (.) N`` has basis
``e_i (x) f_j`` ordered with ``i`` outermost and left action
``lam_M(g)`` with each entry ``a`` replaced by the block ``lam_N(a)``.  The
shadow of an endo-1-cell is the quotient of ``L^(n|G|)`` (basis ``e_i x``) by
``g m - m g``.
"""

from __future__ import annotations

from functools import lru_cache

from sympy.polys.matrices import DomainMatrix

from ..core import Atom, Bicategory, CellError, DualPair, OneCell, ShadowMorphism, ShadowObject, ShadowPresentation, TwoCell, ZeroCell
from ..groups import GroupRingElement, GRMatrix, is_representation, regular_representation
from ..linalg import QQ, ZZ, eye, hstack, join_ring, permutation_matrix, ring_name, kron, to_ring


def group_object(group, ring=ZZ, name=None):
    """The 0-cell ``(G, K)``."""
    return ZeroCell(name or f"{group.name}/{ring_name(ring)}", (group, ring))


def group_of(R):
    return R.payload[0]


def ring_of(R):
    return R.payload[1]


class GRBimod(Bicategory):
    name = "grbimod"

    # 1-cells ----------------------------------------------------------------
    def one_cell(self, name, R, S, lam):
        G, H = group_of(R), group_of(S)
        lam = tuple(lam)
        if len(lam) != G.order:
            raise CellError(f"{name}: need one action matrix per element of {G.name}")
        K = join_ring(ring_of(R), ring_of(S), *(L.ring for L in lam))
        lam = tuple(L.to_ring(K) for L in lam)
        if any(L.group != H for L in lam):
            raise CellError(f"{name}: action matrices must have entries in the group ring of {H.name}")
        if not is_representation(G, lam):
            raise CellError(f"{name}: left action is not a monoid homomorphism")
        return OneCell.of(Atom(name, R, S, (lam[0].rows, lam)))

    def ring(self, W):
        return join_ring(ring_of(W.src), ring_of(W.tgt), *(ring_of(a.tgt) for a in W.factors), *(a.payload[1][0].ring for a in W.factors))

    @lru_cache(maxsize=4096)
    def action(self, W):
        """``(rank, lam)`` of a word, with ``lam`` over the target group ring."""
        K = self.ring(W)
        if not W.factors:
            G = group_of(W.src)
            return 1, tuple(GRMatrix.monomial(G, K, 1, 1, {(0, 0): (1, g)}) for g in G.elements)
        if len(W.factors) == 1:
            n, lam = W.factors[0].payload
            return n, tuple(L.to_ring(K) for L in lam)
        head = OneCell(W.src, W.factors[-2].tgt, W.factors[:-1])
        n, lam = self.action(head)
        m, mu = W.factors[-1].payload
        return n * m, tuple(L.push(mu).to_ring(K) for L in lam)

    def rank(self, W):
        return self.action(W)[0]

    # 2-cells ------------------------------------------------------------------
    def two_cell(self, src, tgt, f, check=True):
        if src.src != tgt.src or src.tgt != tgt.tgt:
            raise CellError("2-cell source and target are not parallel")
        H = group_of(src.tgt)
        K = join_ring(self.ring(src), self.ring(tgt))
        if not isinstance(f, GRMatrix):
            f = GRMatrix.from_entries(H, K, f, (self.rank(tgt), self.rank(src)))
        f = f.to_ring(join_ring(K, f.ring))
        if f.shape != (self.rank(tgt), self.rank(src)):
            raise CellError(f"2-cell matrix has shape {f.shape}, expected {(self.rank(tgt), self.rank(src))}")
        if self.ring(src) == QQ and self.ring(tgt) == ZZ and not f.is_zero():
            raise CellError("a nonzero 2-cell cannot land in a module over ZZ from one over QQ")
        if check:
            ls, lt = self.action(src)[1], self.action(tgt)[1]
            for g in group_of(src.src).generators:
                if f @ ls[g] != lt[g] @ f:
                    raise CellError("2-cell does not commute with the left action")
        return TwoCell(src, tgt, f)

    def identity2(self, M):
        return TwoCell(M, M, GRMatrix.identity(group_of(M.tgt), self.ring(M), self.rank(M)))

    def vcompose(self, g, f):
        if f.tgt != g.src:
            raise CellError(f"cannot compose 2-cells: {f.tgt.name} vs {g.src.name}")
        return TwoCell(f.src, g.tgt, g.data @ f.data)

    def hcompose(self, f, g):
        if f.src.tgt != g.src.src:
            raise CellError("2-cells are not horizontally composable")
        lam = self.action(g.tgt)[1]
        data = f.data.push(lam) @ g.data.repeated(f.data.cols)
        return TwoCell(self.compose1(f.src, g.src), self.compose1(f.tgt, g.tgt), data)

    def equal2(self, f, g):
        if f.src != g.src or f.tgt != g.tgt:
            return False
        K = join_ring(f.data.ring, g.data.ring)
        return f.data.to_ring(K) == g.data.to_ring(K)

    # shadow -----------------------------------------------------------------------
    @lru_cache(maxsize=4096)
    def shadow_ob(self, M):
        self._check_endo(M)
        G = group_of(M.src)
        K = self.ring(M)
        n, lam = self.action(M)
        N = n * G.order
        blocks = []
        for s in G.generators:
            right = kron(eye(n, K), permutation_matrix([G.mul(x, s) for x in G.elements], G.order, K))
            blocks.append(lam[s].unfold() - right)
        rel = hstack(blocks, N, K) if blocks else DomainMatrix({}, (N, 0), K)
        labels = [f"e{i}.{G.names[x]}" if n > 1 else G.names[x] for i in range(n) for x in G.elements]
        return ShadowObject(ShadowPresentation(K, N, rel, labels), M)

    def shadow_mor(self, f):
        self._check_endo(f.src)
        src, tgt = self.shadow_ob(f.src), self.shadow_ob(f.tgt)
        return ShadowMorphism(src, tgt, f.data.unfold(), check=False)

    @lru_cache(maxsize=4096)
    def theta(self, M, N):
        self._check_theta(M, N)
        G, H = group_of(M.src), group_of(M.tgt)
        m, lam_m = self.action(M)
        n = self.rank(N)
        src, tgt = self.shadow_ob(self.compose1(M, N)), self.shadow_ob(self.compose1(N, M))
        K = join_ring(src.ring, tgt.ring)
        rows = {}
        for x in G.elements:
            L = lam_m[x]
            for h, S in enumerate(L.stack):
                for (i2, i), c in _items(S):
                    for l in range(n):
                        col = (i * n + l) * G.order + x
                        row = (l * m + i2) * H.order + h
                        rows.setdefault(row, {})[col] = K.convert(c)
        P = DomainMatrix(rows, (tgt.ngens, src.ngens), K)
        return ShadowMorphism(src, tgt, P, check=False)

    # duality -----------------------------------------------------------------------
    def make_dual(self, M, name=None):
        """A right dual for ``M: (1, K) -|-> (H, K')`` or ``M: (G, K) -|-> (1, K')``.

        The first shape is a free module, whose dual is ``L[H]^n`` viewed as
        a left ``H``-module through the regular action.  The second is a
        representation ``V``; its dual ``V*`` is used when it is free as a right
        ``L[G]``-module on a subset of the dual basis.
        """
        R, S = M.src, M.tgt
        if group_of(R).is_trivial:
            return self._dual_free(M, name)
        if group_of(S).is_trivial:
            return self._dual_representation(M, name)
        raise CellError(f"{M.name} is not dualizable here: source and target groups are both nontrivial")

    def _dual_free(self, M, name):
        R, S = M.src, M.tgt
        H, K = group_of(S), self.ring(M)
        n = self.rank(M)
        N = n * H.order
        T = group_of(R)
        lam = []
        for h in H.elements:
            P = permutation_matrix([i * H.order + H.mul(h, x) for i in range(n) for x in H.elements], N, K)
            lam.append(GRMatrix.scalar(T, P))
        D = self.one_cell(name or f"{M.name}*", S, R, lam)
        MD, DM = self.compose1(M, D), self.compose1(D, M)
        coev = GRMatrix.monomial(T, K, n * N, 1, {(i * N + i * H.order + H.identity, 0): (1, T.identity) for i in range(n)})
        ev = GRMatrix.monomial(H, K, 1, N * n, {(0, (i * H.order + x) * n + i): (1, x) for i in range(n) for x in H.elements})
        pair = DualPair(M, D, self.two_cell(self.unit(R), MD, coev), self.two_cell(DM, self.unit(S), ev))
        return pair.check(self)

    def _dual_representation(self, M, name):
        R, S = M.src, M.tgt
        G, K = group_of(R), self.ring(M)
        T = group_of(S)
        n, lam = self.action(M)
        if n % G.order:
            raise CellError(f"{M.name} is not dualizable here: rank {n} is not a multiple of |{G.name}|")
        mats = [L.stack[T.identity] for L in lam]
        chosen, rows = [], []
        for a in range(n):
            cand = [_unit_row(n, a, K).matmul(mats[g]) for g in G.elements]
            trial = DomainMatrix.vstack(*(rows + cand)) if rows else DomainMatrix.vstack(*cand)
            if trial.convert_to(QQ).rank() == trial.shape[0]:
                chosen.append(a)
                rows += cand
        W = DomainMatrix.vstack(*rows) if rows else DomainMatrix({}, (0, n), K)
        if W.shape[0] != n or (K == ZZ and abs(W.det()) != 1):
            raise CellError(f"{M.name} is not dualizable here: its dual is not free on a dual basis subset")
        k = len(chosen)
        Winv = W.convert_to(QQ).inv().convert_to(K)
        D = self.one_cell(name or f"{M.name}*", S, R, [GRMatrix.identity(G, K, k)])
        MD, DM = self.compose1(M, D), self.compose1(D, M)
        wrows = _dense(Winv)
        coev = [[GroupRingElement(G, K, {g: wrows[a][i * G.order + g] for g in G.elements})] for a in range(n) for i in range(k)]
        ev_row = []
        Wd = _dense(W)
        for i in range(k):
            for a in range(n):
                ev_row.append(Wd[i * G.order + G.identity][a])
        coev = GRMatrix.from_entries(G, K, coev, (n * k, 1))
        ev = GRMatrix.from_entries(T, K, [ev_row], (1, k * n))
        pair = DualPair(M, D, self.two_cell(self.unit(R), MD, coev), self.two_cell(DM, self.unit(S), ev))
        return pair.check(self)

    def describe(self, M):
        n, lam = self.action(M)
        return f"{M.name}: {M.src.name} -|-> {M.tgt.name} free of rank {n} over {ring_name(self.ring(M))}[{group_of(M.tgt).name}]"


def _items(S):
    return [((i, j), v) for i, row in S.rep.to_sdm().items() for j, v in row.items() if v]


def _unit_row(n, a, K):
    return DomainMatrix({0: {a: K.one}}, (1, n), K)


def _dense(A):
    m, n = A.shape
    out = [[A.domain.zero] * n for _ in range(m)]
    for i, row in A.rep.to_sdm().items():
        for j, v in row.items():
            out[i][j] = v
    return out


# -- standard 1-cells --------------------------------------------------------------


def free_module(B, name, R, S, rank=1):
    """``L[H]^n`` with the trivial group acting, as ``(1, K) -|-> (H, K')``."""
    if not group_of(R).is_trivial:
        raise CellError("free modules are 1-cells out of a trivial group")
    K = join_ring(ring_of(R), ring_of(S))
    return B.one_cell(name, R, S, [GRMatrix.identity(group_of(S), K, rank)])


def twisted_unit(B, R, psi, name=None):
    """``R_psi``: the rank-one bimodule ``K[G]`` with ``g`` acting on the left by ``psi(g)``."""
    G, K = group_of(R), ring_of(R)
    lam = [GRMatrix.monomial(G, K, 1, 1, {(0, 0): (1, psi[g])}) for g in G.elements]
    return B.one_cell(name or f"R[{','.join(G.names[x] for x in psi)}]", R, R, lam)


def representation(B, name, R, S, mats):
    """A representation ``G -> GL_n(K)`` as a 1-cell ``(G, K) -|-> (1, K')``."""
    T = group_of(S)
    if not T.is_trivial:
        raise CellError("representations are 1-cells into a trivial group")
    return B.one_cell(name, R, S, [GRMatrix.scalar(T, to_ring(A, join_ring(ring_of(R), ring_of(S), A.domain))) for A in mats])


def regular_module(B, R, S, name=None):
    """The regular representation of ``G`` over the ring of ``S``."""
    G = group_of(R)
    lam = regular_representation(G, join_ring(ring_of(R), ring_of(S)), group_of(S))
    return B.one_cell(name or f"K[{G.name}]", R, S, lam)


def scalar_extension(B, R, target_ring=QQ):
    """The pair ``L[G]: (G, K) -|-> (G, L)`` and ``L[G]: (G, L) -|-> (G, K)``, with their duality."""
    G = group_of(R)
    Rq = group_object(G, target_ring)
    lam = [GRMatrix.monomial(G, target_ring, 1, 1, {(0, 0): (1, g)}) for g in G.elements]
    A = B.one_cell(f"{G.name}:{ring_name(ring_of(R))}->{ring_name(target_ring)}", R, Rq, lam)
    Abar = B.one_cell(f"{G.name}:{ring_name(target_ring)}->{ring_name(ring_of(R))}", Rq, R, lam)
    one = GRMatrix.identity(G, target_ring, 1)
    coev = B.two_cell(B.unit(R), B.compose1(A, Abar), one)
    ev = B.two_cell(B.compose1(Abar, A), B.unit(Rq), one)
    return Rq, DualPair(A, Abar, coev, ev).check(B)
