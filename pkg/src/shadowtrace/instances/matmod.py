"""Matrices of free modules over ZZ or QQ.

A 1-cell ``R -|-> S`` is an ``R x S`` matrix of ranks; composition multiplies
rank matrices and a 2-cell is one linear map per entry.  Words are realized
with a canonical basis: at entry ``(r, t)`` the basis elements are pairs
``(path, a)`` where ``path`` runs through intermediate elements and ``a``
picks a basis vector in each factor, ordered lexicographically.  Since the
basis of a concatenation is the concatenation of bases, horizontal
composition of 2-cells is strictly associative.
"""

from __future__ import annotations

from functools import lru_cache

from ..core import Atom, Bicategory, CellError, DualPair, OneCell, ShadowMorphism, ShadowObject, ShadowPresentation, TwoCell, ZeroCell
from ..linalg import QQ, ZZ, block_diag, entries, matrix, ring_name, to_ring, zeros
from sympy.polys.matrices import DomainMatrix


def finite_set(name, elements):
    """A 0-cell; ``elements`` may be a count or a sequence of labels."""
    if isinstance(elements, int):
        elements = tuple(range(elements))
    return ZeroCell(name, tuple(elements))


class MatMod(Bicategory):
    def __init__(self, ring=ZZ):
        self.ring = ring
        self.name = "matmod-q" if ring == QQ else "matmod-z"

    # 1-cells ----------------------------------------------------------------
    def one_cell(self, name, R, S, ranks):
        ranks = tuple(tuple(int(x) for x in row) for row in ranks)
        if len(ranks) != len(R.payload) or any(len(row) != len(S.payload) for row in ranks):
            raise CellError(f"rank matrix for {name} must be {len(R.payload)}x{len(S.payload)}")
        if any(x < 0 for row in ranks for x in row):
            raise CellError("ranks must be nonnegative")
        return OneCell.of(Atom(name, R, S, ranks))

    @lru_cache(maxsize=4096)
    def basis(self, W):
        """``{(r, t): [(path, a), ...]}`` in canonical order."""
        R = W.src
        cur = {(r, r): [((r,), ())] for r in range(len(R.payload))}
        src_n = len(R.payload)
        mid = R
        for atom in W.factors:
            nxt = {}
            for r in range(src_n):
                for u in range(len(atom.tgt.payload)):
                    elems = []
                    for s in range(len(mid.payload)):
                        k = atom.payload[s][u]
                        if not k:
                            continue
                        for path, a in cur.get((r, s), ()):
                            elems.extend((path + (u,), a + (b,)) for b in range(k))
                    elems.sort()
                    nxt[(r, u)] = elems
            cur, mid = nxt, atom.tgt
        return {(r, t): cur.get((r, t), []) for r in range(src_n) for t in range(len(W.tgt.payload))}

    def rank(self, W, r, t):
        return len(self.basis(W).get((r, t), ()))

    def ranks(self, W):
        return tuple(
            tuple(self.rank(W, r, t) for t in range(len(W.tgt.payload))) for r in range(len(W.src.payload))
        )

    @lru_cache(maxsize=4096)
    def _index(self, W):
        return {key: {e: i for i, e in enumerate(v)} for key, v in self.basis(W).items()}

    @lru_cache(maxsize=4096)
    def _split(self, W1, W2):
        """For each ``(r, u)``, the list of ``(s, i1, i2)`` along the basis of ``W1 W2``."""
        W = self.compose1(W1, W2)
        k = len(W1.factors)
        i1, i2 = self._index(W1), self._index(W2)
        out = {}
        for (r, u), elems in self.basis(W).items():
            row = []
            for path, a in elems:
                s = path[k]
                row.append((s, i1[(r, s)][(path[: k + 1], a[:k])], i2[(s, u)][(path[k:], a[k:])]))
            out[(r, u)] = row
        return out

    @lru_cache(maxsize=4096)
    def _join(self, W1, W2):
        return {key: {x: c for c, x in enumerate(v)} for key, v in self._split(W1, W2).items()}

    # 2-cells ------------------------------------------------------------------
    def _keys(self, M):
        return [(r, t) for r in range(len(M.src.payload)) for t in range(len(M.tgt.payload))]

    def two_cell(self, src, tgt, blocks):
        """``blocks`` maps ``(r, t)`` to a matrix (DomainMatrix or list of rows)."""
        if src.src != tgt.src or src.tgt != tgt.tgt:
            raise CellError("2-cell source and target are not parallel")
        data = {}
        for key in self._keys(src):
            shape = (self.rank(tgt, *key), self.rank(src, *key))
            B = blocks.get(key)
            if B is None:
                B = zeros(*shape, self.ring)
            elif not isinstance(B, DomainMatrix):
                B = matrix(B, self.ring, shape)
            B = to_ring(B, self.ring)
            if B.shape != shape:
                raise CellError(f"block {key} has shape {B.shape}, expected {shape}")
            data[key] = B
        return TwoCell(src, tgt, data)

    def identity2(self, M):
        from ..linalg import eye

        return TwoCell(M, M, {key: eye(self.rank(M, *key), self.ring) for key in self._keys(M)})

    def vcompose(self, g, f):
        if f.tgt != g.src:
            raise CellError(f"cannot compose 2-cells: {f.tgt.name} vs {g.src.name}")
        return TwoCell(f.src, g.tgt, {key: g.data[key].matmul(f.data[key]) for key in f.data})

    def hcompose(self, f, g):
        if f.src.tgt != g.src.src:
            raise CellError("2-cells are not horizontally composable")
        src = self.compose1(f.src, g.src)
        tgt = self.compose1(f.tgt, g.tgt)
        split = self._split(f.src, g.src)
        join = self._join(f.tgt, g.tgt)
        fcols = {key: _columns(B) for key, B in f.data.items()}
        gcols = {key: _columns(B) for key, B in g.data.items()}
        data = {}
        for key in self._keys(src):
            r, u = key
            target = join[key]
            rows = {}
            for c, (s, a, b) in enumerate(split[key]):
                for i, x in fcols[(r, s)].get(a, {}).items():
                    for j, y in gcols[(s, u)].get(b, {}).items():
                        rows.setdefault(target[(s, i, j)], {})[c] = x * y
            data[key] = DomainMatrix(rows, (len(target), len(split[key])), self.ring)
        return TwoCell(src, tgt, data)

    def equal2(self, f, g):
        return f.src == g.src and f.tgt == g.tgt and all(f.data[k] == g.data[k] for k in f.data)

    # shadow -----------------------------------------------------------------------
    def _offsets(self, W):
        off, total = {}, 0
        for r in range(len(W.src.payload)):
            off[r] = total
            total += self.rank(W, r, r)
        return off, total

    @lru_cache(maxsize=4096)
    def shadow_ob(self, M):
        self._check_endo(M)
        labels = []
        elems = M.src.payload
        for r in range(len(elems)):
            for path, a in self.basis(M).get((r, r), ()):
                if not a:
                    labels.append(str(elems[r]))
                else:
                    mids = [str(f.tgt.payload[p]) for f, p in zip(M.factors, path[1:-1])]
                    labels.append(f"{elems[r]}:" + ".".join(mids) + ":" + ".".join(map(str, a)))
        _, n = self._offsets(M)
        return ShadowObject(ShadowPresentation(self.ring, n, labels=labels), M)

    def shadow_mor(self, f):
        self._check_endo(f.src)
        blocks = [f.data[(r, r)] for r in range(len(f.src.src.payload))]
        M = block_diag(blocks, self.ring)
        return ShadowMorphism(self.shadow_ob(f.src), self.shadow_ob(f.tgt), M, check=False)

    @lru_cache(maxsize=4096)
    def theta(self, M, N):
        self._check_theta(M, N)
        src, tgt = self.compose1(M, N), self.compose1(N, M)
        split = self._split(M, N)
        join = self._join(N, M)
        so, sn = self._offsets(src)
        to, tn = self._offsets(tgt)
        rows = {}
        for r in range(len(M.src.payload)):
            for c, (s, a, b) in enumerate(split[(r, r)]):
                rows[to[s] + join[(s, s)][(r, b, a)]] = {so[r] + c: self.ring.one}
        P = DomainMatrix(rows, (tn, sn), self.ring)
        return ShadowMorphism(self.shadow_ob(src), self.shadow_ob(tgt), P, check=False)

    # duality -----------------------------------------------------------------------
    def make_dual(self, M, name=None):
        """The transpose dual with standard-basis coevaluation and evaluation."""
        ranks = self.ranks(M)
        Mt = tuple(zip(*ranks)) if ranks else ()
        if not Mt:
            Mt = tuple(() for _ in M.tgt.payload)
        D = OneCell.of(Atom(name or f"{M.name}*", M.tgt, M.src, Mt))
        MD, DM = self.compose1(M, D), self.compose1(D, M)
        one = self.ring.one
        jmd, jdm = self._join(M, D), self._join(D, M)
        coev = {}
        for r in range(len(M.src.payload)):
            rows = {jmd[(r, r)][(s, i, i)]: {0: one} for s in range(len(M.tgt.payload)) for i in range(ranks[r][s])}
            coev[(r, r)] = DomainMatrix(rows, (self.rank(MD, r, r), 1), self.ring)
        ev = {}
        for s in range(len(M.tgt.payload)):
            row = {jdm[(s, s)][(r, i, i)]: one for r in range(len(M.src.payload)) for i in range(ranks[r][s])}
            ev[(s, s)] = DomainMatrix({0: row} if row else {}, (1, self.rank(DM, s, s)), self.ring)
        pair = DualPair(
            M,
            D,
            self.two_cell(self.unit(M.src), MD, coev),
            self.two_cell(DM, self.unit(M.tgt), ev),
        )
        return pair.check(self)

    def describe(self, M):
        return f"{M.name}: {M.src.name} -|-> {M.tgt.name} ranks {list(map(list, self.ranks(M)))} over {ring_name(self.ring)}"


def _columns(B):
    """``{col: {row: value}}`` for a sparse matrix."""
    cols = {}
    for (i, j), v in entries(B).items():
        cols.setdefault(j, {})[i] = v
    return cols
