"""Shadow functors, their comparison maps and the scalar-extension transformation.

A shadow functor ``F: B -> C`` comes with a functor ``F_tr`` between the shadow
targets and comparison maps ``phi_M: <F M> -> F_tr <M>``.  Two are provided:

* linearization ``Span -> MatMod(ZZ)``, sending a span to the free modules on
  its fibers, and
* rationalization ``GRBimod`` over ``ZZ`` to ``GRBimod`` over ``QQ``.

Both are strict on 1-cells (they act atom by atom on words), so only the shadow
comparison carries information.
"""

from __future__ import annotations

from functools import lru_cache

from sympy.polys.matrices import DomainMatrix

from .core import Atom, DualPair, OneCell, ShadowMorphism, ShadowObject, TwoCell
from .groups import GRMatrix
from .instances.grbimod import GRBimod, group_object, group_of, scalar_extension
from .instances.matmod import MatMod
from .instances.span import Span
from .linalg import QQ, ZZ, to_ring
from . import traces

__all__ = ["Linearization", "fixed_point_index", "Rationalization", "ScalarExtension", "map_dual", "functoriality_square"]


class ShadowFunctor:
    source = None
    target = None

    def ob(self, R):
        return R

    def atom(self, a):
        raise NotImplementedError

    def one(self, W):
        return OneCell(self.ob(W.src), self.ob(W.tgt), tuple(self.atom(a) for a in W.factors))

    def two(self, f):
        raise NotImplementedError

    def shadow(self, t):
        """``F_tr`` on a morphism of shadows in the source."""
        raise NotImplementedError

    def phi(self, M):
        raise NotImplementedError


def map_dual(F, d):
    """The image of a dual pair under a functor that is strict on 1-cells."""
    pair = DualPair(F.one(d.M), F.one(d.Mdual), F.two(d.coev), F.two(d.ev))
    return pair.check(F.target)


def functoriality_square(F, f, d):
    """``(phi_P tr(F f), F_tr(tr f) phi_Q)`` for ``f: Q (.) M => M (.) P``."""
    B, C = F.source, F.target
    Fd = map_dual(F, d)
    Q = traces.strip_suffix(f.src, d.M)
    P = traces.strip_prefix(f.tgt, d.M)
    lhs = F.phi(P) @ traces.trace(C, F.two(f), Fd)
    rhs = F.shadow(traces.trace(B, f, d)) @ F.phi(Q)
    return lhs, rhs


class Linearization(ShadowFunctor):
    """``Span -> MatMod(ZZ)``: a span becomes the rank matrix of its fibers."""

    def __init__(self, source=None, target=None):
        self.source = source or Span()
        self.target = target or MatMod(ZZ)

    @lru_cache(maxsize=4096)
    def atom(self, a):
        apex, left, right = a.payload
        R, S = a.src.payload, a.tgt.payload
        ranks = [[0] * len(S) for _ in R]
        ri, si = {r: i for i, r in enumerate(R)}, {s: i for i, s in enumerate(S)}
        for l, r in zip(left, right):
            ranks[ri[l]][si[r]] += 1
        return Atom(f"Z[{a.name}]", a.src, a.tgt, tuple(map(tuple, ranks)))

    @lru_cache(maxsize=4096)
    def _fiber_pos(self, a):
        apex, left, right = a.payload
        pos, seen = {}, {}
        for m, l, r in zip(apex, left, right):
            pos[m] = seen.get((l, r), 0)
            seen[(l, r)] = pos[m] + 1
        return pos

    @lru_cache(maxsize=4096)
    def index(self, W):
        """Apex element of ``W`` to ``(key, position)`` in the basis of ``Z[W]``."""
        C = self.target
        FW = self.one(W)
        basis = C._index(FW)
        ri = {r: i for i, r in enumerate(W.src.payload)}
        out = {}
        xs, left, right = self.source.apex(W)
        for x in xs:
            r = ri[x[0]]
            path, a, cur = [r], [], x[0]
            for atom, m in zip(W.factors, x[1:]):
                apex, aleft, aright = atom.payload
                k = apex.index(m)
                cur = aright[k]
                path.append({s: i for i, s in enumerate(atom.tgt.payload)}[cur])
                a.append(self._fiber_pos(atom)[m])
            key = (r, path[-1])
            out[x] = (key, basis[key][(tuple(path), tuple(a))])
        return out

    def two(self, f):
        C = self.target
        src, tgt = self.one(f.src), self.one(f.tgt)
        isrc, itgt = self.index(f.src), self.index(f.tgt)
        rows = {key: {} for key in C._keys(src)}
        for x, y in f.data.items():
            key, j = isrc[x]
            key2, i = itgt[y]
            rows[key].setdefault(i, {})[j] = ZZ.one
        blocks = {key: DomainMatrix(r, (C.rank(tgt, *key), C.rank(src, *key)), ZZ) for key, r in rows.items()}
        return C.two_cell(src, tgt, blocks)

    def shadow(self, t):
        return t

    @lru_cache(maxsize=4096)
    def phi(self, M):
        """The permutation ``<Z[M]> -> Z<M>`` matching basis vectors to fixed points."""
        B, C = self.source, self.target
        FM = self.one(M)
        off, n = C._offsets(FM)
        pts = {x: i for i, x in enumerate(B.fixed_points(M))}
        idx = self.index(M)
        rows = {}
        for x, i in pts.items():
            (r, _), j = idx[x]
            rows[i] = {off[r] + j: ZZ.one}
        return ShadowMorphism(C.shadow_ob(FM), B.shadow_ob(M), DomainMatrix(rows, (len(pts), n), ZZ), check=False)


def fixed_point_index(f, M, r, s):
    """Number of apex elements over ``(r, s)`` fixed by ``f``, by enumeration."""
    Sp = Span()
    xs, left, right = Sp.apex(M)
    return sum(1 for x in xs if left[x] == r and right[x] == s and f.data[x] == x)


class Rationalization(ShadowFunctor):
    """``GRBimod`` over ``ZZ`` to ``GRBimod`` over ``QQ`` by extending scalars."""

    def __init__(self, source=None, target=None):
        self.source = source or GRBimod()
        self.target = target or self.source

    def ob(self, R):
        return group_object(group_of(R), QQ)

    @lru_cache(maxsize=4096)
    def atom(self, a):
        n, lam = a.payload
        return Atom(f"Q{a.name}", self.ob(a.src), self.ob(a.tgt), (n, tuple(L.to_ring(QQ) for L in lam)))

    def two(self, f):
        return TwoCell(self.one(f.src), self.one(f.tgt), f.data.to_ring(QQ))

    def shadow(self, t):
        return ShadowMorphism(_rational(t.src), _rational(t.tgt), to_ring(t.matrix, QQ), check=False)

    @lru_cache(maxsize=4096)
    def phi(self, M):
        src = self.target.shadow_ob(self.one(M))
        return ShadowMorphism(src, _rational(self.source.shadow_ob(M)), DomainMatrix.eye(src.ngens, QQ), check=False)


def _rational(obj):
    return ShadowObject(obj.presentation.rationalized(), obj.origin)


class ScalarExtension:
    """The transformation from the identity of ``GRBimod`` to rationalization.

    Its component at ``(G, ZZ)`` is the bimodule ``QQ[G]`` from ``(G, ZZ)`` to
    ``(G, QQ)``, and at a 1-cell ``M`` it is the identity matrix
    ``M (.) QQ[H] => QQ[G] (.) M_QQ``.  The induced map of shadows
    ``alpha_tr: <M> -> <M>_QQ`` is the inclusion.
    """

    def __init__(self, B=None):
        self.B = B or GRBimod()
        self.G = Rationalization(self.B)

    @lru_cache(maxsize=256)
    def component(self, R):
        return scalar_extension(self.B, R)[1]

    def at(self, M):
        B = self.B
        A_R, A_S = self.component(M.src).M, self.component(M.tgt).M
        src, tgt = B.compose1(M, A_S), B.compose1(A_R, self.G.one(M))
        return B.two_cell(src, tgt, GRMatrix.identity(group_of(M.tgt), QQ, B.rank(M)))

    def alpha_tr(self, X):
        src = self.B.shadow_ob(X)
        return ShadowMorphism(src, _rational(src), DomainMatrix.eye(src.ngens, QQ), check=False)

    def inverse(self, d):
        """The inverse of ``at(M)`` for a dualizable ``M``, built from ``at(M*)`` and the duals."""
        return traces.unmate(self.B, self.at(d.Mdual), map_dual(self.G, d), d)

    def trace_of_component(self, X):
        """``tr(alpha_X): <X> -> <X_QQ>`` for an endo-1-cell ``X``."""
        return traces.trace(self.B, self.at(X), self.component(X.src))

    def cube(self, f, d):
        """The six faces of the cube for ``f: Q (.) M => M (.) P``, as ``name -> (lhs, rhs)``."""
        B, G = self.B, self.G
        Q = traces.strip_suffix(f.src, d.M)
        P = traces.strip_prefix(f.tgt, d.M)
        Gd = map_dual(G, d)
        trf = traces.trace(B, f, d)
        trGf = traces.trace(B, G.two(f), Gd)
        aQ, aP = self.trace_of_component(Q), self.trace_of_component(P)
        faces = {}
        faces["back"] = (aP @ trf, trGf @ aQ)
        faces["front"] = (self.alpha_tr(P) @ trf, G.shadow(trf) @ self.alpha_tr(Q))
        faces["top"] = (trf, trf)
        faces["bottom"] = functoriality_square(G, f, d)
        faces["left"] = (G.phi(Q) @ aQ, self.alpha_tr(Q))
        faces["right"] = (G.phi(P) @ aP, self.alpha_tr(P))
        return faces
