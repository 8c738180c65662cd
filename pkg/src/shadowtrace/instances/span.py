"""Spans of finite sets, composed by pullback.

An element of the apex of a word ``M1 ... Mk`` is the flat tuple
``(r, m1, ..., mk)`` of a starting point followed by compatible apex
elements, so the apex of the unit is ``{(r,)}`` and concatenating words
concatenates tuples.  Apexes are kept sorted, which makes composition
strictly associative.

Shadows are sets.  They are embedded in the target category as free
abelian groups on the set with 0/1 matrices for functions.
"""

from __future__ import annotations

from functools import lru_cache

from sympy.polys.matrices import DomainMatrix

from ..core import Atom, Bicategory, CellError, DualPair, OneCell, ShadowMorphism, ShadowObject, ShadowPresentation, TwoCell
from ..linalg import ZZ
from .matmod import finite_set

__all__ = ["Span", "finite_set"]


class Span(Bicategory):
    name = "span"

    def one_cell(self, name, R, S, legs):
        """``legs`` maps each apex element to its ``(left, right)`` pair."""
        legs = dict(legs)
        Rs, Ss = set(R.payload), set(S.payload)
        for m, (a, b) in legs.items():
            if a not in Rs or b not in Ss:
                raise CellError(f"{name}: legs of {m!r} leave the base sets")
        apex = tuple(sorted(legs))
        payload = (apex, tuple(legs[m][0] for m in apex), tuple(legs[m][1] for m in apex))
        return OneCell.of(Atom(name, R, S, payload))

    def from_functions(self, name, R, S, apex, left, right):
        return self.one_cell(name, R, S, {m: (left[m], right[m]) for m in apex})

    @lru_cache(maxsize=4096)
    def apex(self, W):
        """``(elements, left, right)`` with ``elements`` sorted and legs as dicts."""
        elems = [(r,) for r in W.src.payload]
        left = {x: x[0] for x in elems}
        right = dict(left)
        for atom in W.factors:
            apex, aleft, aright = atom.payload
            fibers = {}
            for m, a, b in zip(apex, aleft, aright):
                fibers.setdefault(a, []).append((m, b))
            new, nleft, nright = [], {}, {}
            for x in elems:
                for m, b in fibers.get(right[x], ()):
                    y = x + (m,)
                    new.append(y)
                    nleft[y] = left[x]
                    nright[y] = b
            elems, left, right = sorted(new), nleft, nright
        return tuple(elems), left, right

    def legs(self, W, x):
        _, left, right = self.apex(W)
        return left[x], right[x]

    # 2-cells ------------------------------------------------------------------
    def two_cell(self, src, tgt, mapping):
        if src.src != tgt.src or src.tgt != tgt.tgt:
            raise CellError("2-cell source and target are not parallel")
        xs, sl, sr = self.apex(src)
        _, tl, tr = self.apex(tgt)
        mapping = dict(mapping)
        for x in xs:
            if x not in mapping:
                raise CellError(f"2-cell is undefined at {x!r}")
            y = mapping[x]
            if y not in tl:
                raise CellError(f"{y!r} is not in the apex of {tgt.name}")
            if (tl[y], tr[y]) != (sl[x], sr[x]):
                raise CellError(f"2-cell does not commute with the legs at {x!r}")
        return TwoCell(src, tgt, {x: mapping[x] for x in xs})

    def identity2(self, M):
        return TwoCell(M, M, {x: x for x in self.apex(M)[0]})

    def vcompose(self, g, f):
        if f.tgt != g.src:
            raise CellError(f"cannot compose 2-cells: {f.tgt.name} vs {g.src.name}")
        return TwoCell(f.src, g.tgt, {x: g.data[y] for x, y in f.data.items()})

    def hcompose(self, f, g):
        if f.src.tgt != g.src.src:
            raise CellError("2-cells are not horizontally composable")
        k = len(f.src.factors)
        _, _, right = self.apex(f.src)
        data = {}
        for x in self.apex(self.compose1(f.src, g.src))[0]:
            x1 = x[: k + 1]
            x2 = (right[x1],) + x[k + 1 :]
            data[x] = f.data[x1] + g.data[x2][1:]
        return TwoCell(self.compose1(f.src, g.src), self.compose1(f.tgt, g.tgt), data)

    def equal2(self, f, g):
        return f.src == g.src and f.tgt == g.tgt and f.data == g.data

    # shadow -----------------------------------------------------------------------
    @lru_cache(maxsize=4096)
    def fixed_points(self, M):
        self._check_endo(M)
        xs, left, right = self.apex(M)
        return tuple(x for x in xs if left[x] == right[x])

    @lru_cache(maxsize=4096)
    def shadow_ob(self, M):
        pts = self.fixed_points(M)
        labels = [x[0] if len(x) == 1 else x for x in pts]
        return ShadowObject(ShadowPresentation(ZZ, len(pts), labels=labels), M)

    def _function(self, src, tgt, images):
        sidx = {x: i for i, x in enumerate(self.fixed_points(src))}
        tidx = {x: i for i, x in enumerate(self.fixed_points(tgt))}
        rows = {}
        for x, y in images.items():
            rows.setdefault(tidx[y], {})[sidx[x]] = ZZ.one
        return ShadowMorphism(self.shadow_ob(src), self.shadow_ob(tgt), DomainMatrix(rows, (len(tidx), len(sidx)), ZZ), check=False)

    def shadow_mor(self, f):
        self._check_endo(f.src)
        return self._function(f.src, f.tgt, {x: f.data[x] for x in self.fixed_points(f.src)})

    @lru_cache(maxsize=4096)
    def theta(self, M, N):
        self._check_theta(M, N)
        k = len(M.factors)
        MN, NM = self.compose1(M, N), self.compose1(N, M)
        _, _, right = self.apex(M)
        images = {}
        for x in self.fixed_points(MN):
            x1 = x[: k + 1]
            images[x] = (right[x1],) + x[k + 1 :] + x[1 : k + 1]
        return self._function(MN, NM, images)

    # duality -----------------------------------------------------------------------
    def make_dual(self, M, name=None):
        """The reversed span, defined when the left leg of ``M`` is a bijection."""
        xs, left, right = self.apex(M)
        by_left = {}
        for x in xs:
            by_left.setdefault(left[x], []).append(x)
        bad = [r for r in M.src.payload if len(by_left.get(r, ())) != 1]
        if bad:
            raise CellError(f"{M.name} is not dualizable: its left leg is not a bijection (fiber over {bad[0]!r})")
        D = self.one_cell(name or f"{M.name}*", M.tgt, M.src, {x: (right[x], left[x]) for x in xs})
        coev = {(r,): by_left[r][0] + (by_left[r][0],) for r in M.src.payload}
        ev = {}
        for y in self.apex(self.compose1(D, M))[0]:
            ev[y] = (y[0],)
        pair = DualPair(
            M,
            D,
            self.two_cell(self.unit(M.src), self.compose1(M, D), coev),
            self.two_cell(self.compose1(D, M), self.unit(M.tgt), ev),
        )
        return pair.check(self)

    def describe(self, M):
        xs, left, right = self.apex(M)
        body = ", ".join(f"{x}:{left[x]}->{right[x]}" for x in xs)
        return f"{M.name}: {M.src.name} <- {{{body}}} -> {M.tgt.name}"
