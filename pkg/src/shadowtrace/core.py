"""Strict bicategories with shadows: the shared interface.

Every instance works with the same cell types.  A 1-cell is a word of atoms
and composition is concatenation, so associativity and the unit laws hold on
the nose; the unit ``U_R`` is the empty word at ``R``.  What an atom means and
how a word is realized (rank matrix, pullback, bimodule) is up to the instance.

Shadows land in finitely generated abelian groups or finite dimensional
rational vector spaces, given by cokernel presentations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any

from .linalg import QQ, ZZ, cokernel_form, eye, is_zero, join_ring, ring_name, to_ring, to_rows


class CellError(ValueError):
    """Raised for ill-typed cells: endpoint mismatches, bad shapes."""


@dataclass(frozen=True)
class ZeroCell:
    name: str
    payload: Any = None

    def __repr__(self):
        return f"ZeroCell({self.name})"


@dataclass(frozen=True)
class Atom:
    """An indecomposable 1-cell; ``payload`` is instance data."""

    name: str
    src: ZeroCell
    tgt: ZeroCell
    payload: Any = None

    def __repr__(self):
        return f"Atom({self.name}: {self.src.name}->{self.tgt.name})"


@dataclass(frozen=True)
class OneCell:
    src: ZeroCell
    tgt: ZeroCell
    factors: tuple = ()

    def __post_init__(self):
        prev = self.src
        for a in self.factors:
            if a.src != prev:
                raise CellError(f"factor {a.name} starts at {a.src.name}, expected {prev.name}")
            prev = a.tgt
        if prev != self.tgt:
            raise CellError(f"word ends at {prev.name}, expected {self.tgt.name}")

    @classmethod
    def of(cls, atom):
        return cls(atom.src, atom.tgt, (atom,))

    @property
    def is_unit(self):
        return not self.factors

    @property
    def is_endo(self):
        return self.src == self.tgt

    @property
    def name(self):
        if not self.factors:
            return f"U[{self.src.name}]"
        return "*".join(a.name for a in self.factors)

    def __repr__(self):
        return f"OneCell({self.name})"


@dataclass(frozen=True, eq=False)
class TwoCell:
    """A 2-cell ``src => tgt``; ``data`` is instance data."""

    src: OneCell
    tgt: OneCell
    data: Any

    def __post_init__(self):
        if self.src.src != self.tgt.src or self.src.tgt != self.tgt.tgt:
            raise CellError("2-cell source and target are not parallel")

    def __repr__(self):
        return f"TwoCell({self.src.name} => {self.tgt.name})"


# -- the shadow target ---------------------------------------------------------


class ShadowPresentation:
    """``ring^ngens`` modulo the column span of ``relations``."""

    def __init__(self, ring, ngens, relations=None, labels=None):
        from sympy.polys.matrices import DomainMatrix

        self.ring = ring
        self.ngens = ngens
        if relations is None:
            relations = DomainMatrix({}, (ngens, 0), ring)
        self.relations = to_ring(relations, ring)
        if self.relations.shape[0] != ngens:
            raise CellError("relation matrix has the wrong number of rows")
        self.labels = tuple(labels) if labels is not None else tuple(range(ngens))
        self._form = None

    @property
    def form(self):
        if self._form is None:
            self._form = cokernel_form(self.relations, self.ngens)
        return self._form

    @property
    def is_free(self):
        return is_zero(self.relations)

    @property
    def free_rank(self):
        return self.ngens if self.is_free else self.form.free_rank

    @property
    def torsion(self):
        return [] if self.is_free else [int(d) for d in self.form.moduli]

    def kills(self, X):
        """True when all columns of ``X`` are zero in the quotient."""
        if self.is_free:
            return is_zero(X)
        return self.form.kills(X)

    def rationalized(self):
        return ShadowPresentation(QQ, self.ngens, self.relations.convert_to(QQ), self.labels)

    def lattice_basis(self):
        from sympy.polys.matrices import DomainMatrix

        if self.is_free:
            return DomainMatrix({}, (self.ngens, 0), self.ring)
        return self.form.basis

    def __eq__(self, other):
        if not isinstance(other, ShadowPresentation):
            return NotImplemented
        if (self.ring, self.ngens, self.labels) != (other.ring, other.ngens, other.labels):
            return False
        if self.relations == other.relations:
            return True
        return self.kills(other.lattice_basis()) and other.kills(self.lattice_basis())

    __hash__ = None

    def describe(self):
        parts = []
        if self.free_rank:
            parts.append(f"{ring_name(self.ring)}^{self.free_rank}")
        parts += [f"ZZ/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"ShadowPresentation({self.describe()}, gens={self.ngens})"


@dataclass(eq=False)
class ShadowObject:
    presentation: ShadowPresentation
    origin: Any = None

    @property
    def ring(self):
        return self.presentation.ring

    @property
    def ngens(self):
        return self.presentation.ngens

    @property
    def labels(self):
        return self.presentation.labels

    def __eq__(self, other):
        if not isinstance(other, ShadowObject):
            return NotImplemented
        return self.presentation == other.presentation

    __hash__ = None

    def __repr__(self):
        name = getattr(self.origin, "name", self.origin)
        return f"<{name}> = {self.presentation.describe()}"


class ShadowMorphism:
    """A linear map between shadow presentations, given on generators.

    ``matrix`` has one column per source generator and one row per target
    generator.  Construction checks that the map descends to the quotients.
    """

    def __init__(self, src, tgt, matrix, check=True):
        if tgt.ring == ZZ and src.ring == QQ:
            if not is_zero(matrix):
                raise CellError("no nonzero maps from a rational space to a ZZ-presentation")
        self.src = src
        self.tgt = tgt
        self.matrix = to_ring(matrix, tgt.ring)
        if self.matrix.shape != (tgt.ngens, src.ngens):
            raise CellError(f"matrix shape {self.matrix.shape} != {(tgt.ngens, src.ngens)}")
        if check:
            rel = src.presentation.lattice_basis()
            if rel.shape[1] and not tgt.presentation.kills(self.matrix.matmul(to_ring(rel, tgt.ring))):
                raise CellError("map does not descend to the quotient")

    @classmethod
    def identity(cls, obj):
        return cls(obj, obj, eye(obj.ngens, obj.ring), check=False)

    @classmethod
    def zero(cls, src, tgt):
        from sympy.polys.matrices import DomainMatrix

        return cls(src, tgt, DomainMatrix({}, (tgt.ngens, src.ngens), tgt.ring), check=False)

    def __matmul__(self, other):
        """``self @ other`` is the composite ``self o other``."""
        if not isinstance(other, ShadowMorphism):
            return NotImplemented
        if other.tgt != self.src:
            raise CellError(f"cannot compose: {other.tgt!r} vs {self.src!r}")
        K = join_ring(self.matrix.domain, other.matrix.domain)
        M = to_ring(self.matrix, K).matmul(to_ring(other.matrix, K))
        return ShadowMorphism(other.src, self.tgt, M, check=False)

    def _same_shape(self, other):
        if other.src != self.src or other.tgt != self.tgt:
            raise CellError("morphisms are not parallel")

    def __add__(self, other):
        self._same_shape(other)
        return ShadowMorphism(self.src, self.tgt, self.matrix + other.matrix, check=False)

    def __sub__(self, other):
        self._same_shape(other)
        return ShadowMorphism(self.src, self.tgt, self.matrix - other.matrix, check=False)

    def __neg__(self):
        return ShadowMorphism(self.src, self.tgt, -self.matrix, check=False)

    def scaled(self, c):
        K = self.tgt.ring
        return ShadowMorphism(self.src, self.tgt, self.matrix * K.convert(c), check=False)

    def __eq__(self, other):
        if not isinstance(other, ShadowMorphism):
            return NotImplemented
        if other.src != self.src or other.tgt != self.tgt:
            return False
        K = join_ring(self.matrix.domain, other.matrix.domain)
        diff = to_ring(self.matrix, K) - to_ring(other.matrix, K)
        return self.tgt.presentation.kills(diff)

    __hash__ = None

    def rows(self):
        return to_rows(self.matrix)

    def as_function(self):
        """For maps between free sets given by 0/1 columns, the underlying function."""
        out = {}
        src_labels, tgt_labels = self.src.labels, self.tgt.labels
        cols = {}
        for i, row in enumerate(self.rows()):
            for j, v in enumerate(row):
                if v:
                    if v != 1 or j in cols:
                        raise CellError("not the matrix of a function")
                    cols[j] = i
        for j, lab in enumerate(src_labels):
            if j not in cols:
                raise CellError("not the matrix of a function")
            out[lab] = tgt_labels[cols[j]]
        return out

    def __repr__(self):
        return f"ShadowMorphism({self.src!r} -> {self.tgt!r}, {self.rows()})"


# -- bicategory interface ---------------------------------------------------------


class Bicategory:
    """Base class for strict bicategories with a shadow.

    Subclasses implement the 2-cell operations and the shadow; word bookkeeping
    for 1-cells is shared.
    """

    name = "bicategory"

    def unit(self, R):
        return OneCell(R, R, ())

    def compose1(self, M, N):
        if M.tgt != N.src:
            raise CellError(f"cannot compose {M.name}: ->{M.tgt.name} with {N.name}: {N.src.name}->")
        return OneCell(M.src, N.tgt, M.factors + N.factors)

    def compose_word(self, cells, base=None):
        """Composite of a sequence of 1-cells; ``base`` is used when it is empty."""
        cells = list(cells)
        if not cells:
            return self.unit(base)
        out = cells[0]
        for c in cells[1:]:
            out = self.compose1(out, c)
        return out

    # subclasses --------------------------------------------------------------
    def identity2(self, M):
        raise NotImplementedError

    def vcompose(self, g, f):
        """Vertical composite ``g o f``."""
        raise NotImplementedError

    def hcompose(self, f, g):
        """Horizontal composite ``f (.) g``."""
        raise NotImplementedError

    def equal2(self, f, g):
        raise NotImplementedError

    def shadow_ob(self, M):
        raise NotImplementedError

    def shadow_mor(self, f):
        raise NotImplementedError

    def theta(self, M, N):
        raise NotImplementedError

    # shared helpers -------------------------------------------------------------
    def hcompose_many(self, cells):
        out = cells[0]
        for c in cells[1:]:
            out = self.hcompose(out, c)
        return out

    def vcompose_many(self, cells):
        """``cells[-1] o ... o cells[0]``: the list is in order of application."""
        out = cells[0]
        for c in cells[1:]:
            out = self.vcompose(c, out)
        return out

    def _check_endo(self, M):
        if not M.is_endo:
            raise CellError(f"{M.name} is not an endo-1-cell")

    def _check_theta(self, M, N):
        if M.tgt != N.src or N.tgt != M.src:
            raise CellError(f"theta needs M: R->S and N: S->R, got {M.name}, {N.name}")

    def __repr__(self):
        return f"<{self.name}>"


# -- axiom harness --------------------------------------------------------------


@dataclass
class Failure:
    trial: int
    seed: int
    check: str
    detail: str = ""


@dataclass
class Report:
    name: str
    trials: int = 0
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def record(self, trial, seed, check, passed, detail=""):
        self.checks += 1
        if not passed:
            self.failures.append(Failure(trial, seed, check, detail))

    def merge(self, other):
        self.trials += other.trials
        self.checks += other.checks
        self.failures.extend(other.failures)
        return self

    def summary(self):
        status = "PASS" if self.ok else "FAIL"
        return f"{self.name}: {status} ({self.trials} trials, {self.checks} checks, {len(self.failures)} failures)"

    def lines(self):
        yield self.summary()
        for f in self.failures:
            yield f"  trial {f.trial} seed {f.seed}: {f.check} {f.detail}".rstrip()


def trial_seed(seed, trial):
    return seed * 1_000_003 + trial


def _safe(check):
    try:
        return bool(check()), ""
    except Exception as exc:  # a crash inside a check is a failure, not an abort
        return False, f"{type(exc).__name__}: {exc}"


def check_axioms(instance, sampler, trials, seed=0, only=None):
    """Check the shadow axioms on ``trials`` random composable triples.

    ``sampler.triple(rng)`` returns ``(M, N, P)`` with ``M: R->S``, ``N: S->T``
    and ``P: T->R``; ``sampler.endo2(rng, X)`` returns a random endo-2-cell of
    ``X``.  Each trial checks the strict hexagon, both unit axioms, that theta
    squares to the identity, theta naturality, strictness of composition,
    functoriality of the shadow and the interchange law.  ``only`` restricts
    the report to the named checks.
    """
    B = instance
    report = Report(f"axioms[{B.name}]")
    for t in range(trials):
        s = trial_seed(seed, t)
        rng = random.Random(s)
        M, N, P = sampler.triple(rng)
        report.trials += 1
        MN, NP = B.compose1(M, N), B.compose1(N, P)
        L = B.compose1(MN, P)
        R = M.src
        U = B.unit(R)

        def hexagon():
            lhs = B.theta(N, B.compose1(P, M)) @ B.theta(M, NP)
            return lhs == B.theta(MN, P)

        def unit_left():
            return B.theta(U, L) == ShadowMorphism.identity(B.shadow_ob(L))

        def unit_right():
            return B.theta(L, U) == ShadowMorphism.identity(B.shadow_ob(L))

        def involution():
            return B.theta(NP, M) @ B.theta(M, NP) == ShadowMorphism.identity(B.shadow_ob(L))

        def strict():
            return (
                B.compose1(MN, P) == B.compose1(M, NP)
                and B.compose1(B.unit(R), M) == M
                and B.compose1(M, B.unit(M.tgt)) == M
            )

        f, g = sampler.endo2(rng, M), sampler.endo2(rng, NP)

        def naturality():
            lhs = B.shadow_mor(B.hcompose(g, f)) @ B.theta(M, NP)
            rhs = B.theta(M, NP) @ B.shadow_mor(B.hcompose(f, g))
            return lhs == rhs

        h1, h2 = sampler.endo2(rng, L), sampler.endo2(rng, L)

        def functor():
            ident = B.shadow_mor(B.identity2(L)) == ShadowMorphism.identity(B.shadow_ob(L))
            comp = B.shadow_mor(B.vcompose(h2, h1)) == B.shadow_mor(h2) @ B.shadow_mor(h1)
            return ident and comp

        f2, g2 = sampler.endo2(rng, M), sampler.endo2(rng, NP)

        def interchange():
            lhs = B.hcompose(B.vcompose(f2, f), B.vcompose(g2, g))
            rhs = B.vcompose(B.hcompose(f2, g2), B.hcompose(f, g))
            return B.equal2(lhs, rhs)

        for name, check in [
            ("hexagon", hexagon),
            ("unit-left", unit_left),
            ("unit-right", unit_right),
            ("theta-involution", involution),
            ("strictness", strict),
            ("theta-naturality", naturality),
            ("shadow-functor", functor),
            ("interchange", interchange),
        ]:
            if only is not None and name not in only:
                continue
            passed, detail = _safe(check)
            report.record(t, s, name, passed, detail)
    return report


# -- duality ------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DualPair:
    """``M`` with a right dual ``Mdual``, ``coev: U_R => M Mdual`` and ``ev: Mdual M => U_S``."""

    M: OneCell
    Mdual: OneCell
    coev: TwoCell
    ev: TwoCell

    def triangle_identities(self, B):
        """Both triangle identities, checked exactly in the bicategory ``B``."""
        M, D = self.M, self.Mdual
        idM, idD = B.identity2(M), B.identity2(D)
        first = B.vcompose(B.hcompose(idM, self.ev), B.hcompose(self.coev, idM))
        second = B.vcompose(B.hcompose(self.ev, idD), B.hcompose(idD, self.coev))
        return B.equal2(first, idM) and B.equal2(second, idD)

    def check(self, B):
        R, S = self.M.src, self.M.tgt
        if self.Mdual.src != S or self.Mdual.tgt != R:
            raise CellError("dual has the wrong endpoints")
        if self.coev.src != B.unit(R) or self.coev.tgt != B.compose1(self.M, self.Mdual):
            raise CellError("coevaluation has the wrong type")
        if self.ev.src != B.compose1(self.Mdual, self.M) or self.ev.tgt != B.unit(S):
            raise CellError("evaluation has the wrong type")
        if not self.triangle_identities(B):
            raise CellError(f"triangle identities fail for {self.M.name}")
        return self
