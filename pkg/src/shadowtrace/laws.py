"""Randomized verification of the trace laws.

``verify_law(law, instance, trials, seed)`` draws ``trials`` random inputs of
the shape the law needs, evaluates both sides exactly and returns a
:class:`~shadowtrace.core.Report`.  Every trial is seeded by
``trial_seed(seed, t)`` so a failure can be replayed alone.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .core import CellError, DualPair, Report, TwoCell, _safe, check_axioms, trial_seed
from .diagram import apply_move, applicable_moves, validate
from .evaluator import theta_power, value
from .functors import Linearization, Rationalization, ScalarExtension, fixed_point_index, functoriality_square
from .groups import GRMatrix, cyclic_group, symmetric_group, trivial_group
from .instances.grbimod import free_module, group_object, group_of, regular_module, twisted_unit
from .linalg import QQ, ZZ
from .samplers import GRBimodSampler, MatModSampler, SpanSampler, biased, random_complex, random_diagram
from . import traces

__all__ = ["INSTANCES", "LAWS", "ALL_LAWS", "make_shapes", "verify_law"]

INSTANCES = ("matmod-z", "matmod-q", "span", "grbimod-z", "grbimod-q")
ALIASES = {"matmod": "matmod-z", "grbimod": "grbimod-z"}


def canonical_instance(name):
    name = ALIASES.get(name, name)
    if name not in INSTANCES:
        raise ValueError(f"unknown instance {name!r}; choose from {', '.join(INSTANCES)}")
    return name


# -- shapes ------------------------------------------------------------------------------


class Shapes:
    """Random inputs for the trace laws in one instance."""

    def __init__(self, sampler):
        self.S = sampler
        self.B = sampler.B

    def endo(self, rng, R):
        if rng.random() < 0.25:
            return self.B.unit(R)
        return self.S.one_cell(rng, R, R, "E")

    def one(self, rng, R, S, stem="X"):
        return self.S.one_cell(rng, R, S, stem)

    def two(self, rng, src, tgt):
        return self.S.two_cell(rng, src, tgt)

    def receiver(self, rng, X, prefix):
        """A 1-cell ``P`` admitting some 2-cell ``X => prefix (.) P``."""
        return self.one(rng, prefix.tgt, X.tgt, "P")

    def unit_dual(self, R):
        U = self.B.unit(R)
        one = self.B.identity2(U)
        return DualPair(U, U, one, one)

    def relabel(self, rng, d):
        """The same dual with ``M*`` relabelled by a random automorphism."""
        B = self.B
        sigma, inv = self.automorphism(rng, d.Mdual)
        idM = B.identity2(d.M)
        coev = B.vcompose(B.hcompose(idM, sigma), d.coev)
        ev = B.vcompose(d.ev, B.hcompose(inv, idM))
        return DualPair(d.M, d.Mdual, coev, ev).check(B)

    def trace_input(self, rng):
        """``(f, d)`` with ``f: Q (.) M => M (.) P``."""
        d = self.dualizable(rng)
        Q = self.endo(rng, d.M.src)
        X = self.B.compose1(Q, d.M)
        P = self.receiver(rng, X, d.M) if isinstance(self, SpanShapes) else self.endo(rng, d.M.tgt)
        return self.two(rng, X, self.B.compose1(d.M, P)), d


class MatModShapes(Shapes):
    def dualizable(self, rng, R=None, S=None):
        S_ = self.S
        M = S_.one_cell(rng, R or S_.zero_cell(rng), S or S_.zero_cell(rng), "M")
        return self.B.make_dual(M)

    def pair_objects(self, rng, count):
        return [self.S.zero_cell(rng) for _ in range(count)]

    def receiver(self, rng, X, prefix):
        return self.endo(rng, prefix.tgt) if prefix.tgt == X.tgt else self.one(rng, prefix.tgt, X.tgt, "P")

    def automorphism(self, rng, X):
        sigma = self.S.automorphism(rng, X)
        return sigma, TwoCell(X, X, {k: m.transpose() for k, m in sigma.data.items()})


class SpanShapes(Shapes):
    def dualizable(self, rng, R=None, S=None):
        S_ = self.S
        M = S_.dualizable(rng, R or S_.zero_cell(rng), S or S_.zero_cell(rng))
        return self.B.make_dual(M)

    def pair_objects(self, rng, count):
        return [self.S.zero_cell(rng) for _ in range(count)]

    def receiver(self, rng, X, prefix):
        """Cover every pair the 2-cell is forced to hit, plus random extras."""
        B = self.B
        xs, left, right = B.apex(X)
        ps, pleft, pright = B.apex(prefix)
        over = {}
        for y in ps:
            over.setdefault(pleft[y], y)
        required = [(pright[over[left[x]]], right[x]) for x in xs]
        return self.S.one_cell(rng, prefix.tgt, X.tgt, "P", required=required)

    def automorphism(self, rng, X):
        sigma = self.S.automorphism(rng, X)
        return sigma, TwoCell(X, X, {y: x for x, y in sigma.data.items()})


class GRBimodShapes(Shapes):
    """Dualizable 1-cells are free modules out of the trivial group or regular modules into it."""

    def __init__(self, sampler):
        super().__init__(sampler)
        self.ring = sampler.ring
        self.trivial = sampler.trivial

    def dualizable(self, rng, R=None, S=None):
        B, S_ = self.B, self.S
        if R is None and S is None:
            R, S = rng.choice([(self.trivial, S_.zero_cell(rng)), (S_.zero_cell(rng), self.trivial), (self.trivial, self.trivial)])
        if group_of(R).is_trivial:
            M = free_module(B, S_.fresh("F"), R, S, biased(rng, 1, S_.max_rank))
        elif group_of(S).is_trivial:
            M = regular_module(B, R, S, S_.fresh("K"))
        else:
            raise CellError("no dualizable 1-cell between two nontrivial groups here")
        return B.make_dual(M)

    def pair_objects(self, rng, count):
        """0-cells in which consecutive pairs (cyclically) involve a trivial group."""
        out = []
        for i in range(count):
            out.append(self.trivial if i % 2 == 0 or rng.random() < 0.3 else self.S.zero_cell(rng))
        if count > 1 and not group_of(out[-1]).is_trivial and not group_of(out[0]).is_trivial:
            out[-1] = self.trivial
        return out

    def automorphism(self, rng, X):
        B = self.B
        n = B.rank(X)
        K = B.ring(X)
        c = rng.choice((1, -1)) if K == ZZ else rng.choice((Fraction(1, 2), -1, 3, Fraction(-2, 3)))
        H = group_of(X.tgt)
        I = GRMatrix.identity(H, K, n)
        return B.two_cell(X, X, I.scaled(c), check=False), B.two_cell(X, X, I.scaled(c if K == ZZ else 1 / Fraction(c)), check=False)


def make_shapes(instance):
    key = canonical_instance(instance)
    if key == "matmod-z":
        return MatModShapes(MatModSampler(ZZ))
    if key == "matmod-q":
        return MatModShapes(MatModSampler(QQ))
    if key == "span":
        return SpanShapes(SpanSampler())
    ring = ZZ if key == "grbimod-z" else QQ
    return GRBimodShapes(GRBimodSampler(ring=ring))


def make_sampler(instance):
    return make_shapes(instance).S


# -- the laws ------------------------------------------------------------------------------


def _tightening(sh, rng):
    B = sh.B
    f, d = sh.trace_input(rng)
    Q = traces.strip_suffix(f.src, d.M)
    P = traces.strip_prefix(f.tgt, d.M)
    if isinstance(sh, SpanShapes):
        Q2, P2 = Q, P
    else:
        Q2, P2 = sh.endo(rng, Q.src), sh.endo(rng, P.src)
    g, h = sh.two(rng, Q2, Q), sh.two(rng, P, P2)
    idM = B.identity2(d.M)
    lhs = B.shadow_mor(h) @ traces.trace(B, f, d) @ B.shadow_mor(g)
    tightened = B.vcompose_many([B.hcompose(g, idM), f, B.hcompose(idM, h)])
    return lhs == traces.trace(B, tightened, d)


def _sliding(sh, rng):
    B = sh.B
    R, S = sh.pair_objects(rng, 2)
    dM, dN = sh.dualizable(rng, R, S), sh.dualizable(rng, S, R)
    M, N = dM.M, dN.M
    Q, K = sh.one(rng, S, R, "Q"), sh.one(rng, R, S, "K")
    P = sh.receiver(rng, B.compose1(Q, M), N)
    L = sh.receiver(rng, B.compose1(K, N), M)
    f = sh.two(rng, B.compose1(Q, M), B.compose1(N, P))
    g = sh.two(rng, B.compose1(K, N), B.compose1(M, L))
    one = B.identity2
    left = B.vcompose(B.hcompose(g, one(P)), B.hcompose(one(K), f))
    right = B.vcompose(B.hcompose(f, one(L)), B.hcompose(one(Q), g))
    lhs = B.theta(L, P) @ traces.trace(B, left, dM)
    rhs = traces.trace(B, right, dN) @ B.theta(K, Q)
    return lhs == rhs


def _unit(sh, rng):
    B = sh.B
    R = sh.S.zero_cell(rng)
    Q = sh.endo(rng, R)
    d = sh.unit_dual(R)
    P = sh.receiver(rng, Q, d.M) if isinstance(sh, SpanShapes) else sh.endo(rng, R)
    f = sh.two(rng, Q, P)
    return traces.trace(B, f, d) == B.shadow_mor(f)


def _composition(sh, rng):
    B = sh.B
    R, S, T = sh.pair_objects(rng, 3)
    dM, dN = sh.dualizable(rng, R, S), sh.dualizable(rng, S, T)
    M, N = dM.M, dN.M
    Q = sh.endo(rng, R)
    P = sh.receiver(rng, B.compose1(Q, M), M) if isinstance(sh, SpanShapes) else sh.endo(rng, S)
    P2 = sh.receiver(rng, B.compose1(P, N), N) if isinstance(sh, SpanShapes) else sh.endo(rng, T)
    f = sh.two(rng, B.compose1(Q, M), B.compose1(M, P))
    g = sh.two(rng, B.compose1(P, N), B.compose1(N, P2))
    composite = B.vcompose(B.hcompose(B.identity2(M), g), B.hcompose(f, B.identity2(N)))
    dMN = traces.compose_duals(B, dM, dN)
    return traces.trace(B, composite, dMN) == traces.trace(B, g, dN) @ traces.trace(B, f, dM)


def _mate(sh, rng):
    B = sh.B
    f, d = sh.trace_input(rng)
    g = traces.mate(B, f, d, d)
    return traces.trace(B, f, d) == traces.left_trace(B, g, d) and B.equal2(traces.unmate(B, g, d, d), f)


def _cyclicity(sh, rng):
    B = sh.B
    dM = sh.dualizable(rng)
    M = dM.M
    if isinstance(sh, SpanShapes):
        dN = dM
    else:
        dN = sh.dualizable(rng, M.src, M.tgt)
    N = dN.M
    f, g = sh.two(rng, M, N), sh.two(rng, N, M)
    return traces.trace(B, B.vcompose(g, f), dM) == traces.trace(B, B.vcompose(f, g), dN)


def _dual_independence(sh, rng):
    f, d = sh.trace_input(rng)
    return traces.trace(sh.B, f, d) == traces.trace(sh.B, f, sh.relabel(rng, d))


def _trace_diagram(sh, rng):
    B = sh.B
    f, d = sh.trace_input(rng)
    diagram, v = traces.build_trace_diagram(B, f, d)
    return value(B, diagram, v) == traces.trace(B, f, d)


def _random_word(sh, rng, max_len=4):
    S = sh.S
    n = rng.randint(1, max_len)
    objs = sh.pair_objects(rng, n) if isinstance(sh, GRBimodShapes) else [S.zero_cell(rng) for _ in range(n)]
    return [S.one_cell(rng, objs[i], objs[(i + 1) % n], "W") for i in range(n)]


def _theta_addition(sh, rng):
    B = sh.B
    word = _random_word(sh, rng)
    n = len(word)
    k, m = rng.randint(0, n), rng.randint(0, n)
    rotated = word[m:] + word[:m]
    lhs = theta_power(B, rotated, k) @ theta_power(B, word, m)
    return lhs == theta_power(B, word, (k + m) % n)


def _theta_naturality(sh, rng):
    B = sh.B
    word = _random_word(sh, rng)
    n = len(word)
    k = rng.randint(0, n)
    cells = [sh.S.endo2(rng, W) for W in word]
    rot = cells[k:] + cells[:k]
    lhs = theta_power(B, word, k) @ B.shadow_mor(B.hcompose_many(cells))
    rhs = B.shadow_mor(B.hcompose_many(rot)) @ theta_power(B, word, k)
    return lhs == rhs


def _theta_combination(sh, rng):
    B = sh.B
    word = _random_word(sh, rng, 5)
    n = len(word)
    cuts = sorted(rng.sample(range(1, n), rng.randint(0, n - 1))) if n > 1 else []
    bounds = [0] + cuts + [n]
    blocks = [B.compose_word(word[a:b]) for a, b in zip(bounds, bounds[1:])]
    j = rng.randint(0, len(blocks))
    return theta_power(B, blocks, j) == theta_power(B, word, bounds[j])


def _functoriality(sh, rng):
    if isinstance(sh, SpanShapes):
        F = Linearization(sh.B)
        d = sh.dualizable(rng)
        Q = sh.endo(rng, d.M.src)
        X = sh.B.compose1(Q, d.M)
        P = sh.receiver(rng, X, d.M)
        f = sh.two(rng, X, sh.B.compose1(d.M, P))
    elif isinstance(sh, GRBimodShapes) and sh.ring == ZZ:
        F = Rationalization(sh.B)
        f, d = sh.trace_input(rng)
    else:
        raise CellError("functoriality is checked for linearization (span) and rationalization (grbimod-z)")
    lhs, rhs = functoriality_square(F, f, d)
    return lhs == rhs


def _span_trace(sh, rng):
    """A dualizable span traces to its right leg; a linearized endomorphism counts fixed points."""
    B = sh.B
    d = sh.dualizable(rng)
    M = d.M
    xs, left, right = B.apex(M)
    t = traces.trace(B, B.identity2(M), d)
    R, S = M.src.payload, M.tgt.payload
    ok = all(t.rows()[S.index(right[x])][R.index(left[x])] == 1 for x in xs)
    ok = ok and sum(sum(r) for r in t.rows()) == len(xs)
    F = Linearization(B)
    N = sh.S.one_cell(rng, M.src, M.tgt, "N")
    f = sh.S.endo2(rng, N)
    C = F.target
    tz = traces.trace(C, F.two(f), C.make_dual(F.one(N))).rows()
    for i, r in enumerate(R):
        for j, s in enumerate(S):
            ok = ok and tz[j][i] == fixed_point_index(f, N, r, s)
    return ok


def _duals_invert(sh, rng):
    if not isinstance(sh, GRBimodShapes) or sh.ring != ZZ:
        raise CellError("duals-invert is checked for the scalar extension of grbimod-z")
    B = sh.B
    E = ScalarExtension(B)
    d = sh.dualizable(rng, sh.trivial, sh.S.zero_cell(rng))
    a, inv = E.at(d.M), E.inverse(d)
    return B.equal2(B.vcompose(inv, a), B.identity2(a.src)) and B.equal2(B.vcompose(a, inv), B.identity2(a.tgt))


def reidemeister_instance(rng, groups=None, ring=ZZ):
    groups = groups or [cyclic_group(2), cyclic_group(3), symmetric_group(3)]
    return random_complex(rng, rng.choice(groups), ring)


def _cube(sh, rng):
    if not isinstance(sh, GRBimodShapes) or sh.ring != ZZ:
        raise CellError("the cube is checked for the scalar extension of grbimod-z")
    B = sh.B
    E = ScalarExtension(B)
    C = reidemeister_instance(rng)
    G, K = C.group, C.ring
    one, target = group_object(trivial_group(), K), group_object(G, K)
    Rpsi = twisted_unit(B, target, C.psi)
    ok = True
    for k in C.degrees:
        if not C.ranks[k]:
            continue
        M = free_module(B, f"C{k}", one, target, C.ranks[k])
        d = B.make_dual(M)
        f = B.two_cell(M, B.compose1(M, Rpsi), C.chain_map[k].dagger())
        for lhs, rhs in E.cube(f, d).values():
            ok = ok and lhs == rhs
    zq = traces.reidemeister(C).to_ring(QQ)
    return ok and zq == traces.reidemeister(C.rationalized())


def _reidemeister_lefschetz(sh, rng):
    groups = [trivial_group(), cyclic_group(2), cyclic_group(3), symmetric_group(3)]
    C = random_complex(rng, rng.choice(groups), getattr(sh, "ring", ZZ))
    r = traces.reidemeister(C)
    ok = traces.augment_reidemeister(r) == traces.lefschetz(C.augmented())
    if C.group.is_trivial:
        ok = ok and r.coeffs[0] == traces.lefschetz(C)
    return ok


LAWS = {
    "tightening": _tightening,
    "sliding": _sliding,
    "unit": _unit,
    "composition": _composition,
    "mate": _mate,
    "cyclicity": _cyclicity,
    "dual-independence": _dual_independence,
    "trace-diagram": _trace_diagram,
    "theta-addition": _theta_addition,
    "theta-naturality": _theta_naturality,
    "theta-combination": _theta_combination,
    "functoriality": _functoriality,
    "span-trace": _span_trace,
    "duals-invert": _duals_invert,
    "cube": _cube,
    "reidemeister-lefschetz": _reidemeister_lefschetz,
}
AXIOM_LAWS = {"hexagon", "unit-left", "unit-right", "theta-involution"}
APPLICABLE = {
    "functoriality": ("span", "grbimod-z"),
    "span-trace": ("span",),
    "duals-invert": ("grbimod-z",),
    "cube": ("grbimod-z",),
}
DEFAULT_INSTANCE = {"functoriality": "span", "span-trace": "span", "duals-invert": "grbimod-z", "cube": "grbimod-z"}
ALL_LAWS = tuple(LAWS) + tuple(sorted(AXIOM_LAWS)) + ("deformation",)


def _deformation(sh, trials, seed, report):
    """Each trial is one random applicable move on a random diagram."""
    B = sh.B
    for t in range(trials):
        s = trial_seed(seed, t)
        rng = random.Random(s)
        report.trials += 1

        def check():
            moves = []
            while not moves:  # a bare single rotation admits no move; draw again
                d, v = random_diagram(sh.S, rng)
                moves = applicable_moves(d)
            m = rng.choice(moves)
            d2 = apply_move(d, m)
            return validate(d2) == validate(d) and value(B, d2, v) == value(B, d, v)

        passed, detail = _safe(check)
        report.record(t, s, "deformation", passed, detail)
    return report


def verify_law(law, instance=None, trials=100, seed=0):
    """Run ``trials`` random checks of ``law`` and return the report."""
    if law not in ALL_LAWS:
        raise ValueError(f"unknown law {law!r}; choose from {', '.join(ALL_LAWS)}")
    instance = canonical_instance(instance or DEFAULT_INSTANCE.get(law, "matmod-z"))
    allowed = APPLICABLE.get(law, INSTANCES)
    if instance not in allowed:
        raise ValueError(f"law {law} applies to {', '.join(allowed)}, not {instance}")
    sh = make_shapes(instance)
    report = Report(f"{law}[{instance}]")
    if law in AXIOM_LAWS:
        sub = check_axioms(sh.B, sh.S, trials, seed, only={law})
        return report.merge(sub)
    if law == "deformation":
        return _deformation(sh, trials, seed, report)
    fn = LAWS[law]
    for t in range(trials):
        s = trial_seed(seed, t)
        rng = random.Random(s)
        report.trials += 1
        passed, detail = _safe(lambda: fn(sh, rng))
        report.record(t, s, law, passed, detail)
    return report
