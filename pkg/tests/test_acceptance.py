"""The acceptance criteria at full trial counts.

Each criterion prints one ``criterion N: PASS`` or ``criterion N: FAIL`` line
(visible with ``pytest -s`` or in ``-v`` runs through the terminal).
Running this file directly prints the same lines without pytest.
"""
import random
import sys
import time

import pytest

from shadowtrace import traces
from shadowtrace.core import check_axioms
from shadowtrace.groups import cyclic_group, trivial_group
from shadowtrace.instances import GRBimod, MatMod
from shadowtrace.instances.grbimod import group_object, regular_module
from shadowtrace.instances.matmod import finite_set
from shadowtrace.laws import INSTANCES, make_sampler, verify_law
from shadowtrace.linalg import QQ, ZZ, to_rows
from shadowtrace.samplers import random_complex

SEED = 2024


def reports_ok(reports, labels=None):
    ok = True
    for k, rep in enumerate(reports):
        print("   ", (labels[k] + " " if labels else "") + rep.summary())
        for line in list(rep.lines())[1:6]:
            print("   ", line)
        ok = ok and rep.ok
    return ok


def criterion_1():
    """Shadow axioms on 200 samples for each instance."""
    reports = [check_axioms(make_sampler(i).B, make_sampler(i), 200, SEED) for i in INSTANCES]
    return reports_ok(reports, INSTANCES) and all(r.trials >= 200 for r in reports)


def criterion_2():
    """One-object traces are diagonal sums."""
    rng = random.Random(SEED)
    B = MatMod(ZZ)
    pt = finite_set("pt", ("*",))
    ok = True
    for _ in range(500):
        n = rng.randint(1, 6)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        M = B.one_cell("M", pt, pt, [[n]])
        f = B.two_cell(M, M, {(0, 0): rows})
        got = to_rows(traces.trace(B, f, B.make_dual(M)).matrix)
        ok = ok and got == [[sum(rows[i][i] for i in range(n))]]
    print("    500 matrices:", "PASS" if ok else "FAIL")
    return ok


def criterion_3():
    """Span traces tabulate the right leg; linearized traces count fixed points."""
    return reports_ok([verify_law("span-trace", "span", 100, SEED)])


def criterion_4():
    laws = ("tightening", "sliding", "unit", "composition", "mate")
    return reports_ok([verify_law(law, i, 200, SEED) for law in laws for i in INSTANCES])


def criterion_5():
    reports = [verify_law(law, i, 500, SEED) for law in ("theta-addition", "theta-naturality", "theta-combination") for i in INSTANCES]
    reports += [verify_law("deformation", i, 1000, SEED) for i in INSTANCES]
    reports += [verify_law("trace-diagram", i, 200, SEED) for i in INSTANCES]
    return reports_ok(reports)


def criterion_6():
    return reports_ok([verify_law("functoriality", "span", 100, SEED), verify_law("functoriality", "grbimod-z", 100, SEED)])


def criterion_7():
    """Duals invert the scalar extension, the cube commutes, and Z traces map to Q traces."""
    return reports_ok([verify_law("duals-invert", "grbimod-z", 50, SEED), verify_law("cube", "grbimod-z", 50, SEED)])


def criterion_8():
    ok = reports_ok([verify_law("reidemeister-lefschetz", i, 100, SEED) for i in ("grbimod-z", "grbimod-q")])
    rng = random.Random(SEED)
    for _ in range(100):
        C = random_complex(rng, trivial_group(), rng.choice((ZZ, QQ)))
        ok = ok and traces.reidemeister(C).coeffs[0] == traces.lefschetz(C)
    print("    trivial group, 100 complexes:", "PASS" if ok else "FAIL")
    return ok


def criterion_9():
    """Euler of the regular representation of Z/2 over Q."""
    G = cyclic_group(2)
    B = GRBimod()
    V = regular_module(B, group_object(G, QQ), group_object(trivial_group(), QQ))
    got = [[str(x) for x in row] for row in to_rows(traces.euler(B, B.make_dual(V)).matrix)]
    # sum of the diagonal of the action of each element, one entry per class
    action = {g: [[1 if G.mul(g, j) == i else 0 for j in range(G.order)] for i in range(G.order)] for g in range(G.order)}
    oracle = [[sum(action[g][i][i] for i in range(G.order)) for g in range(G.order)]]
    print("    euler:", got, "oracle:", oracle)
    return got == [[str(x) for x in row] for row in oracle] and oracle == [[2, 0]]


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


def run(criterion):
    start = time.perf_counter()
    ok = criterion()
    n = criterion.__name__.split("_")[1]
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({time.perf_counter() - start:.1f}s)")
    return ok


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion, capsys):
    ok = run(criterion)
    captured = capsys.readouterr().out
    with capsys.disabled():
        print()
        print(captured, end="")
    assert ok


if __name__ == "__main__":
    results = [run(c) for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
