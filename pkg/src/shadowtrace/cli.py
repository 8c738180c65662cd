"""Command-line front end.

Every subcommand reads workspace files (see ``corpus/FORMAT.md``), runs one
computation and prints the result.  ``--format machine`` prints one JSON
object per result instead of text.  Errors go to stderr as
``file:line: message`` and make the exit status 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import traces
from .core import CellError, check_axioms
from .diagram import DiagramError, validate
from .evaluator import value
from .groups import GroupError, format_scalar, standard_group
from .instances.grbimod import GRBimod, free_module, group_object, group_of
from .instances.matmod import MatMod, finite_set
from .laws import ALL_LAWS, INSTANCES, canonical_instance, make_shapes, verify_law
from .linalg import QQ, ZZ
from .textio import WorkspaceError, group_matrix, load_workspace

__all__ = ["main", "corpus_dir", "corpus_files"]

CORPUS_ENV = "SHADOWTRACE_CORPUS"


def corpus_dir():
    return Path(os.environ.get(CORPUS_ENV) or Path(__file__).with_name("corpus"))


def corpus_files():
    return sorted(corpus_dir().glob("*.st"))


def resolve(paths):
    """Paths as given, falling back to the corpus directory for bare names."""
    out = []
    for p in paths:
        q = Path(p)
        if not q.exists() and (corpus_dir() / q).exists():
            q = corpus_dir() / q
        out.append(q)
    return out


class Printer:
    def __init__(self, fmt, out=None):
        self.fmt = fmt
        self.out = out or sys.stdout

    def emit(self, text, **data):
        if self.fmt == "machine":
            print(json.dumps(data, sort_keys=True, separators=(",", ":")), file=self.out)
        else:
            print(text, file=self.out)


def _scalar(x):
    return format_scalar(x)


def _label(x):
    if isinstance(x, tuple):
        return ".".join(map(str, x))
    return str(x)


def morphism_data(t):
    return {
        "domain": {"labels": [_label(x) for x in t.src.labels], "module": t.src.presentation.describe()},
        "codomain": {"labels": [_label(x) for x in t.tgt.labels], "module": t.tgt.presentation.describe()},
        "matrix": [[_scalar(x) for x in row] for row in t.rows()],
    }


def morphism_text(t, title=None):
    data = morphism_data(t)
    lines = [title] if title else []
    for key in ("domain", "codomain"):
        d = data[key]
        lines.append(f"{key}: {d['module']} on [{' '.join(d['labels'])}]")
    lines.append("matrix:")
    lines += ["  [" + " ".join(row) + "]" for row in data["matrix"]]
    return "\n".join(lines)


def function_lines(t):
    f = t.as_function()
    return [f"{_label(x)} -> {_label(y)}" for x, y in f.items()]


def class_data(x):
    names = [x.classes.label(k) for k in range(len(x.classes))]
    return {"classes": names, "coefficients": [_scalar(c) for c in x.coeffs], "value": repr(x)}


# -- commands ----------------------------------------------------------------------------------


def cmd_validate(args, out):
    paths = resolve(args.paths) if args.paths else corpus_files()
    bad = 0
    for p in paths:
        try:
            ws = load_workspace([p])
            b = ws.build()
            for name in ws.generators:
                if name in ws.valuation:
                    b.two_cell(name)
            for name in ws.diagrams:
                d, v = b.diagram(name)
                try:
                    top, bottom = validate(d, v, b.B)
                except DiagramError as exc:
                    raise ws.error(f"diagram {name}: {exc}", "diagrams", name) from None
                out.emit(f"{p}: {name}: {top} -> {bottom}", file=str(p), diagram=name, top=repr(top), bottom=repr(bottom))
            for name in ws.complexes:
                b.complex(name)
                out.emit(f"{p}: complex {name}: ok", file=str(p), complex=name)
            if not ws.diagrams and not ws.complexes:
                out.emit(f"{p}: ok", file=str(p))
        except (WorkspaceError, OSError) as exc:
            print(exc if isinstance(exc, WorkspaceError) else f"{p}: {exc}", file=sys.stderr)
            bad += 1
    return 1 if bad else 0


def _load(args):
    ws = load_workspace(resolve(args.paths))
    return ws, ws.build()


def _pick(names, wanted, kind):
    names = list(names)
    if wanted is not None:
        if wanted not in names:
            raise WorkspaceError(f"unknown {kind} {wanted}")
        return wanted
    if len(names) == 1:
        return names[0]
    if "main" in names:
        return "main"
    raise WorkspaceError(f"several {kind}s ({', '.join(names) or 'none'}); choose one with --{kind}")


def cmd_eval(args, out):
    ws, b = _load(args)
    name = _pick(ws.diagrams, args.diagram, "diagram")
    d, v = b.diagram(name)
    t = value(b.B, d, v)
    out.emit(morphism_text(t, f"diagram {name}"), diagram=name, **morphism_data(t))
    return 0


def _cell_and_dual(ws, b, cell, dual=None):
    name = _pick(ws.generators, cell, "cell")
    f = b.two_cell(name)
    g = b.generator(name)
    if not g.dom:
        raise ws.error(f"generator {name} has an empty domain, so it has no trace", "generators", name)
    M = dual or g.dom[-1].name
    if not g.cod or g.cod[0].name != M or g.dom[-1].name != M:
        raise ws.error(f"generator {name} must have the form Q {M} -> {M} P", "generators", name)
    return name, f, b.dual(M, "generators", name)


def cmd_trace(args, out):
    ws, b = _load(args)
    name, f, d = _cell_and_dual(ws, b, args.cell, args.dual)
    t = traces.trace(b.B, f, d)
    text = morphism_text(t, f"trace of {name}")
    data = morphism_data(t)
    if ws.instance == "span":
        lines = function_lines(t)
        text += "\nfunction:\n" + "\n".join("  " + x for x in lines)
        data["function"] = dict(zip(data["domain"]["labels"], (x.split(" -> ")[1] for x in lines)))
    out.emit(text, cell=name, **data)
    return 0


def _rank_dual(args):
    instance = canonical_instance(args.instance or "matmod-z")
    if instance.startswith("matmod"):
        B = MatMod(QQ if instance == "matmod-q" else ZZ)
        pt = finite_set("pt", ("*",))
        M = B.one_cell("M", pt, pt, [[args.rank]])
        return B, B.make_dual(M)
    if instance.startswith("grbimod"):
        B = GRBimod()
        K = QQ if instance == "grbimod-q" else ZZ
        H = standard_group(args.group or "1")
        one, tgt = group_object(standard_group("1"), K), group_object(H, K)
        return B, B.make_dual(free_module(B, "M", one, tgt, args.rank))
    raise WorkspaceError(f"--rank needs a matmod or grbimod instance, not {instance}")


def cmd_euler(args, out):
    if args.rank is not None:
        B, d = _rank_dual(args)
        name = f"rank {args.rank}"
    else:
        ws, b = _load(args)
        one = [n for n, s in ws.one_cells.items() if s[0] != "dual"]
        name = _pick(one, args.cell, "cell")
        B, d = b.B, b.dual(name, "one_cells", name)
    t = traces.euler(B, d)
    rows = t.rows()
    if len(rows) == 1 and len(rows[0]) == 1:
        out.emit(_scalar(rows[0][0]), cell=name, value=_scalar(rows[0][0]))
    else:
        out.emit(morphism_text(t, f"euler characteristic of {name}"), cell=name, **morphism_data(t))
    return 0


def cmd_transfer(args, out):
    if args.map is not None:
        B = MatMod(QQ if args.instance == "matmod-q" else ZZ)
        try:
            fhat = [int(x) for x in args.map.replace(",", " ").split()]
        except ValueError:
            raise WorkspaceError(f"--map takes a list of integers, got {args.map!r}") from None
        delta, d = traces.point_diagonal(B, fhat)
        name = "diagonal"
    else:
        ws, b = _load(args)
        name = _pick(ws.generators, args.cell, "cell")
        delta = b.two_cell(name)
        g = b.generator(name)
        B = b.B
        if len(g.dom) != 1:
            raise ws.error(f"generator {name} must have the form M -> M M", "generators", name)
        d = b.dual(g.dom[0].name, "generators", name)
    t = traces.transfer(B, delta, d)
    out.emit(morphism_text(t, f"transfer of {name}"), cell=name, **morphism_data(t))
    return 0


def _group_matrix_args(args):
    G = standard_group(args.group)
    K = QQ if args.ring == "Q" else ZZ
    return G, group_matrix(args.matrix, G, K)


def _grbimod_cell(args):
    ws, b = _load(args)
    name = _pick(ws.generators, args.cell, "cell")
    f = b.two_cell(name)
    if not isinstance(b.B, GRBimod) or f.src != f.tgt:
        raise ws.error(f"generator {name} must be an endomorphism in a grbimod instance", "generators", name)
    if not group_of(f.src.src).is_trivial:
        raise ws.error(f"generator {name} must act on a module out of the trivial group", "generators", name)
    return name, f.data


def cmd_hs(args, out):
    if args.matrix is not None:
        G, f = _group_matrix_args(args)
        name = args.matrix
        mod = traces.IdempotentModule(group_matrix(args.idempotent, G, f.ring)) if args.idempotent else None
    else:
        name, f = _grbimod_cell(args)
        mod = None
    x = traces.hattori_stallings(f, mod)
    out.emit(repr(x), cell=name, **class_data(x))
    return 0


def _psi(G, text):
    idx = {n: i for i, n in enumerate(G.names)}
    try:
        return [idx[x] for x in text.split()]
    except KeyError as exc:
        raise WorkspaceError(f"unknown group element {exc.args[0]!r} in --psi") from None


def cmd_twisted(args, out):
    if args.matrix is not None:
        G, f = _group_matrix_args(args)
        name = args.matrix
    else:
        name, f = _grbimod_cell(args)
        G = f.group
    psi = _psi(G, args.psi) if args.psi else None
    x = traces.twisted_trace(f, psi)
    out.emit(repr(x), cell=name, **class_data(x))
    return 0


def _complex(args):
    ws, b = _load(args)
    name = _pick(ws.complexes, args.complex, "complex")
    return name, b.complex(name)


def cmd_reidemeister(args, out):
    name, C = _complex(args)
    x = traces.reidemeister(C)
    out.emit(repr(x), complex=name, **class_data(x))
    return 0


def cmd_lefschetz(args, out):
    name, C = _complex(args)
    L = traces.lefschetz(C if C.group.is_trivial else C.augmented())
    out.emit(_scalar(L), complex=name, value=_scalar(L))
    return 0


def _report(rep, out):
    lines = list(rep.lines())
    out.emit(
        "\n".join(lines),
        name=rep.name,
        ok=rep.ok,
        trials=rep.trials,
        checks=rep.checks,
        failures=[{"trial": f.trial, "seed": f.seed, "check": f.check, "detail": f.detail} for f in rep.failures],
    )
    return 0 if rep.ok else 1


def cmd_laws(args, out):
    laws = ALL_LAWS if args.law == "all" else [args.law]
    status = 0
    for law in laws:
        try:
            rep = verify_law(law, args.instance, args.trials, args.seed)
        except ValueError as exc:
            if args.law == "all":
                continue
            raise WorkspaceError(str(exc)) from None
        status |= _report(rep, out)
    return status


def cmd_axioms(args, out):
    instances = INSTANCES if args.instance is None else [canonical_instance(args.instance)]
    status = 0
    for inst in instances:
        sh = make_shapes(inst)
        status |= _report(check_axioms(sh.B, sh.S, args.trials, args.seed), out)
    return status


# -- argument parsing --------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="shadowtrace", description="Bicategorical traces and cylinder diagrams.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--instance", help=f"one of {', '.join(INSTANCES)} (matmod and grbimod are accepted as short forms)")
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, files="*"):
        q = sub.add_parser(name, parents=[common], help=help)
        q.add_argument("paths", nargs=files, metavar="FILE")
        q.set_defaults(fn=fn)
        return q

    add("validate", cmd_validate, "check diagrams and print their boundary words")
    q = add("eval", cmd_eval, "evaluate a diagram", "+")
    q.add_argument("--diagram")
    q = add("trace", cmd_trace, "trace of a 2-cell Q M => M P", "+")
    q.add_argument("--cell")
    q.add_argument("--dual", help="the 1-cell M (default: last letter of the domain)")
    q = add("euler", cmd_euler, "Euler characteristic of a dualizable 1-cell")
    q.add_argument("--cell")
    q.add_argument("--rank", type=int, help="use the free module of this rank instead of a file")
    q.add_argument("--group", help="target group for --rank in grbimod (default: trivial)")
    q = add("transfer", cmd_transfer, "transfer of a diagonal M => M M")
    q.add_argument("--cell")
    q.add_argument("--map", help="images of 0..n-1 for the diagonal e_s -> e_f(s) (x) e_s over a point")
    for name, fn, help in (("hs", cmd_hs, "Hattori-Stallings trace"), ("twisted", cmd_twisted, "twisted trace")):
        q = add(name, fn, help)
        q.add_argument("--cell")
        q.add_argument("--group", default="1")
        q.add_argument("--ring", choices=("Z", "Q"), default="Z")
        q.add_argument("--matrix", help="a matrix over the group ring, e.g. [2*e+3*g]")
        if name == "hs":
            q.add_argument("--idempotent", help="an idempotent e; the module is e K[G]^n")
        else:
            q.add_argument("--psi", help="images of the group elements, in table order")
    for name, fn, help in (
        ("reidemeister", cmd_reidemeister, "Reidemeister trace of a chain complex"),
        ("lefschetz", cmd_lefschetz, "Lefschetz number of a chain complex"),
    ):
        q = add(name, fn, help, "+")
        q.add_argument("--complex")
    q = add("laws", cmd_laws, "randomized law checks", "*")
    q.add_argument("--law", required=True, choices=ALL_LAWS + ("all",))
    add("axioms", cmd_axioms, "randomized shadow axiom checks", "*")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = Printer(args.format)
    if args.instance is not None:
        try:
            args.instance = canonical_instance(args.instance)
        except ValueError as exc:
            print(f"shadowtrace: {exc}", file=sys.stderr)
            return 2
    try:
        return args.fn(args, out)
    except WorkspaceError as exc:
        print(exc, file=sys.stderr)
    except (CellError, GroupError, DiagramError, OSError) as exc:
        print(f"shadowtrace: {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
