"""The workspace text format.

A workspace is a line-oriented file with section headers in square brackets.
Parsing produces a :class:`Workspace` holding normalized declarations;
``Workspace.serialize`` writes them back in canonical form, and
``Workspace.build`` turns them into cells of the chosen instance.  The full
grammar is documented in ``corpus/FORMAT.md``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .core import CellError
from .diagram import Box, CyclicWord, Diagram, DiagramError, Edge, Elementary, Generator, Rotation, Valuation, Wire
from .groups import GroupError, GroupRingElement, GRMatrix, format_scalar, parse_group, standard_group
from .instances.grbimod import GRBimod, free_module, group_object, regular_module, twisted_unit
from .instances.matmod import MatMod, finite_set
from .instances.span import Span
from .linalg import QQ, ZZ, matrix

__all__ = ["WorkspaceError", "Workspace", "parse_workspace", "load_workspace", "format_matrix", "parse_scalar"]

INSTANCES = ("matmod-z", "matmod-q", "span", "grbimod-z", "grbimod-q")
CELL_SECTIONS = ("zero-cells", "one-cells", "generators", "valuation")


class WorkspaceError(ValueError):
    def __init__(self, message, source=None, line=None):
        where = f"{source}:{line}: " if source is not None and line is not None else ""
        super().__init__(where + message)
        self.source = source
        self.line = line


# -- scalars, group ring elements and matrices -----------------------------------------------


def parse_scalar(tok):
    try:
        return Fraction(tok.strip())
    except (ValueError, ZeroDivisionError):
        raise WorkspaceError(f"bad number {tok!r}") from None


_TERM = re.compile(r"\s*([+-]?)\s*([^+\-\s][^+\-]*?)\s*(?=[+-]|$)")


def parse_element(text, group):
    """``2*g + e - 1/2*g2``; a bare number means that multiple of ``e``."""
    text = text.strip()
    if not text:
        raise WorkspaceError("empty group ring entry")
    names = {n: i for i, n in enumerate(group.names)} if group is not None else {}
    coeffs = {}
    pos = 0
    for m in _TERM.finditer(text):
        if m.start() != pos:
            raise WorkspaceError(f"cannot read group ring entry {text!r}")
        pos = m.end()
        sign, body = m.group(1), m.group(2).strip()
        if "*" in body:
            c, name = body.split("*", 1)
            c, name = parse_scalar(c), name.strip()
        elif body in names:
            c, name = Fraction(1), body
        else:
            c, name = parse_scalar(body), group.names[group.identity] if group is not None else None
        if group is not None and name not in names:
            raise WorkspaceError(f"unknown group element {name!r}")
        key = names.get(name, 0)
        coeffs[key] = coeffs.get(key, 0) + (-c if sign == "-" else c)
    if pos != len(text):
        raise WorkspaceError(f"cannot read group ring entry {text!r}")
    return coeffs


def format_element(coeffs, group):
    parts = []
    for g in sorted(coeffs):
        c = coeffs[g]
        if not c:
            continue
        name = group.names[g]
        s = name if c == 1 else f"-{name}" if c == -1 else f"{format_scalar(c)}*{name}"
        parts.append(s)
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f"-{p[1:]}" if p.startswith("-") else f"+{p}"
    return out


def parse_rows(text):
    """``[a,b;c,d]`` into a list of rows of strings."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise WorkspaceError(f"matrix must be written [a,b;c,d], got {text!r}")
    body = text[1:-1].strip()
    if not body:
        return []
    rows = [[x.strip() for x in r.split(",")] for r in body.split(";")]
    if len({len(r) for r in rows}) != 1:
        raise WorkspaceError(f"ragged matrix {text!r}")
    return rows


def canonical_matrix(text, group=None):
    """Normalized ``[..]`` text for a scalar (``group is None``) or group ring matrix."""
    rows = parse_rows(text)
    if group is None:
        return format_rows([[format_scalar(parse_scalar(x)) for x in r] for r in rows])
    return format_rows([[format_element(parse_element(x, group), group) for x in r] for r in rows])


def format_rows(rows):
    return "[" + ";".join(",".join(r) for r in rows) + "]"


def format_matrix(rows):
    return format_rows([[format_scalar(x) for x in r] for r in rows])


def scalar_matrix(text, ring, shape=None):
    rows = [[parse_scalar(x) for x in r] for r in parse_rows(text)]
    if shape is not None and (len(rows), len(rows[0]) if rows else shape[1]) != tuple(shape) and not (not rows and 0 in shape):
        raise WorkspaceError(f"matrix {text} should have shape {shape[0]}x{shape[1]}")
    if ring == ZZ and any(x.denominator != 1 for r in rows for x in r):
        raise WorkspaceError(f"matrix {text} has non-integer entries over Z")
    conv = (lambda x: int(x)) if ring == ZZ else (lambda x: x)
    return matrix([[conv(x) for x in r] for r in rows], ring, shape or (len(rows), len(rows[0]) if rows else 0))


def group_matrix(text, group, ring, shape=None):
    rows = parse_rows(text)
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    elif rows and (len(rows), len(rows[0])) != tuple(shape):
        raise WorkspaceError(f"matrix {text} should have shape {shape[0]}x{shape[1]}")
    entries = []
    for r in rows:
        row = []
        for x in r:
            coeffs = parse_element(x, group)
            if ring == ZZ and any(c.denominator != 1 for c in coeffs.values()):
                raise WorkspaceError(f"entry {x!r} is not integral")
            row.append(GroupRingElement(group, ring, {g: int(c) if ring == ZZ else c for g, c in coeffs.items()}))
        entries.append(row)
    return GRMatrix.from_entries(group, ring, entries, shape)


def _ring(tok):
    if tok in ("Z", "ZZ"):
        return "Z"
    if tok in ("Q", "QQ"):
        return "Q"
    raise WorkspaceError(f"ring must be Z or Q, got {tok!r}")


# -- the workspace ---------------------------------------------------------------------------


@dataclass
class Workspace:
    """Normalized declarations; ``lines`` records where each came from."""

    instance: str = None
    groups: dict = field(default_factory=dict)
    zero_cells: dict = field(default_factory=dict)
    one_cells: dict = field(default_factory=dict)
    generators: dict = field(default_factory=dict)
    valuation: dict = field(default_factory=dict)
    diagrams: dict = field(default_factory=dict)
    complexes: dict = field(default_factory=dict)
    source: str = field(default="<text>", compare=False)
    lines: dict = field(default_factory=dict, compare=False)

    # groups --------------------------------------------------------------------------
    def group(self, name):
        if name in self.groups:
            g = parse_group(self.groups[name])
            g.name = name
            return g
        try:
            return standard_group(name)
        except GroupError as exc:
            raise WorkspaceError(str(exc)) from None

    def merge(self, other):
        if other.instance and self.instance and other.instance != self.instance:
            raise WorkspaceError(f"instance {other.instance} conflicts with {self.instance}", other.source, 1)
        self.instance = self.instance or other.instance
        for attr in ("groups", "zero_cells", "one_cells", "generators", "valuation", "diagrams", "complexes"):
            mine, theirs = getattr(self, attr), getattr(other, attr)
            for k, v in theirs.items():
                if k in mine:
                    raise WorkspaceError(f"{k} is declared twice", *other.where(attr, k))
                mine[k] = v
        self.lines.update(other.lines)
        return self

    def where(self, *key):
        """``(file, line)`` of a declaration."""
        return self.lines.get(key, (self.source, None))

    def error(self, message, attr, key):
        return WorkspaceError(message, *self.where(attr, key))

    # serialization -------------------------------------------------------------------------
    def serialize(self):
        out = []
        if self.instance:
            out.append(f"instance {self.instance}")
        for name, rows in self.groups.items():
            out += ["", f"[group {name}]"] + list(rows)
        if self.zero_cells:
            out += ["", "[zero-cells]"]
            for name, spec in self.zero_cells.items():
                if spec[0] == "set":
                    out.append(f"{name}: " + " ".join(spec[1]))
                else:
                    out.append(f"{name}: group {spec[1]} ring {spec[2]}")
        if self.one_cells:
            out += ["", "[one-cells]"]
            for name, spec in self.one_cells.items():
                kind = spec[0]
                if kind == "dual":
                    out.append(f"{name}: dual {spec[1]}")
                    continue
                _, src, tgt, data = spec
                head = f"{name}: {src} -> {tgt} {kind}"
                if kind == "ranks":
                    out.append(head + " " + "; ".join(" ".join(map(str, r)) for r in data))
                elif kind == "legs":
                    out.append(head + "".join(f" {m}:{a},{b}" for m, a, b in data))
                elif kind == "free":
                    out.append(head + f" {data}")
                elif kind == "regular":
                    out.append(head)
                elif kind == "twisted":
                    out.append(head + " " + " ".join(data))
                elif kind == "action":
                    out.append(head + "".join(f" {g}={m}" for g, m in data))
        if self.generators:
            out += ["", "[generators]"]
            for name, (dom, cod, region) in self.generators.items():
                s = f"{name}: {' '.join(dom) or '-'} -> {' '.join(cod) or '-'}"
                out.append(s + (f" @ {region}" if region else ""))
        if self.valuation:
            out += ["", "[valuation]"]
            for name, spec in self.valuation.items():
                kind = spec[0]
                if kind in ("coev", "ev"):
                    out.append(f"{name}: {kind} {spec[1]}")
                elif kind == "id":
                    out.append(f"{name}: id")
                elif kind == "blocks":
                    out.append(f"{name}: blocks" + "".join(f" {a},{b}={m}" for (a, b), m in spec[1]))
                elif kind == "map":
                    out.append(f"{name}: map" + "".join(f" {x}={y}" for x, y in spec[1]))
                elif kind == "matrix":
                    out.append(f"{name}: matrix {spec[1]}")
        for name, (top, region, layers) in self.diagrams.items():
            out += ["", f"[layers {name}]"]
            out.append("top: " + (" ".join(top) if top else f"- @ {region}"))
            for layer in layers:
                if layer[0] == "rotate":
                    out.append(f"rotate {layer[1]}")
                else:
                    out.append("slots " + " ".join(f"<{n}>" if k == "box" else n for k, n in layer[1]) if layer[1] else "slots")
        for name, c in self.complexes.items():
            out += ["", f"[complex {name}]"]
            out.append(f"group {c['group']} ring {c['ring']}")
            if c["psi"] is not None:
                out.append("psi " + " ".join(c["psi"]))
            out.append("ranks " + " ".join(map(str, c["ranks"])))
            for k, m in sorted(c["d"].items()):
                out.append(f"d{k} {m}")
            for k, m in sorted(c["f"].items()):
                out.append(f"f{k} {m}")
        return "\n".join(out).lstrip("\n") + "\n"

    # building ---------------------------------------------------------------------------------
    def build(self):
        return Built(self)


def parse_workspace(text, source="<text>"):
    ws = Workspace(source=source)
    section, name = None, None
    lines = text.splitlines()

    def fail(msg, n):
        return WorkspaceError(msg, source, n)

    def record(attr, key, n):
        store = getattr(ws, attr)
        if key in store:
            raise fail(f"{key} is declared twice", n)
        ws.lines[(attr, key)] = (source, n)

    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("[") and line.endswith("]"):
                head = line[1:-1].split()
                section = head[0] if head else ""
                name = head[1] if len(head) > 1 else None
                if section in ("group", "layers", "complex"):
                    if name is None:
                        if section == "group":
                            raise fail("section [group] needs a name", n)
                        name = "main"
                    attr = {"group": "groups", "layers": "diagrams", "complex": "complexes"}[section]
                    record(attr, name, n)
                    if section == "group":
                        ws.groups[name] = []
                    elif section == "layers":
                        ws.diagrams[name] = [None, None, []]
                    else:
                        ws.complexes[name] = {"group": None, "ring": "Z", "psi": None, "ranks": None, "d": {}, "f": {}}
                elif section not in CELL_SECTIONS:
                    raise fail(f"unknown section [{section}]", n)
                continue
            if section is None:
                key, _, rest = line.partition(" ")
                if key != "instance":
                    raise fail(f"expected 'instance' or a section header, got {line!r}", n)
                rest = rest.strip()
                if rest not in INSTANCES and rest not in ("matmod", "grbimod"):
                    raise fail(f"unknown instance {rest!r}", n)
                ws.instance = {"matmod": "matmod-z", "grbimod": "grbimod-z"}.get(rest, rest)
                continue
            if section == "group":
                ws.groups[name].append(" ".join(line.split()))
                continue
            if section == "layers":
                _diagram_line(ws, name, line, n)
                continue
            if section == "complex":
                _complex_line(ws, name, line, n)
                continue
            key, sep, rest = line.partition(":")
            key, rest = key.strip(), rest.strip()
            if not sep or not key:
                raise fail(f"expected '<name>: ...', got {line!r}", n)
            if section == "zero-cells":
                record("zero_cells", key, n)
                ws.zero_cells[key] = _zero_cell(rest)
            elif section == "one-cells":
                record("one_cells", key, n)
                ws.one_cells[key] = _one_cell(ws, rest)
            elif section == "generators":
                record("generators", key, n)
                ws.generators[key] = _generator(rest)
            elif section == "valuation":
                record("valuation", key, n)
                ws.valuation[key] = _value(ws, key, rest)
        except WorkspaceError as exc:
            if exc.line is None:
                raise fail(str(exc), n) from None
            raise
    for name, d in ws.diagrams.items():
        if d[0] is None:
            raise ws.error(f"diagram {name} has no top line", "diagrams", name)
        ws.diagrams[name] = (d[0], d[1], tuple(d[2]))
    for name, c in ws.complexes.items():
        if c["group"] is None or c["ranks"] is None:
            raise ws.error(f"complex {name} needs group and ranks lines", "complexes", name)
    return ws


def _zero_cell(rest):
    toks = rest.split()
    if toks and toks[0] == "group":
        if len(toks) != 4 or toks[2] != "ring":
            raise WorkspaceError("expected 'group <G> ring <Z|Q>'")
        return ("group", toks[1], _ring(toks[3]))
    if len(set(toks)) != len(toks):
        raise WorkspaceError("repeated element in a finite set")
    return ("set", tuple(toks))


def _one_cell(ws, rest):
    toks = rest.split(None, 1)
    if toks and toks[0] == "dual":
        return ("dual", toks[1].strip())
    m = re.match(r"(\S+)\s*->\s*(\S+)\s+(\S+)\s*(.*)$", rest)
    if not m:
        raise WorkspaceError("expected '<R> -> <S> <kind> ...'")
    src, tgt, kind, body = m.groups()
    if kind == "ranks":
        rows = tuple(tuple(int(x) for x in r.split()) for r in body.split(";")) if body.strip() else ()
        return ("ranks", src, tgt, rows)
    if kind == "legs":
        legs = []
        for tok in body.split():
            mm = re.match(r"([^:]+):([^,]+),(.+)$", tok)
            if not mm:
                raise WorkspaceError(f"leg {tok!r} should read element:left,right")
            legs.append(mm.groups())
        return ("legs", src, tgt, tuple(legs))
    if kind == "free":
        return ("free", src, tgt, int(body))
    if kind == "regular":
        return ("regular", src, tgt, None)
    if kind == "twisted":
        return ("twisted", src, tgt, tuple(body.split()))
    if kind == "action":
        pairs = re.findall(r"(\S+?)=(\[[^\]]*\])", body)
        return ("action", src, tgt, tuple((g, canonical_matrix(mtx, _group_of_zero(ws, tgt))) for g, mtx in pairs))
    raise WorkspaceError(f"unknown one-cell kind {kind!r}")


def _group_of_zero(ws, name):
    spec = ws.zero_cells.get(name)
    if spec is None or spec[0] != "group":
        raise WorkspaceError(f"zero-cell {name} is not a group object")
    return ws.group(spec[1])


def _word(text):
    text = text.strip()
    return () if text == "-" else tuple(text.split())


def _generator(rest):
    m = re.match(r"(.*?)->(.*?)(?:@\s*(\S+))?\s*$", rest)
    if not m:
        raise WorkspaceError("expected '<dom> -> <cod> [@ region]'")
    return (_word(m.group(1)), _word(m.group(2)), m.group(3))


def _value(ws, key, rest):
    toks = rest.split(None, 1)
    kind = toks[0] if toks else ""
    body = toks[1] if len(toks) > 1 else ""
    if kind in ("coev", "ev"):
        return (kind, body.strip())
    if kind == "id":
        return ("id",)
    if kind == "blocks":
        pairs = re.findall(r"([^\s,=]+),([^\s,=]+)=(\[[^\]]*\])", body)
        return ("blocks", tuple(((a, b), canonical_matrix(m)) for a, b, m in pairs))
    if kind == "map":
        return ("map", tuple(tuple(tok.split("=", 1)) for tok in body.split()))
    if kind == "matrix":
        return ("matrix", body.strip())
    raise WorkspaceError(f"unknown value kind {kind!r} for {key}")


def _diagram_line(ws, name, line, n):
    d = ws.diagrams[name]
    key, _, rest = line.partition(" ")
    if key == "top:":
        m = re.match(r"-\s*@\s*(\S+)$", rest.strip())
        if m:
            d[0], d[1] = (), m.group(1)
        else:
            d[0], d[1] = tuple(rest.split()), None
        return
    if key == "rotate":
        d[2].append(("rotate", int(rest)))
    elif key == "slots":
        slots = []
        for tok in rest.split():
            if tok.startswith("<") and tok.endswith(">"):
                slots.append(("box", tok[1:-1]))
            else:
                slots.append(("wire", tok))
        d[2].append(("slots", tuple(slots)))
    else:
        raise WorkspaceError(f"diagram lines are 'top:', 'rotate' or 'slots', got {key!r}")
    ws.lines[("layer", name, len(d[2]))] = (ws.source, n)


def _complex_line(ws, name, line, n):
    c = ws.complexes[name]
    toks = line.split()
    key = toks[0]
    if key == "group":
        if len(toks) != 4 or toks[2] != "ring":
            raise WorkspaceError("expected 'group <G> ring <Z|Q>'")
        c["group"], c["ring"] = toks[1], _ring(toks[3])
    elif key == "psi":
        c["psi"] = tuple(toks[1:])
    elif key == "ranks":
        c["ranks"] = tuple(int(x) for x in toks[1:])
    elif re.fullmatch(r"[df]\d+", key):
        if c["group"] is None:
            raise WorkspaceError("declare the group before matrices")
        G = ws.group(c["group"])
        c[key[0]][int(key[1:])] = canonical_matrix(line[len(key) :].strip(), G)
    else:
        raise WorkspaceError(f"unknown complex line {key!r}")


def load_workspace(paths):
    """Parse and merge several files into one workspace."""
    ws = None
    for p in paths:
        with open(p, encoding="utf-8") as fh:
            part = parse_workspace(fh.read(), str(p))
        ws = part if ws is None else ws.merge(part)
    return ws if ws is not None else Workspace()


# -- building cells -------------------------------------------------------------------------------


class Built:
    """Cells of a workspace realized in its instance."""

    def __init__(self, ws):
        self.ws = ws
        self.B = _instance(ws.instance) if ws.instance else None
        self.zero = {}
        self.one = {}
        self.duals = {}
        self.cells = {}
        if ws.zero_cells or ws.one_cells:
            if self.B is None:
                raise WorkspaceError("cells need an 'instance' line", ws.source, None)
        for name, spec in ws.zero_cells.items():
            self.zero[name] = self._zero(name, spec)
        for name, spec in ws.one_cells.items():
            self.one[name] = self._one(name, spec)

    # 0- and 1-cells ------------------------------------------------------------------------
    def _zero(self, name, spec):
        grb = isinstance(self.B, GRBimod)
        if spec[0] == "set":
            if grb:
                raise self.ws.error(f"zero-cell {name}: the {self.ws.instance} instance needs 'group <G> ring <R>'", "zero_cells", name)
            return finite_set(name, spec[1])
        if not grb:
            raise self.ws.error(f"zero-cell {name}: groups belong to grbimod instances", "zero_cells", name)
        ring = ZZ if spec[2] == "Z" else QQ
        return group_object(self.ws.group(spec[1]), ring, name)

    def zero_cell(self, name, attr, key):
        try:
            return self.zero[name]
        except KeyError:
            raise self.ws.error(f"unknown zero-cell {name}", attr, key) from None

    def _one(self, name, spec):
        ws, B = self.ws, self.B
        try:
            if spec[0] == "dual":
                M = self.one_cell(spec[1], "one_cells", name)
                d = B.make_dual(M, name)
                self.duals[spec[1]] = d
                return d.Mdual
            kind, src, tgt, data = spec
            R, S = self.zero_cell(src, "one_cells", name), self.zero_cell(tgt, "one_cells", name)
            if isinstance(B, MatMod):
                if kind != "ranks":
                    raise WorkspaceError(f"matmod one-cells are given by ranks, not {kind}")
                return B.one_cell(name, R, S, data)
            if isinstance(B, Span):
                if kind != "legs":
                    raise WorkspaceError(f"span one-cells are given by legs, not {kind}")
                return B.one_cell(name, R, S, {m: (a, b) for m, a, b in data})
            if kind == "free":
                return free_module(B, name, R, S, data)
            if kind == "regular":
                return regular_module(B, R, S, name)
            if kind == "twisted":
                if R != S:
                    raise WorkspaceError("a twisted unit is an endo-1-cell")
                G = R.payload[0]
                idx = {nm: i for i, nm in enumerate(G.names)}
                try:
                    psi = [idx[x] for x in data]
                except KeyError as exc:
                    raise WorkspaceError(f"unknown group element {exc.args[0]!r}") from None
                return twisted_unit(B, R, psi, name)
            if kind == "action":
                G, H = R.payload[0], S.payload[0]
                K = QQ if QQ in (R.payload[1], S.payload[1]) else ZZ
                mats = dict(data)
                lam = []
                for g in G.names:
                    if g not in mats:
                        raise WorkspaceError(f"action is missing element {g}")
                    lam.append(group_matrix(mats[g], H, K))
                return B.one_cell(name, R, S, lam)
            raise WorkspaceError(f"grbimod one-cells are free, regular, twisted or action, not {kind}")
        except (CellError, GroupError) as exc:
            raise ws.error(f"one-cell {name}: {exc}", "one_cells", name) from None
        except WorkspaceError as exc:
            if exc.line is None:
                raise ws.error(f"one-cell {name}: {exc}", "one_cells", name) from None
            raise

    def one_cell(self, name, attr, key):
        try:
            return self.one[name]
        except KeyError:
            raise self.ws.error(f"unknown one-cell {name}", attr, key) from None

    def dual(self, name, attr, key):
        if name not in self.duals:
            M = self.one_cell(name, attr, key)
            try:
                self.duals[name] = self.B.make_dual(M)
            except CellError as exc:
                raise self.ws.error(str(exc), attr, key) from None
        return self.duals[name]

    def word(self, letters, region, attr, key):
        cells = [self.one_cell(x, attr, key) for x in letters]
        base = self.zero_cell(region, attr, key) if region is not None else None
        if not cells and base is None:
            raise self.ws.error("an empty word needs '@ region'", attr, key)
        try:
            return self.B.compose_word(cells, base)
        except CellError as exc:
            raise self.ws.error(str(exc), attr, key) from None

    def region_of(self, cell):
        for name, R in self.zero.items():
            if R == cell:
                return name
        raise WorkspaceError("internal: zero-cell without a name")

    def edge(self, name, attr, key):
        M = self.one_cell(name, attr, key)
        return Edge(name, self.region_of(M.src), self.region_of(M.tgt))

    # generators and their values -----------------------------------------------------------------
    def generator(self, name):
        dom, cod, region = self.ws.generators[name]
        edges = [self.edge(x, "generators", name) for x in dom + cod]
        try:
            return Generator(name, tuple(edges[: len(dom)]), tuple(edges[len(dom) :]), region)
        except DiagramError as exc:
            raise self.ws.error(str(exc), "generators", name) from None

    def two_cell(self, name):
        if name in self.cells:
            return self.cells[name]
        ws, B = self.ws, self.B
        if name not in ws.generators:
            raise WorkspaceError(f"unknown generator {name}", ws.source, None)
        if name not in ws.valuation:
            raise ws.error(f"generator {name} has no value in [valuation]", "generators", name)
        g = self.generator(name)
        src = self.word([e.name for e in g.dom], g.left, "generators", name)
        tgt = self.word([e.name for e in g.cod], g.left, "generators", name)
        spec = ws.valuation[name]
        kind = spec[0]
        try:
            if kind == "coev":
                cell = self.dual(spec[1], "valuation", name).coev
            elif kind == "ev":
                cell = self.dual(spec[1], "valuation", name).ev
            elif kind == "id":
                if src != tgt:
                    raise WorkspaceError("'id' needs equal domain and codomain")
                cell = B.identity2(src)
            elif kind == "blocks" and isinstance(B, MatMod):
                R, T = src.src, src.tgt
                blocks = {}
                for (a, b), m in spec[1]:
                    try:
                        key = (R.payload.index(a), T.payload.index(b))
                    except ValueError:
                        raise WorkspaceError(f"block {a},{b} names an element outside {R.name} x {T.name}") from None
                    shape = (B.rank(tgt, *key), B.rank(src, *key))
                    blocks[key] = scalar_matrix(m, B.ring, shape)
                cell = B.two_cell(src, tgt, blocks)
            elif kind == "map" and isinstance(B, Span):
                xs = {_apex_name(x): x for x in B.apex(src)[0]}
                ys = {_apex_name(y): y for y in B.apex(tgt)[0]}
                mapping = {}
                for x, y in spec[1]:
                    if x not in xs or y not in ys:
                        raise WorkspaceError(f"map entry {x}={y} names an unknown apex element")
                    mapping[xs[x]] = ys[y]
                cell = B.two_cell(src, tgt, mapping)
            elif kind == "matrix" and isinstance(B, GRBimod):
                H = src.tgt.payload[0]
                K = B.ring(tgt) if B.ring(tgt) == QQ else B.ring(src)
                f = group_matrix(spec[1], H, K, (B.rank(tgt), B.rank(src)))
                cell = B.two_cell(src, tgt, f)
            else:
                raise WorkspaceError(f"value kind {kind} does not fit the {ws.instance} instance")
        except (CellError, GroupError) as exc:
            raise ws.error(f"generator {name}: {exc}", "valuation", name) from None
        except WorkspaceError as exc:
            if exc.line is None:
                raise ws.error(f"generator {name}: {exc}", "valuation", name) from None
            raise
        if cell.src != src or cell.tgt != tgt:
            raise ws.error(f"generator {name}: value has type {cell.src.name} => {cell.tgt.name}", "valuation", name)
        self.cells[name] = cell
        return cell

    # diagrams ------------------------------------------------------------------------------------------
    def diagram(self, name):
        """``(Diagram, Valuation)``; interface errors name the layer and its line."""
        ws = self.ws
        if name not in ws.diagrams:
            raise WorkspaceError(f"unknown diagram {name}", ws.source, None)
        top, region, layers = ws.diagrams[name]
        gens = {}
        out = []
        for i, layer in enumerate(layers, 1):
            if layer[0] == "rotate":
                out.append(Rotation(layer[1]))
                continue
            slots = []
            for kind, nm in layer[1]:
                where = ws.where("layer", name, i)
                if kind == "box":
                    if nm not in ws.generators:
                        raise WorkspaceError(f"layer {i}: unknown generator {nm}", *where)
                    gens[nm] = self.generator(nm)
                    slots.append(Box(gens[nm]))
                else:
                    if nm not in self.one:
                        raise WorkspaceError(f"layer {i}: unknown edge {nm}", *where)
                    slots.append(Wire(self.edge(nm, "diagrams", name)))
            out.append(Elementary(slots))
        try:
            word = CyclicWord(tuple(self.edge(x, "diagrams", name) for x in top), region)
        except DiagramError as exc:
            raise ws.error(f"diagram {name}: top: {exc}", "diagrams", name) from None
        d = Diagram(word, out)
        try:
            d.words()
        except DiagramError as exc:
            m = re.match(r"layer (\d+):", str(exc))
            where = ws.where("layer", name, int(m.group(1))) if m else ws.where("diagrams", name)
            raise WorkspaceError(str(exc), *where) from None
        edges = {e.name: self.one[e.name] for e in d.edges().values()}
        values = {g: self.two_cell(g) for g in gens}
        return d, Valuation(dict(self.zero), edges, values)

    # complexes -----------------------------------------------------------------------------------------
    def complex(self, name):
        from .traces import EquivariantChainComplex

        ws = self.ws
        if name not in ws.complexes:
            raise WorkspaceError(f"unknown complex {name}", ws.source, None)
        c = ws.complexes[name]
        G = ws.group(c["group"])
        K = ZZ if c["ring"] == "Z" else QQ
        idx = {nm: i for i, nm in enumerate(G.names)}
        try:
            psi = [idx[x] for x in c["psi"]] if c["psi"] is not None else None
        except KeyError as exc:
            raise ws.error(f"complex {name}: unknown group element {exc.args[0]!r} in psi", "complexes", name) from None
        ranks = c["ranks"]
        try:
            D = [None] + [
                group_matrix(c["d"][k], G, K, (ranks[k - 1], ranks[k])) if k in c["d"] else GRMatrix.zero(G, K, ranks[k - 1], ranks[k])
                for k in range(1, len(ranks))
            ]
            F = [group_matrix(c["f"][k], G, K, (ranks[k], ranks[k])) if k in c["f"] else GRMatrix.zero(G, K, ranks[k], ranks[k]) for k in range(len(ranks))]
            extra = [k for k in c["d"] if not 1 <= k < len(ranks)] + [k for k in c["f"] if not 0 <= k < len(ranks)]
            if extra:
                raise WorkspaceError(f"matrix for degree {extra[0]} outside the ranks line")
            return EquivariantChainComplex(G, K, ranks, D, F, psi)
        except (CellError, GroupError, WorkspaceError) as exc:
            raise ws.error(f"complex {name}: {exc}", "complexes", name) from None


def _apex_name(x):
    return ".".join(str(p) for p in x)


def _instance(name):
    if name == "matmod-z":
        return MatMod(ZZ)
    if name == "matmod-q":
        return MatMod(QQ)
    if name == "span":
        return Span()
    return GRBimod()
