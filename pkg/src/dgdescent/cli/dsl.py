"""Manifest language for algebras, morphisms, covers, modules and gluing data.

Grammar (``#`` starts a comment running to the end of the line)::

    manifest  := statement*
    statement := algebra | morphism | cover | module | gluing
    algebra   := 'algebra' NAME ('extends' NAME)? '{' item* '}'
    item      := 'gens' gen (',' gen)* ';' | 'd' NAME '=' EXPR ';'
    gen       := NAME ':' INT
    morphism  := 'morphism' NAME ':' NAME '->' NAME '{' (NAME '->' EXPR ';')* '}'
    cover     := 'cover' NAME 'of' NAME '{' 'by' EXPR (',' EXPR)* ';' '}'
    module    := 'module' NAME 'over' NAME '{' 'rank' INT ';' ('rel' '(' EXPR (',' EXPR)* ')' ';')* '}'
    gluing    := 'gluing' NAME 'on' NAME '{' (chart | map)* '}'
    chart     := 'chart' INDEX '{' item* '}'
    map       := 'map' INDEX '->' INDEX '{' (NAME '->' EXPR ';')* '}'

``EXPR`` is a polynomial in the generators: ``+ - * ^``, parentheses,
integers and ``p/q``.  ``INDEX`` is a string of chart numbers such as
``1`` or ``12``.  Chart algebras extend the cover's charts, whose extra
generators are ``u<i>`` and ``eps<i>``.  Morphism images default to the
generator of the same name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .._expr import ExprError
from ..algebra.graded import AlgebraError, FreeGradedAlgebra
from ..algebra.morphisms import DgMorphism, check_morphism
from ..cohomology import element_to_poly, h0_ring
from ..commalg import ModulePresentation
from ..descent import Cover, CoverError, GluingData

KEYWORDS = {"algebra", "morphism", "cover", "module", "gluing"}
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_']*")
_INT = re.compile(r"-?\d+")


class ManifestError(ValueError):
    """Input error located at ``line``/``col`` (both 1-based)."""

    def __init__(self, message: str, line: int, col: int, kind: str = "syntax"):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col
        self.kind = kind

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "line": self.line, "column": self.col}


# -- declarations ---------------------------------------------------------

@dataclass
class AlgebraDecl:
    name: str
    extends: Optional[str]
    gens: List[Tuple[str, int]]
    diffs: List[Tuple[str, str]]


@dataclass
class MorphismDecl:
    name: str
    source: str
    target: str
    images: List[Tuple[str, str]]


@dataclass
class CoverDecl:
    name: str
    base: str
    elements: List[str]


@dataclass
class ModuleDecl:
    name: str
    over: str
    rank: int
    rels: List[List[str]]


@dataclass
class GluingDecl:
    name: str
    cover: str
    charts: Dict[Tuple[int, ...], Tuple[List[Tuple[str, int]], List[Tuple[str, str]]]]
    maps: List[Tuple[Tuple[int, ...], Tuple[int, ...], List[Tuple[str, str]]]]


@dataclass
class Manifest:
    decls: list = field(default_factory=list)
    algebras: Dict[str, FreeGradedAlgebra] = field(default_factory=dict)
    morphisms: Dict[str, DgMorphism] = field(default_factory=dict)
    covers: Dict[str, Cover] = field(default_factory=dict)
    modules: Dict[str, ModulePresentation] = field(default_factory=dict)
    gluings: Dict[str, GluingData] = field(default_factory=dict)

    def names(self):
        return [d.name for d in self.decls]

    def structure(self) -> list:
        """Normalized content used to compare manifests structurally."""
        out = []
        for d in self.decls:
            if isinstance(d, AlgebraDecl):
                A = self.algebras[d.name]
                out.append(("algebra", d.name, A.signature()))
            elif isinstance(d, MorphismDecl):
                f = self.morphisms[d.name]
                out.append(("morphism", d.name, d.source, d.target,
                            tuple(sorted((k, str(v)) for k, v in f.images.items()))))
            elif isinstance(d, CoverDecl):
                out.append(("cover", d.name, d.base, tuple(str(g) for g in self.covers[d.name].elements)))
            elif isinstance(d, ModuleDecl):
                out.append(("module", d.name, d.over, d.rank, tuple(tuple(r) for r in d.rels)))
            elif isinstance(d, GluingDecl):
                G = self.gluings[d.name]
                out.append(("gluing", d.name, d.cover,
                            tuple(sorted((I, B.signature()) for I, B in G.algebras.items())),
                            tuple(sorted((I, J, tuple(sorted((k, str(v)) for k, v in m.images.items())))
                                         for (I, J), m in G.maps.items()))))
        return out


# -- scanner --------------------------------------------------------------

class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line_starts = [0] + [m.end() for m in re.finditer(r"\n", text)]

    def where(self, pos: Optional[int] = None) -> Tuple[int, int]:
        pos = self.pos if pos is None else pos
        lo, hi = 0, len(self.line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.line_starts[mid] <= pos:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1, pos - self.line_starts[lo] + 1

    def error(self, message: str, pos: Optional[int] = None, kind: str = "syntax") -> ManifestError:
        line, col = self.where(pos)
        return ManifestError(message, line, col, kind)

    def skip(self):
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch.isspace():
                self.pos += 1
            elif ch == "#":
                nl = self.text.find("\n", self.pos)
                self.pos = len(self.text) if nl < 0 else nl + 1
            else:
                break

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek(self, s: str) -> bool:
        self.skip()
        if not self.text.startswith(s, self.pos):
            return False
        if s[-1].isalpha():
            nxt = self.text[self.pos + len(s): self.pos + len(s) + 1]
            return not (nxt.isalnum() or nxt in "_'")
        return True

    def expect(self, s: str):
        if not self.peek(s):
            got = self.text[self.pos: self.pos + 12].split("\n")[0] or "end of input"
            raise self.error(f"expected {s!r}, got {got!r}")
        self.pos += len(s)

    def name(self, what: str = "name") -> Tuple[str, int]:
        self.skip()
        m = _NAME.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group(0), m.start()

    def integer(self) -> Tuple[int, int]:
        self.skip()
        m = _INT.match(self.text, self.pos)
        if not m:
            raise self.error("expected an integer")
        self.pos = m.end()
        return int(m.group(0)), m.start()

    def index(self) -> Tuple[Tuple[int, ...], int]:
        self.skip()
        m = re.compile(r"[1-9]+").match(self.text, self.pos)
        if not m:
            raise self.error("expected a chart index such as 1 or 12")
        self.pos = m.end()
        idx = tuple(int(c) for c in m.group(0))
        if list(idx) != sorted(set(idx)):
            raise self.error("chart indices must be strictly increasing", m.start())
        return idx, m.start()

    def expr(self) -> Tuple[str, int]:
        """Raw expression text up to ``;``, ``,`` or an unmatched ``)`` / ``}``."""
        self.skip()
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            elif ch in ";,}" and depth == 0:
                break
            elif ch == "\n":
                break
            self.pos += 1
        text = self.text[start:self.pos].rstrip()
        if not text:
            raise self.error("expected an expression", start)
        return text, start


# -- parser ---------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.s = _Scanner(text)
        self.m = Manifest()

    def lookup(self, table: str, name: str, pos: int):
        objs = getattr(self.m, table)
        if name not in objs:
            kind = table[:-1]
            raise self.s.error(f"unknown {kind} {name!r}", pos, "unknown")
        return objs[name]

    def parse(self) -> Manifest:
        while not self.s.at_end():
            word, pos = self.s.name("a statement")
            if word not in KEYWORDS:
                raise self.s.error(f"unknown statement {word!r}", pos)
            getattr(self, f"_{word}")()
        return self.m

    def _declare(self, name: str, pos: int):
        if name in self.m.names():
            raise self.s.error(f"{name!r} is already defined", pos, "duplicate")

    # algebra bodies are shared by 'algebra' and 'chart'
    def _items(self):
        gens, diffs = [], []
        self.s.expect("{")
        while not self.s.peek("}"):
            word, pos = self.s.name("'gens' or 'd'")
            if word == "gens":
                while True:
                    g, gp = self.s.name("generator name")
                    self.s.expect(":")
                    deg, _ = self.s.integer()
                    gens.append((g, deg, gp))
                    if self.s.peek(","):
                        self.s.expect(",")
                        continue
                    break
                self.s.expect(";")
            elif word == "d":
                g, gp = self.s.name("generator name")
                self.s.expect("=")
                text, ep = self.s.expr()
                self.s.expect(";")
                diffs.append((g, text, gp, ep))
            else:
                raise self.s.error(f"expected 'gens' or 'd', got {word!r}", pos)
        self.s.expect("}")
        return gens, diffs

    def _build(self, base: Optional[FreeGradedAlgebra], gens, diffs, name: str, pos: int) -> FreeGradedAlgebra:
        taken = set(base.index) if base is not None else set()
        for g, deg, gp in gens:
            if g in taken:
                raise self.s.error(f"generator {g!r} defined twice", gp, "duplicate")
            if deg > 0:
                raise self.s.error(f"generator {g!r} has positive degree {deg}", gp, "degree")
            if g.startswith("_"):
                raise self.s.error(f"generator names may not start with '_'", gp)
            taken.add(g)
        plain = [(g, deg) for g, deg, _ in gens]
        try:
            scratch = (base.extend(plain, {}, check=False) if base is not None
                       else FreeGradedAlgebra(plain, {}, check=False))
        except AlgebraError as exc:
            raise self.s.error(str(exc), pos, "degree")
        own = {g for g, _, _ in gens}
        seen = set()
        for g, text, gp, ep in diffs:
            if g not in own:
                what = "inherited" if g in taken else "unknown"
                raise self.s.error(f"differential of {what} generator {g!r}", gp, "unknown")
            if g in seen:
                raise self.s.error(f"differential of {g!r} given twice", gp, "duplicate")
            seen.add(g)
            v = self._parse_in(scratch, text, ep)
            want = scratch.generator(g).degree + 1
            if not v.is_zero():
                if not v.is_homogeneous():
                    raise self.s.error(f"d {g} = {text} is not homogeneous (expected degree {want})", ep,
                                       "degree")
                if v.degree() != want:
                    raise self.s.error(f"d {g} = {text} has degree {v.degree()}, expected degree {want}",
                                       ep, "degree")
        dmap = {g: text for g, text, _, _ in diffs}
        try:
            if base is not None:
                return base.extend(plain, dmap, name=name)
            return FreeGradedAlgebra(plain, dmap, name=name)
        except AlgebraError as exc:
            kind = "d2" if "d^2" in str(exc) else "degree"
            m = re.match(r"d\^2 (\S+) ", str(exc))
            at = next((gp for g, _, gp, _ in diffs if m and g == m.group(1)), pos)
            raise self.s.error(str(exc), at, kind)

    def _parse_in(self, A: FreeGradedAlgebra, text: str, pos: int):
        try:
            return A.parse(text)
        except ExprError as exc:
            kind = "unknown" if "unknown generator" in exc.msg else "syntax"
            raise self.s.error(exc.msg, pos + exc.col, kind)

    def _algebra(self):
        name, pos = self.s.name("algebra name")
        self._declare(name, pos)
        extends = None
        base = None
        if self.s.peek("extends"):
            self.s.expect("extends")
            extends, bp = self.s.name("algebra name")
            base = self.lookup("algebras", extends, bp)
        gens, diffs = self._items()
        A = self._build(base, gens, diffs, name, pos)
        self.m.algebras[name] = A
        self.m.decls.append(AlgebraDecl(name, extends, [(g, d) for g, d, _ in gens],
                                        [(g, str(A.differential_of(g))) for g, _, _, _ in diffs]))

    def _images(self, src: FreeGradedAlgebra, tgt: FreeGradedAlgebra):
        images = []
        seen = set()
        self.s.expect("{")
        while not self.s.peek("}"):
            g, gp = self.s.name("generator name")
            if g not in src.index:
                raise self.s.error(f"unknown generator {g!r} of the source", gp, "unknown")
            if g in seen:
                raise self.s.error(f"image of {g!r} given twice", gp, "duplicate")
            seen.add(g)
            self.s.expect("->")
            text, ep = self.s.expr()
            v = self._parse_in(tgt, text, ep)
            want = src.generator(g).degree
            if not v.is_zero() and (not v.is_homogeneous() or v.degree() != want):
                raise self.s.error(f"image of {g} must have degree {want}", ep, "degree")
            self.s.expect(";")
            images.append((g, v))
        self.s.expect("}")
        return images

    def _morphism(self):
        name, pos = self.s.name("morphism name")
        self._declare(name, pos)
        self.s.expect(":")
        sname, sp = self.s.name("algebra name")
        src = self.lookup("algebras", sname, sp)
        self.s.expect("->")
        tname, tp = self.s.name("algebra name")
        tgt = self.lookup("algebras", tname, tp)
        images = self._images(src, tgt)
        imgs = {g: v for g, v in images}
        for g in src.generators:
            if g.name not in imgs and g.name not in tgt.index:
                raise self.s.error(f"no image for {g.name!r} and no generator of that name in {tname}",
                                   pos, "unknown")
        f = DgMorphism(src, tgt, imgs, name=name)
        rep = check_morphism(f)
        if not rep.ok:
            ff = rep.first_failure
            raise self.s.error(f"not a DG morphism at {ff.get('generator')}: {ff.get('message', ff)}",
                               pos, "morphism")
        self.m.morphisms[name] = f
        self.m.decls.append(MorphismDecl(name, sname, tname, [(g, str(v)) for g, v in images]))

    def _cover(self):
        name, pos = self.s.name("cover name")
        self._declare(name, pos)
        self.s.expect("of")
        bname, bp = self.s.name("algebra name")
        A = self.lookup("algebras", bname, bp)
        self.s.expect("{")
        self.s.expect("by")
        elems = []
        while True:
            text, ep = self.s.expr()
            v = self._parse_in(A, text, ep)
            if not v.is_zero() and (not v.is_homogeneous() or v.degree() != 0):
                raise self.s.error("cover elements must have degree 0", ep, "degree")
            elems.append(v)
            if self.s.peek(","):
                self.s.expect(",")
                continue
            break
        self.s.expect(";")
        self.s.expect("}")
        try:
            C = Cover(A, elems, name=name)
        except CoverError as exc:
            raise self.s.error(str(exc), pos, "cover")
        self.m.covers[name] = C
        self.m.decls.append(CoverDecl(name, bname, [str(v) for v in elems]))

    def _module(self):
        name, pos = self.s.name("module name")
        self._declare(name, pos)
        self.s.expect("over")
        aname, ap = self.s.name("algebra name")
        A = self.lookup("algebras", aname, ap)
        self.s.expect("{")
        self.s.expect("rank")
        rank, rp = self.s.integer()
        if rank < 0:
            raise self.s.error("rank must be non-negative", rp)
        self.s.expect(";")
        rels = []
        while self.s.peek("rel"):
            self.s.expect("rel")
            self.s.expect("(")
            row = []
            rpos = self.s.pos
            while True:
                text, ep = self.s.expr()
                v = self._parse_in(A, text, ep)
                if not v.is_zero() and (not v.is_homogeneous() or v.degree() != 0):
                    raise self.s.error("module relations must have degree 0 entries", ep, "degree")
                row.append(v)
                if self.s.peek(","):
                    self.s.expect(",")
                    continue
                break
            self.s.expect(")")
            self.s.expect(";")
            if len(row) != rank:
                raise self.s.error(f"relation has {len(row)} entries, rank is {rank}", rpos, "degree")
            rels.append(row)
        self.s.expect("}")
        R = h0_ring(A)
        M = ModulePresentation.cokernel(R, rank, [[element_to_poly(v) for v in row] for row in rels])
        self.m.modules[name] = M
        self.m.decls.append(ModuleDecl(name, aname, rank, [[str(v) for v in row] for row in rels]))

    def _gluing(self):
        name, pos = self.s.name("gluing name")
        self._declare(name, pos)
        self.s.expect("on")
        cname, cp = self.s.name("cover name")
        cover = self.lookup("covers", cname, cp)
        self.s.expect("{")
        charts, chart_decls, maps, map_decls = {}, {}, {}, []
        valid = set()
        for size in (1, 2, 3):
            valid.update(cover.multi_indices(size))
        while not self.s.peek("}"):
            word, wp = self.s.name("'chart' or 'map'")
            if word == "chart":
                I, ip = self.s.index()
                if I not in valid:
                    raise self.s.error(f"chart {''.join(map(str, I))} is not an overlap of the cover", ip,
                                       "unknown")
                if I in charts:
                    raise self.s.error(f"chart {''.join(map(str, I))} given twice", ip, "duplicate")
                gens, diffs = self._items()
                B = self._build(cover.chart(I), gens, diffs, f"{name}_{''.join(map(str, I))}", ip)
                charts[I] = B
                chart_decls[I] = ([(g, d) for g, d, _ in gens],
                                  [(g, str(B.differential_of(g))) for g, _, _, _ in diffs])
            elif word == "map":
                I, ip = self.s.index()
                self.s.expect("->")
                J, jp = self.s.index()
                if I not in valid or J not in valid or len(J) != len(I) + 1 or not set(I) < set(J):
                    raise self.s.error("maps go from an overlap to one with one more chart", ip, "unknown")
                if (I, J) in maps:
                    raise self.s.error("map given twice", ip, "duplicate")
                src = charts.get(I) or cover.chart(I)
                tgt = charts.get(J) or cover.chart(J)
                images = self._images(src, tgt)
                f = DgMorphism(src, tgt, {g: v for g, v in images})
                rep = check_morphism(f)
                if not rep.ok:
                    raise self.s.error(f"map {''.join(map(str, I))}->{''.join(map(str, J))} is not a DG "
                                       f"morphism at {rep.first_failure.get('generator')}", ip, "morphism")
                maps[(I, J)] = f
                map_decls.append((I, J, [(g, str(v)) for g, v in images]))
            else:
                raise self.s.error(f"expected 'chart' or 'map', got {word!r}", wp)
        self.s.expect("}")
        self.m.gluings[name] = GluingData(cover, charts, maps, name=name)
        self.m.decls.append(GluingDecl(name, cname, chart_decls, map_decls))


def parse(text: str) -> Manifest:
    return _Parser(text).parse()


def parse_file(path: str) -> Manifest:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError as exc:
        raise ManifestError(f"file is not UTF-8: {exc}", 1, 1, "encoding")
    return parse(text)


# -- printer --------------------------------------------------------------

def _items_text(gens, diffs, indent: str) -> List[str]:
    lines = []
    if gens:
        lines.append(f"{indent}gens " + ", ".join(f"{g}:{d}" for g, d in gens) + ";")
    for g, text in diffs:
        lines.append(f"{indent}d {g} = {text};")
    return lines


def _idx(I) -> str:
    return "".join(map(str, I))


def format_manifest(m: Manifest) -> str:
    """Canonical text; parsing it gives a structurally identical manifest."""
    out = []
    for d in m.decls:
        if isinstance(d, AlgebraDecl):
            head = f"algebra {d.name}" + (f" extends {d.extends}" if d.extends else "")
            body = _items_text(d.gens, d.diffs, "  ")
            out.append(head + " {" + ("\n" + "\n".join(body) + "\n}" if body else " }"))
        elif isinstance(d, MorphismDecl):
            body = [f"  {g} -> {t};" for g, t in d.images]
            out.append(f"morphism {d.name} : {d.source} -> {d.target} {{"
                       + ("\n" + "\n".join(body) + "\n}" if body else " }"))
        elif isinstance(d, CoverDecl):
            out.append(f"cover {d.name} of {d.base} {{ by " + ", ".join(d.elements) + "; }")
        elif isinstance(d, ModuleDecl):
            body = [f"  rank {d.rank};"] + [f"  rel ({', '.join(r)});" for r in d.rels]
            out.append(f"module {d.name} over {d.over} {{\n" + "\n".join(body) + "\n}")
        elif isinstance(d, GluingDecl):
            body = []
            for I in sorted(d.charts, key=lambda I: (len(I), I)):
                gens, diffs = d.charts[I]
                inner = _items_text(gens, diffs, "    ")
                body.append(f"  chart {_idx(I)} {{" + ("\n" + "\n".join(inner) + "\n  }" if inner else " }"))
            for I, J, images in d.maps:
                inner = [f"    {g} -> {t};" for g, t in images]
                body.append(f"  map {_idx(I)} -> {_idx(J)} {{" + ("\n" + "\n".join(inner) + "\n  }" if inner else " }"))
            out.append(f"gluing {d.name} on {d.cover} {{" + ("\n" + "\n".join(body) + "\n}" if body else " }"))
    return "\n\n".join(out) + ("\n" if out else "")
