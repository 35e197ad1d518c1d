"""Line-oriented workspace files.

A workspace is a sequence of blocks, each closed by ``end``::

    base G
      objects V E
      arrow s V -> E
      arrow t V -> E
    end

    presheaf edge G
      carrier V v0 v1
      carrier E e
      act s e -> v0
      act t e -> v1
    end

    morphism f edge -> loop
      map V v0 -> x
      map V v1 -> x
      map E e -> l
    end

    sub ends edge
      select V v0 v1
    end

    config
      seed 0
      budget 1000000
    end

``act m y -> x`` says that restricting ``y`` along ``m`` gives ``x``.
``compose g f -> h`` gives ``g . f`` for composable non-identity arrows;
identities are implicit and named ``id_<object>``.  ``#`` starts a comment.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Dict, List, Optional, Tuple

from .fincat import FinCategory, NOT_COMPOSABLE, build_category, curated_bases, validate_category
from .presheaf import (
    DEFAULT_BUDGET,
    Presheaf,
    PresheafMorphism,
    SubPresheaf,
    check_morphism,
    make_presheaf,
)


@dataclass(frozen=True)
class ParseError:
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.message}"


class WorkspaceError(ValueError):
    def __init__(self, errors: List[ParseError]):
        self.errors = list(errors)
        super().__init__("\n".join(map(str, self.errors)))


@dataclass(frozen=True)
class Config:
    seed: int = 0
    max_objects: int = 2
    max_morphisms: int = 6
    max_carrier: int = 3
    budget: int = DEFAULT_BUDGET


@dataclass(frozen=True)
class MorphismDecl:
    src: str
    dst: str
    morphism: PresheafMorphism


@dataclass(frozen=True)
class SubDecl:
    ambient: str
    sub: SubPresheaf


@dataclass
class Workspace:
    bases: Dict[str, FinCategory] = field(default_factory=dict)
    presheaves: Dict[str, Tuple[str, Presheaf]] = field(default_factory=dict)
    morphisms: Dict[str, MorphismDecl] = field(default_factory=dict)
    subs: Dict[str, SubDecl] = field(default_factory=dict)
    config: Config = field(default_factory=Config)

    def base(self, name: str) -> FinCategory:
        """A declared base, falling back to the built-in ``terminal``, ``arrow`` and ``graph``."""
        if name in self.bases:
            return self.bases[name]
        builtin = curated_bases()
        if name in builtin:
            return builtin[name]
        raise KeyError(f"unknown base {name!r}")

    def presheaf(self, name: str) -> Presheaf:
        if name not in self.presheaves:
            raise KeyError(f"unknown presheaf {name!r}")
        return self.presheaves[name][1]

    def morphism(self, name: str) -> PresheafMorphism:
        if name not in self.morphisms:
            raise KeyError(f"unknown morphism {name!r}")
        return self.morphisms[name].morphism


# -- parsing ---------------------------------------------------------------

@dataclass
class _Tok:
    text: str
    line: int
    col: int


@dataclass
class _Block:
    head: List[_Tok]
    body: List[List[_Tok]]


def _tokenize(text: str) -> List[List[_Tok]]:
    lines = []
    for n, raw in enumerate(text.splitlines(), start=1):
        raw = raw.split("#", 1)[0]
        toks, col = [], 0
        while col < len(raw):
            if raw[col].isspace():
                col += 1
                continue
            start = col
            while col < len(raw) and not raw[col].isspace():
                col += 1
            toks.append(_Tok(raw[start:col], n, start + 1))
        if toks:
            lines.append(toks)
    return lines


BLOCK_KINDS = ("base", "presheaf", "morphism", "sub", "config")


class _Parser:
    def __init__(self):
        self.errors: List[ParseError] = []
        self.ws = Workspace()

    def err(self, tok: _Tok, msg: str) -> None:
        self.errors.append(ParseError(tok.line, tok.col, msg))

    def blocks(self, lines: List[List[_Tok]]) -> List[_Block]:
        out, cur = [], None
        for toks in lines:
            word = toks[0].text
            if cur is None:
                if word not in BLOCK_KINDS:
                    self.err(toks[0], f"expected one of {', '.join(BLOCK_KINDS)}, got {word!r}")
                    continue
                cur = _Block(toks, [])
            elif word == "end":
                if len(toks) > 1:
                    self.err(toks[1], "unexpected text after 'end'")
                out.append(cur)
                cur = None
            elif word in BLOCK_KINDS:
                self.err(cur.head[0], f"{cur.head[0].text} block is not closed")
                cur = _Block(toks, [])
            else:
                cur.body.append(toks)
        if cur is not None:
            self.err(cur.head[0], f"{cur.head[0].text} block is not closed")
        return out

    def expect(self, toks: List[_Tok], shape: str) -> Optional[List[_Tok]]:
        """Match ``toks`` against a space-separated shape; ``_`` is any token, ``*`` the rest."""
        pats = shape.split()
        if pats and pats[-1] == "*":
            if len(toks) < len(pats) - 1:
                self.err(toks[-1], f"expected '{shape}'")
                return None
            fixed = pats[:-1]
        else:
            if len(toks) != len(pats):
                self.err(toks[min(len(toks), len(pats)) - 1] if toks else toks[0], f"expected '{shape}'")
                return None
            fixed = pats
        for t, p in zip(toks, fixed):
            if p != "_" and t.text != p:
                self.err(t, f"expected {p!r}, got {t.text!r}")
                return None
        return toks

    def fresh(self, tok: _Tok, table: Dict) -> bool:
        if tok.text in table:
            self.err(tok, f"duplicate name {tok.text!r}")
            return False
        return True

    # ---- blocks

    def base(self, b: _Block) -> None:
        head = self.expect(b.head, "base _")
        if head is None or not self.fresh(head[1], self.ws.bases):
            return
        objects: List[str] = []
        arrows: List[Tuple[str, str, str]] = []
        comps: Dict[Tuple[str, str], str] = {}
        comp_pos: Dict[Tuple[str, str], _Tok] = {}
        known = set()
        start = len(self.errors)
        for toks in b.body:
            kw = toks[0].text
            if kw == "objects":
                for t in toks[1:]:
                    if t.text in objects:
                        self.err(t, f"duplicate object {t.text!r}")
                    objects.append(t.text)
                    known.add(f"id_{t.text}")
            elif kw == "arrow":
                m = self.expect(toks, "arrow _ _ -> _")
                if m is None:
                    continue
                for t in (m[2], m[4]):
                    if t.text not in objects:
                        self.err(t, f"unknown object {t.text!r}")
                if m[1].text in known:
                    self.err(m[1], f"duplicate arrow {m[1].text!r}")
                known.add(m[1].text)
                arrows.append((m[1].text, m[2].text, m[4].text))
            elif kw == "compose":
                m = self.expect(toks, "compose _ _ -> _")
                if m is None:
                    continue
                for t in (m[1], m[2], m[4]):
                    if t.text not in known:
                        self.err(t, f"unknown arrow {t.text!r}")
                comps[(m[1].text, m[2].text)] = m[4].text
                comp_pos[(m[1].text, m[2].text)] = m[0]
            else:
                self.err(toks[0], f"unknown base entry {kw!r}")
        if len(self.errors) > start:
            return
        try:
            cat = build_category(objects, arrows, comps)
        except ValueError as e:
            self.err(head[0], str(e))
            return
        for g, f in comps:
            gi, fi = cat.morphism_id(g), cat.morphism_id(f)
            if cat.dst[fi] != cat.src[gi]:
                self.err(comp_pos[(g, f)], f"{g} . {f} is not composable")
        report = validate_category(cat)
        for v in report.violations:
            pos = head[0]
            for pair in zip(v.morphisms, v.morphisms[1:]):
                if pair in comp_pos:
                    pos = comp_pos[pair]
                    break
            self.err(pos, f"{v.axiom} fails for ({', '.join(v.morphisms)}): {v.message}")
        if len(self.errors) == start:
            self.ws.bases[head[1].text] = cat

    def _base_ref(self, tok: _Tok) -> Optional[FinCategory]:
        try:
            return self.ws.base(tok.text)
        except KeyError:
            self.err(tok, f"unknown base {tok.text!r}")
            return None

    def _presheaf_ref(self, tok: _Tok) -> Optional[Presheaf]:
        if tok.text not in self.ws.presheaves:
            self.err(tok, f"unknown presheaf {tok.text!r}")
            return None
        return self.ws.presheaves[tok.text][1]

    def presheaf(self, b: _Block) -> None:
        head = self.expect(b.head, "presheaf _ _")
        if head is None or not self.fresh(head[1], self.ws.presheaves):
            return
        base = self._base_ref(head[2])
        if base is None:
            return
        start = len(self.errors)
        carrier: Dict[str, List[str]] = {}
        action: Dict[str, Dict[str, str]] = {}
        arrow_names = {base.morphisms[m] for m in range(base.n_morphisms) if not base.is_identity(m)}
        pending = []
        for toks in b.body:
            kw = toks[0].text
            if kw == "carrier":
                m = self.expect(toks, "carrier _ *")
                if m is None:
                    continue
                if m[1].text not in base.objects:
                    self.err(m[1], f"unknown object {m[1].text!r}")
                    continue
                labels = carrier.setdefault(m[1].text, [])
                for t in m[2:]:
                    if t.text in labels:
                        self.err(t, f"duplicate element {t.text!r}")
                    labels.append(t.text)
            elif kw == "act":
                m = self.expect(toks, "act _ _ -> _")
                if m is None:
                    continue
                if m[1].text not in arrow_names:
                    self.err(m[1], f"unknown arrow {m[1].text!r}")
                    continue
                pending.append(m)
            else:
                self.err(toks[0], f"unknown presheaf entry {kw!r}")
        for m in pending:
            mid = base.morphism_id(m[1].text)
            src_obj, dst_obj = base.objects[base.src[mid]], base.objects[base.dst[mid]]
            if m[2].text not in carrier.get(dst_obj, ()):
                self.err(m[2], f"{m[2].text!r} is not an element at {dst_obj}")
            elif m[4].text not in carrier.get(src_obj, ()):
                self.err(m[4], f"{m[4].text!r} is not an element at {src_obj}")
            elif m[2].text in action.get(m[1].text, {}):
                self.err(m[2], f"action of {m[1].text} on {m[2].text!r} given twice")
            else:
                action.setdefault(m[1].text, {})[m[2].text] = m[4].text
        if len(self.errors) > start:
            return
        for name in sorted(arrow_names, key=base.morphism_id):
            mid = base.morphism_id(name)
            dst_obj = base.objects[base.dst[mid]]
            missing = [x for x in carrier.get(dst_obj, ()) if x not in action.get(name, {})]
            if missing:
                self.err(head[0], f"action of {name} on {missing[0]!r} is missing")
        if len(self.errors) > start:
            return
        try:
            p = make_presheaf(base, carrier, {name: action.get(name, {}) for name in arrow_names})
        except ValueError as e:
            self.err(head[0], f"not a presheaf: {e}")
            return
        self.ws.presheaves[head[1].text] = (head[2].text, p)

    def morphism(self, b: _Block) -> None:
        head = self.expect(b.head, "morphism _ _ -> _")
        if head is None or not self.fresh(head[1], self.ws.morphisms):
            return
        src, dst = self._presheaf_ref(head[2]), self._presheaf_ref(head[4])
        if src is None or dst is None:
            return
        if src.base != dst.base:
            self.err(head[4], "source and target live over different bases")
            return
        base = src.base
        start = len(self.errors)
        comps = [[-1] * src.size(c) for c in range(base.n_objects)]
        for toks in b.body:
            m = self.expect(toks, "map _ _ -> _")
            if m is None:
                continue
            if m[1].text not in base.objects:
                self.err(m[1], f"unknown object {m[1].text!r}")
                continue
            c = base.object_id(m[1].text)
            if m[2].text not in src.carrier[c]:
                self.err(m[2], f"{m[2].text!r} is not an element of {head[2].text} at {m[1].text}")
            elif m[4].text not in dst.carrier[c]:
                self.err(m[4], f"{m[4].text!r} is not an element of {head[4].text} at {m[1].text}")
            else:
                x = src.carrier[c].index(m[2].text)
                if comps[c][x] != -1:
                    self.err(m[2], f"image of {m[2].text!r} given twice")
                comps[c][x] = dst.carrier[c].index(m[4].text)
        if len(self.errors) > start:
            return
        for c in range(base.n_objects):
            if -1 in comps[c]:
                x = src.carrier[c][comps[c].index(-1)]
                self.err(head[0], f"image of {x!r} at {base.objects[c]} is missing")
                return
        f = PresheafMorphism(src, dst, tuple(tuple(r) for r in comps))
        problems = check_morphism(f)
        if problems:
            self.err(head[0], f"not natural: {problems[0]}")
            return
        self.ws.morphisms[head[1].text] = MorphismDecl(head[2].text, head[4].text, f)

    def sub(self, b: _Block) -> None:
        head = self.expect(b.head, "sub _ _")
        if head is None or not self.fresh(head[1], self.ws.subs):
            return
        amb = self._presheaf_ref(head[2])
        if amb is None:
            return
        base = amb.base
        start = len(self.errors)
        sel = [set() for _ in range(base.n_objects)]
        for toks in b.body:
            m = self.expect(toks, "select _ *")
            if m is None:
                continue
            if m[1].text not in base.objects:
                self.err(m[1], f"unknown object {m[1].text!r}")
                continue
            c = base.object_id(m[1].text)
            for t in m[2:]:
                if t.text not in amb.carrier[c]:
                    self.err(t, f"{t.text!r} is not an element of {head[2].text} at {m[1].text}")
                else:
                    sel[c].add(amb.carrier[c].index(t.text))
        if len(self.errors) > start:
            return
        try:
            s = SubPresheaf(amb, tuple(frozenset(x) for x in sel))
        except ValueError as e:
            self.err(head[0], f"not a subpresheaf: {e}")
            return
        self.ws.subs[head[1].text] = SubDecl(head[2].text, s)

    def config(self, b: _Block) -> None:
        self.expect(b.head, "config")
        keys = {f.name for f in fields(Config)}
        values = {}
        for toks in b.body:
            m = self.expect(toks, "_ _")
            if m is None:
                continue
            if m[0].text not in keys:
                self.err(m[0], f"unknown config key {m[0].text!r}")
                continue
            try:
                v = int(m[1].text)
            except ValueError:
                self.err(m[1], f"expected an integer, got {m[1].text!r}")
                continue
            if v < 0:
                self.err(m[1], "config values must be non-negative")
                continue
            values[m[0].text] = v
        self.ws.config = replace(self.ws.config, **values)


def parse_workspace(text: str) -> Workspace:
    """Parse and validate a workspace; raises :class:`WorkspaceError` listing every problem found."""
    p = _Parser()
    for block in p.blocks(_tokenize(text)):
        getattr(p, block.head[0].text)(block)
    if p.errors:
        raise WorkspaceError(sorted(p.errors, key=lambda e: (e.line, e.col)))
    return p.ws


# -- printing --------------------------------------------------------------

def _base_lines(name: str, cat: FinCategory) -> List[str]:
    out = [f"base {name}", "  objects " + " ".join(cat.objects)]
    arrows = [m for m in range(cat.n_morphisms) if not cat.is_identity(m)]
    for m in arrows:
        out.append(f"  arrow {cat.morphisms[m]} {cat.objects[cat.src[m]]} -> {cat.objects[cat.dst[m]]}")
    for g in arrows:
        for f in arrows:
            h = cat.table[g][f]
            if h != NOT_COMPOSABLE:
                out.append(f"  compose {cat.morphisms[g]} {cat.morphisms[f]} -> {cat.morphisms[h]}")
    return out + ["end"]


def print_workspace(ws: Workspace) -> str:
    blocks: List[List[str]] = []
    for name, cat in ws.bases.items():
        blocks.append(_base_lines(name, cat))
    for name, (bname, p) in ws.presheaves.items():
        base = p.base
        lines = [f"presheaf {name} {bname}"]
        for c, obj in enumerate(base.objects):
            if p.size(c):
                lines.append(f"  carrier {obj} " + " ".join(map(str, p.carrier[c])))
        for m in range(base.n_morphisms):
            if base.is_identity(m):
                continue
            c, c2 = base.src[m], base.dst[m]
            for y in range(p.size(c2)):
                src = p.carrier[c][p.action[m][y]]
                lines.append(f"  act {base.morphisms[m]} {p.carrier[c2][y]} -> {src}")
        blocks.append(lines + ["end"])
    for name, d in ws.morphisms.items():
        f = d.morphism
        lines = [f"morphism {name} {d.src} -> {d.dst}"]
        for c, obj in enumerate(f.src.base.objects):
            for x, y in enumerate(f.components[c]):
                lines.append(f"  map {obj} {f.src.carrier[c][x]} -> {f.dst.carrier[c][y]}")
        blocks.append(lines + ["end"])
    for name, d in ws.subs.items():
        s = d.sub
        lines = [f"sub {name} {d.ambient}"]
        for c, obj in enumerate(s.ambient.base.objects):
            if s.selected[c]:
                lines.append(f"  select {obj} " + " ".join(str(s.ambient.carrier[c][x])
                                                            for x in sorted(s.selected[c])))
        blocks.append(lines + ["end"])
    if ws.config != Config():
        lines = ["config"] + [f"  {f.name} {getattr(ws.config, f.name)}" for f in fields(Config)]
        blocks.append(lines + ["end"])
    return "\n\n".join("\n".join(b) for b in blocks) + ("\n" if blocks else "")
