"""Finite categories given by explicit composition tables.

Objects and morphisms are dense integer ids.  ``table[g][f]`` holds the id of
``g . f`` (first ``f``, then ``g``) or ``-1`` when the pair is not composable.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

NOT_COMPOSABLE = -1


@dataclass(frozen=True)
class FinCategory:
    objects: Tuple[str, ...]
    morphisms: Tuple[str, ...]
    src: Tuple[int, ...]
    dst: Tuple[int, ...]
    identity: Tuple[int, ...]
    table: Tuple[Tuple[int, ...], ...]

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.morphisms)

    def compose(self, g: int, f: int) -> int:
        """Return ``g . f``; raises if ``dst(f) != src(g)``."""
        h = self.table[g][f]
        if h == NOT_COMPOSABLE:
            raise ValueError(
                f"morphisms {self.morphisms[g]} and {self.morphisms[f]} are not composable")
        return h

    def hom(self, a: int, b: int) -> List[int]:
        return [m for m in range(self.n_morphisms)
                if self.src[m] == a and self.dst[m] == b]

    def into(self, c: int) -> List[int]:
        """All morphisms with codomain ``c``, in id order."""
        return [m for m in range(self.n_morphisms) if self.dst[m] == c]

    def is_identity(self, m: int) -> bool:
        return self.identity[self.src[m]] == m

    def object_id(self, name: str) -> int:
        return self.objects.index(name)

    def morphism_id(self, name: str) -> int:
        return self.morphisms.index(name)

    def __repr__(self) -> str:
        return f"FinCategory(objects={list(self.objects)}, morphisms={len(self.morphisms)})"


def build_category(
    objects: Sequence[str],
    arrows: Sequence[Tuple[str, str, str]] = (),
    compositions: Mapping[Tuple[str, str], str] | None = None,
) -> FinCategory:
    """Build a category from named non-identity arrows and a partial table.

    Identities are added automatically as ``id_<object>``.  ``compositions``
    maps ``(g, f)`` to the name of ``g . f``; every composable pair of
    non-identity arrows must be listed.  The result is not validated; call
    :func:`validate_category`.
    """
    compositions = dict(compositions or {})
    names = [f"id_{o}" for o in objects] + [a[0] for a in arrows]
    if len(set(names)) != len(names):
        raise ValueError("duplicate morphism names")
    obj_id = {o: i for i, o in enumerate(objects)}
    src = [i for i in range(len(objects))] + [obj_id[a[1]] for a in arrows]
    dst = [i for i in range(len(objects))] + [obj_id[a[2]] for a in arrows]
    identity = list(range(len(objects)))
    mor_id = {n: i for i, n in enumerate(names)}
    n = len(names)
    table = [[NOT_COMPOSABLE] * n for _ in range(n)]
    for g in range(n):
        for f in range(n):
            if dst[f] != src[g]:
                continue
            if g < len(objects):
                table[g][f] = f
            elif f < len(objects):
                table[g][f] = g
            else:
                key = (names[g], names[f])
                if key not in compositions:
                    raise ValueError(f"missing composition {names[g]} . {names[f]}")
                table[g][f] = mor_id[compositions[key]]
    return FinCategory(tuple(objects), tuple(names), tuple(src), tuple(dst),
                       tuple(identity), tuple(tuple(r) for r in table))


# -- curated bases ---------------------------------------------------------

def terminal_category() -> FinCategory:
    """One object, one morphism: presheaves on it are finite sets."""
    return build_category(["*"])


def arrow_category() -> FinCategory:
    """The walking arrow ``u: a -> b``."""
    return build_category(["a", "b"], [("u", "a", "b")])


def graph_category() -> FinCategory:
    """Two parallel arrows ``s, t: V -> E``; presheaves are directed multigraphs."""
    return build_category(["V", "E"], [("s", "V", "E"), ("t", "V", "E")])


def curated_bases() -> Dict[str, FinCategory]:
    return {"terminal": terminal_category(), "arrow": arrow_category(),
            "graph": graph_category()}


# -- validation ------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    axiom: str
    morphisms: Tuple[str, ...]
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_category(c: FinCategory) -> ValidationReport:
    out: List[Violation] = []
    n, k = c.n_morphisms, c.n_objects
    names = c.morphisms
    shape_ok = (len(c.src) == n and len(c.dst) == n and len(c.identity) == k
                and len(c.table) == n and all(len(r) == n for r in c.table))
    if not shape_ok:
        return ValidationReport((Violation("shape", (), "table dimensions do not match"),))
    for o, i in enumerate(c.identity):
        if not (0 <= i < n) or c.src[i] != o or c.dst[i] != o:
            out.append(Violation("identity", (names[i] if 0 <= i < n else str(i),),
                                 f"identity of {c.objects[o]} is not an endomorphism of it"))
    if out:
        return ValidationReport(tuple(out))
    for g in range(n):
        for f in range(n):
            h = c.table[g][f]
            composable = c.dst[f] == c.src[g]
            if composable != (h != NOT_COMPOSABLE):
                out.append(Violation("definedness", (names[g], names[f]),
                                     f"{names[g]} . {names[f]} defined={h != NOT_COMPOSABLE}"
                                     f" but composable={composable}"))
            elif composable and not (0 <= h < n and c.src[h] == c.src[f]
                                     and c.dst[h] == c.dst[g]):
                out.append(Violation("typing", (names[g], names[f]),
                                     f"{names[g]} . {names[f]} has the wrong source or target"))
    if out:
        return ValidationReport(tuple(out))
    for f in range(n):
        if c.table[c.identity[c.dst[f]]][f] != f or c.table[f][c.identity[c.src[f]]] != f:
            out.append(Violation("identity-law", (names[f],),
                                 f"identity law fails for {names[f]}"))
    for h in range(n):
        for g in range(n):
            hg = c.table[h][g]
            if hg == NOT_COMPOSABLE:
                continue
            for f in range(n):
                gf = c.table[g][f]
                if gf == NOT_COMPOSABLE:
                    continue
                if c.table[h][gf] != c.table[hg][f]:
                    out.append(Violation("associativity", (names[h], names[g], names[f]),
                                         f"({names[h]} . {names[g]}) . {names[f]} != "
                                         f"{names[h]} . ({names[g]} . {names[f]})"))
    return ValidationReport(tuple(out))


# -- functors --------------------------------------------------------------

@dataclass(frozen=True)
class FinFunctor:
    source: FinCategory
    target: FinCategory
    on_objects: Tuple[int, ...]
    on_morphisms: Tuple[int, ...]

    def validate(self) -> ValidationReport:
        s, t = self.source, self.target
        out: List[Violation] = []
        for o in range(s.n_objects):
            if self.on_morphisms[s.identity[o]] != t.identity[self.on_objects[o]]:
                out.append(Violation("functor-identity", (s.morphisms[s.identity[o]],),
                                     f"identity of {s.objects[o]} not preserved"))
        for m in range(s.n_morphisms):
            fm = self.on_morphisms[m]
            if t.src[fm] != self.on_objects[s.src[m]] or t.dst[fm] != self.on_objects[s.dst[m]]:
                out.append(Violation("functor-typing", (s.morphisms[m],),
                                     f"{s.morphisms[m]} sent to an arrow with wrong ends"))
        for g in range(s.n_morphisms):
            for f in range(s.n_morphisms):
                gf = s.table[g][f]
                if gf == NOT_COMPOSABLE:
                    continue
                if t.table[self.on_morphisms[g]][self.on_morphisms[f]] != self.on_morphisms[gf]:
                    out.append(Violation("functor-composition", (s.morphisms[g], s.morphisms[f]),
                                         "composition not preserved"))
        return ValidationReport(tuple(out))


def category_of_elements(p) -> Tuple[FinCategory, FinFunctor]:
    """The category of elements of a presheaf together with its projection.

    Objects are pairs ``(c, x)`` with ``x`` an element index of ``p`` at ``c``;
    a morphism ``(c, x) -> (c', x')`` is a base arrow ``phi: c -> c'`` with
    ``x = x' . phi``.
    """
    base: FinCategory = p.base
    elems = [(c, x) for c in range(base.n_objects) for x in range(p.size(c))]
    eid = {e: i for i, e in enumerate(elems)}
    arrows: List[Tuple[int, int, int]] = []  # (base morphism, src elem, dst elem)
    for m in range(base.n_morphisms):
        c, c2 = base.src[m], base.dst[m]
        act = p.action[m]
        for x2 in range(p.size(c2)):
            arrows.append((m, eid[(c, act[x2])], eid[(c2, x2)]))
    arrows.sort(key=lambda a: (a[1], a[2], a[0]))
    aid = {a: i for i, a in enumerate(arrows)}
    n = len(arrows)
    identity = [aid[(base.identity[c], eid[(c, x)], eid[(c, x)])] for (c, x) in elems]
    table = [[NOT_COMPOSABLE] * n for _ in range(n)]
    for gi, (g, gs, gd) in enumerate(arrows):
        for fi, (f, fs, fd) in enumerate(arrows):
            if fd == gs:
                table[gi][fi] = aid[(base.table[g][f], fs, gd)]
    names = tuple(f"{base.morphisms[m]}@{elems[s][1]}>{elems[d][1]}" for (m, s, d) in arrows)
    obj_names = tuple(f"{base.objects[c]}:{p.carrier[c][x]!r}" for (c, x) in elems)
    cat = FinCategory(obj_names, names, tuple(a[1] for a in arrows), tuple(a[2] for a in arrows),
                      tuple(identity), tuple(tuple(r) for r in table))
    proj = FinFunctor(cat, base, tuple(c for (c, _) in elems), tuple(a[0] for a in arrows))
    return cat, proj


def iter_composable(c: FinCategory) -> Iterable[Tuple[int, int]]:
    for g in range(c.n_morphisms):
        for f in range(c.n_morphisms):
            if c.table[g][f] != NOT_COMPOSABLE:
                yield g, f
