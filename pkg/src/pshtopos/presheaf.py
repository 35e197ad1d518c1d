"""Presheaves on a finite category and the topos structure on them.

Elements are addressed by index: ``P.carrier[c][x]`` is only a label.  For a
base arrow ``m: c -> c2`` the table ``P.action[m]`` sends an element index at
``c2`` to its restriction at ``c``.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Hashable, List, Mapping, Optional, Sequence, Tuple

from .fincat import NOT_COMPOSABLE, FinCategory

DEFAULT_BUDGET = 10**6

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its candidate budget."""


class NotACone(ValueError):
    """A pair of maps handed to a pullback mediator does not commute."""


class NotIso(ValueError):
    pass


@dataclass(frozen=True)
class Presheaf:
    base: FinCategory
    carrier: Tuple[Tuple[Hashable, ...], ...]
    action: Tuple[Tuple[int, ...], ...]

    def size(self, c: int) -> int:
        return len(self.carrier[c])

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(s) for s in self.carrier)

    @property
    def total_size(self) -> int:
        return sum(len(s) for s in self.carrier)

    def restrict(self, x: int, m: int) -> int:
        return self.action[m][x]

    def __repr__(self) -> str:
        sizes = ", ".join(f"{o}:{len(s)}" for o, s in zip(self.base.objects, self.carrier))
        return f"Presheaf({sizes})"


@dataclass(frozen=True)
class PresheafMorphism:
    src: Presheaf
    dst: Presheaf
    components: Tuple[Tuple[int, ...], ...]

    def __call__(self, c: int, x: int) -> int:
        return self.components[c][x]

    def __repr__(self) -> str:
        return f"PresheafMorphism({self.src!r} -> {self.dst!r}, {self.components})"


@dataclass(frozen=True)
class SubPresheaf:
    """A restriction-closed family of element subsets of ``ambient``."""

    ambient: Presheaf
    selected: Tuple[FrozenSet, ...]

    def __post_init__(self):
        a = self.ambient
        if len(self.selected) != a.base.n_objects:
            raise ValueError("one subset per base object expected")
        for m in range(a.base.n_morphisms):
            c = a.base.src[m]
            act = a.action[m]
            for x in self.selected[a.base.dst[m]]:
                if act[x] not in self.selected[c]:
                    raise ValueError(
                        f"not restriction-closed: element {a.carrier[a.base.dst[m]][x]!r} "
                        f"restricts along {a.base.morphisms[m]} outside the subset")

    def __contains__(self, item: Tuple[int, int]) -> bool:
        c, x = item
        return x in self.selected[c]

    def __repr__(self) -> str:
        return f"SubPresheaf({[sorted(s) for s in self.selected]})"



@dataclass(frozen=True)
class SliceObject:
    total: Presheaf
    proj: PresheafMorphism

    @property
    def over(self) -> Presheaf:
        return self.proj.dst


# -- construction and validation ------------------------------------------

def make_presheaf(base: FinCategory, carrier: Mapping[str, Sequence[Hashable]],
                  action: Mapping[str, Mapping[Hashable, Hashable]]) -> Presheaf:
    """Build a presheaf from labelled carriers and actions of non-identity arrows.

    ``action[m][x2] = x`` means ``x2 . m = x`` for ``m: c -> c2``.  Raises
    ``ValueError`` if the result is not functorial.
    """
    car = tuple(tuple(carrier.get(o, ())) for o in base.objects)
    idx = [{lab: i for i, lab in enumerate(s)} for s in car]
    acts = []
    for m in range(base.n_morphisms):
        c, c2 = base.src[m], base.dst[m]
        if base.is_identity(m):
            acts.append(tuple(range(len(car[c]))))
            continue
        table = action.get(base.morphisms[m])
        if table is None:
            raise ValueError(f"missing action for {base.morphisms[m]}")
        acts.append(tuple(idx[c][table[lab]] for lab in car[c2]))
    p = Presheaf(base, car, tuple(acts))
    problems = check_presheaf(p)
    if problems:
        raise ValueError("; ".join(problems))
    return p


def check_presheaf(p: Presheaf) -> List[str]:
    base = p.base
    out = []
    for m in range(base.n_morphisms):
        act = p.action[m]
        c, c2 = base.src[m], base.dst[m]
        if len(act) != p.size(c2) or any(not 0 <= v < p.size(c) for v in act):
            out.append(f"action of {base.morphisms[m]} is not a function "
                       f"{base.objects[c2]} -> {base.objects[c]}")
    if out:
        return out
    for c in range(base.n_objects):
        if p.action[base.identity[c]] != tuple(range(p.size(c))):
            out.append(f"identity of {base.objects[c]} does not act trivially")
    for g in range(base.n_morphisms):
        for f in range(base.n_morphisms):
            gf = base.table[g][f]
            if gf == NOT_COMPOSABLE:
                continue
            ag, af, agf = p.action[g], p.action[f], p.action[gf]
            if any(af[ag[x]] != agf[x] for x in range(p.size(base.dst[g]))):
                out.append(f"action not contravariant on {base.morphisms[g]} . {base.morphisms[f]}")
    return out


def check_morphism(f: PresheafMorphism) -> List[str]:
    F, G = f.src, f.dst
    if F.base != G.base:
        return ["source and target live over different bases"]
    base = F.base
    out = []
    for c in range(base.n_objects):
        comp = f.components[c]
        if len(comp) != F.size(c) or any(not 0 <= v < G.size(c) for v in comp):
            out.append(f"component at {base.objects[c]} is not a function")
    if out:
        return out
    for m in range(base.n_morphisms):
        c, c2 = base.src[m], base.dst[m]
        fa, ga = F.action[m], G.action[m]
        for x in range(F.size(c2)):
            if f.components[c][fa[x]] != ga[f.components[c2][x]]:
                out.append(f"naturality fails along {base.morphisms[m]} at {F.carrier[c2][x]!r}")
                break
    return out


def is_natural(f: PresheafMorphism) -> bool:
    return not check_morphism(f)


# -- basic morphisms -------------------------------------------------------

def identity(p: Presheaf) -> PresheafMorphism:
    return PresheafMorphism(p, p, tuple(tuple(range(p.size(c))) for c in range(p.base.n_objects)))


def compose(g: PresheafMorphism, f: PresheafMorphism) -> PresheafMorphism:
    """``g . f``."""
    if not (f.dst is g.src or f.dst == g.src):
        raise ValueError("cannot compose: codomain of f differs from domain of g")
    comps = tuple(tuple(gc[v] for v in fc) for gc, fc in zip(g.components, f.components))
    return PresheafMorphism(f.src, g.dst, comps)


def same_morphism(f: PresheafMorphism, g: PresheafMorphism) -> bool:
    return f.components == g.components and f.src == g.src and f.dst == g.dst


def terminal(base: FinCategory) -> Presheaf:
    return Presheaf(base, tuple(("*",) for _ in base.objects),
                    tuple((0,) for _ in base.morphisms))


def bang(p: Presheaf) -> PresheafMorphism:
    """The unique morphism to the terminal presheaf."""
    return PresheafMorphism(p, terminal(p.base), tuple((0,) * p.size(c) for c in range(p.base.n_objects)))


def representable(base: FinCategory, c: int) -> Presheaf:
    """The Yoneda presheaf ``hom(-, c)``; elements are morphism ids."""
    homs = [tuple(m for m in base.into(c) if base.src[m] == d) for d in range(base.n_objects)]
    pos = [{m: i for i, m in enumerate(h)} for h in homs]
    acts = []
    for psi in range(base.n_morphisms):
        d, d2 = base.src[psi], base.dst[psi]
        acts.append(tuple(pos[d][base.table[phi][psi]] for phi in homs[d2]))
    carrier = tuple(tuple(base.morphisms[m] for m in h) for h in homs)
    return Presheaf(base, carrier, tuple(acts))


# -- pullbacks -------------------------------------------------------------

@dataclass(frozen=True)
class Pullback:
    """``obj`` with projections ``p1`` to ``f.src`` and ``p2`` to ``g.src``."""

    f: PresheafMorphism
    g: PresheafMorphism
    obj: Presheaf
    p1: PresheafMorphism
    p2: PresheafMorphism
    index: Tuple[Dict[Tuple[int, int], int], ...]

    def mediate(self, u: PresheafMorphism, v: PresheafMorphism) -> PresheafMorphism:
        """The unique ``w`` with ``p1 . w = u`` and ``p2 . w = v``."""
        if not (u.src == v.src and u.dst == self.f.src and v.dst == self.g.src):
            raise NotACone("mediator inputs have mismatched ends")
        comps = []
        for c in range(self.obj.base.n_objects):
            ix = self.index[c]
            row = []
            for w, (x, y) in enumerate(zip(u.components[c], v.components[c])):
                k = ix.get((x, y))
                if k is None:
                    raise NotACone(f"u and v disagree over the cospan at "
                                   f"{self.obj.base.objects[c]}, element {w}")
                row.append(k)
            comps.append(tuple(row))
        return PresheafMorphism(u.src, self.obj, tuple(comps))


def pullback(f: PresheafMorphism, g: PresheafMorphism) -> Pullback:
    if f.dst != g.dst:
        raise ValueError("pullback needs a cospan")
    X, Y = f.src, g.src
    base = X.base
    carrier, index = [], []
    for c in range(base.n_objects):
        fc, gc = f.components[c], g.components[c]
        by_z: Dict[int, List[int]] = {}
        for y in range(Y.size(c)):
            by_z.setdefault(gc[y], []).append(y)
        pairs = [(x, y) for x in range(X.size(c)) for y in by_z.get(fc[x], ())]
        carrier.append(tuple(pairs))
        index.append({p: i for i, p in enumerate(pairs)})
    acts = []
    for m in range(base.n_morphisms):
        c, c2 = base.src[m], base.dst[m]
        ax, ay, ix = X.action[m], Y.action[m], index[c]
        acts.append(tuple(ix[(ax[x], ay[y])] for (x, y) in carrier[c2]))
    obj = Presheaf(base, tuple(carrier), tuple(acts))
    p1 = PresheafMorphism(obj, X, tuple(tuple(x for x, _ in carrier[c]) for c in range(base.n_objects)))
    p2 = PresheafMorphism(obj, Y, tuple(tuple(y for _, y in carrier[c]) for c in range(base.n_objects)))
    return Pullback(f, g, obj, p1, p2, tuple(index))


def product(X: Presheaf, Y: Presheaf) -> Pullback:
    return pullback(bang(X), bang(Y))


def pair(pb: Pullback, u: PresheafMorphism, v: PresheafMorphism) -> PresheafMorphism:
    return pb.mediate(u, v)


# -- hom-set enumeration ---------------------------------------------------

def _natural_families(base: FinCategory, src_sizes: Sequence[int], src_action,
                      dst_sizes: Sequence[int], dst_action, allowed=None,
                      budget: int = DEFAULT_BUDGET) -> List[Tuple[Tuple[int, ...], ...]]:
    """All natural families of component functions, in lexicographic order.

    Backtracks over the source elements; choosing a value for ``(c2, x)`` forces
    the value at every restriction ``x . phi``.  ``allowed[c][x]``, when given,
    restricts the admissible values of each element.
    """
    n_obj = base.n_objects
    into = [[(base.src[phi], phi) for phi in base.into(c)] for c in range(n_obj)]
    # objects with many arrows in first: their choices fix the most restrictions
    by_reach = sorted(range(n_obj), key=lambda c: -len(into[c]))
    order = [(c, x) for c in by_reach for x in range(src_sizes[c])]
    if any(src_sizes[c] and not dst_sizes[c] for c in range(n_obj)):
        return []
    assign = [[-1] * src_sizes[c] for c in range(n_obj)]
    ok_sets = None
    if allowed is not None:
        ok_sets = [[set(a) for a in allowed[c]] for c in range(n_obj)]
        if any(not s for row in ok_sets for s in row):
            return []
    results: List[Tuple[Tuple[int, ...], ...]] = []
    counter = [0]
    total = len(order)

    def rec(i: int) -> None:
        while i < total and assign[order[i][0]][order[i][1]] != -1:
            i += 1
        if i == total:
            results.append(tuple(tuple(row) for row in assign))
            return
        c2, x = order[i]
        if allowed is not None:
            candidates = allowed[c2][x]
        else:
            candidates = range(dst_sizes[c2])
        for y in candidates:
            counter[0] += 1
            if counter[0] > budget:
                raise BudgetExceeded(f"hom-set enumeration exceeded budget {budget}")
            trail = []
            good = True
            for c, phi in into[c2]:
                z = src_action[phi][x]
                v = dst_action[phi][y]
                cur = assign[c][z]
                if cur == -1:
                    if ok_sets is not None and v not in ok_sets[c][z]:
                        good = False
                        break
                    assign[c][z] = v
                    trail.append((c, z))
                elif cur != v:
                    good = False
                    break
            if good:
                rec(i + 1)
            for c, z in trail:
                assign[c][z] = -1

    rec(0)
    results.sort()
    return results


def hom_set(F: Presheaf, G: Presheaf, budget: int = DEFAULT_BUDGET) -> List[PresheafMorphism]:
    """Every natural transformation ``F -> G`` in lexicographic order."""
    if F.base != G.base:
        raise ValueError("presheaves over different bases")
    fams = _natural_families(F.base, F.sizes, F.action, G.sizes, G.action, budget=budget)
    return [PresheafMorphism(F, G, fam) for fam in fams]


def slice_hom_set(x: SliceObject, y: SliceObject, budget: int = DEFAULT_BUDGET) -> List[PresheafMorphism]:
    """Maps ``x.total -> y.total`` commuting with the projections."""
    if x.over != y.over:
        raise ValueError("slice objects over different bases")
    F, G = x.total, y.total
    allowed = []
    for c in range(F.base.n_objects):
        by_a: Dict[int, List[int]] = {}
        for b, a in enumerate(y.proj.components[c]):
            by_a.setdefault(a, []).append(b)
        allowed.append([by_a.get(a, []) for a in x.proj.components[c]])
    fams = _natural_families(F.base, F.sizes, F.action, G.sizes, G.action, allowed, budget)
    return [PresheafMorphism(F, G, fam) for fam in fams]


# -- morphism predicates ---------------------------------------------------

def diagonal(f: PresheafMorphism) -> Tuple[PresheafMorphism, Pullback]:
    pb = pullback(f, f)
    i = identity(f.src)
    return pb.mediate(i, i), pb


def is_iso(f: PresheafMorphism) -> bool:
    return all(len(set(comp)) == len(comp) == f.dst.size(c) for c, comp in enumerate(f.components))


def _injective(f: PresheafMorphism) -> bool:
    return all(len(set(comp)) == len(comp) for comp in f.components)


def is_mono(f: PresheafMorphism) -> bool:
    """Mono iff the diagonal into the kernel pair is an iso; cross-checked pointwise."""
    d, _ = diagonal(f)
    via_diagonal = is_iso(d)
    if via_diagonal != _injective(f):
        raise AssertionError("diagonal test and injectivity test disagree")
    return via_diagonal


def is_terminal_object(p: Presheaf) -> bool:
    return all(p.size(c) == 1 for c in range(p.base.n_objects))


@dataclass(frozen=True)
class MorphismPredicates:
    is_iso: bool
    is_mono: bool
    dst_is_terminal: bool


def morphism_predicates(f: PresheafMorphism) -> MorphismPredicates:
    return MorphismPredicates(is_iso(f), is_mono(f), is_terminal_object(f.dst))


def inverse(f: PresheafMorphism) -> PresheafMorphism:
    if not is_iso(f):
        raise NotIso("morphism is not invertible")
    comps = []
    for c, comp in enumerate(f.components):
        inv = [0] * len(comp)
        for x, y in enumerate(comp):
            inv[y] = x
        comps.append(tuple(inv))
    return PresheafMorphism(f.dst, f.src, tuple(comps))


# -- exponentials ----------------------------------------------------------

@dataclass(frozen=True)
class Exponential:
    """``F^G`` with evaluation ``F^G x G -> F``."""

    obj: Presheaf
    exponent: Presheaf
    target: Presheaf
    eval_product: Pullback
    eval: PresheafMorphism
    _yoneda_products: Tuple[Pullback, ...]
    _positions: Tuple[Dict[Tuple[Tuple[int, ...], ...], int], ...]

    def transpose(self, H: Presheaf, u: PresheafMorphism) -> PresheafMorphism:
        return exponential_transpose(self, H, u)


def exponential(G: Presheaf, F: Presheaf, budget: int = DEFAULT_BUDGET) -> Exponential:
    """``F^G`` with ``(F^G)(c) = hom(y(c) x G, F)``."""
    base = G.base
    if F.base != base:
        raise ValueError("presheaves over different bases")
    yprods, fams, positions = [], [], []
    for c in range(base.n_objects):
        yg = product(representable(base, c), G)
        yprods.append(yg)
        fs = _natural_families(base, yg.obj.sizes, yg.obj.action, F.sizes, F.action, budget=budget)
        fams.append(fs)
        positions.append({fam: i for i, fam in enumerate(fs)})
    acts = []
    for psi in range(base.n_morphisms):
        c, c2 = base.src[psi], base.dst[psi]
        # alpha in (F^G)(c2) restricts to alpha . (y(psi) x G) in (F^G)(c).
        yc, yc2 = yprods[c], yprods[c2]
        reindex = []
        for d in range(base.n_objects):
            ycar = yc.f.src.carrier[d]
            y2pos = {name: i for i, name in enumerate(yc2.f.src.carrier[d])}
            row = []
            for (phi_pos, g) in yc.obj.carrier[d]:
                phi = base.morphism_id(ycar[phi_pos])
                composite = base.morphisms[base.table[psi][phi]]
                row.append(yc2.index[d][(y2pos[composite], g)])
            reindex.append(row)
        act = []
        for fam in fams[c2]:
            new = tuple(tuple(fam[d][k] for k in reindex[d]) for d in range(base.n_objects))
            act.append(positions[c][new])
        acts.append(tuple(act))
    obj = Presheaf(base, tuple(tuple(fs) for fs in fams), tuple(acts))
    ev_prod = product(obj, G)
    comps = []
    for c in range(base.n_objects):
        yc = yprods[c]
        id_pos = yc.f.src.carrier[c].index(base.morphisms[base.identity[c]])
        row = []
        for (a, g) in ev_prod.obj.carrier[c]:
            row.append(fams[c][a][c][yc.index[c][(id_pos, g)]])
        comps.append(tuple(row))
    ev = PresheafMorphism(ev_prod.obj, F, tuple(comps))
    return Exponential(obj, G, F, ev_prod, ev, tuple(yprods), tuple(positions))


def exponential_transpose(exp: Exponential, H: Presheaf, u: PresheafMorphism) -> PresheafMorphism:
    """Curry ``u: H x G -> F`` into ``H -> F^G``."""
    G, base = exp.exponent, exp.exponent.base
    hg = product(H, G)
    if u.src != hg.obj or u.dst != exp.target:
        raise ValueError("transpose expects a map product(H, G) -> F")
    comps = []
    for c in range(base.n_objects):
        yg = exp._yoneda_products[c]
        row = []
        for h in range(H.size(c)):
            fam = []
            for d in range(base.n_objects):
                ycar = yg.f.src.carrier[d]
                vals = []
                for (phi_pos, g) in yg.obj.carrier[d]:
                    phi = base.morphism_id(ycar[phi_pos])
                    vals.append(u.components[d][hg.index[d][(H.action[phi][h], g)]])
                fam.append(tuple(vals))
            pos = exp._positions[c].get(tuple(fam))
            if pos is None:
                raise ValueError("transpose: u is not natural")
            row.append(pos)
        comps.append(tuple(row))
    return PresheafMorphism(H, exp.obj, tuple(comps))


# -- subobject classifier --------------------------------------------------

def sieves(base: FinCategory, c: int) -> List[FrozenSet]:
    """Sieves on ``c`` ordered by size, then by sorted morphism ids."""
    arrows = base.into(c)
    out = []
    for mask in range(1 << len(arrows)):
        s = frozenset(arrows[i] for i in range(len(arrows)) if mask >> i & 1)
        if all(base.table[phi][psi] in s for phi in s for psi in base.into(base.src[phi])):
            out.append(s)
    out.sort(key=lambda s: (len(s), sorted(s)))
    return out


@dataclass(frozen=True)
class OmegaStructure:
    omega: Presheaf
    tt: PresheafMorphism
    ff: PresheafMorphism

    @property
    def one(self) -> Presheaf:
        return self.tt.src


def omega(base: FinCategory) -> OmegaStructure:
    sv = [sieves(base, c) for c in range(base.n_objects)]
    pos = [{s: i for i, s in enumerate(row)} for row in sv]
    acts = []
    for phi in range(base.n_morphisms):
        c, c2 = base.src[phi], base.dst[phi]
        row = []
        for s in sv[c2]:
            pulled = frozenset(psi for psi in base.into(c) if base.table[phi][psi] in s)
            row.append(pos[c][pulled])
        acts.append(tuple(row))
    labels = tuple(tuple(tuple(base.morphisms[m] for m in sorted(s)) for s in row) for row in sv)
    om = Presheaf(base, labels, tuple(acts))
    one = terminal(base)
    tt = PresheafMorphism(one, om, tuple((len(sv[c]) - 1,) for c in range(base.n_objects)))
    ff = PresheafMorphism(one, om, tuple((0,) for _ in range(base.n_objects)))
    return OmegaStructure(om, tt, ff)


def classify(u: SubPresheaf, om: Optional[OmegaStructure] = None) -> PresheafMorphism:
    """The characteristic map ``A -> Omega`` of a subobject."""
    A = u.ambient
    base = A.base
    om = om or omega(base)
    sv = [sieves(base, c) for c in range(base.n_objects)]
    pos = [{s: i for i, s in enumerate(row)} for row in sv]
    comps = []
    for c in range(base.n_objects):
        arrows = base.into(c)
        row = []
        for a in range(A.size(c)):
            s = frozenset(phi for phi in arrows if A.action[phi][a] in u.selected[base.src[phi]])
            row.append(pos[c][s])
        comps.append(tuple(row))
    return PresheafMorphism(A, om.omega, tuple(comps))


def unclassify(chi: PresheafMorphism, om: Optional[OmegaStructure] = None) -> SubPresheaf:
    """The pullback of ``tt`` along ``chi``, as a subobject of ``chi.src``."""
    om = om or omega(chi.src.base)
    if chi.dst != om.omega:
        raise ValueError("expected a map into Omega")
    top = [om.tt.components[c][0] for c in range(chi.src.base.n_objects)]
    return SubPresheaf(chi.src, tuple(frozenset(a for a, w in enumerate(comp) if w == top[c])
                                      for c, comp in enumerate(chi.components)))


def sub_domain(u: SubPresheaf) -> Tuple[Presheaf, PresheafMorphism]:
    """The presheaf of selected elements with its inclusion into the ambient."""
    A = u.ambient
    base = A.base
    keep = [sorted(s) for s in u.selected]
    pos = [{a: i for i, a in enumerate(k)} for k in keep]
    acts = tuple(tuple(pos[base.src[m]][A.action[m][a]] for a in keep[base.dst[m]])
                 for m in range(base.n_morphisms))
    dom = Presheaf(base, tuple(tuple(A.carrier[c][a] for a in keep[c]) for c in range(base.n_objects)), acts)
    return dom, PresheafMorphism(dom, A, tuple(tuple(k) for k in keep))


def mono_image(m: PresheafMorphism) -> SubPresheaf:
    """Normalise a monomorphism to its skeletal subobject."""
    if not _injective(m):
        raise ValueError("image normalisation expects a monomorphism")
    return SubPresheaf(m.dst, tuple(frozenset(comp) for comp in m.components))


# -- slices: f_!, f^*, f_* -------------------------------------------------

@dataclass(frozen=True)
class Reindexing:
    """``f^* x`` together with the pullback square that defines it."""

    slice: SliceObject
    square: Pullback

    @property
    def to_total(self) -> PresheafMorphism:
        return self.square.p2


def slice_of(f: PresheafMorphism) -> SliceObject:
    return SliceObject(f.src, f)


def pullback_functor(f: PresheafMorphism, x: SliceObject) -> Reindexing:
    """``f^*`` for ``f: B -> A`` applied to ``x`` over ``A``."""
    if x.over != f.dst:
        raise ValueError("slice object is not over the codomain of f")
    sq = pullback(f, x.proj)
    return Reindexing(SliceObject(sq.obj, sq.p1), sq)


def pullback_functor_map(f: PresheafMorphism, x: SliceObject, y: SliceObject,
                         u: PresheafMorphism) -> PresheafMorphism:
    """``f^*(u)`` for a slice map ``u: x -> y``."""
    fx, fy = pullback_functor(f, x).square, pullback_functor(f, y).square
    return fy.mediate(fx.p1, compose(u, fx.p2))


def postcompose(f: PresheafMorphism, x: SliceObject) -> SliceObject:
    """``f_!``: reinterpret ``x`` over ``f.src`` as an object over ``f.dst``."""
    return SliceObject(x.total, compose(f, x.proj))


@dataclass(frozen=True)
class Pushforward:
    """``f_* x`` with counit ``f^* f_* x -> x`` and the transposition map."""

    f: PresheafMorphism
    x: SliceObject
    slice: SliceObject
    counit_domain: Reindexing
    counit: PresheafMorphism
    transpose: Callable[[SliceObject, PresheafMorphism], PresheafMorphism]

    @property
    def total(self) -> Presheaf:
        return self.slice.total

    def unit(self, y: SliceObject) -> PresheafMorphism:
        """``y -> f_* f^* y``."""
        fy = pullback_functor(self.f, y)
        return self.transpose(y, identity(fy.slice.total))


def pushforward(f: PresheafMorphism, x: SliceObject, budget: int = DEFAULT_BUDGET) -> Pushforward:
    """Dependent product along ``f: B -> A`` of ``x`` over ``B``.

    The fibre over ``a`` in ``A(c)`` consists of the maps over ``B`` from
    ``f^*(a: y(c) -> A)`` into ``x``: families ``s[(phi, b)]`` indexed by
    ``phi: c' -> c`` and ``b`` in ``B(c')`` with ``f(b) = a . phi``.
    """
    B, A = f.src, f.dst
    if x.over != B:
        raise ValueError("slice object is not over the domain of f")
    X = x.total
    base = A.base
    n_obj = base.n_objects
    xfib = []
    for c in range(n_obj):
        d: Dict[int, List[int]] = {}
        for xi, b in enumerate(x.proj.components[c]):
            d.setdefault(b, []).append(xi)
        xfib.append(d)
    into_by_src = [[[phi for phi in base.into(c) if base.src[phi] == d] for d in range(n_obj)]
                   for c in range(n_obj)]
    # domains[c][a] = (elements per c', index per c'); families[c][a] = list; fam_pos[c][a] = dict
    domains, families, fam_pos = [], [], []
    spent = 0
    for c in range(n_obj):
        drow, frow, prow = [], [], []
        for a in range(A.size(c)):
            elems = []
            for d in range(n_obj):
                fd = f.components[d]
                elems.append([(phi, b) for phi in into_by_src[c][d] for b in range(B.size(d))
                              if A.action[phi][a] == fd[b]])
            index = [{e: i for i, e in enumerate(es)} for es in elems]
            acts = []
            for psi in range(base.n_morphisms):
                d, d2 = base.src[psi], base.dst[psi]
                acts.append(tuple(index[d][(base.table[phi][psi], B.action[psi][b])]
                                  for (phi, b) in elems[d2]))
            allowed = [[xfib[d].get(b, []) for (_, b) in elems[d]] for d in range(n_obj)]
            fams = _natural_families(base, [len(es) for es in elems], acts, X.sizes, X.action,
                                     allowed, budget - spent)
            spent += sum(len(es) for es in elems) + len(fams)
            if spent > budget:
                raise BudgetExceeded(f"pushforward exceeded budget {budget}")
            drow.append((elems, index))
            frow.append(fams)
            prow.append({fam: i for i, fam in enumerate(fams)})
        domains.append(drow)
        families.append(frow)
        fam_pos.append(prow)
    carrier, proj_comps = [], []
    offsets = []
    for c in range(n_obj):
        labels, proj, off = [], [], []
        for a in range(A.size(c)):
            off.append(len(labels))
            for k in range(len(families[c][a])):
                labels.append((a, k))
                proj.append(a)
        carrier.append(tuple(labels))
        proj_comps.append(tuple(proj))
        offsets.append(off)
    acts = []
    for psi in range(base.n_morphisms):
        c, c2 = base.src[psi], base.dst[psi]
        row = []
        for (a2, k) in carrier[c2]:
            fam = families[c2][a2][k]
            a = A.action[psi][a2]
            elems, _ = domains[c][a]
            _, index2 = domains[c2][a2]
            new = tuple(tuple(fam[d][index2[d][(base.table[psi][phi], b)]] for (phi, b) in elems[d])
                        for d in range(n_obj))
            row.append(offsets[c][a] + fam_pos[c][a][new])
        acts.append(tuple(row))
    T = Presheaf(base, tuple(carrier), tuple(acts))
    t_proj = PresheafMorphism(T, A, tuple(proj_comps))
    fx = SliceObject(T, t_proj)
    fsq = pullback_functor(f, fx)
    counit_comps = []
    for c in range(n_obj):
        idc = base.identity[c]
        row = []
        for (b, t) in fsq.square.obj.carrier[c]:
            a, k = carrier[c][t]
            _, index = domains[c][a]
            row.append(families[c][a][k][c][index[c][(idc, b)]])
        counit_comps.append(tuple(row))
    counit = PresheafMorphism(fsq.slice.total, X, tuple(counit_comps))

    def transpose(y: SliceObject, u: PresheafMorphism) -> PresheafMorphism:
        if y.over != A:
            raise ValueError("transpose: y must live over the codomain of f")
        fy = pullback_functor(f, y).square
        if u.src != fy.obj or u.dst != X:
            raise ValueError("transpose: u must be a map f^* y -> x")
        Y = y.total
        comps = []
        for c in range(n_obj):
            row = []
            for eta in range(Y.size(c)):
                a = y.proj.components[c][eta]
                elems, _ = domains[c][a]
                fam = tuple(tuple(u.components[d][fy.index[d][(b, Y.action[phi][eta])]]
                                  for (phi, b) in elems[d]) for d in range(n_obj))
                k = fam_pos[c][a].get(fam)
                if k is None:
                    raise ValueError("transpose: u is not a map over B")
                row.append(offsets[c][a] + k)
            comps.append(tuple(row))
        return PresheafMorphism(Y, T, tuple(comps))

    return Pushforward(f, x, fx, fsq, counit, transpose)


def slice_iso(x: SliceObject, y: SliceObject, u: PresheafMorphism) -> bool:
    """``u: x -> y`` is an isomorphism of slice objects."""
    return compose(y.proj, u).components == x.proj.components and is_iso(u)


# -- the topos backend -----------------------------------------------------

class PresheafTopos:
    """The presheaf topos on ``base``; every operation honours ``budget``."""

    def __init__(self, base: FinCategory, budget: int = DEFAULT_BUDGET):
        self.base = base
        self.budget = budget

    @cached_property
    def one(self) -> Presheaf:
        return terminal(self.base)

    @cached_property
    def omega_structure(self) -> OmegaStructure:
        return omega(self.base)

    def terminal(self) -> Presheaf:
        return self.one

    def bang(self, p: Presheaf) -> PresheafMorphism:
        return bang(p)

    def identity(self, p: Presheaf) -> PresheafMorphism:
        return identity(p)

    def compose(self, g: PresheafMorphism, f: PresheafMorphism) -> PresheafMorphism:
        return compose(g, f)

    def pullback(self, f: PresheafMorphism, g: PresheafMorphism) -> Pullback:
        return pullback(f, g)

    def product(self, X: Presheaf, Y: Presheaf) -> Pullback:
        return product(X, Y)

    def exponential(self, G: Presheaf, F: Presheaf) -> Exponential:
        return exponential(G, F, self.budget)

    def exponential_transpose(self, exp: Exponential, H: Presheaf, u: PresheafMorphism) -> PresheafMorphism:
        return exponential_transpose(exp, H, u)

    def omega(self) -> OmegaStructure:
        return self.omega_structure

    def classify(self, u: SubPresheaf) -> PresheafMorphism:
        return classify(u, self.omega_structure)

    def unclassify(self, chi: PresheafMorphism) -> SubPresheaf:
        return unclassify(chi, self.omega_structure)

    def hom_set(self, F: Presheaf, G: Presheaf) -> List[PresheafMorphism]:
        return hom_set(F, G, self.budget)

    def slice_hom_set(self, x: SliceObject, y: SliceObject) -> List[PresheafMorphism]:
        return slice_hom_set(x, y, self.budget)

    def morphism_predicates(self, f: PresheafMorphism) -> MorphismPredicates:
        return morphism_predicates(f)

    def inverse(self, f: PresheafMorphism) -> PresheafMorphism:
        return inverse(f)

    def pullback_functor(self, f: PresheafMorphism, x: SliceObject) -> Reindexing:
        return pullback_functor(f, x)

    def postcompose(self, f: PresheafMorphism, x: SliceObject) -> SliceObject:
        return postcompose(f, x)

    def pushforward(self, f: PresheafMorphism, x: SliceObject) -> Pushforward:
        return pushforward(f, x, self.budget)

    def sub_domain(self, u: SubPresheaf) -> Tuple[Presheaf, PresheafMorphism]:
        return sub_domain(u)

    def mono_image(self, m: PresheafMorphism) -> SubPresheaf:
        return mono_image(m)
