"""The Heyting semilattice of subobjects of a presheaf.

Subobjects are stored skeletally as restriction-closed element subsets, so
equality of subobjects is plain equality of :class:`SubPresheaf` values.
Implication and universal quantification use the direct Kripke-Joyal
clauses; the exponential and ``f_*`` routes are kept as cross-checks.
"""
from __future__ import annotations

from itertools import product as cartesian
from typing import Iterator, List

from .presheaf import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Presheaf,
    PresheafMorphism,
    SliceObject,
    SubPresheaf,
    mono_image,
    pullback_functor,
    pushforward,
    sub_domain,
)

__all__ = [
    "SubPresheaf", "sub_top", "sub_leq", "sub_meet", "sub_implies", "sub_forall",
    "sub_pullback", "all_subobjects", "sub_domain", "mono_image",
    "sub_implies_via_exponential", "sub_forall_via_pushforward",
]


def _same_ambient(u: SubPresheaf, v: SubPresheaf) -> None:
    if u.ambient != v.ambient:
        raise ValueError("subobjects of different presheaves")


def sub_top(a: Presheaf) -> SubPresheaf:
    return SubPresheaf(a, tuple(frozenset(range(a.size(c))) for c in range(a.base.n_objects)))


def sub_leq(u: SubPresheaf, v: SubPresheaf) -> bool:
    _same_ambient(u, v)
    return all(s <= t for s, t in zip(u.selected, v.selected))


def sub_meet(u: SubPresheaf, v: SubPresheaf) -> SubPresheaf:
    _same_ambient(u, v)
    return SubPresheaf(u.ambient, tuple(s & t for s, t in zip(u.selected, v.selected)))


def sub_implies(u: SubPresheaf, v: SubPresheaf) -> SubPresheaf:
    """``a`` is in ``(u => v)(c)`` iff every restriction of ``a`` in ``u`` lies in ``v``."""
    _same_ambient(u, v)
    a = u.ambient
    base = a.base
    out = []
    for c in range(base.n_objects):
        arrows = base.into(c)
        keep = set()
        for x in range(a.size(c)):
            ok = True
            for phi in arrows:
                d = base.src[phi]
                y = a.action[phi][x]
                if y in u.selected[d] and y not in v.selected[d]:
                    ok = False
                    break
            if ok:
                keep.add(x)
        out.append(frozenset(keep))
    return SubPresheaf(a, tuple(out))


def sub_pullback(f: PresheafMorphism, v: SubPresheaf) -> SubPresheaf:
    """``f^* v`` for ``f: B -> A`` and ``v`` in ``Sub(A)``."""
    if v.ambient != f.dst:
        raise ValueError("subobject does not live on the codomain of f")
    return SubPresheaf(f.src, tuple(frozenset(b for b, a in enumerate(comp) if a in v.selected[c])
                                    for c, comp in enumerate(f.components)))


def sub_forall(f: PresheafMorphism, u: SubPresheaf) -> SubPresheaf:
    """Right adjoint to ``f^*`` on subobjects.

    ``a`` is in ``forall_f(u)(c)`` iff for every ``phi: c' -> c`` each ``b``
    with ``f(b) = a . phi`` lies in ``u``.
    """
    if u.ambient != f.src:
        raise ValueError("subobject does not live on the domain of f")
    B, A = f.src, f.dst
    base = A.base
    # elements of A over which some element of B lies outside u
    bad = []
    for d in range(base.n_objects):
        comp = f.components[d]
        bad.append({comp[b] for b in range(B.size(d)) if b not in u.selected[d]})
    out = []
    for c in range(base.n_objects):
        arrows = base.into(c)
        keep = frozenset(x for x in range(A.size(c))
                         if not any(A.action[phi][x] in bad[base.src[phi]] for phi in arrows))
        out.append(keep)
    return SubPresheaf(A, tuple(out))


def all_subobjects(a: Presheaf, budget: int = DEFAULT_BUDGET) -> List[SubPresheaf]:
    """Every subobject of ``a``, ordered by the sorted element lists."""
    base = a.base
    n = base.n_objects
    order = [(c, x) for c in range(n) for x in range(a.size(c))]
    if 2 ** len(order) > budget:
        raise BudgetExceeded(f"{2 ** len(order)} candidate subsets exceed budget {budget}")
    restrictions = {(c, x): [(base.src[phi], a.action[phi][x]) for phi in base.into(c)]
                    for (c, x) in order}
    found = []
    for bits in cartesian((0, 1), repeat=len(order)):
        chosen = {e for e, bit in zip(order, bits) if bit}
        if all(r in chosen for e in chosen for r in restrictions[e]):
            found.append(SubPresheaf(a, tuple(frozenset(x for (c2, x) in chosen if c2 == c)
                                              for c in range(n))))
    found.sort(key=lambda s: [sorted(t) for t in s.selected])
    return found


def iter_pairs(a: Presheaf, budget: int = DEFAULT_BUDGET) -> Iterator[tuple]:
    subs = all_subobjects(a, budget)
    for u in subs:
        for v in subs:
            yield u, v


# -- cross-check routes ----------------------------------------------------

def sub_implies_via_exponential(u: SubPresheaf, v: SubPresheaf,
                                budget: int = DEFAULT_BUDGET) -> SubPresheaf:
    """``u => v`` read off the slice exponential ``v^u = u_* u^* v`` over ``A``."""
    _same_ambient(u, v)
    _, mu = sub_domain(u)
    _, mv = sub_domain(v)
    pulled = pullback_functor(mu, SliceObject(mv.src, mv))
    pf = pushforward(mu, pulled.slice, budget)
    return mono_image(pf.slice.proj)


def sub_forall_via_pushforward(f: PresheafMorphism, u: SubPresheaf,
                               budget: int = DEFAULT_BUDGET) -> SubPresheaf:
    """``forall_f u`` as the image of ``f_*`` applied to the mono ``u``."""
    _, mu = sub_domain(u)
    pf = pushforward(f, SliceObject(mu.src, mu), budget)
    return mono_image(pf.slice.proj)

