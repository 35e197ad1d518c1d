"""Deliberately corrupted backends used as negative controls."""
from __future__ import annotations

from itertools import product as cartesian
from typing import List

from ..presheaf import (
    BudgetExceeded,
    Presheaf,
    PresheafMorphism,
    PresheafTopos,
    Pushforward,
    SliceObject,
    compose,
    pullback_functor,
)


class BrokenNaturalityTopos(PresheafTopos):
    """``hom_set`` returns every family of component functions, natural or not."""

    def hom_set(self, F: Presheaf, G: Presheaf) -> List[PresheafMorphism]:
        per_object = [list(cartesian(range(G.size(c)), repeat=F.size(c)))
                      for c in range(self.base.n_objects)]
        count = 1
        for choices in per_object:
            count *= len(choices)
        if count > self.budget:
            raise BudgetExceeded(f"hom-set enumeration exceeded budget {self.budget}")
        return [PresheafMorphism(F, G, comps) for comps in cartesian(*per_object)]


class BrokenPushforwardTopos(PresheafTopos):
    """``f_* x`` is replaced by ``f_* x`` times a two-element constant presheaf.

    The counit and transposition are adjusted so every map still typechecks;
    only the universal property is lost.
    """

    def pushforward(self, f: PresheafMorphism, x: SliceObject) -> Pushforward:
        honest = super().pushforward(f, x)
        base = self.base
        two = Presheaf(base, tuple((0, 1) for _ in base.objects),
                       tuple((0, 1) for _ in range(base.n_morphisms)))
        prod = self.product(honest.total, two)
        doubled = SliceObject(prod.obj, compose(honest.slice.proj, prod.p1))
        dom = pullback_functor(f, doubled)
        # forget the extra factor, then apply the honest counit
        to_honest = honest.counit_domain.square.mediate(dom.slice.proj, compose(prod.p1, dom.to_total))
        counit = compose(honest.counit, to_honest)

        def transpose(y: SliceObject, u: PresheafMorphism) -> PresheafMorphism:
            t = honest.transpose(y, u)
            zero = PresheafMorphism(y.total, two, tuple((0,) * y.total.size(c)
                                                        for c in range(base.n_objects)))
            return prod.mediate(t, zero)

        return Pushforward(f, x, doubled, dom, counit, transpose)


MUTANTS = {
    "broken-naturality": BrokenNaturalityTopos,
    "broken-pushforward": BrokenPushforwardTopos,
}
