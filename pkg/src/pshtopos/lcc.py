"""The hypothesis-level interface: finite limits, dependent products, Omega.

:class:`LccContext` is the only thing the derived constructions may touch.  It
carries no handle that builds a coproduct, an initial object, or any other
colimit; those have to be produced from what is here.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Tuple

from . import sublattice
from .presheaf import (
    Exponential,
    MorphismPredicates,
    OmegaStructure,
    Presheaf,
    PresheafMorphism,
    PresheafTopos,
    Pullback,
    Pushforward,
    Reindexing,
    SliceObject,
    SubPresheaf,
    same_morphism,
)

# Names a context must never expose.
FORBIDDEN_CAPABILITIES = frozenset({
    "coproduct", "initial", "pushout", "coequalizer", "colimit", "disjoint_union",
    "empty", "sum", "native_coproduct_oracle",
})


@dataclass(frozen=True)
class LccContext:
    terminal: Callable[[], Presheaf]
    bang: Callable[[Presheaf], PresheafMorphism]
    identity: Callable[[Presheaf], PresheafMorphism]
    compose: Callable[[PresheafMorphism, PresheafMorphism], PresheafMorphism]
    equal: Callable[[PresheafMorphism, PresheafMorphism], bool]
    pullback: Callable[[PresheafMorphism, PresheafMorphism], Pullback]
    product: Callable[[Presheaf, Presheaf], Pullback]
    exponential: Callable[[Presheaf, Presheaf], Exponential]
    exponential_transpose: Callable[[Exponential, Presheaf, PresheafMorphism], PresheafMorphism]
    pullback_functor: Callable[[PresheafMorphism, SliceObject], Reindexing]
    postcompose: Callable[[PresheafMorphism, SliceObject], SliceObject]
    pushforward: Callable[[PresheafMorphism, SliceObject], Pushforward]
    omega: Callable[[], OmegaStructure]
    classify: Callable[[SubPresheaf], PresheafMorphism]
    unclassify: Callable[[PresheafMorphism], SubPresheaf]
    hom_set: Callable[[Presheaf, Presheaf], List[PresheafMorphism]]
    slice_hom_set: Callable[[SliceObject, SliceObject], List[PresheafMorphism]]
    morphism_predicates: Callable[[PresheafMorphism], MorphismPredicates]
    inverse: Callable[[PresheafMorphism], PresheafMorphism]
    sub_top: Callable[[Presheaf], SubPresheaf]
    sub_leq: Callable[[SubPresheaf, SubPresheaf], bool]
    sub_meet: Callable[[SubPresheaf, SubPresheaf], SubPresheaf]
    sub_implies: Callable[[SubPresheaf, SubPresheaf], SubPresheaf]
    sub_forall: Callable[[PresheafMorphism, SubPresheaf], SubPresheaf]
    sub_pullback: Callable[[PresheafMorphism, SubPresheaf], SubPresheaf]
    sub_domain: Callable[[SubPresheaf], Tuple[Presheaf, PresheafMorphism]]
    mono_image: Callable[[PresheafMorphism], SubPresheaf]
    budget: int

    def is_mono(self, f: PresheafMorphism) -> bool:
        return self.morphism_predicates(f).is_mono

    def is_iso(self, f: PresheafMorphism) -> bool:
        return self.morphism_predicates(f).is_iso

    def slice(self, f: PresheafMorphism) -> SliceObject:
        return SliceObject(f.src, f)


def restrict(topos: PresheafTopos) -> LccContext:
    """Expose exactly the hypothesis-level operations of ``topos``."""
    return LccContext(
        terminal=topos.terminal,
        bang=topos.bang,
        identity=topos.identity,
        compose=topos.compose,
        equal=same_morphism,
        pullback=topos.pullback,
        product=topos.product,
        exponential=topos.exponential,
        exponential_transpose=topos.exponential_transpose,
        pullback_functor=topos.pullback_functor,
        postcompose=topos.postcompose,
        pushforward=topos.pushforward,
        omega=topos.omega,
        classify=topos.classify,
        unclassify=topos.unclassify,
        hom_set=topos.hom_set,
        slice_hom_set=topos.slice_hom_set,
        morphism_predicates=topos.morphism_predicates,
        inverse=topos.inverse,
        sub_top=sublattice.sub_top,
        sub_leq=sublattice.sub_leq,
        sub_meet=sublattice.sub_meet,
        sub_implies=sublattice.sub_implies,
        sub_forall=sublattice.sub_forall,
        sub_pullback=sublattice.sub_pullback,
        sub_domain=topos.sub_domain,
        mono_image=topos.mono_image,
        budget=topos.budget,
    )
