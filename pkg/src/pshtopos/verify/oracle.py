"""Ground-truth colimits computed pointwise.

This is the only module that builds colimits natively.  It exists to check
the derived constructions and must never be imported by them.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..presheaf import Presheaf, PresheafMorphism


@dataclass(frozen=True)
class NativeCoproduct:
    obj: Presheaf
    inl: PresheafMorphism
    inr: PresheafMorphism

    def copair(self, f: PresheafMorphism, g: PresheafMorphism) -> PresheafMorphism:
        if f.dst != g.dst:
            raise ValueError("copair needs a common codomain")
        comps = tuple(fc + gc for fc, gc in zip(f.components, g.components))
        return PresheafMorphism(self.obj, f.dst, comps)


def native_coproduct_oracle(a: Presheaf, b: Presheaf) -> NativeCoproduct:
    """Tagged pointwise disjoint union; left elements come first."""
    if a.base != b.base:
        raise ValueError("presheaves over different bases")
    base = a.base
    carrier = tuple(tuple(("L", x) for x in a.carrier[c]) + tuple(("R", y) for y in b.carrier[c])
                    for c in range(base.n_objects))
    acts = []
    for m in range(base.n_morphisms):
        shift = a.size(base.src[m])
        acts.append(a.action[m] + tuple(v + shift for v in b.action[m]))
    obj = Presheaf(base, carrier, tuple(acts))
    inl = PresheafMorphism(a, obj, tuple(tuple(range(a.size(c))) for c in range(base.n_objects)))
    inr = PresheafMorphism(b, obj, tuple(tuple(range(a.size(c), a.size(c) + b.size(c)))
                                         for c in range(base.n_objects)))
    return NativeCoproduct(obj, inl, inr)


def native_initial(base) -> Presheaf:
    """The presheaf with empty carriers."""
    return Presheaf(base, tuple(() for _ in base.objects), tuple(() for _ in base.morphisms))
