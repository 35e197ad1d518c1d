"""Deterministic random instances for the law suite.

Bases are concrete: each object is a small finite set, morphisms are
functions closed under composition, so every generated table is a category
by construction (and is still run through the validator).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Tuple

from ..fincat import NOT_COMPOSABLE, FinCategory, curated_bases, validate_category
from ..presheaf import Presheaf, PresheafMorphism, SubPresheaf, check_presheaf, hom_set
from ..sublattice import all_subobjects
from .corpus import presheaf_corpus, random_presheaf


@dataclass(frozen=True)
class InstanceGenerator:
    seed: int = 0
    max_objects: int = 2
    max_morphisms: int = 6
    max_carrier: int = 3

    def __post_init__(self):
        if min(self.max_objects, self.max_morphisms) < 1 or self.max_carrier < 0:
            raise ValueError("bounds must be positive")
        if self.max_morphisms < self.max_objects:
            raise ValueError("every object needs its identity")


@dataclass(frozen=True)
class Instance:
    id: str
    base: FinCategory
    presheaves: Tuple[Presheaf, ...]
    morphisms: Tuple[PresheafMorphism, ...] = field(default=())
    subobjects: Tuple[SubPresheaf, ...] = field(default=())

    def describe(self) -> Dict:
        return {"id": self.id, "base": {"objects": list(self.base.objects),
                                        "morphisms": self.base.n_morphisms},
                "sizes": [list(p.sizes) for p in self.presheaves]}


def random_category(rng: random.Random, max_objects: int, max_morphisms: int) -> FinCategory:
    k = rng.randint(1, max_objects)
    sets = [rng.randint(1, 2) for _ in range(k)]
    arrows = {(o, o, tuple(range(sets[o]))) for o in range(k)}

    def close(arrs):
        arrs = set(arrs)
        while True:
            new = {(f[0], g[1], tuple(g[2][v] for v in f[2]))
                   for f in arrs for g in arrs if f[1] == g[0]} - arrs
            if not new:
                return arrs
            arrs |= new
            if len(arrs) > max_morphisms:
                return arrs

    for _ in range(rng.randint(0, 3)):
        a, b = rng.randrange(k), rng.randrange(k)
        fn = tuple(rng.randrange(sets[b]) for _ in range(sets[a]))
        cand = close(arrows | {(a, b, fn)})
        if len(cand) <= max_morphisms:
            arrows = cand
    ids = [(o, o, tuple(range(sets[o]))) for o in range(k)]
    rest = sorted(arrows - set(ids))
    ordered = ids + rest
    pos = {a: i for i, a in enumerate(ordered)}
    n = len(ordered)
    table = [[NOT_COMPOSABLE] * n for _ in range(n)]
    for gi, g in enumerate(ordered):
        for fi, f in enumerate(ordered):
            if f[1] == g[0]:
                table[gi][fi] = pos[(f[0], g[1], tuple(g[2][v] for v in f[2]))]
    names = tuple(f"id_o{o}" for o in range(k)) + tuple(f"m{i}" for i in range(k, n))
    return FinCategory(tuple(f"o{o}" for o in range(k)), names,
                       tuple(a[0] for a in ordered), tuple(a[1] for a in ordered),
                       tuple(range(k)), tuple(tuple(r) for r in table))


def _random_morphisms(rng: random.Random, ps: Tuple[Presheaf, ...]) -> Tuple[PresheafMorphism, ...]:
    out = []
    for (i, j) in ((1, 0), (2, 0), (0, 1)):
        homs = hom_set(ps[i], ps[j], budget=20000)
        if homs:
            out.append(homs[rng.randrange(len(homs))])
    return tuple(out)


def _random_subobjects(rng: random.Random, ps: Tuple[Presheaf, ...]) -> Tuple[SubPresheaf, ...]:
    subs = all_subobjects(ps[0])
    return tuple(subs[rng.randrange(len(subs))] for _ in range(2))


def generate_instances(gen: InstanceGenerator, count: int) -> Iterator[Instance]:
    """``count`` instances; identical generator settings give identical streams."""
    rng = random.Random(gen.seed)
    for n in range(count):
        base = random_category(rng, gen.max_objects, gen.max_morphisms)
        assert validate_category(base).ok
        ps = tuple(random_presheaf(base, rng, gen.max_carrier) for _ in range(3))
        assert not any(check_presheaf(p) for p in ps)
        yield Instance(f"gen:{gen.seed}:{n:04d}", base, ps, _random_morphisms(rng, ps),
                       _random_subobjects(rng, ps))


def curated_instances(max_total: int = 3) -> List[Instance]:
    """Instances on the terminal, arrow and graph bases drawn from the small corpus."""
    out = []
    for name, base in curated_bases().items():
        corpus = presheaf_corpus(base, max_carrier=3, max_total=max_total)
        nonempty = [p for p in corpus if p.total_size] or corpus
        k = len(nonempty)
        for n in range(min(k, 6)):
            ps = (nonempty[n % k], nonempty[(n + 1) % k], nonempty[(n + 3) % k])
            rng = random.Random(n)
            out.append(Instance(f"curated:{name}:{n}", base, ps, _random_morphisms(rng, ps),
                                _random_subobjects(rng, ps)))
    return out
