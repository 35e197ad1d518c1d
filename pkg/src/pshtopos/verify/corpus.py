"""Exhaustive and random presheaves over a finite base."""
from __future__ import annotations

import random
from itertools import permutations, product
from typing import Iterator, List, Optional, Sequence, Tuple

from ..fincat import NOT_COMPOSABLE, FinCategory
from ..presheaf import Presheaf


def _non_identity(base: FinCategory) -> List[int]:
    return [m for m in range(base.n_morphisms) if not base.is_identity(m)]


def _consistent(base: FinCategory, acts: dict, sizes: Sequence[int]) -> bool:
    """Contravariance on every composable pair whose three actions are known."""
    def table(m):
        if base.is_identity(m):
            return tuple(range(sizes[base.src[m]]))
        return acts.get(m)

    for g in range(base.n_morphisms):
        ag = table(g)
        if ag is None:
            continue
        for f in range(base.n_morphisms):
            gf = base.table[g][f]
            if gf == NOT_COMPOSABLE:
                continue
            af, agf = table(f), table(gf)
            if af is None or agf is None:
                continue
            if any(af[ag[x]] != agf[x] for x in range(len(ag))):
                return False
    return True


def _assemble(base: FinCategory, sizes: Sequence[int], acts: dict) -> Presheaf:
    action = tuple(tuple(range(sizes[base.src[m]])) if base.is_identity(m) else acts[m]
                   for m in range(base.n_morphisms))
    carrier = tuple(tuple(range(n)) for n in sizes)
    return Presheaf(base, carrier, action)


def presheaves_with_sizes(base: FinCategory, sizes: Sequence[int]) -> Iterator[Presheaf]:
    """Every presheaf with element sets ``range(sizes[c])``, in a fixed order."""
    arrows = _non_identity(base)
    acts: dict = {}

    def rec(k: int):
        if k == len(arrows):
            yield _assemble(base, sizes, acts)
            return
        m = arrows[k]
        n_src, n_dst = sizes[base.src[m]], sizes[base.dst[m]]
        if n_dst and not n_src:
            return
        for fn in product(range(n_src), repeat=n_dst):
            acts[m] = fn
            if _consistent(base, acts, sizes):
                yield from rec(k + 1)
            del acts[m]

    yield from rec(0)


def canonical_form(p: Presheaf) -> Tuple:
    """Lexicographically least action table over all relabellings."""
    base = p.base
    perms = [list(permutations(range(p.size(c)))) for c in range(base.n_objects)]
    best = None
    for choice in product(*perms):
        # choice[c][old] = new
        inv = []
        for pc in choice:
            row = [0] * len(pc)
            for old, new in enumerate(pc):
                row[new] = old
            inv.append(row)
        key = tuple(tuple(choice[base.src[m]][p.action[m][inv[base.dst[m]][y]]]
                          for y in range(p.size(base.dst[m])))
                    for m in range(base.n_morphisms))
        if best is None or key < best:
            best = key
    return (p.sizes, best)


def presheaf_corpus(base: FinCategory, max_carrier: int = 3,
                    max_total: Optional[int] = None) -> List[Presheaf]:
    """One presheaf per isomorphism class, carriers bounded per object and in total."""
    out, seen = [], set()
    for sizes in product(range(max_carrier + 1), repeat=base.n_objects):
        if max_total is not None and sum(sizes) > max_total:
            continue
        for p in presheaves_with_sizes(base, sizes):
            key = canonical_form(p)
            if key not in seen:
                seen.add(key)
                out.append(p)
    return out


def random_presheaf(base: FinCategory, rng: random.Random, max_carrier: int,
                    attempts: int = 20, step_limit: int = 2000) -> Presheaf:
    """A random presheaf found by randomised backtracking over the actions."""
    arrows = _non_identity(base)
    for _ in range(attempts):
        sizes = [rng.randint(0, max_carrier) for _ in range(base.n_objects)]
        # an empty set can only receive restrictions from empty sets
        changed = True
        while changed:
            changed = False
            for m in arrows:
                if sizes[base.src[m]] == 0 and sizes[base.dst[m]] != 0:
                    sizes[base.dst[m]] = 0
                    changed = True
        acts: dict = {}
        steps = [0]

        def rec(k: int) -> bool:
            if k == len(arrows):
                return True
            m = arrows[k]
            n_src, n_dst = sizes[base.src[m]], sizes[base.dst[m]]
            tried = set()
            for _ in range(4 * max(1, n_src ** n_dst)):
                steps[0] += 1
                if steps[0] > step_limit:
                    return False
                fn = tuple(rng.randrange(n_src) for _ in range(n_dst)) if n_dst else ()
                if fn in tried:
                    continue
                tried.add(fn)
                acts[m] = fn
                if _consistent(base, acts, sizes) and rec(k + 1):
                    return True
                del acts[m]
                if len(tried) >= n_src ** n_dst:
                    break
            return False

        if rec(0):
            return _assemble(base, sizes, acts)
    return _assemble(base, [1] * base.n_objects, {m: (0,) for m in arrows})
