"""Exhaustive sweeps over the small-presheaf corpus of a base.

Each sweep returns a :class:`Sweep` counting what was examined and listing
every failure with enough data to replay it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .. import derived
from ..fincat import FinCategory
from ..lcc import restrict
from ..presheaf import Presheaf, PresheafTopos, SubPresheaf, check_morphism
from ..sublattice import all_subobjects
from .corpus import presheaf_corpus
from .oracle import native_coproduct_oracle


@dataclass
class Sweep:
    name: str
    examined: int = 0
    failures: List[Dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, **detail) -> None:
        self.failures.append(detail)


def _mask(s: SubPresheaf, offsets: Sequence[int]) -> int:
    out = 0
    for c, sel in enumerate(s.selected):
        for x in sel:
            out |= 1 << (offsets[c] + x)
    return out


def _offsets(p: Presheaf) -> List[int]:
    out, acc = [], 0
    for c in range(p.base.n_objects):
        out.append(acc)
        acc += p.size(c)
    return out


def join_sweep(base: FinCategory, corpus: Optional[Sequence[Presheaf]] = None) -> Sweep:
    """Derived bottom and join against the empty set, pointwise union and a scan of all upper bounds."""
    ctx = restrict(PresheafTopos(base))
    corpus = presheaf_corpus(base, 3) if corpus is None else corpus
    sw = Sweep("join")
    for i, a in enumerate(corpus):
        subs = all_subobjects(a, ctx.budget)
        off = _offsets(a)
        masks = [_mask(s, off) for s in subs]
        bot = derived.bottom_subobject(ctx, a)
        if any(bot.selected):
            sw.fail(presheaf=i, reason="bottom is not empty")
        for s, ms in zip(subs, masks):
            for t, mt in zip(subs, masks):
                sw.examined += 1
                j = derived.join_subobjects(ctx, s, t)
                mj = _mask(j, off)
                if mj != ms | mt:
                    sw.fail(presheaf=i, U=masks.index(ms), V=masks.index(mt), reason="join is not the union")
                    continue
                for mw in masks:
                    if ms & ~mw == 0 and mt & ~mw == 0 and mj & ~mw:
                        sw.fail(presheaf=i, U=ms, V=mt, W=mw, reason="join is not least")
                        break
    return sw


def coproduct_sweep(base: FinCategory, corpus: Optional[Sequence[Presheaf]] = None,
                    targets: Optional[Sequence[Presheaf]] = None) -> Sweep:
    """Every pair ``(A, B)``: iso to the native union, disjoint injections, and the
    restriction map ``hom(C, X) -> hom(A, X) x hom(B, X)`` bijective for every ``X``."""
    ctx = restrict(PresheafTopos(base))
    corpus = presheaf_corpus(base, 3) if corpus is None else corpus
    targets = corpus if targets is None else targets
    zero = derived.initial_object(ctx)
    hom_count: Dict[Tuple[int, int], int] = {}
    for i, a in enumerate(corpus):
        for k, x in enumerate(targets):
            hom_count[(i, k)] = len(ctx.hom_set(a, x))
    sw = Sweep("coproduct")
    for i, a in enumerate(corpus):
        for j, b in enumerate(corpus):
            sw.examined += 1
            try:
                data = derived.binary_coproduct(ctx, a, b, zero)
            except derived.ConstructionError as e:
                sw.fail(A=i, B=j, reason=str(e))
                continue
            nat = native_coproduct_oracle(a, b)
            fwd = derived.copair_via_graph(ctx, data, nat.inl, nat.inr)
            bwd = nat.copair(data.inl, data.inr)
            if check_morphism(bwd) or not derived.IsoWitness(fwd, bwd).holds(ctx):
                sw.fail(A=i, B=j, reason="no iso to the native coproduct")
            if zero.witness(data.disjoint.obj) is None:
                sw.fail(A=i, B=j, reason="injections are not disjoint")
            inl, inr = data.inl.components, data.inr.components
            for k, x in enumerate(targets):
                homs = ctx.hom_set(data.obj, x)
                # restriction along inl and inr, read off the components directly
                seen = {(tuple(tuple(h.components[c][y] for y in inl[c]) for c in range(len(inl))),
                         tuple(tuple(h.components[c][y] for y in inr[c]) for c in range(len(inr))))
                        for h in homs}
                n_pairs = hom_count[(i, k)] * hom_count[(j, k)]
                if not len(homs) == len(seen) == n_pairs:
                    sw.fail(A=i, B=j, X=k, reason=f"{len(homs)} maps, {len(seen)} restrictions, "
                                                  f"{n_pairs} pairs")
    return sw


def initial_sweep(base: FinCategory, corpus: Optional[Sequence[Presheaf]] = None) -> Sweep:
    """The derived 0 is empty, maps uniquely everywhere, is strict and has one subobject."""
    ctx = restrict(PresheafTopos(base))
    corpus = presheaf_corpus(base, 3) if corpus is None else corpus
    extra = [ctx.terminal(), ctx.omega().omega]
    zero = derived.initial_object(ctx)
    sw = Sweep("initial")
    if zero.obj.total_size:
        sw.fail(reason="carriers of 0 are not empty", sizes=list(zero.obj.sizes))
    if len(all_subobjects(zero.obj)) != 1:
        sw.fail(reason="Sub(0) is not trivial")
    for i, a in enumerate(list(corpus) + extra):
        sw.examined += 1
        if len(ctx.hom_set(zero.obj, a)) != 1:
            sw.fail(A=i, reason="hom(0, A) is not a singleton")
        for f in ctx.hom_set(a, zero.obj):
            if not ctx.is_iso(f):
                sw.fail(A=i, reason="a map into 0 is not invertible")
    return sw
