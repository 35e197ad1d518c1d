"""The catalog of structural law checks.

Each check receives an :class:`Env` (one instance plus its restricted context)
and either returns normally (pass), raises :class:`CheckFailed` carrying a
witness, or lets :class:`BudgetExceeded` escape.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .. import derived
from ..lcc import LccContext, restrict
from ..presheaf import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Presheaf,
    PresheafMorphism,
    PresheafTopos,
    SliceObject,
    SubPresheaf,
    check_morphism,
    is_terminal_object,
    slice_iso,
)
from ..sublattice import all_subobjects
from .generate import Instance
from .oracle import native_coproduct_oracle


class CheckFailed(AssertionError):
    def __init__(self, reason: str, **witness):
        super().__init__(reason)
        self.witness = {"reason": reason, **witness}


def describe(obj):
    """JSON-friendly rendering of presheaves, morphisms and subobjects."""
    if isinstance(obj, Presheaf):
        return {"sizes": list(obj.sizes), "action": [list(a) for a in obj.action]}
    if isinstance(obj, PresheafMorphism):
        return {"src": list(obj.src.sizes), "dst": list(obj.dst.sizes),
                "components": [list(c) for c in obj.components]}
    if isinstance(obj, SubPresheaf):
        return {"ambient": list(obj.ambient.sizes), "selected": [sorted(s) for s in obj.selected]}
    if isinstance(obj, SliceObject):
        return {"total": describe(obj.total), "proj": describe(obj.proj)}
    return repr(obj)


def require(cond: bool, reason: str, **witness) -> None:
    if not cond:
        raise CheckFailed(reason, **{k: describe(v) for k, v in witness.items()})


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    instance: str
    verdict: str  # "pass" | "fail" | "budget-exceeded"
    witness: Optional[Dict] = None
    elapsed: float = field(default=0.0, compare=False)

    def as_dict(self, timing: bool = False) -> Dict:
        d = {"check": self.check_id, "instance": self.instance, "verdict": self.verdict}
        if self.witness is not None:
            d["witness"] = self.witness
        if timing:
            d["elapsed"] = round(self.elapsed, 6)
        return d


class Env:
    """One instance bound to a topos backend, with shared derived data cached."""

    def __init__(self, instance: Instance, topos: PresheafTopos):
        self.instance = instance
        self.topos = topos
        self.ctx: LccContext = restrict(topos)

    @property
    def ps(self) -> Tuple[Presheaf, ...]:
        return self.instance.presheaves

    @cached_property
    def zero(self) -> derived.InitialObject:
        return derived.initial_object(self.ctx)

    @cached_property
    def one(self) -> Presheaf:
        return self.ctx.terminal()

    @cached_property
    def om(self):
        return self.ctx.omega()

    @cached_property
    def subterminals(self) -> List[SubPresheaf]:
        return all_subobjects(self.one, self.topos.budget)

    def cospan(self) -> Tuple[PresheafMorphism, PresheafMorphism]:
        """Two maps with a common codomain, preferring instance morphisms."""
        ms = self.instance.morphisms
        by_dst: Dict[Presheaf, List[PresheafMorphism]] = {}
        for m in ms:
            by_dst.setdefault(m.dst, []).append(m)
        for dst, lst in by_dst.items():
            if len(lst) >= 2:
                return lst[0], lst[1]
        if ms:
            return ms[0], self.ctx.identity(ms[0].dst)
        return self.ctx.bang(self.ps[0]), self.ctx.bang(self.ps[1])

    def slices_over(self, a: Presheaf, limit: int = 3, with_product: bool = True) -> List[SliceObject]:
        """Identity, a product projection, maps from instance presheaves and subobject inclusions."""
        ctx = self.ctx
        out = [ctx.slice(ctx.identity(a))]
        if with_product:
            out.append(ctx.slice(ctx.product(a, self.ps[0]).p1))
        for p in self.ps[1:]:
            for f in ctx.hom_set(p, a)[:limit]:
                out.append(ctx.slice(f))
        subs = all_subobjects(a, self.topos.budget) if a.total_size <= 8 else []
        for s in subs[1:-1][:limit]:
            out.append(ctx.slice(ctx.sub_domain(s)[1]))
        return out

    def monos(self) -> List[PresheafMorphism]:
        a = self.ps[0]
        subs = all_subobjects(a, self.topos.budget)
        picks = [subs[0], subs[len(subs) // 2], subs[-1]]
        return [self.ctx.sub_domain(s)[1] for s in picks]

    @cached_property
    def retracts(self) -> List[Tuple[PresheafMorphism, PresheafMorphism]]:
        """Pairs ``(m, e)`` with ``e . m = id`` among the instance presheaves."""
        ctx = self.ctx
        out = []
        for a in self.ps:
            for b in self.ps:
                ms = ctx.hom_set(a, b)
                es = ctx.hom_set(b, a)
                ida = ctx.identity(a)
                for m in ms:
                    for e in es:
                        if ctx.equal(ctx.compose(e, m), ida):
                            out.append((m, e))
                            break
                    if len(out) > 6:
                        return out
        return out


CATALOG: Dict[str, Tuple[str, Callable[[Env], None]]] = {}


def check(check_id: str, anchor: str):
    def deco(fn):
        CATALOG[check_id] = (anchor, fn)
        return fn
    return deco


# -- Beck-Chevalley and exponentials ---------------------------------------

@check("BC_left", "Beck-Chevalley for f_! along a pullback square")
def bc_left(env: Env) -> None:
    """Pull x back along k, push along h, and compare with f^* g_! x through the pullback mediator;
    the comparison must be an iso over the slice.
    """
    ctx = env.ctx
    f, g = env.cospan()
    sq = ctx.pullback(f, g)
    h, k = sq.p1, sq.p2
    for x in env.slices_over(g.src):
        kx = ctx.pullback_functor(k, x)
        lhs = ctx.postcompose(h, kx.slice)
        rhs = ctx.pullback_functor(f, ctx.postcompose(g, x))
        canon = rhs.square.mediate(lhs.proj, kx.to_total)
        require(slice_iso(lhs, rhs.slice, canon),
                "h_! k^* -> f^* g_! is not invertible", f=f, g=g, x=x, comparison=canon)


@check("BC_right", "Beck-Chevalley for f_* along a pullback square")
def bc_right(env: Env) -> None:
    """Build the comparison f^* g_* x -> h_* k^* x as the transpose of the counit of g_* restricted
    along the square; it must be an iso over the slice.
    """
    ctx = env.ctx
    f, g = env.cospan()
    sq = ctx.pullback(f, g)
    h, k = sq.p1, sq.p2
    for x in env.slices_over(g.src):
        gx = ctx.pushforward(g, x)
        left = ctx.pullback_functor(f, gx.slice)
        kx = ctx.pullback_functor(k, x)
        hk = ctx.pushforward(h, kx.slice)
        hl = ctx.pullback_functor(h, left.slice).square
        q1, q2 = hl.p1, hl.p2
        into_gt = gx.counit_domain.square.mediate(ctx.compose(k, q1), ctx.compose(left.to_total, q2))
        u = kx.square.mediate(q1, ctx.compose(gx.counit, into_gt))
        canon = hk.transpose(left.slice, u)
        require(slice_iso(left.slice, hk.slice, canon),
                "f^* g_* -> h_* k^* is not invertible", f=f, g=g, x=x, comparison=canon)


@check("EXP_PULLBACK", "exponentials in slices are stable under pullback")
def exp_pullback(env: Env) -> None:
    """Form h^g as g_* g^* h, pull back along f, and transpose the evaluation map into
    (f^*h)^(f^*g); the transpose must be an iso.
    """
    ctx = env.ctx
    f, g = env.cospan()
    a = f.dst
    for h in env.slices_over(a)[:4]:
        gs = ctx.slice(g)
        gh = ctx.pullback_functor(g, h)
        expo = ctx.pushforward(g, gh.slice)                 # h^g over A
        lhs = ctx.pullback_functor(f, expo.slice)           # f^*(h^g) over B
        fg = ctx.pullback_functor(f, gs)                    # f^* g over B
        fh = ctx.pullback_functor(f, h)                     # f^* h over B
        fg_fh = ctx.pullback_functor(fg.slice.proj, fh.slice)
        rhs = ctx.pushforward(fg.slice.proj, fg_fh.slice)  # (f^*h)^(f^*g) over B
        pre = ctx.pullback_functor(fg.slice.proj, lhs.slice).square
        q1, q2 = pre.p1, pre.p2
        r1, r2 = lhs.square.p1, lhs.square.p2
        into_gt = expo.counit_domain.square.mediate(ctx.compose(fg.to_total, q1),
                                                    ctx.compose(r2, q2))
        delta = ctx.compose(gh.to_total, ctx.compose(expo.counit, into_gt))
        fh_elem = fh.square.mediate(ctx.compose(r1, q2), delta)
        u = fg_fh.square.mediate(q1, fh_elem)
        canon = rhs.transpose(lhs.slice, u)
        require(slice_iso(lhs.slice, rhs.slice, canon),
                "f^*(h^g) -> (f^*h)^(f^*g) is not invertible", f=f, g=g, h=h, comparison=canon)


# -- monomorphisms ---------------------------------------------------------

@check("MONO_PB_TRIVIAL", "pulling a mono back along itself after f is trivial")
def mono_pb_trivial(env: Env) -> None:
    """For monos m and maps f into their domain, the square with sides f and id over m . f must be
    a pullback.
    """
    ctx = env.ctx
    for m in env.monos():
        for b in env.ps:
            for f in ctx.hom_set(b, m.src)[:4]:
                sq = ctx.pullback(m, ctx.compose(m, f))
                canon = sq.mediate(f, ctx.identity(b))
                require(ctx.is_iso(canon), "square over a mono is not a pullback", m=m, f=f)


@check("MONO_COREFL", "m_! -| m^* has invertible unit for a mono m")
def mono_corefl(env: Env) -> None:
    """For a mono m the unit x -> m^* m_! x, built from the pullback mediator, must be an iso."""
    ctx = env.ctx
    for m in env.monos():
        for x in env.slices_over(m.src):
            back = ctx.pullback_functor(m, ctx.postcompose(m, x))
            unit = back.square.mediate(x.proj, ctx.identity(x.total))
            require(slice_iso(x, back.slice, unit), "unit of m_! -| m^* is not invertible", m=m, x=x)


@check("MONO_REFL", "m^* -| m_* has invertible counit for a mono m")
def mono_refl(env: Env) -> None:
    """For a mono m the counit m^* m_* x -> x must be an iso over the slice."""
    ctx = env.ctx
    for m in env.monos():
        for x in env.slices_over(m.src):
            pf = ctx.pushforward(m, x)
            require(ctx.is_iso(pf.counit) and
                    ctx.equal(ctx.compose(x.proj, pf.counit), pf.counit_domain.slice.proj),
                    "counit of m^* -| m_* is not invertible", m=m, x=x, counit=pf.counit)


@check("SUBTERM_EQUIV", "subterminals with maps both ways are isomorphic")
def subterm_equiv(env: Env) -> None:
    """Any pair of maps in opposite directions between subterminals must be mutually inverse."""
    ctx = env.ctx
    doms = [ctx.sub_domain(s)[0] for s in env.subterminals]
    for s in doms:
        for t in doms:
            fs, gs = ctx.hom_set(s, t), ctx.hom_set(t, s)
            for f in fs:
                for g in gs:
                    require(derived.IsoWitness(f, g).holds(ctx),
                            "maps between subterminals are not inverse", f=f, g=g)


@check("SECTION_MONO", "a map with a retraction is monic")
def section_mono(env: Env) -> None:
    """Every section found among instance presheaves (e . m = id) must be monic."""
    for m, e in env.retracts:
        require(env.ctx.is_mono(m), "section is not monic", m=m, e=e)


# -- object of contractibility ---------------------------------------------

def _contr_object(ctx: LccContext, p: PresheafMorphism) -> PresheafMorphism:
    kernel = ctx.pullback(p, p)
    ident = ctx.identity(p.src)
    pushed = ctx.pushforward(kernel.p1, ctx.slice(kernel.mediate(ident, ident)))
    return ctx.postcompose(p, pushed.slice).proj


@check("ISCONTR_SUBTERM", "isContr(A) is subterminal")
def iscontr_subterm(env: Env) -> None:
    """isContr(A) -> 1 must be monic for the instance presheaves, 1 and the derived 0."""
    ctx = env.ctx
    for a in env.ps + (env.one, env.zero.obj):
        down = _contr_object(ctx, ctx.bang(a))
        require(ctx.is_mono(down), "isContr(A) -> 1 is not monic", A=a, map=down)


@check("ISCONTR_TERM", "A is terminal iff isContr(A) is")
def iscontr_term(env: Env) -> None:
    """isContr(A) is maximal exactly when A is terminal, judged by hom-set counts and by carriers.
    """
    ctx = env.ctx
    corpus = env.ps + (env.one, env.om.omega)
    for a in env.ps + (env.one, env.zero.obj, ctx.product(env.one, env.one).obj):
        maximal = derived.is_contr(ctx, a) == ctx.sub_top(env.one)
        terminal_by_homs = all(len(ctx.hom_set(x, a)) == 1 for x in corpus)
        require(maximal == terminal_by_homs == is_terminal_object(a),
                "isContr(A) maximality disagrees with terminality", A=a)


@check("ISCONTR_PB", "isContr commutes with pullback")
def iscontr_pb(env: Env) -> None:
    """Reindexing isContr(A) along B -> 1 must equal the relative isContr of the projection B x A
    -> B.
    """
    ctx = env.ctx
    for a in env.ps:
        c = derived.is_contr(ctx, a)
        for b in env.ps:
            lhs = ctx.sub_pullback(ctx.bang(b), c)
            rhs = derived.is_contr_relative(ctx, ctx.product(b, a).p1)
            require(lhs == rhs, "B^* isContr(A) differs from isContr(B^* A)", A=a, B=b,
                    lhs=lhs, rhs=rhs)


# -- subobject classifier and joins ----------------------------------------

@check("OMEGA_U_TERMINAL", "the domain of tt is terminal and Omega classifies subobjects")
def omega_u_terminal(env: Env) -> None:
    """tt and ff are monos out of 1, the derived ff is the empty sieve, |hom(A, Omega)| = |Sub(A)|
    and classify/unclassify are mutually inverse.
    """
    ctx = env.ctx
    om = env.om
    require(is_terminal_object(om.tt.src) and ctx.is_mono(om.tt), "tt is not a mono out of 1", tt=om.tt)
    require(ctx.is_mono(om.ff), "ff is not monic", ff=om.ff)
    require(ctx.equal(derived.false_point(ctx), om.ff), "derived ff differs from the empty sieve",
            ff=om.ff)
    for a in env.ps:
        subs = all_subobjects(a, ctx.budget)
        chis = ctx.hom_set(a, om.omega)
        require(len(chis) == len(subs), "|hom(A, Omega)| differs from |Sub(A)|", A=a)
        for s in subs:
            require(ctx.unclassify(ctx.classify(s)) == s, "classify/unclassify round trip fails", sub=s)
        for chi in chis:
            require(ctx.equal(ctx.classify(ctx.unclassify(chi)), chi),
                    "unclassify/classify round trip fails", chi=chi)


@check("NOT_RETRACT", "forall_e U <= m^* U for a retraction e of m")
def not_retract(env: Env) -> None:
    """For every retraction pair e . m = id and every subobject U, forall_e U <= m^* U."""
    ctx = env.ctx
    for m, e in env.retracts:
        for u in all_subobjects(m.dst, ctx.budget):
            require(ctx.sub_leq(ctx.sub_forall(e, u), ctx.sub_pullback(m, u)),
                    "forall_e U is not below m^* U", m=m, e=e, U=u)


@check("SUB_JOIN_LAWS", "Sub(A) has a least element and binary joins")
def sub_join_laws(env: Env) -> None:
    """The derived bottom is below every subobject and the derived join is the least upper bound,
    by scanning all subobjects.
    """
    ctx = env.ctx
    for a in env.ps[:2]:
        subs = all_subobjects(a, ctx.budget)
        bot = derived.bottom_subobject(ctx, a)
        require(all(ctx.sub_leq(bot, s) for s in subs), "bottom is not least", A=a, bottom=bot)
        for u in subs:
            for v in subs:
                j = derived.join_subobjects(ctx, u, v)
                require(ctx.sub_leq(u, j) and ctx.sub_leq(v, j), "join is not an upper bound",
                        U=u, V=v, join=j)
                for w in subs:
                    if ctx.sub_leq(u, w) and ctx.sub_leq(v, w):
                        require(ctx.sub_leq(j, w), "join is not least", U=u, V=v, W=w, join=j)


# -- initial object --------------------------------------------------------

def _initial_conditions(ctx: LccContext, i: Presheaf, corpus: Iterable[Presheaf]):
    corpus = list(corpus)
    initial = all(len(ctx.hom_set(i, x)) == 1 for x in corpus)
    slices = [ctx.product(i, x).p1 for x in corpus]
    slices += [f for x in corpus for f in ctx.hom_set(x, i)[:3]]
    trivial_slice = all(ctx.is_iso(f) for f in slices)
    trivial_sub = len(all_subobjects(i, ctx.budget)) == 1
    return initial, trivial_slice, trivial_sub


@check("INITIAL_EQUIV", "initial <=> trivial slice <=> trivial Sub")
def initial_equiv(env: Env) -> None:
    """The derived 0 is initial, every map into it is iso and Sub(0) is trivial; for every instance
    presheaf these three conditions agree.
    """
    ctx = env.ctx
    zero = env.zero
    corpus = env.ps + (env.one, env.om.omega)
    conds = _initial_conditions(ctx, zero.obj, corpus)
    require(all(conds), "derived 0 fails one of the initial-object conditions", zero=zero.obj,
            conditions=list(conds))
    for i in env.ps:
        conds = _initial_conditions(ctx, i, corpus)
        require(len(set(conds)) == 1, "initial-object conditions disagree", I=i, conditions=list(conds))


# -- coproducts ------------------------------------------------------------

@check("DISJ_EMB", "A and 1 embed disjointly into the partial-map classifier")
def disj_emb(env: Env) -> None:
    """The partial-map classifier embeds A and 1 by monos whose pullback is the derived 0."""
    ctx = env.ctx
    for a in env.ps:
        try:
            pm = derived.partial_map_classifier(ctx, a, env.zero)
        except derived.ConstructionError as e:
            raise CheckFailed(str(e), A=describe(a))
        require(ctx.is_mono(pm.eta) and ctx.is_mono(pm.point), "embeddings not monic", A=a)
        require(pm.disjoint_iso.holds(ctx), "intersection is not initial", A=a)


@check("COVER_CONTR", "contractible on a cover implies contractible")
def cover_contr(env: Env) -> None:
    """If subterminals U, V cover 1 and A is contractible over both, A is terminal."""
    ctx = env.ctx
    top = ctx.sub_top(env.one)
    subs = env.subterminals
    for u in subs:
        for v in subs:
            if derived.join_subobjects(ctx, u, v) != top:
                continue
            du, dv = ctx.sub_domain(u)[0], ctx.sub_domain(v)[0]
            for a in env.ps + (env.one,):
                on_u = ctx.is_iso(ctx.product(du, a).p1)
                on_v = ctx.is_iso(ctx.product(dv, a).p1)
                if on_u and on_v:
                    require(is_terminal_object(a) and ctx.is_iso(ctx.bang(a)),
                            "A is contractible on a cover but not terminal", U=u, V=v, A=a)


def _coproduct(env: Env, a: Presheaf, b: Presheaf) -> derived.CoproductData:
    try:
        return derived.binary_coproduct(env.ctx, a, b, env.zero)
    except derived.ConstructionError as e:
        raise CheckFailed(f"coproduct construction failed: {e}", A=describe(a), B=describe(b))


def coproduct_bijection(ctx: LccContext, data: derived.CoproductData, x: Presheaf) -> None:
    """``h -> (h . inl, h . inr)`` is a bijection ``hom(C, X) -> hom(A, X) x hom(B, X)``."""
    images = set()
    for h in ctx.hom_set(data.obj, x):
        key = (ctx.compose(h, data.inl).components, ctx.compose(h, data.inr).components)
        require(key not in images, "two maps out of the coproduct restrict equally", X=x, h=h)
        images.add(key)
    n_pairs = len(ctx.hom_set(data.left, x)) * len(ctx.hom_set(data.right, x))
    require(len(images) == n_pairs, "copairing is not surjective", X=x,
            maps=len(images), pairs=n_pairs)


@check("COPROD_UNIV", "the carved-out object is a coproduct")
def coprod_univ(env: Env) -> None:
    """Restriction along the injections is a bijection hom(C, X) -> hom(A, X) x hom(B, X); search
    and graph copairs agree.
    """
    ctx = env.ctx
    for a, b in ((env.ps[0], env.ps[1]), (env.ps[1], env.ps[2]), (env.zero.obj, env.ps[0])):
        data = _coproduct(env, a, b)
        for x in env.ps + (env.one, env.om.omega):
            coproduct_bijection(ctx, data, x)
        fs, gs = ctx.hom_set(a, env.om.omega), ctx.hom_set(b, env.om.omega)
        h = derived.copair(ctx, data, fs[-1], gs[0])
        require(ctx.equal(ctx.compose(h, data.inl), fs[-1]) and ctx.equal(ctx.compose(h, data.inr), gs[0]),
                "copair does not restrict correctly", h=h)
        require(ctx.equal(h, derived.copair_via_graph(ctx, data, fs[-1], gs[0])),
                "copair by search and by graph disagree", h=h)


@check("COPROD_NATIVE_ISO", "derived coproduct is isomorphic to the pointwise disjoint union")
def coprod_native_iso(env: Env) -> None:
    """The derived coproduct and the pointwise disjoint union are related by an explicit inverse
    pair built from both copairings.
    """
    ctx = env.ctx
    for a, b in ((env.ps[0], env.ps[1]), (env.ps[2], env.ps[0]), (env.one, env.one)):
        data = _coproduct(env, a, b)
        nat = native_coproduct_oracle(a, b)
        fwd = derived.copair_via_graph(ctx, data, nat.inl, nat.inr)
        bwd = nat.copair(data.inl, data.inr)
        require(not check_morphism(bwd), "oracle copair is not natural", map=bwd)
        require(derived.IsoWitness(fwd, bwd).holds(ctx), "no isomorphism to the native coproduct",
                A=a, B=b, forward=fwd, backward=bwd)


# Larger slice hom-sets are compared by cardinality only.
DESCENT_EXPLICIT_LIMIT = 2000


@check("DESCENT", "slices over A + B split as products of slices")
def descent(env: Env) -> None:
    """Each slice over A + B is recovered by gluing its two restrictions, and slice hom-sets split
    as products of the restricted hom-sets.
    """
    ctx = env.ctx
    data = _coproduct(env, env.ps[0], env.ps[1])
    xs = env.slices_over(data.obj, limit=2)
    for x in xs:
        dc = derived.descent_comparison(ctx, data, x, env.zero)
        require(ctx.is_iso(dc.comparison), "gluing the restrictions does not recover x", x=x,
                comparison=dc.comparison)
        require(ctx.equal(ctx.compose(x.proj, dc.comparison), dc.glued_over),
                "comparison is not a map over the coproduct", x=x)
    # product slices have exponentially many maps between them; the
    # comparison above already covers them
    small = env.slices_over(data.obj, limit=2, with_product=False)[:3]
    for x in small:
        for y in small:
            homs = ctx.slice_hom_set(x, y)
            lx, ly = ctx.pullback_functor(data.inl, x), ctx.pullback_functor(data.inl, y)
            rx, ry = ctx.pullback_functor(data.inr, x), ctx.pullback_functor(data.inr, y)
            n_left = len(ctx.slice_hom_set(lx.slice, ly.slice))
            n_right = len(ctx.slice_hom_set(rx.slice, ry.slice))
            require(len(homs) == n_left * n_right, "slice maps do not split over the summands",
                    x=x, y=y, homs=len(homs), pairs=n_left * n_right)
            if len(homs) > DESCENT_EXPLICIT_LIMIT:
                continue
            seen = set()
            for u in homs:
                ul = ly.square.mediate(lx.slice.proj, ctx.compose(u, lx.to_total))
                ur = ry.square.mediate(rx.slice.proj, ctx.compose(u, rx.to_total))
                seen.add((ul.components, ur.components))
            require(len(seen) == len(homs) == n_left * n_right,
                    "restriction to the summands is not a bijection on slice maps",
                    x=x, y=y, homs=len(homs), restricted=len(seen), pairs=n_left * n_right)


CHECK_IDS = tuple(CATALOG)


# -- running ---------------------------------------------------------------

def run_one(check_id: str, env: Env) -> CheckResult:
    if check_id not in CATALOG:
        raise KeyError(f"unknown check id {check_id!r}")
    _, fn = CATALOG[check_id]
    t0 = time.perf_counter()
    try:
        fn(env)
        verdict, witness = "pass", None
    except CheckFailed as e:
        verdict, witness = "fail", e.witness
    except BudgetExceeded as e:
        verdict, witness = "budget-exceeded", {"reason": str(e)}
    except Exception as e:  # a crashing backend is a failing backend
        verdict, witness = "fail", {"reason": f"{type(e).__name__}: {e}"}
    return CheckResult(check_id, env.instance.id, verdict, witness, time.perf_counter() - t0)


def run_check(check_id: str, instances: Iterable[Instance], budget: int = DEFAULT_BUDGET,
              backend: Callable[..., PresheafTopos] = PresheafTopos) -> List[CheckResult]:
    if check_id not in CATALOG:
        raise KeyError(f"unknown check id {check_id!r}")
    return [run_one(check_id, Env(inst, backend(inst.base, budget))) for inst in instances]


def run_suite(check_ids: Iterable[str], instances: Iterable[Instance], budget: int = DEFAULT_BUDGET,
              backend: Callable[..., PresheafTopos] = PresheafTopos) -> List[CheckResult]:
    ids = list(check_ids)
    for cid in ids:
        if cid not in CATALOG:
            raise KeyError(f"unknown check id {cid!r}")
    results = []
    for inst in instances:
        env = Env(inst, backend(inst.base, budget))
        for cid in ids:
            results.append(run_one(cid, env))
    results.sort(key=lambda r: (r.check_id, r.instance))
    return results
