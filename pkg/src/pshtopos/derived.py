"""Colimits derived from finite limits, dependent products and Omega.

Every function takes an :class:`~pshtopos.lcc.LccContext` and uses nothing
else: the initial object is the domain of the least subterminal, binary
coproducts are carved out of a product of partial-map classifiers as a join
of subobjects, and copairing is read off an exhaustive scan of the hom-set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple

from .lcc import LccContext

if TYPE_CHECKING:
    from .presheaf import Presheaf, PresheafMorphism, Pullback, SliceObject, SubPresheaf


class ConstructionError(RuntimeError):
    """A step the construction relies on did not hold on this instance."""


class NoCopair(ConstructionError):
    pass


class AmbiguousCopair(ConstructionError):
    pass


@dataclass(frozen=True)
class IsoWitness:
    forward: "PresheafMorphism"
    backward: "PresheafMorphism"

    def holds(self, ctx: LccContext) -> bool:
        f, g = self.forward, self.backward
        if f.src != g.dst or f.dst != g.src:
            return False
        return (ctx.equal(ctx.compose(g, f), ctx.identity(f.src))
                and ctx.equal(ctx.compose(f, g), ctx.identity(f.dst)))


def iso_witness(ctx: LccContext, forward, backward) -> IsoWitness:
    w = IsoWitness(forward, backward)
    if not w.holds(ctx):
        raise ConstructionError("maps are not mutually inverse")
    return w


def lift(ctx: LccContext, m: "PresheafMorphism", g: "PresheafMorphism") -> "PresheafMorphism":
    """Factor ``g`` through the mono ``m`` (``m . result = g``)."""
    pb = ctx.pullback(g, m)
    if not ctx.is_iso(pb.p1):
        raise ConstructionError("map does not factor through the monomorphism")
    return ctx.compose(pb.p2, ctx.inverse(pb.p1))


# -- contractibility -------------------------------------------------------

def is_contr_relative(ctx: LccContext, p: "PresheafMorphism") -> "SubPresheaf":
    """``isContr_I(X)`` for ``p: X -> I``, as a subobject of ``I``.

    Push the diagonal of ``X`` over ``X x_I X`` forward along the first
    projection, then forget down to ``I``.
    """
    kernel = ctx.pullback(p, p)
    ident = ctx.identity(p.src)
    delta = kernel.mediate(ident, ident)
    pushed = ctx.pushforward(kernel.p1, ctx.slice(delta))
    down = ctx.postcompose(p, pushed.slice)
    if not ctx.is_mono(down.proj):
        raise ConstructionError("object of contractibility is not subterminal")
    return ctx.mono_image(down.proj)


def is_contr(ctx: LccContext, a: "Presheaf") -> "SubPresheaf":
    return is_contr_relative(ctx, ctx.bang(a))


# -- joins in Sub(A) -------------------------------------------------------

def _generic_predicate(ctx: LccContext, a: "Presheaf"):
    om = ctx.omega()
    prod = ctx.product(a, om.omega)
    truth = ctx.sub_pullback(prod.p2, ctx.mono_image(om.tt))
    return prod, truth


def bottom_subobject(ctx: LccContext, a: "Presheaf") -> "SubPresheaf":
    """Least subobject: universally quantify ``pi_2^* tt`` along ``pi_1: A x Omega -> A``."""
    prod, truth = _generic_predicate(ctx, a)
    return ctx.sub_forall(prod.p1, truth)


def join_subobjects(ctx: LccContext, u: "SubPresheaf", v: "SubPresheaf") -> "SubPresheaf":
    """Least upper bound via the second-order encoding over ``A x Omega``."""
    if u.ambient != v.ambient:
        raise ValueError("subobjects of different presheaves")
    prod, truth = _generic_predicate(ctx, u.ambient)
    imp_u = ctx.sub_implies(ctx.sub_pullback(prod.p1, u), truth)
    imp_v = ctx.sub_implies(ctx.sub_pullback(prod.p1, v), truth)
    body = ctx.sub_implies(ctx.sub_meet(imp_u, imp_v), truth)
    return ctx.sub_forall(prod.p1, body)


def join_all(ctx: LccContext, a: "Presheaf", subs: Sequence["SubPresheaf"]) -> "SubPresheaf":
    acc = bottom_subobject(ctx, a)
    for s in subs:
        acc = join_subobjects(ctx, acc, s)
    return acc


# -- initial object --------------------------------------------------------

@dataclass(frozen=True)
class InitialObject:
    obj: "Presheaf"
    inclusion: "PresheafMorphism"  # 0 >-> 1
    ctx: LccContext = field(repr=False, compare=False)

    def to(self, a: "Presheaf") -> "PresheafMorphism":
        """The unique map ``0 -> a``; a zero- or multi-element hom-set is fatal."""
        homs = self.ctx.hom_set(self.obj, a)
        if len(homs) != 1:
            raise ConstructionError(f"hom(0, A) has {len(homs)} elements")
        return homs[0]

    def witness(self, p: "Presheaf") -> Optional[IsoWitness]:
        """An iso ``p ~ 0`` when ``p`` admits a map into ``0``, else ``None``."""
        ctx = self.ctx
        pb = ctx.pullback(ctx.bang(p), self.inclusion)
        if not ctx.is_iso(pb.p1):
            return None
        into = ctx.compose(pb.p2, ctx.inverse(pb.p1))
        w = IsoWitness(into, self.to(p))
        return w if w.holds(ctx) else None


def initial_object(ctx: LccContext) -> InitialObject:
    one = ctx.terminal()
    zero, incl = ctx.sub_domain(bottom_subobject(ctx, one))
    return InitialObject(zero, incl, ctx)


def false_point(ctx: LccContext) -> "PresheafMorphism":
    """``ff: 1 -> Omega``, the classifying map of the least subterminal."""
    return ctx.classify(bottom_subobject(ctx, ctx.terminal()))


# -- partial map classifier ------------------------------------------------

@dataclass(frozen=True)
class PartialMapClassifier:
    source: "Presheaf"
    obj: "Presheaf"
    classifier: "PresheafMorphism"  # obj -> Omega
    eta: "PresheafMorphism"         # A >-> obj
    point: "PresheafMorphism"       # 1 >-> obj
    disjoint: "Pullback"
    disjoint_iso: IsoWitness


def partial_map_classifier(ctx: LccContext, a: "Presheaf",
                           zero: Optional[InitialObject] = None) -> PartialMapClassifier:
    zero = zero or initial_object(ctx)
    om = ctx.omega()
    pushed = ctx.pushforward(om.tt, ctx.slice(ctx.bang(a)))
    # tt is mono, so the counit tt^* tt_* a -> a is invertible.
    if not ctx.is_iso(pushed.counit):
        raise ConstructionError("counit of tt^* -| tt_* is not invertible")
    eta = ctx.compose(pushed.counit_domain.to_total, ctx.inverse(pushed.counit))
    ff = false_point(ctx)
    over_false = ctx.pullback_functor(ff, pushed.slice)
    if not ctx.is_iso(over_false.slice.proj):
        raise ConstructionError("fibre of the partial-map classifier over ff is not terminal")
    point = ctx.compose(over_false.to_total, ctx.inverse(over_false.slice.proj))
    if not (ctx.is_mono(eta) and ctx.is_mono(point)):
        raise ConstructionError("embeddings into the partial-map classifier are not monic")
    meet = ctx.pullback(eta, point)
    w = zero.witness(meet.obj)
    if w is None:
        raise ConstructionError("A and the extra point are not disjoint")
    return PartialMapClassifier(a, pushed.total, pushed.slice.proj, eta, point, meet, w)


# -- binary and finite coproducts -----------------------------------------

@dataclass(frozen=True)
class CoproductData:
    left: "Presheaf"
    right: "Presheaf"
    obj: "Presheaf"
    inl: "PresheafMorphism"
    inr: "PresheafMorphism"
    disjoint: "Pullback"
    disjoint_iso: IsoWitness
    ambient: "Presheaf"              # Abar x Bbar
    embed_left: "PresheafMorphism"   # A >-> ambient
    embed_right: "PresheafMorphism"  # B >-> ambient
    carve: "SubPresheaf"             # A v B in Sub(ambient)
    left_classifier: PartialMapClassifier
    right_classifier: PartialMapClassifier


def binary_coproduct(ctx: LccContext, a: "Presheaf", b: "Presheaf",
                     zero: Optional[InitialObject] = None) -> CoproductData:
    zero = zero or initial_object(ctx)
    pa = partial_map_classifier(ctx, a, zero)
    pb_ = partial_map_classifier(ctx, b, zero)
    amb = ctx.product(pa.obj, pb_.obj)
    emb_a = amb.mediate(pa.eta, ctx.compose(pb_.point, ctx.bang(a)))
    emb_b = amb.mediate(ctx.compose(pa.point, ctx.bang(b)), pb_.eta)
    u, v = ctx.mono_image(emb_a), ctx.mono_image(emb_b)
    carve = join_subobjects(ctx, u, v)
    c, incl = ctx.sub_domain(carve)
    inl, inr = lift(ctx, incl, emb_a), lift(ctx, incl, emb_b)
    if not (ctx.is_mono(inl) and ctx.is_mono(inr)):
        raise ConstructionError("coproduct injections are not monic")
    img_l, img_r = ctx.mono_image(inl), ctx.mono_image(inr)
    if ctx.sub_meet(img_l, img_r) != bottom_subobject(ctx, c):
        raise ConstructionError("summands meet above the least subobject")
    if join_subobjects(ctx, img_l, img_r) != ctx.sub_top(c):
        raise ConstructionError("summands do not cover the coproduct")
    meet = ctx.pullback(inl, inr)
    w = zero.witness(meet.obj)
    if w is None:
        raise ConstructionError("injections are not disjoint")
    return CoproductData(a, b, c, inl, inr, meet, w, amb.obj, emb_a, emb_b, carve, pa, pb_)


def _check_copair_args(data: CoproductData, f, g) -> None:
    if f.dst != g.dst:
        raise ValueError("copair needs maps with a common codomain")
    if f.src != data.left or g.src != data.right:
        raise ValueError("copair: maps do not start at the summands")


def copair(ctx: LccContext, data: CoproductData, f: "PresheafMorphism",
           g: "PresheafMorphism") -> "PresheafMorphism":
    """The unique ``h: C -> X`` with ``h . inl = f`` and ``h . inr = g``.

    Uniqueness is asserted by scanning all of ``hom(C, X)``.
    """
    _check_copair_args(data, f, g)
    found = [h for h in ctx.hom_set(data.obj, f.dst)
             if ctx.equal(ctx.compose(h, data.inl), f) and ctx.equal(ctx.compose(h, data.inr), g)]
    if not found:
        raise NoCopair("no map out of the coproduct restricts to the given pair")
    if len(found) > 1:
        raise AmbiguousCopair(f"{len(found)} maps out of the coproduct restrict to the given pair")
    return found[0]


def copair_via_graph(ctx: LccContext, data: CoproductData, f: "PresheafMorphism",
                     g: "PresheafMorphism") -> "PresheafMorphism":
    """Same as :func:`copair`, without enumerating ``hom(C, X)``.

    The graph of ``h`` is the join of the images of ``<inl, f>`` and
    ``<inr, g>`` in ``Sub(C x X)``; it is functional iff its first leg is
    invertible.
    """
    _check_copair_args(data, f, g)
    prod = ctx.product(data.obj, f.dst)
    left = ctx.mono_image(prod.mediate(data.inl, f))
    right = ctx.mono_image(prod.mediate(data.inr, g))
    graph, incl = ctx.sub_domain(join_subobjects(ctx, left, right))
    leg = ctx.compose(prod.p1, incl)
    if not ctx.is_mono(leg):
        raise AmbiguousCopair("the joined graph is not single-valued")
    if not ctx.is_iso(leg):
        raise NoCopair("the joined graph is not total")
    h = ctx.compose(ctx.compose(prod.p2, incl), ctx.inverse(leg))
    if not (ctx.equal(ctx.compose(h, data.inl), f) and ctx.equal(ctx.compose(h, data.inr), g)):
        raise NoCopair("the glued map does not restrict to the given pair")
    return h


@dataclass(frozen=True)
class FiniteCoproduct:
    summands: Tuple["Presheaf", ...]
    obj: "Presheaf"
    injections: Tuple["PresheafMorphism", ...]
    steps: Tuple[CoproductData, ...]


def finite_coproduct(ctx: LccContext, objs: Sequence["Presheaf"],
                     zero: Optional[InitialObject] = None) -> FiniteCoproduct:
    """Left fold of :func:`binary_coproduct`; the empty family gives ``0``."""
    zero = zero or initial_object(ctx)
    objs = tuple(objs)
    if not objs:
        return FiniteCoproduct((), zero.obj, (), ())
    acc = objs[0]
    injections: List["PresheafMorphism"] = [ctx.identity(acc)]
    steps = []
    for nxt in objs[1:]:
        data = binary_coproduct(ctx, acc, nxt, zero)
        injections = [ctx.compose(data.inl, i) for i in injections] + [data.inr]
        steps.append(data)
        acc = data.obj
    return FiniteCoproduct(objs, acc, tuple(injections), tuple(steps))


def coproduct_associator(ctx: LccContext, a: "Presheaf", b: "Presheaf", c: "Presheaf",
                         zero: Optional[InitialObject] = None) -> IsoWitness:
    """``(A + B) + C ~ A + (B + C)`` from copairings alone."""
    zero = zero or initial_object(ctx)
    ab = binary_coproduct(ctx, a, b, zero)
    ab_c = binary_coproduct(ctx, ab.obj, c, zero)
    bc = binary_coproduct(ctx, b, c, zero)
    a_bc = binary_coproduct(ctx, a, bc.obj, zero)
    fwd = copair(ctx, ab_c,
                 copair(ctx, ab, a_bc.inl, ctx.compose(a_bc.inr, bc.inl)),
                 ctx.compose(a_bc.inr, bc.inr))
    bwd = copair(ctx, a_bc,
                 ctx.compose(ab_c.inl, ab.inl),
                 copair(ctx, bc, ctx.compose(ab_c.inl, ab.inr), ab_c.inr))
    return iso_witness(ctx, fwd, bwd)


# -- descent ---------------------------------------------------------------

@dataclass(frozen=True)
class DescentComparison:
    x: "SliceObject"
    left_part: "SliceObject"   # inl^* x
    right_part: "SliceObject"  # inr^* x
    glued: CoproductData       # coproduct of the two totals
    comparison: "PresheafMorphism"  # glued.obj -> x.total
    glued_over: "PresheafMorphism"  # glued.obj -> C


def descent_comparison(ctx: LccContext, data: CoproductData, x: "SliceObject",
                       zero: Optional[InitialObject] = None) -> DescentComparison:
    """Glue ``inl^* x`` and ``inr^* x`` back together and map the result to ``x``."""
    left = ctx.pullback_functor(data.inl, x)
    right = ctx.pullback_functor(data.inr, x)
    glued = binary_coproduct(ctx, left.slice.total, right.slice.total, zero)
    comparison = copair_via_graph(ctx, glued, left.to_total, right.to_total)
    over = copair_via_graph(ctx, glued, ctx.compose(data.inl, left.slice.proj),
                            ctx.compose(data.inr, right.slice.proj))
    return DescentComparison(x, left.slice, right.slice, glued, comparison, over)
