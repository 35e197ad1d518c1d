"""
Coproducts without colimits
===========================

The derived layer only sees an :class:`~pshtopos.lcc.LccContext`: finite
limits, dependent products and Omega.  From that alone we build the empty
graph, partial-map classifiers and the disjoint union of two graphs, then
check the result against a plain pointwise union built outside the context.
"""

from pshtopos import derived
from pshtopos.fincat import graph_category
from pshtopos.lcc import restrict
from pshtopos.presheaf import PresheafTopos, make_presheaf
from pshtopos.verify import native_coproduct_oracle

G = graph_category()
ctx = restrict(PresheafTopos(G))

edge = make_presheaf(G, {"V": ["a", "b"], "E": ["e"]}, {"s": {"e": "a"}, "t": {"e": "b"}})
node = make_presheaf(G, {"V": ["n"], "E": []}, {"s": {}, "t": {}})

###############################################################################
# The initial object is the domain of the least subobject of 1.

zero = derived.initial_object(ctx)
print("0 has sizes", zero.obj.sizes)

###############################################################################
# The partial-map classifier adds one disjoint point to a graph.  For the
# edge it has the two old vertices plus a new one.  Its edges are the partially
# defined edges, and there are ten of them.

pm = derived.partial_map_classifier(ctx, edge, zero)
print("partial maps into edge:", pm.obj.sizes)
print("eta and the point meet in", pm.disjoint.obj.sizes)

###############################################################################
# The coproduct sits inside the product of two partial-map classifiers as
# the join of the two embedded summands.

data = derived.binary_coproduct(ctx, edge, node, zero)
print("edge + node:", data.obj.sizes, "inside an ambient of", data.ambient.sizes)

nat = native_coproduct_oracle(edge, node)
fwd = derived.copair(ctx, data, nat.inl, nat.inr)
bwd = nat.copair(data.inl, data.inr)
print("iso to the pointwise union:", derived.IsoWitness(fwd, bwd).holds(ctx))

###############################################################################
# Copairing is read off the hom-set: exactly one map out of the coproduct
# restricts to a given pair.  Send everything to the one-vertex loop.

loop = ctx.terminal()
h = derived.copair(ctx, data, ctx.bang(edge), ctx.bang(node))
print("maps edge+node -> loop:", len(ctx.hom_set(data.obj, loop)), "copair:", h.components)

###############################################################################
# Three summands, folded from the left.  Associativity is an explicit iso.

three = derived.finite_coproduct(ctx, [node, edge, node], zero)
print("node + edge + node:", three.obj.sizes)
print("associator holds:", derived.coproduct_associator(ctx, node, edge, node, zero).holds(ctx))
