"""
Truth values for directed graphs
================================

Directed graphs are presheaves on the base with two objects V, E and two
arrows s, t: V -> E.  Here we compute the subobject classifier Omega, see
why it has 2 vertices and 5 edges, and watch its logic fail to be Boolean.
"""

from pshtopos.fincat import graph_category
from pshtopos.presheaf import classify, make_presheaf, omega
from pshtopos.sublattice import all_subobjects, sub_implies

G = graph_category()
om = omega(G)
print("Omega sizes (V, E):", om.omega.sizes)

# The elements of Omega(c) are sieves on c, listed by their arrows.  Over E
# a sieve may contain s, t, both, or everything.
for c, obj in enumerate(G.objects):
    print(obj, list(om.omega.carrier[c]))

###############################################################################
# A single edge with distinct endpoints.  Each of its 5 subgraphs has a
# classifying map into Omega.

edge = make_presheaf(G, {"V": ["a", "b"], "E": ["e"]}, {"s": {"e": "a"}, "t": {"e": "b"}})
for sub in all_subobjects(edge):
    chi = classify(sub, om)
    print([sorted(x) for x in sub.selected], "->", chi.components)

###############################################################################
# Negation is ``U => bottom``.  Take the subgraph holding both endpoints but
# not the edge.  Its negation is empty, so its double negation is everything:
# the edge comes back, and excluded middle fails.

subs = all_subobjects(edge)
bottom = next(s for s in subs if not any(s.selected))
ends = next(s for s in subs if s.selected == (frozenset({0, 1}), frozenset()))
neg = sub_implies(ends, bottom)
negneg = sub_implies(neg, bottom)
print("not ends     :", [sorted(x) for x in neg.selected])
print("not not ends :", [sorted(x) for x in negneg.selected])
print("Boolean here?", negneg == ends)
