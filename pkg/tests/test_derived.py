import pytest
from hypothesis import given, settings, strategies as st

from pshtopos import derived
from pshtopos.fincat import curated_bases, graph_category, terminal_category
from pshtopos.lcc import restrict
from pshtopos.presheaf import PresheafTopos, SliceObject, hom_set, same_morphism
from pshtopos.sublattice import all_subobjects, sub_leq, sub_top
from pshtopos.verify.corpus import presheaf_corpus
from pshtopos.verify.oracle import native_coproduct_oracle

from conftest import finite_set, function

BASES = ["terminal", "arrow", "graph"]


def ctx_for(base):
    return restrict(PresheafTopos(base))


@pytest.fixture(scope="module")
def sets():
    return restrict(PresheafTopos(terminal_category()))


@pytest.fixture(scope="module")
def graphs():
    return restrict(PresheafTopos(graph_category()))


# -- contractibility -------------------------------------------------------

@pytest.mark.parametrize("n, contractible", [(0, False), (1, True), (2, False), (3, False)])
def test_is_contr_on_sets(sets, n, contractible):
    s = derived.is_contr(sets, finite_set(n))
    one = sets.terminal()
    assert (s == sub_top(one)) == contractible
    # agrees with terminality read off hom-sets
    assert contractible == all(len(hom_set(finite_set(k), finite_set(n))) == 1 for k in range(3))


@pytest.mark.parametrize("name", BASES)
def test_is_contr_matches_terminality(name):
    base = curated_bases()[name]
    ctx = ctx_for(base)
    corpus = presheaf_corpus(base, 2, 3)
    for a in corpus:
        maximal = derived.is_contr(ctx, a) == sub_top(ctx.terminal())
        assert maximal == all(len(hom_set(x, a)) == 1 for x in corpus)


def test_is_contr_relative_over_trivial_base(graphs):
    # Sub(I) trivial forces isContr_I(X) maximal for any X -> I
    zero = derived.initial_object(graphs)
    p = zero.to(zero.obj)
    assert len(all_subobjects(zero.obj)) == 1
    assert derived.is_contr_relative(graphs, p) == sub_top(zero.obj)


# -- bottom and join -------------------------------------------------------

@pytest.mark.parametrize("name", BASES)
def test_bottom_is_empty_and_least(name):
    ctx = ctx_for(curated_bases()[name])
    for a in presheaf_corpus(ctx.terminal().base, 3, 4):
        bot = derived.bottom_subobject(ctx, a)
        assert not any(bot.selected)
        assert sub_leq(bot, bot)
        assert all(sub_leq(bot, u) for u in all_subobjects(a))


@given(st.integers(0, 4), st.data())
@settings(max_examples=30)
def test_join_on_sets_is_union(n, data):
    ctx = restrict(PresheafTopos(terminal_category()))
    subs = all_subobjects(finite_set(n))
    u, v = data.draw(st.sampled_from(subs)), data.draw(st.sampled_from(subs))
    assert derived.join_subobjects(ctx, u, v).selected[0] == u.selected[0] | v.selected[0]


def test_join_all_of_nothing_is_bottom(graphs, edge):
    assert derived.join_all(graphs, edge, []) == derived.bottom_subobject(graphs, edge)
    subs = all_subobjects(edge)
    assert derived.join_all(graphs, edge, subs) == sub_top(edge)


def test_join_rejects_mixed_ambients(sets):
    with pytest.raises(ValueError):
        derived.join_subobjects(sets, sub_top(finite_set(1)), sub_top(finite_set(2)))


# -- initial object --------------------------------------------------------

@pytest.mark.parametrize("name", BASES)
def test_initial_object(name):
    base = curated_bases()[name]
    ctx = ctx_for(base)
    zero = derived.initial_object(ctx)
    assert zero.obj.total_size == 0
    assert zero.obj == ctx.sub_domain(derived.bottom_subobject(ctx, ctx.terminal()))[0]
    for a in presheaf_corpus(base, 2, 3):
        zero.to(a)
        assert (zero.witness(a) is not None) == (a.total_size == 0)


def test_false_point_classifies_bottom(sets):
    om = sets.omega()
    ff = derived.false_point(sets)
    assert not same_morphism(ff, om.tt)
    assert same_morphism(ff, om.ff)


# -- partial map classifier ------------------------------------------------

@pytest.mark.parametrize("n", range(4))
def test_partial_map_classifier_on_sets(sets, n):
    pm = derived.partial_map_classifier(sets, finite_set(n))
    assert pm.obj.sizes == (n + 1,)
    assert pm.disjoint.obj.total_size == 0
    # partial maps from 1 into A: n defined ones plus the undefined one
    assert len(hom_set(sets.terminal(), pm.obj)) == n + 1


def test_partial_map_classifier_of_zero_is_terminal(sets):
    zero = derived.initial_object(sets)
    pm = derived.partial_map_classifier(sets, zero.obj)
    assert pm.obj.sizes == (1,)
    assert same_morphism(pm.eta, zero.to(pm.obj))


def test_partial_map_classifier_of_loop(graphs, loop):
    pm = derived.partial_map_classifier(graphs, loop)
    assert graphs.is_mono(pm.eta) and graphs.is_mono(pm.point)
    assert pm.disjoint.obj.total_size == 0
    assert pm.obj.size(0) >= 2 and pm.obj.size(1) >= 2


# -- coproducts ------------------------------------------------------------

def test_coproduct_of_sets(sets):
    data = derived.binary_coproduct(sets, finite_set(2), finite_set(1))
    assert data.obj.sizes == (3,)
    assert data.disjoint.obj.total_size == 0


def test_coproduct_with_zero_on_the_left(sets):
    zero = derived.initial_object(sets)
    b = finite_set(2)
    data = derived.binary_coproduct(sets, zero.obj, b, zero)
    assert sets.is_iso(data.inr)
    assert same_morphism(derived.copair(sets, data, zero.to(b), sets.identity(b)),
                         sets.inverse(data.inr))


def test_coproduct_of_edge_and_node(graphs, edge, node):
    data = derived.binary_coproduct(graphs, edge, node)
    v, e = (graph_category().object_id(x) for x in ("V", "E"))
    assert data.obj.size(v) == 3 and data.obj.size(e) == 1
    nat = native_coproduct_oracle(edge, node)
    fwd = derived.copair(graphs, data, nat.inl, nat.inr)
    bwd = nat.copair(data.inl, data.inr)
    assert derived.IsoWitness(fwd, bwd).holds(graphs)


def test_copair_of_injections_is_identity(graphs, edge, node):
    data = derived.binary_coproduct(graphs, edge, node)
    h = derived.copair(graphs, data, data.inl, data.inr)
    assert same_morphism(h, graphs.identity(data.obj))


def test_copair_into_terminal_is_bang(graphs, edge, node):
    data = derived.binary_coproduct(graphs, edge, node)
    one = graphs.terminal()
    h = derived.copair(graphs, data, graphs.bang(edge), graphs.bang(node))
    assert same_morphism(h, graphs.bang(data.obj))
    assert h.dst == one


def test_copair_true_false_classifies_first_summand(sets):
    one = sets.terminal()
    om = sets.omega()
    data = derived.binary_coproduct(sets, one, one)
    h = derived.copair(sets, data, om.tt, om.ff)
    assert same_morphism(sets.compose(h, data.inl), om.tt)
    assert same_morphism(sets.compose(h, data.inr), om.ff)
    assert sets.unclassify(h) == sets.mono_image(data.inl)


@pytest.mark.parametrize("name", BASES)
def test_graph_copair_agrees_with_search(name):
    base = curated_bases()[name]
    ctx = ctx_for(base)
    ps = presheaf_corpus(base, 2, 2)
    for a in ps[:4]:
        for b in ps[:4]:
            data = derived.binary_coproduct(ctx, a, b)
            for x in ps[:4]:
                for f in hom_set(a, x)[:3]:
                    for g in hom_set(b, x)[:3]:
                        assert same_morphism(derived.copair(ctx, data, f, g),
                                             derived.copair_via_graph(ctx, data, f, g))


def test_copair_argument_checks(sets):
    data = derived.binary_coproduct(sets, finite_set(1), finite_set(1))
    f = sets.identity(finite_set(1))
    with pytest.raises(ValueError):
        derived.copair(sets, data, f, sets.bang(finite_set(1)))
    with pytest.raises(ValueError):
        derived.copair_via_graph(sets, data, sets.identity(finite_set(2)), sets.identity(finite_set(2)))


def test_finite_coproduct_of_sets(sets):
    fc = derived.finite_coproduct(sets, [finite_set(2), finite_set(1), finite_set(3)])
    assert fc.obj.sizes == (6,)
    for i, f in enumerate(fc.injections):
        for g in fc.injections[i + 1:]:
            assert sets.pullback(f, g).obj.total_size == 0
    images = sorted(x for f in fc.injections for x in f.components[0])
    assert images == list(range(6))


def test_finite_coproduct_edge_cases(sets):
    assert derived.finite_coproduct(sets, []).obj.total_size == 0
    a = finite_set(2)
    fc = derived.finite_coproduct(sets, [a])
    assert fc.obj == a and same_morphism(fc.injections[0], sets.identity(a))


@pytest.mark.parametrize("sizes", [(1, 1, 1), (2, 0, 1), (0, 2, 2)])
def test_associator_on_sets(sets, sizes):
    w = derived.coproduct_associator(sets, *(finite_set(n) for n in sizes))
    assert w.holds(sets)


def test_associator_on_graphs(graphs, edge, node, loop):
    assert derived.coproduct_associator(graphs, node, loop, node).holds(graphs)


def test_lift_rejects_non_factoring_map(sets):
    m = function(finite_set(1), finite_set(2), [0])
    g = function(finite_set(1), finite_set(2), [1])
    with pytest.raises(derived.ConstructionError):
        derived.lift(sets, m, g)


# -- descent ---------------------------------------------------------------

def test_descent_comparison_on_sets(sets):
    data = derived.binary_coproduct(sets, finite_set(2), finite_set(1))
    x = SliceObject(finite_set(4), function(finite_set(4), data.obj, [0, 0, 2, 1]))
    dc = derived.descent_comparison(sets, data, x)
    assert sets.is_iso(dc.comparison)
    assert same_morphism(sets.compose(x.proj, dc.comparison), dc.glued_over)
    assert dc.left_part.total.total_size + dc.right_part.total.total_size == 4
