from math import prod

import pytest
from hypothesis import given, strategies as st

from pshtopos.fincat import curated_bases, graph_category, terminal_category
from pshtopos.presheaf import (
    BudgetExceeded,
    NotACone,
    Presheaf,
    PresheafMorphism,
    bang,
    check_morphism,
    check_presheaf,
    classify,
    compose,
    exponential,
    hom_set,
    identity,
    inverse,
    is_iso,
    is_mono,
    make_presheaf,
    morphism_predicates,
    omega,
    postcompose,
    product,
    pullback,
    pullback_functor,
    pullback_functor_map,
    pushforward,
    representable,
    same_morphism,
    slice_hom_set,
    slice_iso,
    slice_of,
    sub_domain,
    terminal,
    unclassify,
)
from pshtopos.sublattice import all_subobjects, sub_top
from pshtopos.verify.corpus import presheaf_corpus

from conftest import brute_hom_count, brute_sieves, finite_set, function, graph


def corpus(name, max_total=3):
    return presheaf_corpus(curated_bases()[name], 3, max_total)


# -- presheaves and morphisms ----------------------------------------------

def test_make_presheaf_rejects_non_functorial_action():
    # a composite that disagrees with its factors cannot be built
    from pshtopos.fincat import build_category
    base = build_category(["a", "b", "c"], [("f", "a", "b"), ("g", "b", "c"), ("h", "a", "c")],
                          {("g", "f"): "h"})
    with pytest.raises(ValueError):
        make_presheaf(base, {"a": [0, 1], "b": [0], "c": [0]},
                      {"f": {0: 0}, "g": {0: 0}, "h": {0: 1}})


def test_check_morphism_flags_non_natural(edge, loop):
    bad = PresheafMorphism(edge, edge, ((1, 0), (0,)))
    assert check_morphism(bad)
    assert not check_morphism(identity(edge))


# -- terminal object -------------------------------------------------------

def test_terminal_over_terminal_base_is_point():
    assert terminal(terminal_category()).sizes == (1,)


def test_terminal_over_graph_base_is_loop(loop):
    one = terminal(graph_category())
    assert one.sizes == (1, 1)
    assert len(hom_set(one, loop)) == 1 and len(hom_set(loop, one)) == 1


@pytest.mark.parametrize("name", ["terminal", "arrow", "graph"])
def test_everything_maps_uniquely_to_terminal(name):
    one = terminal(curated_bases()[name])
    for p in corpus(name):
        homs = hom_set(p, one)
        assert len(homs) == 1 and same_morphism(homs[0], bang(p))


# -- pullbacks -------------------------------------------------------------

def test_product_of_sets_has_product_size():
    assert product(finite_set(2), finite_set(3)).obj.sizes == (6,)


def test_pullback_of_identities_is_the_object(edge):
    pb = pullback(identity(edge), identity(edge))
    assert is_iso(pb.p1) and same_morphism(pb.p1, pb.p2)


def test_pullback_sizes_count_matching_pairs():
    f = function(finite_set(3), finite_set(2), [0, 0, 1])
    g = function(finite_set(2), finite_set(2), [0, 1])
    assert pullback(f, g).obj.sizes == (3,)
    h = function(finite_set(2), finite_set(2), [1, 1])
    assert pullback(f, h).obj.sizes == (2,)


def test_mediate_rejects_non_cone():
    f = function(finite_set(2), finite_set(2), [0, 1])
    pb = pullback(f, f)
    w = finite_set(1)
    u = function(w, finite_set(2), [0])
    v = function(w, finite_set(2), [1])
    with pytest.raises(NotACone):
        pb.mediate(u, v)


@given(st.integers(0, 3), st.integers(0, 3))
def test_mediate_is_unique_filler(m, n):
    x, y = finite_set(m), finite_set(n)
    pb = product(x, y)
    h = pb.mediate(pb.p1, pb.p2)
    assert same_morphism(h, identity(pb.obj))


# -- hom-sets --------------------------------------------------------------

def test_single_edge_into_loop_has_one_map(edge, loop):
    assert len(hom_set(edge, loop)) == 1 == brute_hom_count(edge, loop)


def test_points_of_omega_over_a_point():
    om = omega(terminal_category())
    assert len(hom_set(om.one, om.omega)) == 2


@pytest.mark.parametrize("name", ["arrow", "graph"])
def test_hom_counts_match_brute_force(name):
    ps = corpus(name)
    for a in ps:
        for b in ps:
            assert len(hom_set(a, b)) == brute_hom_count(a, b)


def test_hom_set_is_sorted_and_duplicate_free(edge, loop):
    two_loops = graph(["x", "y"], {"l": ("x", "x"), "k": ("y", "y"), "m": ("x", "y")})
    homs = [h.components for h in hom_set(two_loops, two_loops)]
    assert homs == sorted(set(homs))


def test_hom_set_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        hom_set(finite_set(3), finite_set(3), budget=5)


# -- predicates ------------------------------------------------------------

def test_identity_predicates(edge):
    p = morphism_predicates(identity(edge))
    assert p.is_iso and p.is_mono


def test_collapse_is_neither_mono_nor_iso():
    p = morphism_predicates(function(finite_set(2), finite_set(1), [0, 0]))
    assert not p.is_mono and not p.is_iso


@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_mono_iff_injective(m, n, data):
    if m and not n:
        return
    vals = data.draw(st.lists(st.integers(0, max(n - 1, 0)), min_size=m, max_size=m))
    f = function(finite_set(m), finite_set(n), vals)
    assert is_mono(f) == (len(set(vals)) == len(vals))
    assert is_iso(f) == (sorted(vals) == list(range(n)))


def test_inverse_of_iso():
    f = function(finite_set(3), finite_set(3), [2, 0, 1])
    g = inverse(f)
    assert same_morphism(compose(g, f), identity(f.src))


# -- exponentials ----------------------------------------------------------

def test_function_set_cardinality():
    assert exponential(finite_set(3), finite_set(2)).obj.sizes == (8,)


def test_exponent_one_recovers_base(edge):
    one = terminal(graph_category())
    exp = exponential(one, edge)
    assert exp.obj.sizes == edge.sizes
    # eval against the unique point is an iso
    pb = exp.eval_product
    assert is_iso(exp.eval) and is_iso(pb.p1)


def test_exponential_at_node_two_ways(node, edge):
    base = graph_category()
    v = base.object_id("V")
    exp = exponential(node, edge)
    by_yoneda = exp.obj.size(v)
    by_counting = brute_hom_count(product(representable(base, v), node).obj, edge)
    assert by_yoneda == by_counting == 2


@pytest.mark.parametrize("name", ["terminal", "arrow", "graph"])
def test_exponential_transpose_laws(name):
    ps = corpus(name, max_total=2)
    for g in ps:
        for f in ps:
            exp = exponential(g, f)
            for h in ps[:4]:
                hg = product(h, g)
                maps = hom_set(hg.obj, f)
                ts = set()
                for u in maps:
                    t = exp.transpose(h, u)
                    ts.add(t.components)
                    back = compose(exp.eval, exp.eval_product.mediate(compose(t, hg.p1), hg.p2))
                    assert same_morphism(back, u)
                assert len(ts) == len(maps) == len(hom_set(h, exp.obj))


# -- subobject classifier --------------------------------------------------

@pytest.mark.parametrize("name, sizes", [("terminal", (2,)), ("graph", (2, 5)), ("arrow", (2, 3))])
def test_omega_sizes(name, sizes):
    base = curated_bases()[name]
    oracle = tuple(len(brute_sieves(base, c)) for c in range(base.n_objects))
    assert oracle == sizes
    assert omega(base).omega.sizes == sizes


@pytest.mark.parametrize("name", ["terminal", "arrow", "graph"])
def test_true_and_false_are_monos(name):
    om = omega(curated_bases()[name])
    assert is_mono(om.tt) and is_mono(om.ff)
    assert not check_presheaf(om.omega)


@pytest.mark.parametrize("name", ["terminal", "arrow", "graph"])
def test_classify_round_trip(name):
    base = curated_bases()[name]
    om = omega(base)
    for a in corpus(name, max_total=None):
        subs = all_subobjects(a)
        chis = hom_set(a, om.omega)
        assert len(chis) == len(subs)
        for s in subs:
            assert unclassify(classify(s, om), om) == s
        for chi in chis:
            assert same_morphism(classify(unclassify(chi, om), om), chi)


def test_extreme_subobjects_classified_by_constants(edge):
    om = omega(graph_category())
    subs = all_subobjects(edge)
    top = sub_top(edge)
    bottom = next(s for s in subs if not any(s.selected))
    assert top in subs
    assert same_morphism(classify(top, om), compose(om.tt, bang(edge)))
    assert same_morphism(classify(bottom, om), compose(om.ff, bang(edge)))


# -- slices and the adjoint triple -----------------------------------------

def _slices(a: Presheaf, limit=6):
    out = []
    for p in presheaf_corpus(a.base, 2, 3):
        out += [slice_of(f) for f in hom_set(p, a)[:2]]
    return out[:limit]


@given(st.lists(st.integers(0, 2), min_size=0, max_size=3), st.integers(1, 3), st.data())
def test_pushforward_fibre_sizes(f_vals, a_size, data):
    f_vals = [v % a_size for v in f_vals]
    f = function(finite_set(len(f_vals)), finite_set(a_size), f_vals)
    x_sizes = [data.draw(st.integers(0, 2)) for _ in f_vals]
    labels = [b for b, n in enumerate(x_sizes) for _ in range(n)]
    x = slice_of(function(finite_set(len(labels)), f.src, labels))
    pf = pushforward(f, x)
    fibres = [0] * a_size
    for a in pf.slice.proj.components[0]:
        fibres[a] += 1
    expected = [prod(x_sizes[b] for b in range(len(f_vals)) if f_vals[b] == a) for a in range(a_size)]
    assert fibres == expected


@pytest.mark.parametrize("name", ["terminal", "arrow", "graph"])
def test_adjoint_triple_bijections(name):
    base = curated_bases()[name]
    ps = presheaf_corpus(base, 2, 3)
    maps = [f for a in ps[:5] for b in ps[:5] for f in hom_set(a, b)[:2]]
    for f in maps[:10]:
        for x in _slices(f.src, 3):
            pf = pushforward(f, x)
            for y in _slices(f.dst, 3):
                fy = pullback_functor(f, y)
                # f^* -| f_*, with the transpose inverted by the counit
                lhs = slice_hom_set(fy.slice, x)
                rhs = slice_hom_set(y, pf.slice)
                assert len(lhs) == len(rhs)
                for u in lhs:
                    t = pf.transpose(y, u)
                    assert same_morphism(compose(pf.counit,
                                                 pullback_functor_map(f, y, pf.slice, t)), u)
                # f_! -| f^*
                assert len(slice_hom_set(postcompose(f, x), y)) == \
                    len(slice_hom_set(x, pullback_functor(f, y).slice))


def test_identity_adjoints_are_trivial(edge):
    i = identity(edge)
    for x in _slices(edge):
        back = pullback_functor(i, x)
        assert slice_iso(x, back.slice, back.square.mediate(x.proj, identity(x.total)))
        assert postcompose(i, x).proj.components == x.proj.components
        assert is_iso(pushforward(i, x).counit)


@pytest.mark.parametrize("name", ["arrow", "graph"])
def test_counit_along_mono_is_iso(name):
    base = curated_bases()[name]
    for a in presheaf_corpus(base, 2, 3):
        for s in all_subobjects(a):
            _, m = sub_domain(s)
            for x in _slices(m.src, 3):
                assert is_iso(pushforward(m, x).counit)
