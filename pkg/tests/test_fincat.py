import pytest

from pshtopos.fincat import (
    NOT_COMPOSABLE,
    FinCategory,
    FinFunctor,
    build_category,
    category_of_elements,
    curated_bases,
    graph_category,
    terminal_category,
    validate_category,
)
from pshtopos.presheaf import terminal
from pshtopos.verify.generate import InstanceGenerator, generate_instances

from conftest import finite_set


def test_curated_bases_are_categories(curated_base):
    assert validate_category(curated_base).ok


def test_terminal_category_shape():
    c = terminal_category()
    assert c.n_objects == 1 and c.n_morphisms == 1


def test_graph_base_table():
    g = graph_category()
    s, t = g.morphism_id("s"), g.morphism_id("t")
    assert g.hom(g.object_id("V"), g.object_id("E")) == [s, t]
    assert g.table[s][t] == NOT_COMPOSABLE
    assert g.compose(g.identity[g.object_id("E")], s) == s


def test_identity_violation_names_the_arrow():
    g = graph_category()
    table = [list(r) for r in g.table]
    s, t = g.morphism_id("s"), g.morphism_id("t")
    table[g.identity[g.object_id("E")]][s] = t
    broken = FinCategory(g.objects, g.morphisms, g.src, g.dst, g.identity, tuple(map(tuple, table)))
    report = validate_category(broken)
    identity = [v for v in report.violations if v.axiom.startswith("identity")]
    assert len(identity) == 1 and identity[0].morphisms == ("s",)


def test_associativity_violation_names_triple():
    # monoid {1, e, z}: e.e = z, but z.e = e breaks associativity
    c = build_category(["a"], [("e", "a", "a"), ("z", "a", "a")],
                       {("e", "e"): "z", ("e", "z"): "e", ("z", "e"): "z", ("z", "z"): "z"})
    report = validate_category(c)
    assert not report.ok
    assert all(v.axiom == "associativity" and len(v.morphisms) == 3 for v in report.violations)


def test_missing_composition_is_rejected():
    with pytest.raises(ValueError, match="missing composition"):
        build_category(["a"], [("e", "a", "a")])


def test_compose_rejects_wrong_ends():
    g = graph_category()
    with pytest.raises(ValueError, match="not composable"):
        g.compose(g.morphism_id("s"), g.morphism_id("t"))


def test_elements_of_terminal_presheaf_recover_base(curated_base):
    cat, proj = category_of_elements(terminal(curated_base))
    assert cat.n_objects == curated_base.n_objects
    assert cat.n_morphisms == curated_base.n_morphisms
    assert proj.validate().ok


def test_elements_of_two_point_set_is_discrete():
    cat, proj = category_of_elements(finite_set(2))
    assert cat.n_objects == 2 and cat.n_morphisms == 2
    assert validate_category(cat).ok and proj.validate().ok


def test_elements_of_single_edge(edge):
    cat, proj = category_of_elements(edge)
    assert cat.n_objects == 3
    assert sum(not cat.is_identity(m) for m in range(cat.n_morphisms)) == 2
    assert validate_category(cat).ok and proj.validate().ok


def test_projection_surjective_iff_carriers_nonempty(node, edge):
    for p in (node, edge):
        cat, proj = category_of_elements(p)
        surjective = set(proj.on_objects) == set(range(p.base.n_objects))
        assert surjective == all(p.sizes)


def test_functor_validator_catches_bad_typing():
    g = graph_category()
    t = terminal_category()
    bad = FinFunctor(t, g, (0,), (g.morphism_id("s"),))
    assert not bad.validate().ok


@pytest.mark.parametrize("bounds", [(1, 1, 3), (2, 6, 3), (3, 8, 4)])
def test_generated_bases_validate(bounds):
    gen = InstanceGenerator(0, *bounds)
    for inst in generate_instances(gen, 25):
        assert validate_category(inst.base).ok
        assert inst.base.n_objects <= bounds[0]
        assert inst.base.n_morphisms <= bounds[1]


def test_single_object_bound_gives_sets():
    for inst in generate_instances(InstanceGenerator(0, 1, 1, 3), 10):
        assert inst.base.n_objects == 1 and inst.base.n_morphisms == 1


def test_curated_names():
    assert sorted(curated_bases()) == ["arrow", "graph", "terminal"]
